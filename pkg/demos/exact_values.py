"""Exact werewolf win probabilities and how the strategies compare.

Run: python demos/exact_values.py
"""

from __future__ import annotations

from lupus.exact import dominance_report, v_random, w_plus, w_selfkill


def main() -> None:
    print("werewolf win probability, all in allowed (w) vs never (v)")
    print(f"{'n':>3} {'m':>2} {'w':>12} {'v':>12} {'first-night self-kill':>22}")
    for n in range(5, 12):
        for m in range(1, (n - 1) // 2 + 1):
            sk = w_selfkill(n, m)
            print(f"{n:>3} {m:>2} {str(w_plus(n, m)):>12} {str(v_random(n, m)):>12} {str(sk):>22}")

    rows = dominance_report(31, 15)
    gaps = [r for r in rows if r.w_plus > r.v_random]
    print(f"\n{len(gaps)} of {len(rows)} rows gain from all in; all have odd n:",
          all(r.n % 2 for r in gaps))
    widest = max(gaps, key=lambda r: r.w_plus - r.v_random)
    print(f"largest gain {widest.w_plus - widest.v_random} at n={widest.n}, m={widest.m}")


if __name__ == "__main__":
    main()

"""Exact rational win probabilities for the fixed-strategy game.

All values are :class:`fractions.Fraction` and refer to the werewolf side
unless stated otherwise:

* ``w_plus(n, m)``: werewolf win probability under "random strategy +" with
  ``n`` players alive of whom ``m`` are werewolves, taken after a vote and
  before the night kill (equivalently, at the start of a game).
* ``v_random(n, m)``: the same under the plain random strategy.
* ``w_selfkill(n, m)``: werewolves kill one of their own on the first night,
  then play "random strategy +".
* ``s_reveal`` and ``u_checked``: citizen win probabilities after the
  prophet has revealed, with and without the prophet alive.
"""

from __future__ import annotations

import dataclasses
import functools
from fractions import Fraction

Probability = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


class DomainError(ValueError):
    """Raised when arguments fall outside a recursion's domain."""


def _check_counts(n: int, m: int) -> None:
    if n < 0 or m < 0:
        raise DomainError(f"counts must be non-negative, got n={n}, m={m}")
    if m > n:
        raise DomainError(f"more werewolves than players: n={n}, m={m}")


@functools.lru_cache(maxsize=None)
def _w_plus(n: int, m: int) -> Fraction:
    if m == 0:
        return ZERO
    if (n, m) == (5, 2):
        return Fraction(7, 8)
    if m >= n - m:
        return ONE
    total = ZERO
    if n - 1 - m:
        total += Fraction(n - 1 - m, n - 1) * _w_plus(n - 2, m)
    total += Fraction(m, n - 1) * _w_plus(n - 2, m - 1)
    return total


@functools.lru_cache(maxsize=None)
def _v_random(n: int, m: int) -> Fraction:
    if m == 0:
        return ZERO
    if m >= n - m:
        return ONE
    total = ZERO
    if n - 1 - m:
        total += Fraction(n - 1 - m, n - 1) * _v_random(n - 2, m)
    total += Fraction(m, n - 1) * _v_random(n - 2, m - 1)
    return total


def w_plus(n: int, m: int) -> Fraction:
    """Werewolf win probability under "random strategy +".

    Examples:
        >>> w_plus(5, 2)
        Fraction(7, 8)
    """
    _check_counts(n, m)
    return _w_plus(n, m)


def v_random(n: int, m: int) -> Fraction:
    """Werewolf win probability when nobody ever plays all in."""
    _check_counts(n, m)
    return _v_random(n, m)


def w_selfkill(n: int, m: int) -> Fraction:
    """Werewolf win probability after one first-night self-kill.

    The night kill removes a werewolf instead of a citizen; the vote that
    follows is uniform, and play continues under "random strategy +".
    """
    _check_counts(n, m)
    if m == 0:
        raise DomainError("a self-kill needs at least one werewolf")
    if n < 2:
        raise DomainError(f"need two players for a night and a vote, got n={n}")
    total = ZERO
    if m - 1:
        total += Fraction(m - 1, n - 1) * _w_plus(n - 2, m - 2)
    if n - m:
        total += Fraction(n - m, n - 1) * _w_plus(n - 2, m - 1)
    return total


def all_in_factor(wolves: int, lone_wolf_all_in: bool = False) -> Fraction:
    """Citizen win probability once ``wolves`` identified werewolves face as many citizens.

    Each day the werewolves force a tie and a coin decides it, so the
    citizens must win ``wolves`` coin flips in a row. A single werewolf only
    forces the tie when ``lone_wolf_all_in`` is set; otherwise it is simply
    voted out.
    """
    if wolves >= 2 or lone_wolf_all_in:
        return HALF**wolves
    return ONE


@functools.lru_cache(maxsize=None)
def _u(N: int, M: int, n: int, lone: bool) -> Fraction:
    if M == 0:
        return ONE
    if N < M:
        return ZERO
    if N == M:
        return Fraction(M, N - n + M) * all_in_factor(M, lone)
    if n == 0:
        return ONE - _w_plus(N + M + 1, M)
    total = ZERO
    if N - n:
        total += Fraction(N - n, N + M - n) * _u(N - 2, M, n - 1, lone)
    total += Fraction(M, N + M - n) * _u(N - 1, M - 1, n - 1, lone)
    return total


def u_checked(N: int, M: int, n: int, *, lone_wolf_all_in: bool = False) -> Fraction:
    """Citizen win probability after the revealed prophet has been killed.

    ``N`` citizens (``n`` of them publicly confirmed) and ``M`` werewolves
    remain, before the day vote. Votes avoid confirmed villagers, and the
    werewolves kill a confirmed villager each night while any is left.

    Examples:
        >>> u_checked(2, 2, 1)
        Fraction(1, 6)
    """
    if min(N, M, n) < 0:
        raise DomainError(f"counts must be non-negative, got N={N}, M={M}, n={n}")
    if n > N:
        raise DomainError(f"more confirmed villagers than villagers: N={N}, n={n}")
    return _u(N, M, n, lone_wolf_all_in)


@functools.lru_cache(maxsize=None)
def _s(N: int, M: int, n: int, m: int, lone: bool) -> Fraction:
    if M == 0:
        return ONE
    if M > N + 1:
        return ZERO
    if M == N + 1:
        if m == 0:
            return Fraction(M, N - n + M) * all_in_factor(M, lone)
        return all_in_factor(M, lone)
    if m >= n + 1:
        return ONE - _w_plus(M + N + 2 - 2 * m, M - m)
    if m >= 1:
        return _u(N + 1 - m, M - m, n + 1 - m, lone)
    total = ZERO
    total += Fraction(M, N - n + M) * _u(N, M - 1, n, lone)
    if N - n:
        total += Fraction(N - n, N - n + M) * _u(N - 1, M, n, lone)
    return total


def s_reveal(N: int, M: int, n: int, m: int, *, lone_wolf_all_in: bool = False) -> Fraction:
    """Citizen win probability when the prophet reveals now.

    The state is taken at the start of a day, before the vote: ``N``
    villagers and ``M`` werewolves besides the prophet, of whom ``n`` and
    ``m`` are checked.

    Examples:
        >>> s_reveal(2, 1, 0, 1)
        Fraction(1, 1)
    """
    if min(N, M, n, m) < 0:
        raise DomainError(f"counts must be non-negative, got {(N, M, n, m)}")
    if n > N or m > M:
        raise DomainError(f"checked counts exceed totals: {(N, M, n, m)}")
    return _s(N, M, n, m, lone_wolf_all_in)


@dataclasses.dataclass(frozen=True)
class DominanceRow:
    """One ``(n, m)`` row of the dominance report.

    ``flags`` maps a property name to its truth value, or ``None`` where the
    property is undefined for this row.
    """

    n: int
    m: int
    w_plus: Fraction
    v_random: Fraction
    w_selfkill: Fraction | None
    flags: dict[str, bool | None]


FLAG_NAMES = (
    "w_ge_v",
    "w_gt_v",
    "w_gt_selfkill",
    "w_gt_fewer_wolves",
    "w_gt_two_fewer_players",
    "w_lt_two_fewer_players",
    "parity_oscillation",
)


def _flags(n: int, m: int) -> dict[str, bool | None]:
    w = _w_plus(n, m)
    v = _v_random(n, m)
    flags: dict[str, bool | None] = dict.fromkeys(FLAG_NAMES)
    flags["w_ge_v"] = w >= v
    flags["w_gt_v"] = w > v
    if 7 <= 2 * m + 1 <= n:
        flags["w_gt_selfkill"] = w > w_selfkill(n, m)
    if m >= 1:
        flags["w_gt_fewer_wolves"] = w > _w_plus(n, m - 1)
    flags["w_gt_two_fewer_players"] = _w_plus(n + 2, m) > w
    if m >= 1 and n - 2 >= 2 * m + 1:
        flags["w_lt_two_fewer_players"] = w < _w_plus(n - 2, m)
    if n >= 2 * m + 1 and m >= 1:
        # rises from an odd to an even player count, falls from even to odd
        prev = _w_plus(n - 1, m)
        flags["parity_oscillation"] = w > prev if n % 2 == 0 else w < prev
    return flags


def dominance_report(n_max: int, m_max: int) -> list[DominanceRow]:
    """Values and comparison flags for ``3 <= n <= n_max``, ``m <= min(m_max, n // 2)``.

    Flag meanings (each compares exact fractions):

    * ``w_ge_v`` / ``w_gt_v``: ``w_plus(n, m)`` against ``v_random(n, m)``;
    * ``w_gt_selfkill``: ``w_plus > w_selfkill``, defined for ``n >= 2m+1 >= 7``;
    * ``w_gt_fewer_wolves``: ``w(n, m) > w(n, m-1)``;
    * ``w_gt_two_fewer_players``: ``w(n+2, m) > w(n, m)``;
    * ``w_lt_two_fewer_players``: ``w(n, m) < w(n-2, m)``, defined for
      ``m >= 1`` and ``n - 2 >= 2m + 1`` (below that ``w(n-2, m) = 1``);
    * ``parity_oscillation``: from ``n-1`` to ``n`` players ``w`` rises when
      ``n`` is even and falls when ``n`` is odd, for ``n >= 2m+1``.
    """
    if n_max < 3:
        raise DomainError(f"n_max must be >= 3, got {n_max}")
    rows = []
    for n in range(3, n_max + 1):
        for m in range(0, min(m_max, n // 2) + 1):
            sk = w_selfkill(n, m) if m >= 1 else None
            rows.append(DominanceRow(n, m, _w_plus(n, m), _v_random(n, m), sk, _flags(n, m)))
    return rows


def format_fraction(x: Fraction | None) -> str:
    """``"p/q (0.xxxxxxxxxxxx)"``; empty for ``None``."""
    if x is None:
        return ""
    return f"{x.numerator}/{x.denominator} ({float(x):.12f})"


def dominance_csv(rows: list[DominanceRow]) -> str:
    """CSV text with header ``n,m,w_plus,v_random,w_selfkill,flags``."""
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "m", "w_plus", "v_random", "w_selfkill", "flags"])
    for r in rows:
        flags = ";".join(
            f"{k}={'' if val is None else int(val)}" for k, val in r.flags.items()
        )
        writer.writerow(
            [r.n, r.m, format_fraction(r.w_plus), format_fraction(r.v_random),
             format_fraction(r.w_selfkill), flags]
        )
    return buf.getvalue()

"""Citizen win rate by fixed reveal round, under both night orders.

Run: python demos/reveal_rounds.py [villagers] [wolves]
"""

from __future__ import annotations

import sys

from lupus import mc


def main(villagers: int = 8, wolves: int = 2) -> None:
    for label, rules in (
        ("kill, then check; lone werewolf plays all in", mc.TABLE_RULES),
        ("check, then kill; lone werewolf is voted out", mc.RevealRules("check_first", False)),
    ):
        result = mc.optimal_reveal(villagers, wolves, 50_000, seed=3, rules=rules)
        print(f"{villagers} villagers, {wolves} werewolves, {label}")
        for x, est in result.per_round:
            mark = " <- best" if x == result.best_round else ""
            print(f"  reveal day {x}: {est.mean:.4f} +/- {1.96 * est.std_error:.4f}{mark}")
        if result.tie_rounds:
            print(f"  statistically tied with day(s) {list(result.tie_rounds)}")
        print()


if __name__ == "__main__":
    main(*map(int, sys.argv[1:3]))

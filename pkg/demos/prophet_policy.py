"""Solve the prophet's reveal decision and check it two independent ways.

The solver works on beliefs over (villagers, werewolves, checked villagers,
checked werewolves). Its root value is compared with an exhaustive
enumeration of the game engine driven by the same policy, and with a
Monte Carlo run.

Run: python demos/prophet_policy.py
"""

from __future__ import annotations

from lupus import mc, pbe
from lupus.tree import citizen_win_probability


def main() -> None:
    for villagers, wolves in ((3, 1), (4, 2)):
        policy = pbe.solve(villagers, wolves)
        print(pbe.format_policy(policy))
        enumerated = citizen_win_probability(mc.policy_config(policy), mc.PolicyProphet(policy))
        simulated = mc.simulate_policy(villagers, wolves, policy, 20_000, seed=1)
        lo, hi = simulated.ci95
        print(f"engine enumeration: {enumerated}  (matches solver: {enumerated == policy.root_value})")
        print(f"simulation: {simulated.mean:.4f}  ci95 [{lo:.4f}, {hi:.4f}]\n")


if __name__ == "__main__":
    main()

"""Invariant checks at small sizes, run by ``lupus selfcheck``."""

from __future__ import annotations

import dataclasses
from fractions import Fraction
from typing import Callable

import numpy as np

from lupus import exact, fastsim, mc, pbe, tree
from lupus.engine import GameConfig, Winner, play_winner
from lupus.rng import RngStream

MAX_WITNESSES = 5


@dataclasses.dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    witnesses: tuple = ()

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}"
        if self.detail:
            text += f": {self.detail}"
        if self.witnesses:
            text += "; witnesses " + ", ".join(map(str, self.witnesses[:MAX_WITNESSES]))
        return text


def _result(name: str, failures: list, detail: str = "") -> CheckResult:
    return CheckResult(name, not failures, detail or f"{len(failures)} violations", tuple(failures))


def table_nodes(n_max: int = 8, m_max: int = 4) -> list[pbe.Node]:
    """Every node with a day vote still to play, ``N <= n_max``, ``M <= m_max``."""
    return [
        pbe.Node(N, M, n, m)
        for N in range(1, n_max + 1)
        for M in range(1, min(m_max, N) + 1)
        for n in range(N + 1)
        for m in range(M + 1)
    ]


def check_partition(printed_p8: bool = False) -> CheckResult:
    failures = []
    nodes = table_nodes()
    for node in nodes:
        if printed_p8:
            try:
                total = pbe.table_sum(node, printed=(8,))
            except ValueError:
                continue
        else:
            total = pbe.table_sum(node)
        if total != 1:
            failures.append(f"{tuple(node)} sums to {total}")
    name = "partition of unity (printed P8)" if printed_p8 else "partition of unity"
    return _result(name, failures, f"{len(nodes)} nodes, {len(failures)} violations")


def check_closed_form() -> CheckResult:
    failures = [
        m for m in range(2, 13) if exact.w_plus(2 * m + 1, m) != 1 - Fraction(1, 2) ** (m + 1)
    ]
    return _result("w(2m+1, m) closed form", failures)


def check_dominance(n_max: int = 31) -> CheckResult:
    failures = []
    for row in exact.dominance_report(n_max, n_max // 2):
        n, m, flags = row.n, row.m, row.flags
        equal_expected = n % 2 == 0 or m < 2 or n < 5
        if not flags["w_ge_v"] or (row.w_plus == row.v_random) != equal_expected:
            failures.append(f"w vs v at {(n, m)}")
        for key in ("w_gt_selfkill", "w_gt_fewer_wolves", "w_lt_two_fewer_players"):
            if flags[key] is False:
                failures.append(f"{key} at {(n, m)}")
    return _result(f"strategy and monotonicity dominance (n <= {n_max})", failures)


def check_engine_vs_exact(n_max: int = 7) -> CheckResult:
    failures = []
    for n in range(2, n_max + 1):
        for m in range(1, n):
            if m >= n - m:
                continue
            for strategy, oracle in (("random+", exact.w_plus), ("random", exact.v_random)):
                got = 1 - tree.citizen_win_probability(GameConfig(n - m, m, strategy=strategy))
                if got != oracle(n, m):
                    failures.append(f"{strategy} {(n, m)}: {got} != {oracle(n, m)}")
    return _result(f"engine enumeration equals recursions (n <= {n_max})", failures)


def check_policy_vs_engine() -> CheckResult:
    failures = []
    for v, w in ((1, 1), (2, 1), (3, 1)):
        policy = pbe.solve(v, w)
        got = tree.citizen_win_probability(mc.policy_config(policy), mc.PolicyProphet(policy))
        if got != policy.root_value:
            failures.append(f"{(v, w)}: engine {got} != solver {policy.root_value}")
    return _result("solver root value equals engine enumeration", failures)


def check_optimality() -> CheckResult:
    failures = []
    for v, w in ((2, 1), (3, 1)):
        best, count = pbe.exhaustive_best(v, w)
        root = pbe.solve(v, w).root_value
        if best != root:
            failures.append(f"{(v, w)}: best of {count} policies {best} != {root}")
    return _result("solver optimal among all deterministic policies", failures)


KERNEL_CONFIGS = (
    GameConfig(5, 2),
    GameConfig(6, 3, strategy="random"),
    GameConfig(6, 2, prophet=True, reveal_round=2),
    GameConfig(7, 3, prophet=True, reveal_round=1, night_order="kill_first", lone_wolf_all_in=True),
    GameConfig(6, 3, werewolf_self_kill_probability=Fraction(1, 2)),
)


def check_kernel(seed: int = 0, games: int = 500) -> CheckResult:
    failures = []
    for config in KERNEL_CONFIGS:
        fast = fastsim.play_block(config, seed, 0, games)
        ref = np.array(
            [play_winner(config, RngStream(seed, i)) is Winner.CITIZENS for i in range(games)],
            dtype=np.int8,
        )
        if not np.array_equal(fast, ref):
            first = int(np.flatnonzero(fast != ref)[0])
            failures.append(f"{config} game {first}")
    return _result("compiled replay matches engine game by game", failures)


def check_determinism(seed: int = 0) -> CheckResult:
    config = GameConfig(4, 1, prophet=True, reveal_round=1)
    before = exact.w_plus(11, 3)
    a = mc.citizen_wins(config, 2000, seed)
    b = mc.citizen_wins(config, 2000, seed)
    halves = mc.citizen_wins(config, 1000, seed).pooled(mc.citizen_wins(config, 1000, seed, start=1000))
    failures = []
    if a != b:
        failures.append("repeat run differs")
    if halves != a:
        failures.append("pooled halves differ from the full run")
    if exact.w_plus(11, 3) != before:
        failures.append("exact value changed")
    return _result("seeded runs reproducible and poolable", failures)


def run_all(printed_p8: bool = False, seed: int = 0) -> list[CheckResult]:
    checks: list[Callable[[], CheckResult]] = [
        lambda: check_partition(printed_p8),
        check_closed_form,
        check_dominance,
        check_engine_vs_exact,
        check_policy_vs_engine,
        check_optimality,
        lambda: check_kernel(seed),
        lambda: check_determinism(seed),
    ]
    return [check() for check in checks]

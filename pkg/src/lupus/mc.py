"""Monte Carlo estimates on top of the game engine.

Trial ``i`` of every estimate plays one game on ``RngStream(seed, start + i)``,
so results are reproducible, independent of chunking and threading, and two
runs over disjoint index ranges pool exactly into one. Fixed-rule games go
through the compiled replay in :mod:`lupus.fastsim`; games in which the
prophet follows a solved policy use the reference engine.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Iterable

import numpy as np

from lupus import fastsim
from lupus.engine import GameConfig, GameState, Role, Winner, run_game
from lupus.pbe import (
    Action,
    BeliefTracker,
    CheckClass,
    KillClass,
    OutcomeClass,
    Policy,
    Solver,
    VoteClass,
)
from lupus.rng import RngStream

CHUNK = 50_000
Z95 = 1.96


@dataclasses.dataclass(frozen=True)
class Estimate:
    """Binomial proportion with its normal-approximation interval."""

    successes: int
    trials: int

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("an estimate needs at least one trial")
        if not 0 <= self.successes <= self.trials:
            raise ValueError(f"successes {self.successes} outside [0, {self.trials}]")

    @property
    def mean(self) -> float:
        return self.successes / self.trials

    @property
    def std_error(self) -> float:
        p = self.mean
        return math.sqrt(p * (1 - p) / self.trials)

    @property
    def ci95(self) -> tuple[float, float]:
        half = Z95 * self.std_error
        return max(0.0, self.mean - half), min(1.0, self.mean + half)

    def complement(self) -> Estimate:
        return Estimate(self.trials - self.successes, self.trials)

    def pooled(self, other: Estimate) -> Estimate:
        return Estimate(self.successes + other.successes, self.trials + other.trials)

    def overlaps(self, other: Estimate) -> bool:
        lo, hi = self.ci95
        olo, ohi = other.ci95
        return lo <= ohi and olo <= hi

    def to_dict(self) -> dict:
        lo, hi = self.ci95
        return {
            "mean": self.mean,
            "trials": self.trials,
            "successes": self.successes,
            "std_error": self.std_error,
            "ci95": [lo, hi],
        }


def _threads() -> int:
    raw = os.environ.get("LUPUS_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _check_args(trials: int, seed: int) -> None:
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if not 0 <= seed < 1 << 64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")


def citizen_wins(config: GameConfig, trials: int, seed: int, start: int = 0) -> Estimate:
    """Citizen win rate of ``config`` under its fixed reveal round."""
    _check_args(trials, seed)
    chunks = [(s, min(CHUNK, start + trials - s)) for s in range(start, start + trials, CHUNK)]

    def run(chunk: tuple[int, int]) -> int:
        return int(np.count_nonzero(fastsim.play_block(config, seed, *chunk) == fastsim.CITIZENS_WIN))

    threads = min(_threads(), len(chunks))
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            wins = sum(pool.map(run, chunks))
    else:
        wins = sum(map(run, chunks))
    return Estimate(wins, trials)


@dataclasses.dataclass(frozen=True)
class RevealRules:
    """Engine switches for the fixed-reveal-round study.

    The defaults (kill before check, and a lone werewolf also playing all
    in) are the rules under which the reference best-round table is
    reproduced; ``RevealRules("check_first", False)`` matches the engine
    defaults instead.
    """

    night_order: str = "kill_first"
    lone_wolf_all_in: bool = True

    def config(self, villagers: int, wolves: int, reveal_round: int | None) -> GameConfig:
        return GameConfig(
            villagers,
            wolves,
            prophet=True,
            reveal_round=reveal_round,
            night_order=self.night_order,
            lone_wolf_all_in=self.lone_wolf_all_in,
        )


TABLE_RULES = RevealRules()


def estimate_H(
    villagers: int,
    wolves: int,
    reveal_round: int,
    trials: int,
    seed: int,
    *,
    rules: RevealRules = TABLE_RULES,
    start: int = 0,
) -> Estimate:
    """Citizen win rate when the prophet reveals at the start of day ``reveal_round``."""
    return citizen_wins(rules.config(villagers, wolves, reveal_round), trials, seed, start)


@dataclasses.dataclass(frozen=True)
class RevealSearchResult:
    villagers: int
    wolves: int
    best_round: int
    best_estimate: Estimate
    per_round: tuple[tuple[int, Estimate], ...]
    tie_rounds: tuple[int, ...]

    def estimate_at(self, reveal_round: int) -> Estimate:
        return dict(self.per_round)[reveal_round]

    def to_dict(self) -> dict:
        return {
            "villagers": self.villagers,
            "wolves": self.wolves,
            "best_round": self.best_round,
            "best_estimate": self.best_estimate.to_dict(),
            "per_round": [{"round": r, **e.to_dict()} for r, e in self.per_round],
            "tie_rounds": list(self.tie_rounds),
        }


def last_useful_round(villagers: int, wolves: int) -> int:
    """Latest reveal round worth trying; no game lasts longer than this."""
    return math.ceil((villagers + wolves + 1) / 2) + 1


def optimal_reveal(
    villagers: int,
    wolves: int,
    trials_per_round: int,
    seed: int,
    *,
    rules: RevealRules = TABLE_RULES,
) -> RevealSearchResult:
    """Best fixed reveal round by simulation.

    Every round is estimated on the same streams. The smallest round with the
    highest mean wins; ``tie_rounds`` lists other rounds whose 95% interval
    overlaps the winner's.
    """
    if trials_per_round < 1000:
        raise ValueError(f"trials_per_round must be >= 1000, got {trials_per_round}")
    per_round = tuple(
        (x, estimate_H(villagers, wolves, x, trials_per_round, seed, rules=rules))
        for x in range(1, last_useful_round(villagers, wolves) + 1)
    )
    best_round, best = max(per_round, key=lambda item: (item[1].successes, -item[0]))
    ties = tuple(x for x, e in per_round if x != best_round and e.overlaps(best))
    return RevealSearchResult(villagers, wolves, best_round, best, per_round, ties)


@dataclasses.dataclass(frozen=True)
class RevealTable:
    villagers: tuple[int, ...]
    wolves: tuple[int, ...]
    cells: dict[tuple[int, int], RevealSearchResult]

    def to_csv(self) -> str:
        """Best-round table: a round row and a percentage row per villager count.

        Percentages are rounded to whole numbers; the ``mean_w*`` columns
        carry the full-precision estimates.
        """
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["villagers", "row"] + [f"w{w}" for w in self.wolves] + [f"mean_w{w}" for w in self.wolves]
        )
        for v in self.villagers:
            cells = [self.cells[v, w] for w in self.wolves]
            means = [f"{c.best_estimate.mean:.12f}" for c in cells]
            writer.writerow([v, "round"] + [c.best_round for c in cells] + means)
            writer.writerow(
                [v, "percent"] + [round(100 * c.best_estimate.mean) for c in cells] + means
            )
        return buf.getvalue()


def reveal_table(
    villager_range: Iterable[int] = range(4, 13),
    wolf_range: Iterable[int] = range(1, 5),
    trials_per_cell: int = 100_000,
    seed: int = 0,
    *,
    rules: RevealRules = TABLE_RULES,
) -> RevealTable:
    """:func:`optimal_reveal` over a grid of villager and werewolf counts."""
    villagers = tuple(villager_range)
    wolves = tuple(wolf_range)
    if not villagers or not wolves:
        raise ValueError("villager and werewolf ranges must be nonempty")
    cells = {
        (v, w): optimal_reveal(v, w, trials_per_cell, seed, rules=rules)
        for v in villagers
        for w in wolves
    }
    return RevealTable(villagers, wolves, cells)


# --------------------------------------------------------------------------
# Policy-driven play


class PolicyProphet:
    """Reveal decider that tracks the prophet's belief and consults a policy.

    On each call it reads what the prophet saw since the previous day (the
    vote, its own check and the night kill), moves to the matching
    information set and returns the policy's action. A call on day 1 starts
    a new game, so one instance can be reused across games.
    """

    def __init__(self, policy: Policy, solver: Solver | None = None) -> None:
        self.policy = policy
        self.tracker = BeliefTracker(
            policy.villagers,
            policy.wolves,
            solver or Solver(policy.tie_break, policy.lone_wolf_all_in),
        )

    @staticmethod
    def observation(state: GameState) -> OutcomeClass:
        vote = None
        if state.last_vote is not None:
            known = state.last_vote.known_role
            if known is Role.VILLAGER:
                vote = VoteClass.CHECKED_VILLAGER
            elif known is Role.WEREWOLF:
                vote = VoteClass.CHECKED_WEREWOLF
            else:
                vote = VoteClass.UNCHECKED
        if state.last_check is None:
            check = CheckClass.NO_CHECK
        elif state.last_check.known_role is Role.WEREWOLF:
            check = CheckClass.WEREWOLF_CHECKED
        else:
            check = CheckClass.VILLAGER_CHECKED
        killed = state.last_kill
        if killed is None or state.roles[killed.player - 1] is Role.WEREWOLF:
            raise ValueError("policy play assumes every night kills a villager")
        kill = (
            KillClass.CHECKED_VILLAGER_KILLED
            if killed.known_role is Role.VILLAGER
            else KillClass.UNCHECKED_VILLAGER_KILLED
        )
        return OutcomeClass(vote, check, kill)

    def __call__(self, state: GameState) -> bool:
        if state.round == 1:
            self.tracker.belief = None
        info = self.tracker.observe(self.observation(state))
        return self.policy.action(info) is Action.REVEALING


def policy_config(policy: Policy) -> GameConfig:
    """Engine settings matching the solver's model of play."""
    return GameConfig(
        policy.villagers,
        policy.wolves,
        prophet=True,
        night_order="check_first",
        lone_wolf_all_in=policy.lone_wolf_all_in,
    )


def simulate_policy(
    villagers: int, wolves: int, policy: Policy, trials: int, seed: int, *, start: int = 0
) -> Estimate:
    """Citizen win rate when the prophet reveals according to ``policy``.

    Raises:
        PolicyCoverageError: if play reaches an information set the policy
            does not cover.
    """
    _check_args(trials, seed)
    if (villagers, wolves) != (policy.villagers, policy.wolves):
        raise ValueError(
            f"policy is for {policy.villagers} villagers and {policy.wolves} werewolves, "
            f"not {villagers} and {wolves}"
        )
    config = policy_config(policy)
    solver = Solver(policy.tie_break, policy.lone_wolf_all_in)  # shared expansion cache
    wins = 0
    for chunk_start in range(start, start + trials, CHUNK):
        count = min(CHUNK, start + trials - chunk_start)
        for rng in RngStream.batch(seed, chunk_start, count):
            record = run_game(config, rng, reveal=PolicyProphet(policy, solver), record=False)
            wins += record.winner is Winner.CITIZENS
    return Estimate(wins, trials)


# --------------------------------------------------------------------------
# Werewolf self-kill


@dataclasses.dataclass(frozen=True)
class SelfKillReport:
    """Werewolf win rates with and without night self-kills."""

    with_selfkill: Estimate
    without_selfkill: Estimate

    @property
    def difference(self) -> float:
        return self.without_selfkill.mean - self.with_selfkill.mean

    @property
    def z_score(self) -> float:
        se = math.hypot(self.with_selfkill.std_error, self.without_selfkill.std_error)
        if se == 0:
            return 0.0 if self.difference == 0 else math.copysign(math.inf, self.difference)
        return self.difference / se

    def significant(self, sigmas: float = 3.0) -> bool:
        """Whether self-killing lowers the werewolf win rate by more than ``sigmas`` standard errors."""
        return self.z_score > sigmas


def selfkill_penalty_check(
    villagers: int,
    wolves: int,
    q: Fraction | float | str,
    trials: int,
    seed: int,
    *,
    prophet: bool = False,
    self_kill_nights: int | None = None,
) -> SelfKillReport:
    """Compare werewolf win rates with self-kill probability ``q`` and with none.

    Both runs share their random streams, so with ``q = 0`` they coincide.
    """
    if wolves < 2:
        raise ValueError("self-kill comparison needs at least two werewolves")
    q = Fraction(q)
    if not 0 <= q <= 1:
        raise ValueError(f"q must be in [0, 1], got {q}")
    base = GameConfig(villagers, wolves, prophet=prophet)
    varied = dataclasses.replace(
        base, werewolf_self_kill_probability=q, self_kill_nights=self_kill_nights
    )
    return SelfKillReport(
        citizen_wins(varied, trials, seed).complement(),
        citizen_wins(base, trials, seed).complement(),
    )

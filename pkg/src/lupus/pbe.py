"""The prophet's optimal Hide/Reveal policy by dynamic programming over beliefs.

Before each day vote the prophet holds an information set: a probability
mixture of nodes ``(N, M, n, m)``, where ``N`` villagers and ``M`` werewolves
remain besides the prophet and ``n`` / ``m`` of them are checked. Revealing
ends the decision problem with the closed-form value of
:func:`lupus.exact.s_reveal`. Hiding lets one day vote and one night (check,
then kill) play out; the prophet sees which kind of player was voted out,
the result of its check and which kind of player was killed, and moves to
the Bayes-updated information set for that observation.

Every probability is an exact :class:`fractions.Fraction`, so beliefs are
compared exactly and memoized on their canonical form.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import os
from collections import deque
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, NamedTuple

from lupus.exact import all_in_factor, s_reveal, w_plus

HALF = Fraction(1, 2)


class Action(enum.Enum):
    HIDING = "Hiding"
    REVEALING = "Revealing"


class VoteClass(enum.Enum):
    CHECKED_VILLAGER = "CheckedVillager"
    CHECKED_WEREWOLF = "CheckedWerewolf"
    UNCHECKED = "Unchecked"
    PROPHET = "Prophet"


class CheckClass(enum.Enum):
    VILLAGER_CHECKED = "VillagerChecked"
    WEREWOLF_CHECKED = "WerewolfChecked"
    NO_CHECK = "NoCheck"


class KillClass(enum.Enum):
    CHECKED_VILLAGER_KILLED = "CheckedVillagerKilled"
    UNCHECKED_VILLAGER_KILLED = "UncheckedVillagerKilled"
    PROPHET_KILLED = "ProphetKilled"


class OutcomeClass(NamedTuple):
    """What the prophet observes over one day and the following night.

    ``vote`` is ``None`` on the first night, which has no vote before it.
    ``check`` and ``kill`` are ``None`` when the prophet is voted out, and
    ``check`` is ``None`` when the prophet is killed.
    """

    vote: VoteClass | None
    check: CheckClass | None
    kill: KillClass | None

    def __str__(self) -> str:
        return "-".join(c.value for c in self if c is not None)


class DerivationError(RuntimeError):
    """Raised when a transition table fails to sum to one."""


class PolicyCoverageError(KeyError):
    """Raised when a policy has no entry for an information set."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "information set not in policy"


class PolicyIOError(OSError):
    """Raised when a policy document cannot be read or written."""


class Node(NamedTuple):
    N: int
    M: int
    n: int
    m: int

    def validate(self) -> Node:
        if min(self) < 0 or self.n > self.N or self.m > self.M:
            raise ValueError(f"invalid node {tuple(self)}")
        return self

    def __str__(self) -> str:
        return f"node₀({self.N},{self.M},{self.n},{self.m})"


def _frac_text(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclasses.dataclass(frozen=True)
class InformationSet:
    """A belief: nodes with exact positive weights summing to one.

    Build with :meth:`of`, which merges repeated nodes and sorts entries so
    that equal beliefs have equal representations. With ``strict`` (the
    default) all nodes must share ``N + M``, ``n`` and ``m``, which holds
    for every belief reachable in play.
    """

    entries: tuple[tuple[Node, Fraction], ...]
    strict: bool = dataclasses.field(default=True, compare=False)

    @classmethod
    def of(cls, pairs: Iterable[tuple], strict: bool = True, normalize: bool = False) -> InformationSet:
        merged: dict[Node, Fraction] = {}
        for node, weight in pairs:
            node = Node(*node).validate()
            weight = Fraction(weight)
            if weight < 0:
                raise ValueError(f"negative weight {weight} on {node}")
            if weight:
                merged[node] = merged.get(node, Fraction(0)) + weight
        if not merged:
            raise ValueError("information set needs at least one node of positive weight")
        total = sum(merged.values())
        if normalize:
            merged = {k: v / total for k, v in merged.items()}
        elif total != 1:
            raise ValueError(f"weights sum to {total}, not 1")
        entries = tuple(sorted(merged.items()))
        if strict:
            first = entries[0][0]
            for node, _ in entries[1:]:
                if (node.N + node.M, node.n, node.m) != (first.N + first.M, first.n, first.m):
                    raise ValueError(
                        f"nodes {tuple(first)} and {tuple(node)} cannot share an information set"
                    )
        return cls(entries, strict)

    @classmethod
    def single(cls, N: int, M: int, n: int, m: int) -> InformationSet:
        return cls.of([((N, M, n, m), 1)])

    @property
    def nodes(self) -> tuple[Node, ...]:
        return tuple(node for node, _ in self.entries)

    def __str__(self) -> str:
        return " + ".join(f"{_frac_text(w)}·{node}" for node, w in self.entries)


class Transition(NamedTuple):
    """One outcome of a day and night played from a node.

    ``index`` is the transition's number 1..21 in the conventional listing,
    or ``None`` for outcomes in which the prophet has nobody left to check.
    Terminal outcomes (the prophet voted out or killed) carry the citizens'
    win probability in ``payoff`` and have no ``successor``.
    """

    index: int | None
    probability: Fraction
    successor: Node | None
    outcome: OutcomeClass
    payoff: Fraction | None


# Index of (vote, check, kill) outcomes. Votes of unchecked werewolves and
# unchecked villagers are told apart here although the prophet cannot.
_CK = KillClass.CHECKED_VILLAGER_KILLED
_UK = KillClass.UNCHECKED_VILLAGER_KILLED
_VC = CheckClass.VILLAGER_CHECKED
_WC = CheckClass.WEREWOLF_CHECKED
_INDEX = {
    "checked_villager": {(_VC, _CK): 1, (_VC, _UK): 2, (_WC, _CK): 3, (_WC, _UK): 4, "prophet": 18},
    "checked_werewolf": {(_VC, _CK): 5, (_VC, _UK): 6, (_WC, _CK): 7, (_WC, _UK): 8, "prophet": 19},
    "unchecked_werewolf": {(_VC, _CK): 9, (_VC, _UK): 10, (_WC, _UK): 11, (_WC, _CK): 12, "prophet": 20},
    "unchecked_villager": {(_VC, _CK): 13, (_VC, _UK): 14, (_WC, _UK): 15, (_WC, _CK): 16, "prophet": 21},
}


def _night(
    vote: VoteClass | None, N: int, M: int, n: int, m: int, prob: Fraction, labels: dict | None
) -> list[Transition]:
    """Check then kill from the post-vote counts ``(N, M, n, m)``."""
    rows = []
    kill_pool = N + 1  # villagers and the prophet
    rows.append(
        Transition(
            labels["prophet"] if labels else None,
            prob * Fraction(1, kill_pool),
            None,
            OutcomeClass(vote, None, KillClass.PROPHET_KILLED),
            1 - w_plus(N + M + 1, M),
        )
    )
    unchecked = (N - n) + (M - m)
    if unchecked == 0:
        checks = [(CheckClass.NO_CHECK, Fraction(1), n, m)]
    else:
        checks = []
        if N - n:
            checks.append((_VC, Fraction(N - n, unchecked), n + 1, m))
        if M - m:
            checks.append((_WC, Fraction(M - m, unchecked), n, m + 1))
    for check, p_check, n2, m2 in checks:
        for kill, count, succ in (
            (_CK, n2, Node(N - 1, M, n2 - 1, m2)),
            (_UK, N - n2, Node(N - 1, M, n2, m2)),
        ):
            if count == 0:
                continue
            index = labels.get((check, kill)) if labels else None
            rows.append(
                Transition(
                    index,
                    prob * p_check * Fraction(count, kill_pool),
                    succ,
                    OutcomeClass(vote, check, kill),
                    None,
                )
            )
    return rows


def transition_table(node: Node | tuple) -> list[Transition]:
    """All outcomes of one day vote and night from ``node``, with probabilities.

    The vote is uniform over all ``N + M + 1`` players; the check is uniform
    over unchecked players other than the prophet; the kill is uniform over
    the ``N + 1`` non-werewolves. Outcomes of probability zero are omitted.

    Raises:
        ValueError: for nodes with no werewolf or with more werewolves than
            villagers (the werewolves have already won or are all in).
        DerivationError: if the probabilities do not sum to one.
    """
    N, M, n, m = Node(*node).validate()
    if M == 0 or M > N:
        raise ValueError(f"node {(N, M, n, m)} is terminal before the vote")
    rows = _all_outcomes(N, M, n, m)
    total = sum(r.probability for r in rows)
    if total != 1:
        raise DerivationError(f"transition probabilities from {(N, M, n, m)} sum to {total}")
    return rows


def _all_outcomes(N: int, M: int, n: int, m: int) -> list[Transition]:
    T = N + M + 1
    rows = [
        Transition(
            17,
            Fraction(1, T),
            None,
            OutcomeClass(VoteClass.PROPHET, None, None),
            1 - w_plus(N + M, M),
        )
    ]
    votes = (
        (VoteClass.CHECKED_VILLAGER, n, (N - 1, M, n - 1, m), "checked_villager"),
        (VoteClass.CHECKED_WEREWOLF, m, (N, M - 1, n, m - 1), "checked_werewolf"),
        (VoteClass.UNCHECKED, M - m, (N, M - 1, n, m), "unchecked_werewolf"),
        (VoteClass.UNCHECKED, N - n, (N - 1, M, n, m), "unchecked_villager"),
    )
    for vote, count, after, key in votes:
        if count:
            rows.extend(_night(vote, *after, Fraction(count, T), _INDEX[key]))
    return rows


def _prod(*factors: tuple[int, int]) -> Fraction | None:
    # a zero numerator anywhere makes the product zero, even over a 0/0 factor
    if any(num == 0 for num, _ in factors):
        return Fraction(0)
    if any(den == 0 for _, den in factors):
        return None
    out = Fraction(1)
    for num, den in factors:
        out *= Fraction(num, den)
    return out


def printed_probabilities(node: Node | tuple) -> dict[int, Fraction | None]:
    """The 21 transition probabilities as conventionally printed.

    Entries whose formula divides by zero at ``node`` are ``None``.

    Several of these (indices 5, 6, 8, 10 and 11) disagree with the
    vote-check-kill factorization used by :func:`transition_table`; they are
    kept only to demonstrate that they do not sum to one.
    """
    N, M, n, m = Node(*node).validate()
    T = N + M + 1
    U1 = N + M - n - m  # unchecked after a checked player is voted out
    U2 = N + M - 1 - n - m  # unchecked after an unchecked player is voted out
    return {
        1: _prod((n, T), (N - n, U1), (n, N)),
        2: _prod((n, T), (N - n, U1), (N - 1 - n, N)),
        3: _prod((n, T), (M - m, U1), (n - 1, N)),
        4: _prod((n, T), (M - m, U1), (N - n, N)),
        5: _prod((m, T), (n, U1), (n + 1, N + 1)),
        6: _prod((m, T), (n, U1), (N - n, N + 1)),
        7: _prod((m, T), (M - m, U1), (n, N + 1)),
        8: _prod((m, T), (n, U1), (N - n - 1, N + 1)),
        9: _prod((M - m, T), (N - n, U2), (n + 1, N + 1)),
        10: _prod((M - m, T), (N - n, U2), (N - n, N + 1)),
        11: _prod((M - m, T), (N - n, U2), (N - n - 1, N + 1)),
        12: _prod((M - m, T), (M - 1 - m, U2), (n, N + 1)),
        13: _prod((N - n, T), (N - 1 - n, U2), (n + 1, N)),
        14: _prod((N - n, T), (N - 1 - n, U2), (N - 2 - n, N)),
        15: _prod((N - n, T), (M - m, U2), (N - 1 - n, N)),
        16: _prod((N - n, T), (M - m, U2), (n, N)),
        17: _prod((1, T)),
        18: _prod((n, T), (1, N)),
        19: _prod((m, T), (1, N + 1)),
        20: _prod((M - m, T), (1, N + 1)),
        21: _prod((N - n, T), (1, N)),
    }


def table_sum(node: Node | tuple, printed: Iterable[int] = ()) -> Fraction:
    """Sum of the derived table with the listed indices replaced by their printed form.

    Raises:
        ValueError: if a requested printed formula is undefined at ``node``.
    """
    printed = set(printed)
    override = printed_probabilities(node)
    for index in printed:
        if override[index] is None:
            raise ValueError(f"printed P{index} is undefined at {tuple(node)}")
    N, M, n, m = Node(*node).validate()
    total = sum(
        (t.probability for t in _all_outcomes(N, M, n, m) if t.index not in printed), Fraction(0)
    )
    return total + sum((override[i] for i in printed), Fraction(0))


# --------------------------------------------------------------------------
# Solver


class NodeFate(enum.Enum):
    OPEN = "open"
    CITIZENS_WON = "citizens_won"
    WEREWOLVES_WON = "werewolves_won"
    ALL_IN = "all_in"


def node_fate(node: Node) -> NodeFate:
    """How the game stands at ``node`` before the vote if the prophet hides."""
    if node.M == 0:
        return NodeFate.CITIZENS_WON
    if node.N + 1 < node.M:
        return NodeFate.WEREWOLVES_WON
    if node.N + 1 == node.M:
        return NodeFate.ALL_IN
    return NodeFate.OPEN


class Branch(NamedTuple):
    outcome: OutcomeClass
    probability: Fraction
    successor: InformationSet


class Expansion(NamedTuple):
    """Hiding from an information set: settled value plus open branches.

    ``settled`` is the probability-weighted citizen win value of everything
    that ends the prophet's decisions (decided nodes and terminal outcomes);
    the branches carry the remaining probability.
    """

    settled: Fraction
    branches: tuple[Branch, ...]


class Decision(NamedTuple):
    action: Action
    reveal_value: Fraction
    hiding_value: Fraction

    @property
    def value(self) -> Fraction:
        return self.reveal_value if self.action is Action.REVEALING else self.hiding_value


TIE_BREAKS = ("reveal", "hide")


class Solver:
    """Memoized values of information sets under fixed solver options.

    Args:
        tie_break: Action taken when both values are equal.
        lone_wolf_all_in: Whether a single identified werewolf facing one
            citizen forces a tie vote; see :func:`lupus.exact.all_in_factor`.
    """

    def __init__(self, tie_break: str = "reveal", lone_wolf_all_in: bool = False) -> None:
        if tie_break not in TIE_BREAKS:
            raise ValueError(f"tie_break must be one of {TIE_BREAKS}, got {tie_break!r}")
        self.tie_break = tie_break
        self.lone_wolf_all_in = lone_wolf_all_in
        self._decisions: dict[InformationSet, Decision] = {}
        self._expansions: dict[InformationSet, Expansion] = {}

    def settled_value(self, node: Node) -> Fraction:
        fate = node_fate(node)
        if fate is NodeFate.CITIZENS_WON:
            return Fraction(1)
        if fate is NodeFate.WEREWOLVES_WON:
            return Fraction(0)
        if fate is NodeFate.ALL_IN:
            # vote hits a werewolf half the time, then all in
            return HALF * all_in_factor(node.M, self.lone_wolf_all_in)
        raise ValueError(f"{node} is still open")

    def reveal_value(self, info: InformationSet) -> Fraction:
        return sum(
            (w * s_reveal(*node, lone_wolf_all_in=self.lone_wolf_all_in) for node, w in info.entries),
            Fraction(0),
        )

    def expand(self, info: InformationSet) -> Expansion:
        """Play one hidden day and night from ``info``; group outcomes by observation."""
        cached = self._expansions.get(info)
        if cached is not None:
            return cached
        settled = Fraction(0)
        groups: dict[OutcomeClass, list[tuple[Node, Fraction]]] = {}
        for node, weight in info.entries:
            if node_fate(node) is not NodeFate.OPEN:
                settled += weight * self.settled_value(node)
                continue
            for t in transition_table(node):
                p = weight * t.probability
                if t.successor is None:
                    settled += p * t.payoff
                else:
                    groups.setdefault(t.outcome, []).append((t.successor, p))
        branches = []
        for outcome in sorted(groups, key=str):
            pairs = groups[outcome]
            total = sum(p for _, p in pairs)
            branches.append(
                Branch(outcome, total, InformationSet.of(pairs, strict=info.strict, normalize=True))
            )
        expansion = Expansion(settled, tuple(branches))
        self._expansions[info] = expansion
        return expansion

    def hiding_value(self, info: InformationSet) -> Fraction:
        exp = self.expand(info)
        return exp.settled + sum(
            (b.probability * self.decide(b.successor).value for b in exp.branches), Fraction(0)
        )

    def decide(self, info: InformationSet) -> Decision:
        """Optimal action at ``info`` with both action values."""
        cached = self._decisions.get(info)
        if cached is not None:
            return cached
        reveal = self.reveal_value(info)
        hide = self.hiding_value(info)
        if reveal > hide or (reveal == hide and self.tie_break == "reveal"):
            action = Action.REVEALING
        else:
            action = Action.HIDING
        decision = Decision(action, reveal, hide)
        self._decisions[info] = decision
        return decision

    def optimal_value(self, info: InformationSet) -> tuple[Action, Fraction]:
        d = self.decide(info)
        return d.action, d.value


def root_expansion(villagers: int, wolves: int) -> Expansion:
    """The first night (check, then kill) from the initial seating.

    Each branch is the single-node information set the prophet holds on the
    first day; ``settled`` collects the prophet being killed that night.
    Returns no branches when the werewolves have already won at the start.
    """
    if villagers < 0 or wolves < 1:
        raise ValueError(f"need villagers >= 0 and wolves >= 1, got {villagers}, {wolves}")
    if wolves >= villagers + 1:
        return Expansion(Fraction(0), ())
    settled = Fraction(0)
    branches = []
    for t in _night(None, villagers, wolves, 0, 0, Fraction(1), None):
        if t.successor is None:
            settled += t.probability * t.payoff
        else:
            branches.append(Branch(t.outcome, t.probability, InformationSet.of([(t.successor, 1)])))
    return Expansion(settled, tuple(branches))


@dataclasses.dataclass(frozen=True)
class Policy:
    """Optimal action and both action values for every reachable information set."""

    villagers: int
    wolves: int
    root_value: Fraction
    decisions: dict[InformationSet, Decision]
    tie_break: str = "reveal"
    lone_wolf_all_in: bool = False

    def lookup(self, info: InformationSet) -> Decision:
        try:
            return self.decisions[info]
        except KeyError:
            raise PolicyCoverageError(f"information set not in policy: {info}") from None

    def action(self, info: InformationSet) -> Action:
        return self.lookup(info).action

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Policy):
            return NotImplemented
        return (
            (self.villagers, self.wolves, self.root_value, self.tie_break, self.lone_wolf_all_in)
            == (other.villagers, other.wolves, other.root_value, other.tie_break, other.lone_wolf_all_in)
            and self.decisions == other.decisions
        )


def reachable_sets(villagers: int, wolves: int, solver: Solver | None = None) -> list[InformationSet]:
    """Every information set the prophet can hold under some Hide/Reveal policy.

    Revealing ends the prophet's decisions, so these are the sets reached
    by hiding from every set, in breadth-first order.
    """
    solver = solver or Solver()
    seen: dict[InformationSet, None] = {}
    queue = deque(b.successor for b in root_expansion(villagers, wolves).branches)
    while queue:
        info = queue.popleft()
        if info in seen:
            continue
        seen[info] = None
        queue.extend(b.successor for b in solver.expand(info).branches)
    return list(seen)


def solve(
    villagers: int, wolves: int, *, tie_break: str = "reveal", lone_wolf_all_in: bool = False
) -> Policy:
    """Optimal prophet policy for ``villagers`` villagers, ``wolves`` werewolves and one prophet."""
    if villagers < 1 or wolves < 1:
        raise ValueError(f"need villagers >= 1 and wolves >= 1, got {villagers}, {wolves}")
    solver = Solver(tie_break, lone_wolf_all_in)
    root = root_expansion(villagers, wolves)
    root_value = root.settled + sum(
        (b.probability * solver.decide(b.successor).value for b in root.branches), Fraction(0)
    )
    decisions = {info: solver.decide(info) for info in reachable_sets(villagers, wolves, solver)}
    return Policy(villagers, wolves, root_value, decisions, tie_break, lone_wolf_all_in)


def policy_value(
    villagers: int,
    wolves: int,
    choose: Callable[[InformationSet], Action],
    *,
    lone_wolf_all_in: bool = False,
) -> Fraction:
    """Exact citizen win probability when the prophet follows ``choose``."""
    solver = Solver(lone_wolf_all_in=lone_wolf_all_in)
    memo: dict[InformationSet, Fraction] = {}

    def value(info: InformationSet) -> Fraction:
        if info not in memo:
            if choose(info) is Action.REVEALING:
                memo[info] = solver.reveal_value(info)
            else:
                exp = solver.expand(info)
                memo[info] = exp.settled + sum(
                    (b.probability * value(b.successor) for b in exp.branches), Fraction(0)
                )
        return memo[info]

    root = root_expansion(villagers, wolves)
    return root.settled + sum((b.probability * value(b.successor) for b in root.branches), Fraction(0))


def exhaustive_best(
    villagers: int, wolves: int, *, lone_wolf_all_in: bool = False, limit: int = 1 << 16
) -> tuple[Fraction, int]:
    """Best root value over every deterministic policy on the reachable sets.

    Returns the maximum and the number of policies evaluated.

    Raises:
        ValueError: if there are more than ``limit`` policies.
    """
    sets = reachable_sets(villagers, wolves, Solver(lone_wolf_all_in=lone_wolf_all_in))
    count = 2 ** len(sets)
    if count > limit:
        raise ValueError(f"{count} policies exceed the limit of {limit}")
    best = None
    for actions in product((Action.HIDING, Action.REVEALING), repeat=len(sets)):
        table = dict(zip(sets, actions))
        v = policy_value(villagers, wolves, table.__getitem__, lone_wolf_all_in=lone_wolf_all_in)
        if best is None or v > best:
            best = v
    return best, count


# --------------------------------------------------------------------------
# Belief tracking during play


class BeliefTracker:
    """Follows the prophet's information set through a game.

    Feed it the observation of the first night, then one observation per
    later day and night; ``belief`` is the current information set.
    """

    def __init__(self, villagers: int, wolves: int, solver: Solver | None = None) -> None:
        self.solver = solver or Solver()
        self._root = {b.outcome: b.successor for b in root_expansion(villagers, wolves).branches}
        self.belief: InformationSet | None = None

    def observe(self, outcome: OutcomeClass) -> InformationSet:
        if self.belief is None:
            options = self._root
        else:
            options = {b.outcome: b.successor for b in self.solver.expand(self.belief).branches}
        try:
            self.belief = options[outcome]
        except KeyError:
            raise ValueError(f"observation {outcome} is impossible from {self.belief}") from None
        return self.belief


# --------------------------------------------------------------------------
# Serialization


def _frac_json(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def _json_frac(d: dict) -> Fraction:
    return Fraction(int(d["num"]), int(d["den"]))


def _set_key(info: InformationSet) -> tuple:
    return tuple((tuple(node), w) for node, w in info.entries)


def policy_to_dict(policy: Policy) -> dict:
    records = []
    for info in sorted(policy.decisions, key=_set_key):
        d = policy.decisions[info]
        records.append(
            {
                "entries": [
                    {"N": node.N, "M": node.M, "n": node.n, "m": node.m, "weight": _frac_json(w)}
                    for node, w in info.entries
                ],
                "action": d.action.value,
                "reveal_value": _frac_json(d.reveal_value),
                "hiding_value": _frac_json(d.hiding_value),
            }
        )
    return {
        "config": {"villagers": policy.villagers, "wolves": policy.wolves},
        "options": {"tie_break": policy.tie_break, "lone_wolf_all_in": policy.lone_wolf_all_in},
        "root_value": _frac_json(policy.root_value),
        "information_sets": records,
    }


def policy_from_dict(doc: dict) -> Policy:
    decisions = {}
    for rec in doc["information_sets"]:
        info = InformationSet.of(
            [((e["N"], e["M"], e["n"], e["m"]), _json_frac(e["weight"])) for e in rec["entries"]],
            strict=False,
        )
        decisions[info] = Decision(
            Action(rec["action"]), _json_frac(rec["reveal_value"]), _json_frac(rec["hiding_value"])
        )
    options = doc.get("options", {})
    return Policy(
        villagers=int(doc["config"]["villagers"]),
        wolves=int(doc["config"]["wolves"]),
        root_value=_json_frac(doc["root_value"]),
        decisions=decisions,
        tie_break=options.get("tie_break", "reveal"),
        lone_wolf_all_in=bool(options.get("lone_wolf_all_in", False)),
    )


def export_policy(policy: Policy, destination: str | os.PathLike | None = None) -> str:
    """Canonical JSON for ``policy``; also written to ``destination`` if given."""
    text = json.dumps(policy_to_dict(policy), indent=2, sort_keys=True) + "\n"
    if destination is not None:
        try:
            with open(destination, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise PolicyIOError(f"cannot write policy to {destination}: {exc}") from exc
    return text


def import_policy(source: str | os.PathLike) -> Policy:
    """Read a policy from a JSON file path."""
    try:
        with open(source, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise PolicyIOError(f"cannot read policy from {source}: {exc}") from exc
    return policy_from_dict(doc)


def format_policy(policy: Policy) -> str:
    """Human-readable listing, one information set per line."""
    lines = [
        f"villagers={policy.villagers} wolves={policy.wolves} "
        f"root_value={_frac_text(policy.root_value)} ({float(policy.root_value):.12f})"
    ]
    for info in sorted(policy.decisions, key=_set_key):
        d = policy.decisions[info]
        lines.append(
            f"{info}  ->  {d.action.value}  "
            f"(reveal {_frac_text(d.reveal_value)}, hide {_frac_text(d.hiding_value)})"
        )
    return "\n".join(lines) + "\n"

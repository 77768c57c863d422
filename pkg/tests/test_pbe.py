from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lupus import pbe
from lupus.exact import s_reveal, w_plus
from lupus.pbe import (
    Action,
    BeliefTracker,
    CheckClass,
    DerivationError,
    InformationSet,
    KillClass,
    Node,
    OutcomeClass,
    PolicyCoverageError,
    PolicyIOError,
    Solver,
    VoteClass,
    exhaustive_best,
    export_policy,
    import_policy,
    printed_probabilities,
    solve,
    table_sum,
    transition_table,
)
from lupus.selfcheck import table_nodes

F = Fraction
S = InformationSet.single


def mix(*pairs):
    return InformationSet.of([(node, F(w)) for w, node in pairs], strict=False)


# --------------------------------------------------------------------------
# Information sets


def test_information_set_canonical_form():
    a = InformationSet.of([((1, 2, 1, 1), F(4, 7)), ((2, 1, 1, 1), F(3, 7))])
    b = InformationSet.of([((2, 1, 1, 1), F(3, 7)), ((1, 2, 1, 1), F(4, 7))])
    assert a == b and hash(a) == hash(b)
    assert str(a) == "4/7·node₀(1,2,1,1) + 3/7·node₀(2,1,1,1)"


def test_information_set_validation():
    with pytest.raises(ValueError):
        InformationSet.of([((2, 1, 0, 0), F(1, 2))])
    with pytest.raises(ValueError):
        InformationSet.of([((2, 1, 0, 0), F(1, 2)), ((1, 2, 1, 0), F(1, 2))])
    with pytest.raises(ValueError):
        S(1, 1, 2, 0)
    assert InformationSet.of([((2, 1, 0, 0), 3)], normalize=True) == S(2, 1, 0, 0)


# --------------------------------------------------------------------------
# Transitions


def test_prophet_voted_out_probability():
    row = next(t for t in transition_table((3, 2, 1, 1)) if t.index == 17)
    assert row.probability == F(1, 6)
    assert row.payoff == 1 - w_plus(5, 2)


def test_checked_werewolf_vote_successor():
    rows = [t for t in transition_table((4, 2, 1, 1)) if t.index == 5]
    assert rows and all(t.successor == (3, 1, 1, 0) for t in rows)


@pytest.mark.parametrize("node", table_nodes(), ids=str)
def test_partition_of_unity(node):
    assert table_sum(node) == 1
    rows = transition_table(node)
    assert all(t.probability > 0 for t in rows)
    assert sum(t.probability for t in rows) == 1


def test_printed_checked_werewolf_formula_breaks_partition():
    bad = [node for node in table_nodes() if printed_probabilities(node)[8] is not None
           and table_sum(node, printed=(8,)) != 1]
    assert Node(2, 2, 0, 1) in bad
    assert table_sum((2, 2, 0, 1), printed=(8,)) == F(43, 45)


def test_printed_formulas_that_agree():
    for node in table_nodes():
        printed = printed_probabilities(node)
        derived = {}
        for t in transition_table(node):
            if t.index is not None:
                derived[t.index] = derived.get(t.index, 0) + t.probability
        for index in (1, 2, 3, 4, 7, 9, 12, 13, 14, 15, 16, 17):
            if printed[index] is not None:
                assert printed[index] == derived.get(index, 0), (node, index)


def test_terminal_nodes_rejected():
    with pytest.raises(ValueError):
        transition_table((1, 2, 0, 0))
    with pytest.raises(ValueError):
        transition_table((3, 0, 0, 0))


def test_derivation_error_is_runtime_error():
    assert issubclass(DerivationError, RuntimeError)


# --------------------------------------------------------------------------
# Values


def test_reveal_values():
    solver = Solver()
    assert solver.reveal_value(S(2, 1, 0, 1)) == 1
    mixed = mix((F(1, 2), (1, 1, 0, 1)), (F(1, 2), (1, 1, 1, 0)))
    assert solver.reveal_value(mixed) == F(1, 2) * s_reveal(1, 1, 0, 1) + F(1, 2) * s_reveal(1, 1, 1, 0)
    assert solver.reveal_value(S(3, 0, 1, 0)) == 1


@pytest.mark.parametrize(
    "node,expected",
    [((4, 0, 1, 0), F(1)), ((0, 2, 0, 0), F(0)), ((1, 3, 0, 1), F(0)), ((2, 3, 0, 0), F(1, 16)), ((1, 2, 0, 1), F(1, 8))],
)
def test_hiding_value_at_settled_nodes(node, expected):
    assert Solver().hiding_value(S(*node)) == expected


def test_fully_checked_sets_reveal():
    solver = Solver()
    for node in [(2, 1, 2, 0), (3, 1, 0, 1), (3, 2, 3, 0), (4, 2, 1, 2)]:
        assert solver.decide(S(*node)).action is Action.REVEALING


@given(st.sampled_from([(v, w) for v in range(1, 6) for w in range(1, 3)]))
def test_values_bounded(config):
    policy = solve(*config)
    assert 0 <= policy.root_value <= 1
    for d in policy.decisions.values():
        assert 0 <= d.reveal_value <= 1 and 0 <= d.hiding_value <= 1
        assert d.action is (Action.REVEALING if d.reveal_value >= d.hiding_value else Action.HIDING)


def test_same_set_same_decision_across_games():
    a, b = solve(3, 1), solve(4, 2)
    shared = set(a.decisions) & set(b.decisions)
    assert S(2, 1, 0, 1) in shared
    for info in shared:
        assert a.decisions[info] == b.decisions[info]


# --------------------------------------------------------------------------
# Policies


def test_three_villager_policy():
    policy = solve(3, 1)
    assert policy.root_value == F(55, 64)
    assert len(policy.decisions) == 8
    assert policy.action(S(2, 1, 0, 1)) is Action.REVEALING
    assert policy.action(S(2, 1, 1, 0)) is Action.REVEALING
    # hiding is strictly better at the unchecked node
    d = policy.lookup(S(2, 1, 0, 0))
    assert (d.action, d.reveal_value, d.hiding_value) == (Action.HIDING, F(2, 3), F(3, 4))


FOUR_TWO_DECISIONS = [
    (S(3, 2, 0, 1), Action.REVEALING),
    (S(1, 2, 0, 2), Action.REVEALING),
    (InformationSet.of([((1, 2, 1, 1), F(4, 7)), ((2, 1, 1, 1), F(3, 7))]), Action.REVEALING),
    (InformationSet.of([((1, 2, 0, 1), F(8, 11)), ((2, 1, 0, 1), F(3, 11))]), Action.REVEALING),
    (S(2, 1, 0, 1), Action.REVEALING),
    (S(2, 1, 1, 0), Action.REVEALING),
    (S(2, 1, 0, 0), Action.HIDING),
]


@pytest.mark.parametrize("info,action", FOUR_TWO_DECISIONS, ids=lambda x: str(x))
def test_four_villager_two_wolf_policy(info, action):
    assert solve(4, 2).action(info) is action


def test_four_villager_two_wolf_root():
    policy = solve(4, 2)
    assert policy.root_value == F(1937, 4320)
    assert len(policy.decisions) == 20


def test_unreached_mixed_set_reveals():
    info = mix((F(1, 2), (1, 1, 0, 1)), (F(1, 2), (1, 1, 1, 0)))
    assert info not in solve(4, 2).decisions
    d = Solver().decide(info)
    assert (d.action, d.reveal_value, d.hiding_value) == (Action.REVEALING, F(1), F(1, 3))


def test_tie_break_option():
    reveal, hide = solve(3, 1), solve(3, 1, tie_break="hide")
    assert reveal.root_value == hide.root_value
    with pytest.raises(ValueError):
        Solver(tie_break="coin")


def test_smallest_game():
    policy = solve(1, 1)
    assert 0 <= policy.root_value <= 1 and len(policy.decisions) <= 10
    with pytest.raises(ValueError):
        solve(0, 1)


@pytest.mark.parametrize("villagers,wolves", [(2, 1), (3, 1)])
def test_policy_optimal_by_exhaustion(villagers, wolves):
    best, count = exhaustive_best(villagers, wolves)
    assert count == 2 ** len(solve(villagers, wolves).decisions)
    assert best == solve(villagers, wolves).root_value


def test_lone_wolf_variant_values():
    assert solve(3, 1, lone_wolf_all_in=True).root_value == F(95, 128)
    assert solve(4, 2, lone_wolf_all_in=True).root_value == F(3733, 8640)
    for info, action in FOUR_TWO_DECISIONS:
        assert solve(4, 2, lone_wolf_all_in=True).action(info) is action


def test_coverage_error_names_set():
    with pytest.raises(PolicyCoverageError, match="node₀"):
        solve(3, 1).lookup(S(7, 3, 0, 0))


# --------------------------------------------------------------------------
# Belief tracking


def test_belief_tracker_follows_observations():
    tracker = BeliefTracker(3, 1)
    first = tracker.observe(OutcomeClass(None, CheckClass.WEREWOLF_CHECKED, KillClass.UNCHECKED_VILLAGER_KILLED))
    assert first == S(2, 1, 0, 1)
    with pytest.raises(ValueError):
        tracker.observe(OutcomeClass(VoteClass.CHECKED_WEREWOLF, CheckClass.WEREWOLF_CHECKED,
                                     KillClass.CHECKED_VILLAGER_KILLED))


# --------------------------------------------------------------------------
# Serialization


def test_export_round_trip(tmp_path):
    policy = solve(4, 2)
    path = tmp_path / "policy.json"
    text = export_policy(policy, path)
    assert import_policy(path) == policy
    assert export_policy(import_policy(path)) == text == export_policy(solve(4, 2))


def test_export_contains_revealing_entry():
    doc = json.loads(export_policy(solve(3, 1)))
    assert doc["root_value"] == {"num": 55, "den": 64}
    nodes = {
        tuple(tuple(e[k] for k in "NMnm") for e in rec["entries"]): rec["action"]
        for rec in doc["information_sets"]
    }
    assert nodes[((2, 1, 0, 1),)] == "Revealing"


def test_io_errors(tmp_path):
    with pytest.raises(PolicyIOError):
        export_policy(solve(1, 1), tmp_path / "missing" / "p.json")
    with pytest.raises(PolicyIOError):
        import_policy(tmp_path / "nope.json")


def test_text_dump():
    text = pbe.format_policy(solve(3, 1))
    assert "node₀(2,1,0,1)  ->  Revealing" in text

from __future__ import annotations

import dataclasses
import math

import pytest

from lupus import mc
from lupus.engine import GameConfig
from lupus.exact import w_plus, w_selfkill
from lupus.mc import (
    Estimate,
    PolicyProphet,
    RevealRules,
    citizen_wins,
    estimate_H,
    optimal_reveal,
    policy_config,
    reveal_table,
    selfkill_penalty_check,
    simulate_policy,
)
from lupus.pbe import Action, PolicyCoverageError, solve
from lupus.tree import citizen_win_probability


def near(est: Estimate, p: float, sigmas: float = 3.0) -> bool:
    return abs(est.mean - p) <= sigmas * math.sqrt(p * (1 - p) / est.trials)


# --------------------------------------------------------------------------
# Estimate


def test_estimate_fields():
    e = Estimate(30, 100)
    assert e.mean == 0.3
    assert e.std_error == pytest.approx(math.sqrt(0.3 * 0.7 / 100))
    assert e.ci95 == pytest.approx((0.3 - 1.96 * e.std_error, 0.3 + 1.96 * e.std_error))


def test_estimate_clamps_interval():
    assert Estimate(0, 10).ci95 == (0.0, 0.0)
    assert Estimate(1, 2).ci95[0] >= 0 and Estimate(1, 2).ci95[1] <= 1


def test_estimate_validation():
    with pytest.raises(ValueError):
        Estimate(0, 0)
    with pytest.raises(ValueError):
        Estimate(5, 4)


def test_estimate_pooling_and_overlap():
    assert Estimate(3, 10).pooled(Estimate(7, 10)) == Estimate(10, 20)
    assert Estimate(50, 100).overlaps(Estimate(55, 100))
    assert not Estimate(10, 1000).overlaps(Estimate(900, 1000))
    assert Estimate(3, 10).complement() == Estimate(7, 10)


# --------------------------------------------------------------------------
# Fixed-rule estimates


def test_deterministic_for_fixed_seed():
    assert estimate_H(6, 2, 2, 20_000, 5) == estimate_H(6, 2, 2, 20_000, 5)
    assert estimate_H(6, 2, 2, 20_000, 5) != estimate_H(6, 2, 2, 20_000, 6)


def test_merge_of_disjoint_halves_equals_full_run():
    full = estimate_H(7, 2, 3, 120_000, 11)
    first = estimate_H(7, 2, 3, 60_000, 11)
    second = estimate_H(7, 2, 3, 60_000, 11, start=60_000)
    assert first.pooled(second) == full
    assert first.pooled(second).mean == full.mean


def test_threads_do_not_change_results(monkeypatch):
    config = GameConfig(5, 2, prophet=True, reveal_round=1)
    serial = citizen_wins(config, 120_000, 3)
    monkeypatch.setenv("LUPUS_THREADS", "3")
    assert citizen_wins(config, 120_000, 3) == serial


def test_argument_errors():
    with pytest.raises(ValueError):
        estimate_H(4, 1, 1, 0, 0)
    with pytest.raises(ValueError):
        estimate_H(4, 1, 1, 10, -1)
    with pytest.raises(ValueError):
        optimal_reveal(4, 1, 999, 0)


def test_four_villagers_reveal_first_day():
    assert abs(estimate_H(4, 1, 1, 100_000, 1).mean - 0.70) <= 0.02


def test_overwhelmed_citizens_never_win():
    assert estimate_H(1, 3, 1, 5_000, 0).mean == 0


@pytest.mark.parametrize("n,m", [(n, m) for n in range(3, 10) for m in range(1, 4) if m < n - m])
def test_no_prophet_games_match_recursion(n, m):
    est = citizen_wins(GameConfig(n - m, m), 50_000, 21)
    assert near(est, float(1 - w_plus(n, m)))


def test_rules_presets():
    assert mc.TABLE_RULES == RevealRules("kill_first", True)
    config = RevealRules("check_first", False).config(4, 1, 2)
    assert (config.night_order, config.lone_wolf_all_in, config.reveal_round) == ("check_first", False, 2)


def test_check_first_rules_match_enumeration():
    rules = RevealRules("check_first", False)
    exact = citizen_win_probability(rules.config(4, 1, 1))
    assert near(estimate_H(4, 1, 1, 100_000, 2, rules=rules), float(exact))


@pytest.mark.parametrize("v,w,best", [(4, 1, 1), (9, 3, 4), (5, 4, 3)])
def test_best_reveal_round(v, w, best):
    result = optimal_reveal(v, w, 100_000, 0)
    assert result.best_round == best or best in result.tie_rounds
    assert result.estimate_at(result.best_round) == result.best_estimate
    assert [r for r, _ in result.per_round] == list(range(1, mc.last_useful_round(v, w) + 1))
    assert result.best_estimate.mean == max(e.mean for _, e in result.per_round)


def test_reveal_table_layout():
    table = reveal_table(range(4, 6), range(1, 3), 2_000, 0)
    lines = table.to_csv().splitlines()
    assert lines[0] == "villagers,row,w1,w2,mean_w1,mean_w2"
    assert [line.split(",")[:2] for line in lines[1:]] == [
        ["4", "round"], ["4", "percent"], ["5", "round"], ["5", "percent"]
    ]
    cell = table.cells[4, 1]
    assert lines[2].split(",")[2] == str(round(100 * cell.best_estimate.mean))
    with pytest.raises(ValueError):
        reveal_table(range(4, 4), range(1, 2), 2_000, 0)


def test_best_rate_falls_with_more_wolves():
    for v in (6, 9):
        bests = [optimal_reveal(v, w, 20_000, 4).best_estimate for w in range(1, 5)]
        for a, b in zip(bests, bests[1:]):
            assert a.mean + 3 * math.hypot(a.std_error, b.std_error) >= b.mean


# --------------------------------------------------------------------------
# Policy play


def never_reveal(policy):
    return dataclasses.replace(
        policy, decisions={k: d._replace(action=Action.HIDING) for k, d in policy.decisions.items()}
    )


@pytest.mark.parametrize("v,w", [(1, 1), (2, 1), (3, 1), (4, 2)])
def test_policy_play_enumerates_to_root_value(v, w):
    policy = solve(v, w)
    assert citizen_win_probability(policy_config(policy), PolicyProphet(policy)) == policy.root_value


@pytest.mark.parametrize("v,w", [(3, 1), (4, 2)])
def test_silent_prophet_is_an_extra_villager(v, w):
    policy = never_reveal(solve(v, w))
    exact = citizen_win_probability(policy_config(policy), PolicyProphet(policy))
    assert exact == 1 - w_plus(v + w + 1, w)
    assert near(simulate_policy(v, w, policy, 10_000, 3), float(exact))


def test_simulated_policy_small_game():
    policy = solve(2, 1)
    assert near(simulate_policy(2, 1, policy, 20_000, 8), float(policy.root_value))


def test_policy_coverage_error():
    policy = solve(3, 1)
    partial = dataclasses.replace(policy, decisions={})
    with pytest.raises(PolicyCoverageError, match="node₀"):
        simulate_policy(3, 1, partial, 100, 0)


def test_policy_config_mismatch():
    with pytest.raises(ValueError):
        simulate_policy(4, 1, solve(3, 1), 100, 0)


# --------------------------------------------------------------------------
# Self-kill


def test_selfkill_lowers_werewolf_rate():
    report = selfkill_penalty_check(6, 3, 0.5, 100_000, 0)
    assert report.with_selfkill.mean < report.without_selfkill.mean
    assert report.significant()


def test_selfkill_zero_probability_coincides():
    report = selfkill_penalty_check(6, 3, 0, 20_000, 0)
    assert report.with_selfkill == report.without_selfkill
    assert report.z_score == 0 and not report.significant()


def test_first_night_selfkill_matches_recursion():
    report = selfkill_penalty_check(7, 3, 1, 100_000, 1, self_kill_nights=1)
    assert near(report.with_selfkill, float(w_selfkill(10, 3)))


def test_selfkill_needs_two_wolves():
    with pytest.raises(ValueError):
        selfkill_penalty_check(6, 1, 0.5, 100, 0)
    with pytest.raises(ValueError):
        selfkill_penalty_check(6, 2, 1.5, 100, 0)

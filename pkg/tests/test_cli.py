from __future__ import annotations

import json

import pytest

from lupus.cli import EXIT_IO, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "strategy,players,wolves,expected",
    [("plus", 5, 2, "7/8"), ("random", 5, 2, "3/4"), ("plus", 5, 0, "0"), ("selfkill", 7, 3, "17/24")],
)
def test_exact(capsys, strategy, players, wolves, expected):
    code, out, _ = run(capsys, "exact", "--players", str(players), "--wolves", str(wolves), "--strategy", strategy)
    assert code == EXIT_OK
    assert out.split()[0] == expected


def test_exact_domain_error(capsys):
    code, _, err = run(capsys, "exact", "--players", "3", "--wolves", "5")
    assert code == EXIT_USAGE and "werewolves" in err


def test_simulate_with_prophet(capsys):
    code, out, _ = run(
        capsys, "simulate", "--villagers", "4", "--wolves", "1", "--prophet", "--reveal-round", "1",
        "--trials", "100000", "--seed", "7", "--json",
    )
    assert code == EXIT_OK
    assert abs(json.loads(out)["mean"] - 0.70) <= 0.02


def test_simulate_without_prophet(capsys):
    code, out, _ = run(capsys, "simulate", "--villagers", "2", "--wolves", "1", "--trials", "100000", "--seed", "7")
    assert code == EXIT_OK
    assert abs(float(out.split()[3]) - 0.5) < 0.005


def test_simulate_event_log(capsys, tmp_path):
    log = tmp_path / "game.jsonl"
    code, _, _ = run(capsys, "simulate", "--villagers", "7", "--wolves", "3", "--prophet", "--trials", "10",
                     "--emit-log", str(log))
    assert code == EXIT_OK
    events = [json.loads(line) for line in log.read_text().splitlines()]
    assert events[0]["kind"] == "assign" and events[-1]["kind"] == "win"


@pytest.mark.parametrize(
    "argv",
    [
        ["simulate", "--villagers", "2", "--wolves", "1", "--trials", "0"],
        ["simulate", "--villagers", "2", "--wolves", "1", "--reveal-round", "2"],
        ["simulate", "--villagers", "0", "--wolves", "1"],
        ["reveal-table", "--villagers", "5..4"],
        ["reveal-table", "--wolves", "x"],
        ["plot-data", "--figure", "5"],
        ["exact", "--players", "5", "--wolves", "2", "--unknown"],
        ["nonsense"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_io_errors(capsys, tmp_path):
    missing = str(tmp_path / "no" / "dir" / "out")
    assert run(capsys, "reveal-table", "--villagers", "4", "--wolves", "1", "--trials-per-cell", "1000",
               "--out", missing)[0] == EXIT_IO
    assert run(capsys, "solve", "--villagers", "3", "--wolves", "1", "--out", missing)[0] == EXIT_IO


def test_reveal_table(capsys, tmp_path):
    out = tmp_path / "table.csv"
    js = tmp_path / "table.json"
    code, _, _ = run(capsys, "reveal-table", "--villagers", "4..5", "--wolves", "1..2",
                     "--trials-per-cell", "2000", "--out", str(out), "--json", str(js))
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "villagers,row,w1,w2,mean_w1,mean_w2" and len(lines) == 5
    cells = json.loads(js.read_text())
    assert len(cells) == 4 and {"best_round", "per_round", "tie_rounds"} <= set(cells[0])


def test_solve_is_byte_stable(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    code, out, _ = run(capsys, "solve", "--villagers", "3", "--wolves", "1", "--out", str(a))
    assert code == EXIT_OK and out.startswith("root value 55/64")
    run(capsys, "solve", "--villagers", "3", "--wolves", "1", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert any(
        [[e[k] for k in "NMnm"] for e in rec["entries"]] == [[2, 1, 0, 1]] and rec["action"] == "Revealing"
        for rec in doc["information_sets"]
    )


def test_solve_text_listing(capsys):
    code, out, _ = run(capsys, "solve", "--villagers", "4", "--wolves", "2", "--text", "--tie-break", "hide")
    assert code == EXIT_OK
    assert "4/7·node₀(1,2,1,1) + 3/7·node₀(2,1,1,1)  ->  Revealing" in out


def test_plot_data_figures(capsys):
    code, out, _ = run(capsys, "plot-data", "--figure", "1")
    assert code == EXIT_OK
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert ["5", "2", "1/8 (0.125000000000)"] in rows
    assert all(r[2].startswith("0 ") for r in rows if int(r[0]) % 2 == 0)

    code, out, _ = run(capsys, "plot-data", "--figure", "2")
    assert "5,2,7/8 (0.875000000000)" in out.splitlines()


def test_plot_data_prophet_comparison(capsys):
    code, out, _ = run(capsys, "plot-data", "--figure", "3", "--trials", "2000")
    lines = out.splitlines()
    assert code == EXIT_OK and len(lines) == 10
    assert lines[0].startswith("villagers,wolves,reveal_round,with_prophet")
    assert all(float(line.split(",")[-1]) > 0 for line in lines[1:])


def test_selfcheck_passes(capsys):
    code, out, _ = run(capsys, "selfcheck")
    assert code == EXIT_OK
    assert "0 failed" in out


def test_selfcheck_printed_formula_fails(capsys):
    code, out, _ = run(capsys, "selfcheck", "--printed-p8")
    assert code != EXIT_OK
    assert "FAIL partition of unity (printed P8)" in out


def test_selfcheck_independent_of_seed(capsys):
    a = run(capsys, "selfcheck", "--seed", "1")[1]
    b = run(capsys, "selfcheck", "--seed", "2")[1]
    assert a == b

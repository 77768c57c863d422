"""Command-line front end: ``lupus <command> [flags]``.

Exit codes are 0 on success, 2 on usage or domain errors and 3 on I/O
errors. Every command is deterministic given its flags.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
from fractions import Fraction
from typing import Callable, Sequence

from lupus import exact, mc, pbe
from lupus.engine import ConfigError, GameConfig, run_game
from lupus.rng import RngStream

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3


class UsageError(Exception):
    """Bad flag values; reported with exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def _int_range(text: str) -> range:
    """Parse ``"4..12"`` or a single ``"7"`` into an inclusive range."""
    lo, sep, hi = text.partition("..")
    try:
        start = int(lo)
        stop = int(hi) if sep else start
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B or an integer, got {text!r}") from None
    return range(start, stop + 1)


def _fraction(x: Fraction) -> str:
    return f"{x} ({float(x):.12f})"


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(text)


# --------------------------------------------------------------------------
# Commands


def cmd_exact(args: argparse.Namespace) -> int:
    fn = {"plus": exact.w_plus, "random": exact.v_random, "selfkill": exact.w_selfkill}[args.strategy]
    print(_fraction(fn(args.players, args.wolves)))
    return EXIT_OK


def _game_config(args: argparse.Namespace) -> GameConfig:
    if args.reveal_round is not None and not args.prophet:
        raise UsageError("--reveal-round requires --prophet")
    night_order = args.night_order or ("kill_first" if args.prophet else "check_first")
    lone = args.lone_wolf_all_in
    if lone is None:
        lone = args.prophet and mc.TABLE_RULES.lone_wolf_all_in
    return GameConfig(
        args.villagers,
        args.wolves,
        prophet=args.prophet,
        reveal_round=args.reveal_round,
        werewolf_self_kill_probability=Fraction(args.self_kill_probability),
        strategy=args.strategy,
        night_order=night_order,
        lone_wolf_all_in=lone,
    )


def cmd_simulate(args: argparse.Namespace) -> int:
    config = _game_config(args)
    est = mc.citizen_wins(config, args.trials, args.seed)
    if args.json:
        print(json.dumps(est.to_dict(), sort_keys=True))
    else:
        lo, hi = est.ci95
        print(
            f"citizen win rate {est.mean:.6f}  ci95 [{lo:.6f}, {hi:.6f}]  "
            f"std_error {est.std_error:.6f}  trials {est.trials}"
        )
    if args.emit_log:
        record = run_game(config, RngStream(args.seed, 0), record=True)
        _write(record.to_jsonl(), args.emit_log)
    return EXIT_OK


def cmd_reveal_table(args: argparse.Namespace) -> int:
    if not args.villagers or not args.wolves:
        raise UsageError("villager and werewolf ranges must be nonempty")
    table = mc.reveal_table(args.villagers, args.wolves, args.trials_per_cell, args.seed)
    _write(table.to_csv(), args.out)
    if args.json:
        doc = [table.cells[v, w].to_dict() for v in table.villagers for w in table.wolves]
        _write(json.dumps(doc, indent=2) + "\n", args.json)
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    policy = pbe.solve(
        args.villagers, args.wolves, tie_break=args.tie_break, lone_wolf_all_in=args.lone_wolf_all_in
    )
    if args.out:
        pbe.export_policy(policy, args.out)
    if args.text:
        print(pbe.format_policy(policy))
    print(f"root value {_fraction(policy.root_value)}  information sets {len(policy.decisions)}")
    return EXIT_OK


def _figure_csv(header: Sequence[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def figure_rows(figure: int, trials: int = 100_000, seed: int = 0) -> tuple[list[str], list[list]]:
    """Header and rows of the plot data for ``figure``.

    1: ``w_plus - v_random`` for ``3 <= n <= 20`` and ``1 <= m < n - m``.
    2: ``w_plus`` for ``m`` in 1..3 and ``3 <= n <= 20``.
    3, 4: citizen win rate with a prophet revealing at the best round, against
    the same table without a prophet, for 2 and 3 werewolves.
    """
    if figure == 1:
        rows = [
            [n, m, _fraction(exact.w_plus(n, m) - exact.v_random(n, m))]
            for n in range(3, 21)
            for m in range(1, n)
            if m < n - m
        ]
        return ["n", "m", "difference"], rows
    if figure == 2:
        rows = [[n, m, _fraction(exact.w_plus(n, m))] for m in (1, 2, 3) for n in range(3, 21) if m <= n]
        return ["n", "m", "w_plus"], rows
    if figure in (3, 4):
        wolves = figure - 1
        rows = []
        for v in range(4, 13):
            best = mc.optimal_reveal(v, wolves, trials, seed)
            lo, hi = best.best_estimate.ci95
            without = 1 - exact.w_plus(v + wolves + 1, wolves)
            rows.append(
                [v, wolves, best.best_round, f"{best.best_estimate.mean:.12f}", f"{lo:.12f}",
                 f"{hi:.12f}", _fraction(without), f"{best.best_estimate.mean - float(without):.12f}"]
            )
        header = ["villagers", "wolves", "reveal_round", "with_prophet", "ci95_low", "ci95_high",
                  "without_prophet", "difference"]
        return header, rows
    raise UsageError(f"figure must be 1, 2, 3 or 4, got {figure}")


def cmd_plot_data(args: argparse.Namespace) -> int:
    header, rows = figure_rows(args.figure, args.trials, args.seed)
    _write(_figure_csv(header, rows), args.out)
    return EXIT_OK


def cmd_selfcheck(args: argparse.Namespace) -> int:
    from lupus import selfcheck

    results = selfcheck.run_all(printed_p8=args.printed_p8, seed=args.seed)
    for result in results:
        print(result.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)} passed, {len(failed)} failed")
    return 1 if failed else EXIT_OK


# --------------------------------------------------------------------------
# Parser


def _lone_flag(p: argparse.ArgumentParser, default: bool | None) -> None:
    p.add_argument(
        "--lone-wolf-all-in",
        action=argparse.BooleanOptionalAction,
        default=default,
        help="a single werewolf also forces tie votes once it is the target at parity",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lupus", description="Werewolf game analysis: exact values, simulation, prophet policies.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("exact", help="exact werewolf win probability")
    p.add_argument("--players", type=int, required=True)
    p.add_argument("--wolves", type=int, required=True)
    p.add_argument("--strategy", choices=("plus", "random", "selfkill"), default="plus")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("simulate", help="Monte Carlo citizen win rate")
    p.add_argument("--villagers", type=int, required=True)
    p.add_argument("--wolves", type=int, required=True)
    p.add_argument("--prophet", action="store_true")
    p.add_argument("--reveal-round", type=int)
    p.add_argument("--strategy", choices=("random+", "random"), default="random+")
    p.add_argument("--self-kill-probability", default="0")
    p.add_argument("--night-order", choices=("check_first", "kill_first"),
                   help="default: kill_first with a prophet (reveal-table rules)")
    _lone_flag(p, None)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="print the estimate as JSON")
    p.add_argument("--emit-log", metavar="PATH", help="write the first game's event log as JSON lines")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reveal-table", help="best reveal round per configuration")
    p.add_argument("--villagers", type=_int_range, default=range(4, 13), metavar="A..B")
    p.add_argument("--wolves", type=_int_range, default=range(1, 5), metavar="A..B")
    p.add_argument("--trials-per-cell", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--json", metavar="PATH", help="also write per-round estimates as JSON")
    p.set_defaults(func=cmd_reveal_table)

    p = sub.add_parser("solve", help="optimal prophet policy")
    p.add_argument("--villagers", type=int, required=True)
    p.add_argument("--wolves", type=int, required=True)
    p.add_argument("--out", help="policy JSON path")
    p.add_argument("--tie-break", choices=pbe.TIE_BREAKS, default="reveal")
    p.add_argument("--text", action="store_true", help="print every decision")
    _lone_flag(p, False)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("plot-data", help="CSV data behind the figures")
    p.add_argument("--figure", type=int, required=True)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--trials", type=int, default=100_000, help="trials per round (figures 3-4)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_plot_data)

    p = sub.add_parser("selfcheck", help="run the invariant checks at small sizes")
    p.add_argument("--printed-p8", action="store_true",
                   help="use the checked-werewolf vote formula as printed (expected to fail)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        func: Callable[[argparse.Namespace], int] = args.func
        return func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (exact.DomainError, ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

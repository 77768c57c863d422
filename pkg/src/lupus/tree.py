"""Exact outcome probabilities of the engine by exhaustive enumeration.

The engine draws all randomness through ``below``, ``coin`` and
``bernoulli``. :class:`ScriptedRng` answers those calls from a script of
branch choices, and :func:`citizen_win_probability` walks every script
depth-first, weighting each completed game by the exact product of its
branch probabilities. This needs nothing from the analytic recursions, so it
serves as an independent oracle for them on small games.
"""

from __future__ import annotations

from fractions import Fraction

from lupus.engine import GameConfig, RevealDecider, Winner, run_game


class ScriptedRng:
    """Stand-in for :class:`lupus.rng.RngStream` that replays branch choices.

    Choices beyond the end of the script take branch 0 and are appended, so
    one pass yields the leftmost game that extends the script.
    """

    def __init__(self, script: list[int], fixed: int = 0) -> None:
        self.script = script
        self._fixed = fixed
        self.arity: list[int] = []
        self.probs: list[list[Fraction]] = []
        self._pos = 0

    def _branch(self, probs: list[Fraction]) -> int:
        pos = self._pos
        self._pos += 1
        if pos == len(self.script):
            self.script.append(0)
        self.arity.append(len(probs))
        self.probs.append(probs)
        return self.script[pos]

    def below(self, k: int) -> int:
        if self._fixed:
            self._fixed -= 1
            return 0
        return self._branch([Fraction(1, k)] * k)

    def coin(self) -> bool:
        return self._branch([Fraction(1, 2)] * 2) == 0

    def bernoulli(self, p) -> bool:
        p = Fraction(p)
        return self._branch([p, 1 - p]) == 0

    def random(self) -> float:
        raise TypeError("the enumerator only supports discrete draws")

    @property
    def weight(self) -> Fraction:
        out = Fraction(1)
        for probs, choice in zip(self.probs, self.script):
            out *= probs[choice]
        return out


def outcome_distribution(
    config: GameConfig,
    reveal: RevealDecider | None = None,
    max_games: int = 2_000_000,
    *,
    all_seatings: bool = False,
) -> dict[Winner, Fraction]:
    """Exact winner distribution of ``config`` over all chance outcomes.

    Branches of probability zero are still visited but add nothing. Unless
    ``all_seatings`` is set, the role shuffle is replaced by one fixed
    seating: every later draw is uniform over pools defined by role and
    check status, so the winner's law is the same for every seating.

    Raises:
        RuntimeError: if more than ``max_games`` distinct games are visited.
    """
    totals = {Winner.CITIZENS: Fraction(0), Winner.WEREWOLVES: Fraction(0)}
    script: list[int] = []
    games = 0
    while True:
        rng = ScriptedRng(list(script), 0 if all_seatings else config.n_players - 1)
        winner = run_game(config, rng, reveal=reveal, record=False).winner
        weight = rng.weight
        if weight:
            totals[winner] += weight
        games += 1
        if games > max_games:
            raise RuntimeError(f"more than {max_games} games; config too large to enumerate")
        # advance to the next script in depth-first order
        script = rng.script[: len(rng.arity)]
        while script and script[-1] + 1 >= rng.arity[len(script) - 1]:
            script.pop()
        if not script:
            return totals
        script[-1] += 1


def citizen_win_probability(
    config: GameConfig, reveal: RevealDecider | None = None, *, all_seatings: bool = False
) -> Fraction:
    return outcome_distribution(config, reveal, all_seatings=all_seatings)[Winner.CITIZENS]

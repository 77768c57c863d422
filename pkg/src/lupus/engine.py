"""Seedable state machine for a single Werewolf game.

Roles are limited to villagers, werewolves and one optional prophet. Play
follows fixed behaviour patterns:

* pre-reveal, night kills are uniform over non-werewolves and day votes are
  a single uniform draw over everyone alive (the modulus vote);
* werewolves defect into "all in" when they equal the citizens and a
  werewolf is about to be voted out;
* once the prophet reveals, citizens vote out checked werewolves first and
  otherwise vote uniformly among players not known to be citizens, while
  werewolves kill the prophet first, then checked villagers.

A round is night ``r`` followed by day ``r``. Player ids are stable; the
seating order is the order of ``GameState.alive``.
"""

from __future__ import annotations

import dataclasses
import enum
import json
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple

from lupus.rng import RngStream


class Role(enum.Enum):
    VILLAGER = "Villager"
    WEREWOLF = "Werewolf"
    PROPHET = "Prophet"


class Phase(enum.Enum):
    NIGHT = "Night"
    DAY = "Day"


class Winner(enum.Enum):
    CITIZENS = "CitizenGroup"
    WEREWOLVES = "WerewolfGroup"


class ConfigError(ValueError):
    """Raised for a GameConfig that violates one of its constraints."""


class EngineInvariantError(RuntimeError):
    """Raised when the state machine is driven into an impossible state."""


STRATEGIES = ("random+", "random")
NIGHT_ORDERS = ("check_first", "kill_first")


@dataclasses.dataclass(frozen=True)
class GameConfig:
    """Role counts and behaviour switches for one game.

    Attributes:
        villagers: Number of plain villagers.
        werewolves: Number of werewolves (at least one).
        prophet: Whether one prophet is seated.
        reveal_round: Day on which the prophet reveals, if still alive.
            ``None`` means never, unless a reveal callback is supplied.
        werewolf_self_kill_probability: Chance that a night kill targets a
            werewolf instead of a citizen.
        self_kill_nights: Restrict self-kills to the first this-many nights.
            ``None`` applies the probability every night.
        strategy: ``"random+"`` (with all in) or ``"random"``.
        lone_wolf_all_in: Let a single werewolf start an all in at one
            versus one. Off by default, which keeps the engine consistent
            with the no-prophet recursion (``w(3, 1) = 1/2``).
        night_order: ``"check_first"`` (the prophet checks, then the kill;
            the order the belief-state solver models) or ``"kill_first"``
            (a prophet killed that night never checks).
    """

    villagers: int
    werewolves: int
    prophet: bool = False
    reveal_round: int | None = None
    werewolf_self_kill_probability: Fraction = Fraction(0)
    self_kill_nights: int | None = None
    strategy: str = "random+"
    lone_wolf_all_in: bool = False
    night_order: str = "check_first"

    def __post_init__(self) -> None:
        if self.villagers < 0:
            raise ConfigError(f"villagers must be >= 0, got {self.villagers}")
        if self.werewolves < 1:
            raise ConfigError(f"werewolves must be >= 1, got {self.werewolves}")
        if self.n_players < 2:
            raise ConfigError(f"need at least 2 players in total, got {self.n_players}")
        if self.reveal_round is not None:
            if not self.prophet:
                raise ConfigError("reveal_round requires a prophet")
            if self.reveal_round < 1:
                raise ConfigError(f"reveal_round must be >= 1, got {self.reveal_round}")
        q = Fraction(self.werewolf_self_kill_probability)
        if not 0 <= q <= 1:
            raise ConfigError(f"werewolf_self_kill_probability must be in [0, 1], got {q}")
        object.__setattr__(self, "werewolf_self_kill_probability", q)
        if self.self_kill_nights is not None and self.self_kill_nights < 0:
            raise ConfigError("self_kill_nights must be >= 0")
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if self.night_order not in NIGHT_ORDERS:
            raise ConfigError(f"night_order must be one of {NIGHT_ORDERS}, got {self.night_order!r}")

    @property
    def n_players(self) -> int:
        return self.villagers + self.werewolves + (1 if self.prophet else 0)


class Event(NamedTuple):
    round: int
    phase: Phase
    kind: str
    actor: int | None
    target: int | None
    detail: str = ""

    def to_json(self) -> str:
        return json.dumps(
            {
                "round": self.round,
                "phase": self.phase.value,
                "kind": self.kind,
                "actor": self.actor,
                "target": self.target,
                "detail": self.detail,
            }
        )


class Seen(NamedTuple):
    """What the prophet saw happen to one player: id and known role, if any."""

    player: int
    known_role: Role | None


@dataclasses.dataclass(eq=False)
class GameState:
    config: GameConfig
    roles: tuple[Role, ...]  # indexed by player id - 1
    phase: Phase
    round: int
    alive: list[int]
    wolves: list[int]
    citizens: list[int]
    prophet_id: int | None
    checked: dict[int, Role] = dataclasses.field(default_factory=dict)
    # Checks the prophet has announced; this is all that other players know.
    public: dict[int, Role] = dataclasses.field(default_factory=dict)
    revealed: bool = False
    all_in_active: bool = False
    designated_victim: int | None = None
    winner: Winner | None = None
    events: list[Event] | None = None
    # Prophet-visible record of the most recent vote, check and kill.
    last_vote: Seen | None = None
    last_check: Seen | None = None
    last_kill: Seen | None = None

    def role(self, player: int) -> Role:
        return self.roles[player - 1]

    @property
    def prophet_alive(self) -> bool:
        return self.prophet_id is not None and self.prophet_id in self.citizens

    @property
    def roster(self) -> list[tuple[int, Role, bool]]:
        return [(p, self.role(p), p in self.checked) for p in self.alive]

    def _log(self, kind: str, actor: int | None, target: int | None, detail: str = "") -> None:
        if self.events is not None:
            self.events.append(Event(self.round, self.phase, kind, actor, target, detail))


@dataclasses.dataclass(frozen=True)
class GameRecord:
    config: GameConfig
    winner: Winner
    events: tuple[Event, ...]
    rounds_played: int

    def to_jsonl(self) -> str:
        return "".join(e.to_json() + "\n" for e in self.events)


RevealDecider = Callable[[GameState], bool]


def new_game(config: GameConfig, rng: RngStream, *, record: bool = True) -> GameState:
    """Seat players and assign roles uniformly at random."""
    roles = [Role.VILLAGER] * config.villagers + [Role.WEREWOLF] * config.werewolves
    if config.prophet:
        roles.append(Role.PROPHET)
    for i in range(len(roles) - 1, 0, -1):
        j = rng.below(i + 1)
        roles[i], roles[j] = roles[j], roles[i]
    ids = list(range(1, len(roles) + 1))
    state = GameState(
        config=config,
        roles=tuple(roles),
        phase=Phase.NIGHT,
        round=1,
        alive=ids,
        wolves=[p for p in ids if roles[p - 1] is Role.WEREWOLF],
        citizens=[p for p in ids if roles[p - 1] is not Role.WEREWOLF],
        prophet_id=next((p for p in ids if roles[p - 1] is Role.PROPHET), None),
        events=[] if record else None,
    )
    for p in ids:
        state._log("assign", None, p, roles[p - 1].value)
    return state


def winner_check(state: GameState) -> Winner | None:
    """Game-over test for the current phase.

    Before a night (after a vote, or at the start), werewolves have won once
    they are at least as many as the citizens, because the coming kill puts
    them ahead. Before a day vote they must already outnumber the citizens;
    a tie at that point is still decided by the vote.
    """
    n_wolves = len(state.wolves)
    if n_wolves == 0:
        return Winner.CITIZENS
    n_citizens = len(state.citizens)
    if state.phase is Phase.NIGHT:
        return Winner.WEREWOLVES if n_wolves >= n_citizens else None
    return Winner.WEREWOLVES if n_wolves > n_citizens else None


def modulus_vote(state: GameState, rng: RngStream, candidates: list[int] | None = None) -> int:
    """Uniform draw over ``candidates`` (default: everyone alive)."""
    pool = state.alive if candidates is None else candidates
    if not pool:
        raise EngineInvariantError("vote over an empty roster")
    return pool[rng.below(len(pool))]


def _eliminate(state: GameState, player: int) -> None:
    state.alive.remove(player)
    if state.roles[player - 1] is Role.WEREWOLF:
        state.wolves.remove(player)
    else:
        state.citizens.remove(player)
    if state.designated_victim == player:
        state.designated_victim = None


def _finish(state: GameState, winner: Winner | None) -> None:
    if winner is not None:
        state.winner = winner
        state._log("win", None, None, winner.value)


def _check(state: GameState, rng: RngStream) -> None:
    if not state.prophet_alive:
        return
    prophet = state.prophet_id
    checked = state.checked
    pool = [p for p in state.alive if p != prophet and p not in checked]
    if pool:
        target = pool[rng.below(len(pool))]
        role = state.roles[target - 1]
        checked[target] = role
        state.last_check = Seen(target, role)
        state._log("check", prophet, target, role.value)


def _kill(state: GameState, rng: RngStream) -> None:
    cfg = state.config
    q = cfg.werewolf_self_kill_probability
    if q and (cfg.self_kill_nights is None or state.round <= cfg.self_kill_nights) and rng.bernoulli(q):
        victim = state.wolves[rng.below(len(state.wolves))]
        reason = "self kill"
    elif state.revealed:
        checked_villagers = [p for p in state.citizens if p in state.public]
        if state.prophet_alive:
            victim, reason = state.prophet_id, "prioritizing the prophet"
        elif checked_villagers:
            victim = checked_villagers[rng.below(len(checked_villagers))]
            reason = "prioritizing a checked villager"
        else:
            victim = state.citizens[rng.below(len(state.citizens))]
            reason = "random non-werewolf"
    else:
        victim = state.citizens[rng.below(len(state.citizens))]
        reason = "random non-werewolf"
    state.last_kill = Seen(victim, state.checked.get(victim))
    state._log("kill", None, victim, reason)
    _eliminate(state, victim)


def advance_night(state: GameState, rng: RngStream) -> GameState:
    """Prophet check and werewolf kill, in ``config.night_order``.

    Mutates and returns ``state``.
    """
    if state.phase is not Phase.NIGHT or state.winner is not None:
        raise EngineInvariantError("advance_night called outside an open night")
    if not state.wolves:
        raise EngineInvariantError("night with no werewolf alive")
    state.last_check = None
    if state.config.night_order == "check_first":
        _check(state, rng)
        _kill(state, rng)
    else:
        _kill(state, rng)
        _check(state, rng)
    state.phase = Phase.DAY
    _finish(state, winner_check(state))
    return state


def _announce(state: GameState) -> None:
    # A revealed prophet who survives the night announces the new check.
    fresh = [(p, r) for p, r in state.checked.items() if p not in state.public]
    if fresh:
        state.public.update(fresh)
        state._log("announce", state.prophet_id, None, ", ".join(f"{p}={r.value}" for p, r in fresh))


def _reveal_due(state: GameState) -> bool:
    return state.config.reveal_round == state.round


def advance_day(state: GameState, rng: RngStream, reveal: RevealDecider | None = None) -> GameState:
    """Optional reveal, then the vote. Mutates and returns ``state``.

    ``reveal`` is consulted at the start of every day while the prophet is
    alive, unrevealed and no all in is running; it defaults to revealing on
    ``config.reveal_round``.
    """
    if state.phase is not Phase.DAY or state.winner is not None:
        raise EngineInvariantError("advance_day called outside an open day")
    cfg = state.config
    if state.prophet_alive:
        if state.revealed:
            _announce(state)
        elif not state.all_in_active and (reveal or _reveal_due)(state):
            state.revealed = True
            state._log(
                "reveal",
                state.prophet_id,
                None,
                ", ".join(f"{p}={r.value}" for p, r in state.checked.items()),
            )
            state.public.update(state.checked)

    wolves = state.wolves
    if state.all_in_active:
        target = wolves[0]
        reason = "all in continues"
    elif state.revealed:
        known_wolves = [p for p, r in state.public.items() if r is Role.WEREWOLF and p in wolves]
        if known_wolves:
            target, reason = known_wolves[0], "revealed werewolf"
        else:
            pool = [p for p in state.alive if p != state.prophet_id and p not in state.public]
            target = modulus_vote(state, rng, pool)
            reason = "random among unconfirmed players"
    else:
        target = modulus_vote(state, rng)
        reason = "random"

    if (
        not state.all_in_active
        and cfg.strategy == "random+"
        and state.roles[target - 1] is Role.WEREWOLF
        and len(wolves) == len(state.citizens)
        and (len(wolves) >= 2 or cfg.lone_wolf_all_in)
    ):
        state.all_in_active = True
        state._log("all_in", None, target, "werewolves defect")

    state.last_vote = Seen(target, state.checked.get(target))
    if state.all_in_active:
        if state.designated_victim is None:
            state.designated_victim = state.citizens[rng.below(len(state.citizens))]
        victim = state.designated_victim
        eliminated = target if rng.coin() else victim
        state._log("tie", None, eliminated, f"tie between {target} and {victim}")
        state.last_vote = Seen(eliminated, state.checked.get(eliminated))
        reason = "tie broken at random"
    else:
        eliminated = target
    state._log("vote", None, eliminated, reason)
    _eliminate(state, eliminated)

    state.phase = Phase.NIGHT
    state.round += 1
    _finish(state, winner_check(state))
    return state


def run_game(
    config: GameConfig,
    rng: RngStream,
    *,
    reveal: RevealDecider | None = None,
    record: bool = True,
) -> GameRecord:
    """Play one game to completion."""
    state = new_game(config, rng, record=record)
    _finish(state, winner_check(state))
    limit = config.n_players + 2
    while state.winner is None:
        if state.round > limit:
            raise EngineInvariantError(f"game exceeded {limit} rounds")
        advance_night(state, rng)
        if state.winner is None:
            advance_day(state, rng, reveal)
    return GameRecord(
        config=config,
        winner=state.winner,
        events=tuple(state.events or ()),
        rounds_played=state.round,
    )


def play_winner(config: GameConfig, rng: RngStream, reveal: RevealDecider | None = None) -> Winner:
    """``run_game`` without the event log; the Monte Carlo hot path."""
    return run_game(config, rng, reveal=reveal, record=False).winner


def format_transcript(record: GameRecord) -> list[str]:
    """Human-readable lines in the style of a game log."""
    lines = []
    assigned = [e for e in record.events if e.kind == "assign"]
    if assigned:
        lines.append(
            "Initial role assignment: "
            + ", ".join(f"Player {e.target}: {e.detail}" for e in assigned)
        )
    for e in record.events:
        if e.kind == "check":
            lines.append(f"Night: The Prophet checked Player {e.target}, result: {e.detail}")
        elif e.kind == "kill":
            lines.append(f"Night: The werewolf group killed Player {e.target} (reason: {e.detail})")
        elif e.kind == "reveal":
            lines.append(f"Day: The Prophet revealed information: {e.detail or 'nothing checked'}")
        elif e.kind == "all_in":
            lines.append(f"Day: Player {e.target} was about to be voted out; \"all in\" triggered")
        elif e.kind == "vote":
            lines.append(f"Day: Player {e.target} was voted out (reason: {e.detail})")
        elif e.kind == "win":
            who = "Citizen" if e.detail == Winner.CITIZENS.value else "Werewolf"
            lines.append(f"Game over: {who} group won!")
    return lines


def write_jsonl(records: Iterable[GameRecord], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(rec.to_jsonl())

"""Compiled replay of the engine rules for bulk Monte Carlo.

``play_block`` consumes the very same per-stream uniforms as
``lupus.engine.run_game`` and takes every decision in the same order, so for
a given ``(master_seed, stream_index)`` it returns the same winner. Games that
exhaust their reserved block of draws are reported as ``SPILLED`` and are
replayed by the reference engine, which continues into the overflow stream.

Only fixed-round reveals are supported here; policy-driven play goes
through the reference engine.
"""

from __future__ import annotations

import numpy as np

from lupus.engine import GameConfig, Winner, play_winner
from lupus.rng import BLOCK, RngStream, uniform_blocks

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    njit = None

WEREWOLVES_WIN = 0
CITIZENS_WIN = 1
SPILLED = -1

_VILLAGER, _WEREWOLF, _PROPHET = 0, 1, 2


def _play_block(u, n_games, villagers, werewolves, prophet, reveal_round,
                q, self_kill_nights, random_plus, lone_wolf_all_in, check_first, out):
    n = villagers + werewolves + (1 if prophet else 0)
    role = np.empty(n, np.int64)
    alive = np.empty(n, np.bool_)
    checked = np.empty(n, np.bool_)
    public = np.empty(n, np.bool_)
    check_seq = np.empty(n, np.int64)
    for g in range(n_games):
        pos = g * BLOCK
        end = pos + BLOCK
        spilled = False
        for i in range(villagers):
            role[i] = _VILLAGER
        for i in range(werewolves):
            role[villagers + i] = _WEREWOLF
        if prophet:
            role[n - 1] = _PROPHET
        for i in range(n - 1, 0, -1):
            if pos >= end:
                spilled = True
                break
            j = int(u[pos] * (i + 1))
            pos += 1
            t = role[i]
            role[i] = role[j]
            role[j] = t
        if spilled:
            out[g] = SPILLED
            continue
        prophet_idx = -1
        for i in range(n):
            alive[i] = True
            checked[i] = False
            public[i] = False
            if role[i] == _PROPHET:
                prophet_idx = i
        n_wolves = werewolves
        n_cit = n - werewolves
        n_checked = 0
        revealed = False
        all_in = False
        victim_idx = -1
        rnd = 1
        result = SPILLED
        if n_wolves >= n_cit:
            result = WEREWOLVES_WIN
        while result == SPILLED and not spilled:
            for step in range(2):
                if (step == 0) == check_first:
                    # prophet check
                    if prophet_idx < 0 or not alive[prophet_idx]:
                        continue
                    size = 0
                    for i in range(n):
                        if alive[i] and i != prophet_idx and not checked[i]:
                            size += 1
                    if size == 0:
                        continue
                    if pos >= end:
                        spilled = True
                        break
                    k = int(u[pos] * size)
                    pos += 1
                    for i in range(n):
                        if alive[i] and i != prophet_idx and not checked[i]:
                            if k == 0:
                                checked[i] = True
                                check_seq[n_checked] = i
                                n_checked += 1
                                break
                            k -= 1
                    continue
                # werewolf kill
                kill = -1
                self_kill = False
                if q > 0.0 and (self_kill_nights < 0 or rnd <= self_kill_nights):
                    if pos >= end:
                        spilled = True
                        break
                    r = u[pos]
                    pos += 1
                    if r < q:
                        self_kill = True
                if self_kill:
                    if pos >= end:
                        spilled = True
                        break
                    k = int(u[pos] * n_wolves)
                    pos += 1
                    for i in range(n):
                        if alive[i] and role[i] == _WEREWOLF:
                            if k == 0:
                                kill = i
                                break
                            k -= 1
                elif revealed and prophet_idx >= 0 and alive[prophet_idx]:
                    kill = prophet_idx
                else:
                    size = 0
                    if revealed:
                        for i in range(n):
                            if alive[i] and role[i] != _WEREWOLF and public[i]:
                                size += 1
                    restrict = size > 0
                    if not restrict:
                        size = n_cit
                    if pos >= end:
                        spilled = True
                        break
                    k = int(u[pos] * size)
                    pos += 1
                    for i in range(n):
                        if alive[i] and role[i] != _WEREWOLF and (public[i] or not restrict):
                            if k == 0:
                                kill = i
                                break
                            k -= 1
                alive[kill] = False
                if role[kill] == _WEREWOLF:
                    n_wolves -= 1
                else:
                    n_cit -= 1
                if kill == victim_idx:
                    victim_idx = -1
            if spilled:
                break
            if n_wolves == 0:
                result = CITIZENS_WIN
                break
            if n_wolves > n_cit:
                result = WEREWOLVES_WIN
                break
            # day: reveal
            prophet_alive = prophet_idx >= 0 and alive[prophet_idx]
            if prophet_alive and (revealed or (not all_in and rnd == reveal_round)):
                revealed = True
                for i in range(n):
                    if checked[i]:
                        public[i] = True
            # day: vote target
            target = -1
            if all_in:
                for i in range(n):
                    if alive[i] and role[i] == _WEREWOLF:
                        target = i
                        break
            else:
                if revealed:
                    for c in range(n_checked):
                        i = check_seq[c]
                        if alive[i] and role[i] == _WEREWOLF and public[i]:
                            target = i
                            break
                if target < 0:
                    size = 0
                    for i in range(n):
                        if alive[i] and (not revealed or (i != prophet_idx and not public[i])):
                            size += 1
                    if pos >= end:
                        spilled = True
                        break
                    k = int(u[pos] * size)
                    pos += 1
                    for i in range(n):
                        if alive[i] and (not revealed or (i != prophet_idx and not public[i])):
                            if k == 0:
                                target = i
                                break
                            k -= 1
                if (random_plus and role[target] == _WEREWOLF and n_wolves == n_cit
                        and (n_wolves >= 2 or lone_wolf_all_in)):
                    all_in = True
            eliminated = target
            if all_in:
                if victim_idx < 0:
                    if pos >= end:
                        spilled = True
                        break
                    k = int(u[pos] * n_cit)
                    pos += 1
                    for i in range(n):
                        if alive[i] and role[i] != _WEREWOLF:
                            if k == 0:
                                victim_idx = i
                                break
                            k -= 1
                if pos >= end:
                    spilled = True
                    break
                if not u[pos] < 0.5:
                    eliminated = victim_idx
                pos += 1
            alive[eliminated] = False
            if role[eliminated] == _WEREWOLF:
                n_wolves -= 1
            else:
                n_cit -= 1
            if eliminated == victim_idx:
                victim_idx = -1
            rnd += 1
            if n_wolves == 0:
                result = CITIZENS_WIN
            elif n_wolves >= n_cit:
                result = WEREWOLVES_WIN
        out[g] = SPILLED if spilled else result


if njit is not None:
    _play_block = njit(cache=True, nogil=True)(_play_block)


def compiled() -> bool:
    """Whether the numba-compiled kernel is in use."""
    return njit is not None


def play_block(config: GameConfig, master_seed: int, start: int, count: int) -> np.ndarray:
    """Outcomes of streams ``start .. start+count-1`` under ``config``.

    Returns an int8 array with ``CITIZENS_WIN`` or ``WEREWOLVES_WIN`` per game.
    """
    out = np.empty(count, np.int8)
    if count <= 0:
        return out
    u = uniform_blocks(master_seed, start, count)
    _play_block(
        u,
        count,
        config.villagers,
        config.werewolves,
        config.prophet,
        -1 if config.reveal_round is None else config.reveal_round,
        float(config.werewolf_self_kill_probability),
        -1 if config.self_kill_nights is None else config.self_kill_nights,
        config.strategy == "random+",
        config.lone_wolf_all_in,
        config.night_order == "check_first",
        out,
    )
    for g in np.flatnonzero(out == SPILLED):
        winner = play_winner(config, RngStream(master_seed, start + int(g)))
        out[g] = CITIZENS_WIN if winner is Winner.CITIZENS else WEREWOLVES_WIN
    return out

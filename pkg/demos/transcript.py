"""Play one logged game and print its transcript.

Run: python demos/transcript.py [seed]
"""

from __future__ import annotations

import sys

from lupus.engine import GameConfig, format_transcript, run_game
from lupus.rng import RngStream


def main(seed: int = 2) -> None:
    config = GameConfig(7, 3, prophet=True, reveal_round=2)
    record = run_game(config, RngStream(seed, 0))
    for line in format_transcript(record):
        print(line)


if __name__ == "__main__":
    main(*map(int, sys.argv[1:2]))

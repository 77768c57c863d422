"""Werewolf game solver: exact recursions, Monte Carlo simulation and a prophet PBE solver."""

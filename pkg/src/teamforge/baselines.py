"""Random serial dictatorship for teams."""

from __future__ import annotations

import time

from ._compiled import compile_profile, from_mask
from .game_exact import SearchStats, make_outcome


def rsd(profile, order, omega: int = 2):
    """Dictators in block order each take their best feasible team among the
    players still unassigned. Drafted members cannot refuse."""
    if omega < 2:
        raise ValueError("omega must be >= 2")
    t0 = time.perf_counter()
    cp = compile_profile(profile)
    left = (1 << profile.n) - 1
    teams = []
    for i in order.players:
        if not (left >> i) & 1:
            continue
        team, _ = cp.top_team(i, left, omega)
        teams.append(team)
        left &= ~team
    stats = SearchStats(wall_time=time.perf_counter() - t0)
    return make_outcome([from_mask(t) for t in teams], order, stats)

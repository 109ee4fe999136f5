"""Opportunity scores and the two fast RPM variants.

The opportunity score of a responder ``j`` facing proposer ``i`` estimates
how likely ``j`` is to land someone better than ``i`` later::

    R_j(i) = 1/|U_j(j)| * sum_{k in U_j(i)} (1 - |U_k(j)| / |U_k(k)|)

where ``U_j(i)`` are the remaining feasible teammates ``j`` strictly prefers
to ``i`` and ``U_j(j)`` all remaining feasible teammates of ``j``. A summand
with ``|U_k(k)| = 0`` counts as 0.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from ._compiled import bits, compile_profile, from_mask, to_mask
from .game_exact import Game, SearchStats, UnsupportedConfiguration, make_outcome, DEFAULT_NODE_BUDGET
from .ims import ims_masks


@dataclass(frozen=True)
class HeuristicParams:
    alpha: float = 0.1
    beta: float = 0.6

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 0.5:
            raise ValueError(f"alpha must lie in [0, 0.5], got {self.alpha}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")


def _opportunity_mask(cp, remaining: int, j: int, i: int) -> float:
    nbr, better = cp.nbr, cp.better
    denom = (nbr[j] & remaining).bit_count()
    if denom == 0 or not (nbr[j] >> i) & 1:
        raise ValueError(f"{i} is not an acceptable teammate for {j} among the remaining players")
    total = 0.0
    for k in bits(better[j][i] & remaining):
        ukk = (nbr[k] & remaining).bit_count()
        if ukk:
            total += 1.0 - (better[k][j] & remaining).bit_count() / ukk
    return total / denom


def opportunity_score(profile, remaining, j: int, i: int) -> float:
    """``R_j(i)`` over the players in ``remaining``.

    ``i`` must be a neighbor of ``j``, and ``j`` must have at least one
    neighbor among ``remaining``.
    """
    return _opportunity_mask(compile_profile(profile), to_mask(remaining), j, i)


def team_score(profile, remaining, j: int, team) -> float:
    """Mean of ``R_j(l)`` over the members ``l`` of ``team``."""
    team = list(team)
    if not team:
        raise ValueError("team must be nonempty")
    cp = compile_profile(profile)
    mask = to_mask(remaining)
    return sum(_opportunity_mask(cp, mask, j, l) for l in team) / len(team)


def rpm_alpha(profile, order, alpha: float = 0.1, use_ims: bool = True,
              node_budget: int | None = DEFAULT_NODE_BUDGET, omega: int = 2):
    """Approximate RPM for the roommate problem.

    Responders whose opportunity score is at most ``alpha`` accept and those
    at or above ``1 - alpha`` reject without searching the continuation;
    the rest are decided exactly. ``alpha = 0`` is the exact mechanism.
    """
    if omega != 2:
        raise UnsupportedConfiguration("rpm_alpha supports the roommate case (omega = 2) only")
    HeuristicParams(alpha=alpha)
    return Game(profile, order, omega=2, use_ims=use_ims, node_budget=node_budget, alpha=alpha).solve()


def hrpm(profile, order, omega: int = 2, beta: float = 0.6):
    """Heuristic rotating proposer mechanism.

    After IMS preprocessing, players take one turn each in block order. The
    proposer invites their remaining neighbors one at a time, best first; an
    invitee joins when every current member is their neighbor and their mean
    opportunity score against the current team is at most ``beta``. The
    turn ends when the team has ``omega`` members or the ranking runs out.
    ``stats.score_evals`` counts single opportunity-score evaluations.
    """
    if omega < 2:
        raise ValueError("omega must be >= 2")
    HeuristicParams(beta=beta)
    t0 = time.perf_counter()
    cp = compile_profile(profile)
    stats = SearchStats()
    full = (1 << profile.n) - 1
    matched, left, _, _ = ims_masks(cp, full, omega)
    stats.ims_prunes = len(matched)
    teams = list(matched)
    nbr = cp.nbr
    for i in order.players:
        if not (left >> i) & 1:
            continue
        team = 1 << i
        size = 1
        for j in cp.rankings[i]:
            if size >= omega:
                break
            if not (left >> j) & 1:
                continue
            if nbr[j] & team != team:
                continue  # someone on the team is unacceptable to j
            stats.score_evals += size
            r = sum(_opportunity_mask(cp, left, j, l) for l in bits(team)) / size
            if r <= beta:
                team |= 1 << j
                size += 1
                left &= ~(1 << j)
        left &= ~(1 << i)
        teams.append(team)
    for i in bits(left):
        teams.append(1 << i)
    stats.wall_time = time.perf_counter() - t0
    return make_outcome([from_mask(t) for t in teams], order, stats)

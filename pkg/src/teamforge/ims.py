"""Iterated matching of soulmates (IMS).

A team is a soulmate team when it is the best feasible team of every one of
its members among the players still unmatched. IMS repeatedly matches all
such teams and removes them until a round finds none.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._compiled import bits, compile_profile, from_mask, to_mask


@dataclass(frozen=True)
class ImsResult:
    matched: tuple  # tuple[frozenset[int], ...]
    residual: frozenset
    rounds: int
    evaluations: int = 0


def top_team(profile, i: int, remaining, omega: int) -> frozenset:
    """Most preferred feasible team of ``i`` among ``remaining``.

    With positive additive scores this is ``i`` plus their ``omega - 1``
    best remaining neighbors whenever those are mutual neighbors; otherwise
    the best-scoring clique.
    """
    if omega < 1:
        raise ValueError("omega must be >= 1")
    remaining = set(remaining)
    if i not in remaining:
        raise ValueError(f"{i} is not among the remaining players")
    if omega == 1:
        return frozenset([i])
    cp = compile_profile(profile)
    team, _ = cp.top_team(i, to_mask(remaining), omega)
    return from_mask(team)


def ims_masks(cp, remaining: int, omega: int, eligible: int = -1, live_tops: bool = False):
    """Mask-level IMS.

    Only teams with at least one member in ``eligible`` are matched, except
    isolated players, who cannot team up with anyone. With ``live_tops``
    (roommate case) a player outside ``eligible`` only considers partners
    inside it. Returns the matched team masks, the residual mask, rounds and
    top-team evaluations.
    """
    matched = []
    rounds = 0
    evals = 0
    if omega < 2:
        return [1 << i for i in bits(remaining)], 0, 1 if remaining else 0, 0
    while remaining:
        tops = {}
        for i in bits(remaining):
            pool = remaining if not live_tops or (eligible >> i) & 1 else remaining & eligible
            tops[i] = cp.top_team(i, pool, omega)
            evals += 1
        found = []
        for i, (team, unique) in tops.items():
            if i != (team & -team).bit_length() - 1:
                continue  # examine each candidate team once, from its lowest member
            if team & (team - 1) == 0:
                found.append(team)
                continue
            if not team & eligible:
                continue
            ok = True
            for j in bits(team):
                tj, uj = tops[j]
                if tj != team or not uj:
                    ok = False
                    break
            if ok:
                found.append(team)
        if not found:
            break
        rounds += 1
        for team in found:
            matched.append(team)
            remaining &= ~team
    return matched, remaining, rounds, evals


def run_ims(profile, remaining=None, omega: int = 2) -> ImsResult:
    cp = compile_profile(profile)
    mask = (1 << profile.n) - 1 if remaining is None else to_mask(remaining)
    matched, residual, rounds, evals = ims_masks(cp, mask, omega)
    teams = tuple(sorted((from_mask(t) for t in matched), key=lambda t: min(t)))
    return ImsResult(matched=teams, residual=from_mask(residual), rounds=rounds, evaluations=evals)

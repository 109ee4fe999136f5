"""Bitmask view of a profile shared by the search routines.

Decision scores are the integers ``k - r + 1``: positive for every neighbor,
zero for being alone. They order teams exactly like the shifted Borda score
``2(k - r + 1)/k`` and keep all comparisons exact.
"""

from __future__ import annotations

from functools import lru_cache


def bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(players) -> int:
    m = 0
    for p in players:
        m |= 1 << p
    return m


def from_mask(mask: int) -> frozenset:
    return frozenset(bits(mask))


class Compiled:
    __slots__ = ("n", "rankings", "nbr", "score", "rank", "better")

    def __init__(self, profile):
        n = profile.n
        self.n = n
        self.rankings = profile.rankings
        self.nbr = [to_mask(profile.neighbors[i]) for i in range(n)]
        self.score = [[0] * n for _ in range(n)]
        self.rank = [[0] * n for _ in range(n)]
        # better[j][i]: mask of j's neighbors ranked strictly above i (all of them for i == j)
        self.better = [[0] * n for _ in range(n)]
        for j in range(n):
            rk = profile.rankings[j]
            k = len(rk)
            acc = 0
            for r, i in enumerate(rk, 1):
                self.score[j][i] = k - r + 1
                self.rank[j][i] = r
                self.better[j][i] = acc
                acc |= 1 << i
            self.better[j][j] = acc

    def team_score(self, i: int, team: int) -> int:
        row = self.score[i]
        return sum(row[m] for m in bits(team & ~(1 << i)))

    def team_key(self, i: int, team: int):
        """Sort key: higher score first, then lexicographically earliest ranks."""
        others = team & ~(1 << i)
        rk = self.rank[i]
        return (-self.team_score(i, team), tuple(sorted(rk[m] for m in bits(others))))

    def feasible_teams(self, i: int, remaining: int, omega: int) -> list[int]:
        """All teams containing ``i`` inside ``remaining``, pairwise neighbors,
        at most ``omega`` members, best first; ``{i}`` is always last."""
        cand = [j for j in self.rankings[i] if (remaining >> j) & 1]
        me = 1 << i
        if omega == 2:
            return [me | (1 << j) for j in cand] + [me]
        teams = []
        self._extend(me, 0, cand, omega - 1, teams)
        teams.sort(key=lambda t: self.team_key(i, t))
        return teams

    def _extend(self, team, start, cand, room, out):
        out.append(team)
        if room == 0:
            return
        nbr = self.nbr
        for idx in range(start, len(cand)):
            j = cand[idx]
            if nbr[j] & team == team:
                self._extend(team | (1 << j), idx + 1, cand, room - 1, out)

    def top_team(self, i: int, remaining: int, omega: int):
        """Best feasible team of ``i`` and whether it is strictly best."""
        if omega == 2:
            for j in self.rankings[i]:
                if (remaining >> j) & 1:
                    return (1 << i) | (1 << j), True
            return 1 << i, True
        teams = self.feasible_teams(i, remaining, omega)
        best = teams[0]
        unique = len(teams) == 1 or self.team_score(i, teams[1]) < self.team_score(i, best)
        return best, unique


@lru_cache(maxsize=256)
def compile_profile(profile) -> Compiled:
    return Compiled(profile)


def components(cp: Compiled, mask: int, alive: int | None = None) -> list[int]:
    """Connected components of the neighbor graph induced on ``mask``.

    With ``alive`` given, an edge only counts while at least one endpoint is
    in ``alive``.
    """
    out = []
    nbr = cp.nbr
    while mask:
        low = mask & -mask
        comp = _grow(nbr, low, mask, alive)
        out.append(comp)
        mask &= ~comp
    return out


def component_of(cp: Compiled, player: int, mask: int, alive: int | None = None) -> int:
    return _grow(cp.nbr, 1 << player, mask, alive)


def _grow(nbr, seed: int, mask: int, alive):
    comp = seed
    frontier = seed
    while frontier:
        f = frontier & -frontier
        frontier ^= f
        new = nbr[f.bit_length() - 1] & mask & ~comp
        if alive is not None and not f & alive:
            new &= alive
        comp |= new
        frontier |= new
    return comp

"""Preference profiles over a symmetric acceptability network.

Players are dense integer ids ``0..n-1``. Each player ranks their neighbors
strictly; non-neighbors are unacceptable. Cardinal utilities come from the
normalized Borda score of a neighbor's rank and are additive over teams.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence


class ProfileError(ValueError):
    """Raised when a profile (or its serialized form) breaks an invariant."""


class InfeasibleTeamError(ValueError):
    """Raised when a team contains a member unacceptable to the evaluated player."""


Team = frozenset  # frozenset[int]


def borda_utility(k: int, r: int) -> float:
    """Normalized Borda score ``2(k - r + 1)/k - 1`` of rank ``r`` among ``k`` neighbors."""
    if not 1 <= r <= k:
        raise ValueError(f"rank {r} outside 1..{k}")
    return 2.0 * (k - r + 1) / k - 1.0


@dataclass(frozen=True)
class PreferenceProfile:
    """Immutable preference profile.

    ``rankings[i]`` lists i's neighbors, most preferred first. ``neighbors``
    is taken from ``edges`` when given; otherwise it is implied by the
    rankings. Construction does not validate; call :func:`validate` (or
    :meth:`checked`) on untrusted input.
    """

    n: int
    rankings: tuple
    neighbors: tuple = field(default=None)  # tuple[frozenset[int], ...]
    _rank: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rankings = tuple(tuple(int(j) for j in r) for r in self.rankings)
        if len(rankings) != self.n:
            raise ProfileError(f"expected {self.n} rankings, got {len(rankings)}")
        object.__setattr__(self, "rankings", rankings)
        if self.neighbors is None:
            nbrs = tuple(frozenset(r) for r in rankings)
        else:
            nbrs = tuple(frozenset(int(j) for j in s) for s in self.neighbors)
            if len(nbrs) != self.n:
                raise ProfileError(f"expected {self.n} neighbor sets, got {len(nbrs)}")
        object.__setattr__(self, "neighbors", nbrs)
        object.__setattr__(
            self, "_rank", tuple({j: r for r, j in enumerate(rk, 1)} for rk in rankings)
        )

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], rankings) -> PreferenceProfile:
        nbrs = [set() for _ in range(n)]
        for i, j in edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        return cls(n=n, rankings=tuple(rankings), neighbors=tuple(frozenset(s) for s in nbrs))

    def checked(self) -> PreferenceProfile:
        problems = validate(self)
        if problems:
            raise ProfileError("; ".join(problems))
        return self

    @property
    def players(self) -> range:
        return range(self.n)

    def degree(self, i: int) -> int:
        return len(self.neighbors[i])

    def rank(self, i: int, j: int) -> int:
        """1-based position of ``j`` in ``i``'s ranking."""
        return self._rank[i][j]

    def prefers(self, i: int, a: int, b: int) -> bool:
        """Strict ordinal preference of ``i`` for teammate ``a`` over ``b``.

        Either argument may be ``i`` itself, standing for being alone; every
        neighbor beats being alone and being alone beats every non-neighbor.
        """
        ra = self._ordinal(i, a)
        rb = self._ordinal(i, b)
        return ra < rb

    def _ordinal(self, i: int, j: int) -> float:
        if j == i:
            return len(self.rankings[i]) + 1
        r = self._rank[i].get(j)
        return r if r is not None else float("inf")

    def utility(self, i: int, j: int) -> float:
        if j == i:
            return 0.0
        r = self._rank[i].get(j)
        if r is None:
            raise InfeasibleTeamError(f"{j} is not acceptable to {i}")
        return borda_utility(len(self.rankings[i]), r)

    def edges(self) -> list[tuple[int, int]]:
        return sorted((i, j) for i in range(self.n) for j in self.neighbors[i] if i < j)

    def to_json(self) -> str:
        doc = {
            "n": self.n,
            "edges": [list(e) for e in self.edges()],
            "rankings": {str(i): list(self.rankings[i]) for i in range(self.n)},
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> PreferenceProfile:
        try:
            doc = json.loads(text)
            n = int(doc["n"])
            rk = doc["rankings"]
            rankings = [list(rk.get(str(i), [])) for i in range(n)]
            edges = [(int(a), int(b)) for a, b in doc["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ProfileError(f"malformed profile document: {exc}") from exc
        bad = [e for e in edges if not (0 <= e[0] < n and 0 <= e[1] < n)]
        if bad:
            raise ProfileError(f"edge endpoint out of range: {bad[0]}")
        return cls.from_edges(n, edges, rankings).checked()


def load_profile(path) -> PreferenceProfile:
    return PreferenceProfile.from_json(Path(path).read_text())


def save_profile(profile: PreferenceProfile, path) -> None:
    Path(path).write_text(profile.to_json() + "\n")


def acceptable(profile: PreferenceProfile, i: int, j: int) -> bool:
    return j == i or j in profile.neighbors[i]


def team_utility(profile: PreferenceProfile, i: int, team) -> float:
    """Additive utility of ``i`` for ``team`` (which must contain ``i``)."""
    if i not in team:
        raise InfeasibleTeamError(f"{i} is not a member of {sorted(team)}")
    return sum(profile.utility(i, j) for j in team if j != i)


def validate(profile: PreferenceProfile) -> list[str]:
    """Return every broken invariant as a short tag; an empty list means valid."""
    problems = []
    n = profile.n
    for i in range(n):
        nb = profile.neighbors[i]
        rk = profile.rankings[i]
        if i in nb:
            problems.append(f"self-loop({i})")
        for j in sorted(nb):
            if not 0 <= j < n:
                problems.append(f"bad-id({i},{j})")
            elif i not in profile.neighbors[j]:
                problems.append(f"asymmetry({min(i, j)},{max(i, j)})")
        if len(set(rk)) != len(rk):
            problems.append(f"ranking-duplicate({i})")
        for j in rk:
            if j not in nb:
                problems.append(f"ranking-foreign({i},{j})")
        if not nb <= set(rk):
            problems.append(f"ranking-incomplete({i})")
    # asymmetry is reported once per unordered pair
    seen = set()
    out = []
    for p in problems:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out

"""Preference-profile generators: scale-free networks and bundled social data."""

from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .prefs import PreferenceProfile, ProfileError

DATA = resources.files("teamforge") / "data"


class DataLoadError(RuntimeError):
    pass


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    m: int = 2
    trials: int = 1
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.m < self.n:
            raise ValueError(f"need 1 <= m < n, got m={self.m}, n={self.n}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


@dataclass(frozen=True)
class RawNetwork:
    n: int
    edges: frozenset  # frozenset[tuple[int, int]] with i < j

    def neighbors(self) -> list[set]:
        nb = [set() for _ in range(self.n)]
        for i, j in self.edges:
            nb[i].add(j)
            nb[j].add(i)
        return nb


def trial_rng(seed: int, trial: int) -> random.Random:
    """Independent stream for one trial; depends only on (seed, trial)."""
    return random.Random(f"teamforge:{seed}:{trial}")


def _edge(i, j):
    if i == j:
        raise ValueError(f"self-loop at {i}")
    return (i, j) if i < j else (j, i)


def gen_scale_free(config: GeneratorConfig, rng: random.Random) -> RawNetwork:
    """Preferential attachment grown from a clique on ``m + 1`` nodes."""
    n, m = config.n, config.m
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < n, got m={m}, n={n}")
    edges = set()
    endpoints = []  # each node appears once per incident edge
    for i in range(m + 1):
        for j in range(i + 1, m + 1):
            edges.add((i, j))
            endpoints += [i, j]
    for v in range(m + 1, n):
        targets = set()
        while len(targets) < m:
            targets.add(rng.choice(endpoints))
        for t in sorted(targets):
            edges.add(_edge(v, t))
            endpoints += [v, t]
    return RawNetwork(n, frozenset(edges))


def complete_network(n: int) -> RawNetwork:
    return RawNetwork(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)))


def profile_from_network(network: RawNetwork, rng: random.Random) -> PreferenceProfile:
    """Rank each player's neighbors by an independent uniform shuffle."""
    nb = network.neighbors()
    rankings = []
    for i in range(network.n):
        r = sorted(nb[i])
        rng.shuffle(r)
        rankings.append(r)
    return PreferenceProfile.from_edges(network.n, network.edges, rankings)


def scale_free_profile(n: int, m: int, seed: int, trial: int = 0) -> PreferenceProfile:
    rng = trial_rng(seed, trial)
    net = gen_scale_free(GeneratorConfig(n=n, m=m, seed=seed), rng)
    return profile_from_network(net, rng)


def read_edge_list(path, n: int | None = None) -> RawNetwork:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataLoadError(f"cannot read {path}: {exc}") from exc
    edges = set()
    top = -1
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            i, j = int(parts[0]), int(parts[1])
        except (IndexError, ValueError) as exc:
            raise DataLoadError(f"{path}:{lineno}: expected 'i j'") from exc
        if i == j or min(i, j) < 0:
            raise DataLoadError(f"{path}:{lineno}: invalid edge {i} {j}")
        edges.add(_edge(i, j))
        top = max(top, i, j)
    return RawNetwork(n if n is not None else top + 1, frozenset(edges))


def load_karate() -> RawNetwork:
    """Zachary's karate-club friendship network (34 members)."""
    net = read_edge_list(DATA / "karate.edges")
    if net.n != 34:
        raise DataLoadError(f"karate data has {net.n} nodes, expected 34")
    return net


NEWFRAT_WEEKS = 15
NEWFRAT_SIZE = 17


def parse_newfrat(text: str) -> list[PreferenceProfile]:
    """Parse 15 blocks of 17x17 integer rank matrices.

    Row ``i`` holds the rank ``i`` assigns to every other member (lower is
    better); the diagonal is ignored. Non-positive entries count as missing
    and go last; ties fall back to ascending player id.
    """
    rows = []
    for line in text.splitlines():
        toks = line.split()
        if not toks:
            continue
        try:
            rows.append([int(float(t)) for t in toks])
        except ValueError as exc:
            raise DataLoadError(f"non-numeric newfrat row: {line!r}") from exc
    want = NEWFRAT_WEEKS * NEWFRAT_SIZE
    if len(rows) != want:
        raise DataLoadError(f"expected {want} matrix rows, found {len(rows)}")
    profiles = []
    for w in range(NEWFRAT_WEEKS):
        block = rows[w * NEWFRAT_SIZE:(w + 1) * NEWFRAT_SIZE]
        rankings = []
        for i, row in enumerate(block):
            if len(row) != NEWFRAT_SIZE:
                raise DataLoadError(f"week {w + 1}, row {i + 1}: expected {NEWFRAT_SIZE} entries")
            others = [j for j in range(NEWFRAT_SIZE) if j != i]
            others.sort(key=lambda j: (row[j] <= 0, row[j], j))
            rankings.append(others)
        try:
            profiles.append(PreferenceProfile(NEWFRAT_SIZE, tuple(rankings)).checked())
        except ProfileError as exc:
            raise DataLoadError(f"week {w + 1}: {exc}") from exc
    return profiles


def load_newfrat(path=None) -> list[PreferenceProfile]:
    """Weekly Newfrat ranking profiles from ``path`` (default: bundled copy)."""
    path = Path(path) if path is not None else Path(str(DATA / "newfrat.txt"))
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataLoadError(f"cannot read newfrat data at {path}: {exc}") from exc
    return parse_newfrat(text)

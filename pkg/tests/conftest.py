import random

import pytest

from teamforge.game_exact import ProposerOrder
from teamforge.generators import GeneratorConfig, gen_scale_free, profile_from_network, RawNetwork
from teamforge.prefs import PreferenceProfile

# 0-based three-player cycle: 0 likes 1 best, 1 likes 2, 2 likes 0
CYCLE = ((1, 2), (2, 0), (0, 1))
CYCLE_LIE = ((1, 2), (2, 0), (1, 0))  # player 2 swaps its ranking


@pytest.fixture
def cycle():
    return PreferenceProfile(3, CYCLE)


@pytest.fixture
def cycle_lie():
    return PreferenceProfile(3, CYCLE_LIE)


@pytest.fixture
def literal_order():
    return ProposerOrder.from_blocks([0, 1, 2], 4)


def random_network(rng, n, p):
    edges = frozenset((i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p)
    return RawNetwork(n, edges)


def random_profile(rng, n, p=None):
    """Erdos-Renyi or scale-free random roommate instance."""
    if p is None and n >= 3 and rng.random() < 0.5:
        m = rng.choice([1, 2]) if n > 3 else 1
        return profile_from_network(gen_scale_free(GeneratorConfig(n=n, m=m), rng), rng)
    return profile_from_network(random_network(rng, n, p if p is not None else rng.uniform(0.2, 0.9)), rng)


def random_order(rng, profile, lo=1, hi=None):
    """Block order with random per-player multiplicities (default deg + 1)."""
    players = list(range(profile.n))
    rng.shuffle(players)
    if hi is None:
        reps = [profile.degree(i) + 1 for i in range(profile.n)]
    else:
        reps = [rng.randint(lo, hi) for _ in range(profile.n)]
    return ProposerOrder.from_blocks(players, reps)


ACCEPTANCE_LINES = []


def report(label, ok, detail=""):
    """Record a one-line criterion verdict, shown in the terminal summary."""
    line = f"{label}: {'PASS' if ok else 'FAIL'}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

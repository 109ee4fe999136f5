import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_profile
from teamforge.game_exact import ProposerOrder, UnsupportedConfiguration, default_order, solve
from teamforge.generators import complete_network, profile_from_network, scale_free_profile
from teamforge.heuristics import HeuristicParams, hrpm, opportunity_score, rpm_alpha, team_score
from teamforge.ims import run_ims
from teamforge.prefs import PreferenceProfile

ALL = frozenset({0, 1, 2})


def test_params_ranges():
    HeuristicParams(0.0, 0.0)
    HeuristicParams(0.5, 1.0)
    with pytest.raises(ValueError):
        HeuristicParams(alpha=0.6)
    with pytest.raises(ValueError):
        HeuristicParams(beta=1.2)


def test_opportunity_cycle(cycle):
    assert opportunity_score(cycle, ALL, 1, 0) == pytest.approx(0.25)
    # 0 is 2's favourite, nothing beats it
    assert opportunity_score(cycle, ALL, 2, 0) == 0.0


def test_opportunity_all_summands_one():
    # every option 0 prefers to 3 ranks 0 first
    p = PreferenceProfile(4, ((1, 2, 3), (0,), (0,), (0,)))
    assert opportunity_score(p, range(4), 0, 3) == pytest.approx(2 / 3)
    assert opportunity_score(p, range(4), 0, 1) == 0.0


def test_opportunity_precondition(cycle):
    p = PreferenceProfile(3, ((1,), (0,), ()))
    with pytest.raises(ValueError):
        opportunity_score(p, range(3), 0, 2)
    with pytest.raises(ValueError):
        opportunity_score(cycle, {1}, 1, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_opportunity_in_unit_interval(seed):
    rng = random.Random(seed)
    p = random_profile(rng, rng.randint(2, 12))
    remaining = {i for i in range(p.n) if rng.random() < 0.8}
    for j in remaining:
        if not p.neighbors[j] & remaining:
            continue
        for i in p.neighbors[j]:
            assert 0.0 <= opportunity_score(p, remaining, j, i) <= 1.0


def test_team_score(cycle):
    assert team_score(cycle, ALL, 1, [0]) == pytest.approx(0.25)
    assert team_score(cycle, ALL, 1, [0]) == opportunity_score(cycle, ALL, 1, 0)
    assert team_score(cycle, ALL, 2, [0]) == 0.0
    k = PreferenceProfile(4, tuple(tuple(j for j in range(4) if j != i) for i in range(4)))
    assert team_score(k, range(4), 3, [2, 1]) == pytest.approx(
        (opportunity_score(k, range(4), 3, 2) + opportunity_score(k, range(4), 3, 1)) / 2)
    with pytest.raises(ValueError):
        team_score(cycle, ALL, 1, [])


def test_rpm_alpha_zero_is_exact(cycle, literal_order):
    out = rpm_alpha(cycle, literal_order, alpha=0.0)
    assert set(out.partition) == {frozenset({0, 1}), frozenset({2})}
    assert out.stats.threshold_accepts == out.stats.threshold_rejects == 0


def test_rpm_alpha_threshold_accepts(cycle, literal_order):
    out = rpm_alpha(cycle, literal_order, alpha=0.5)
    assert out.stats.threshold_accepts >= 1
    assert set(out.partition) == {frozenset({0, 1}), frozenset({2})}


def test_rpm_alpha_rejects_teams():
    p = PreferenceProfile(2, ((1,), (0,)))
    with pytest.raises(UnsupportedConfiguration):
        rpm_alpha(p, ProposerOrder((0, 1)), omega=3)
    with pytest.raises(ValueError):
        rpm_alpha(p, ProposerOrder((0, 1)), alpha=0.7)


def test_rpm_alpha_zero_matches_exact_random():
    rng = random.Random(4)
    for _ in range(80):
        p = random_profile(rng, rng.randint(1, 14))
        o = default_order(p, rng)
        a, b = rpm_alpha(p, o, alpha=0.0), solve(p, o)
        assert a.partition == b.partition
        assert a.stats.nodes == b.stats.nodes


def test_search_effort_non_increasing_in_alpha():
    rng = random.Random(12)
    for t in range(30):
        p = scale_free_profile(24, 2, seed=12, trial=t)
        o = default_order(p, rng)
        nodes = [rpm_alpha(p, o, alpha=a).stats.nodes for a in (0.0, 0.1, 0.2, 0.3, 0.5)]
        assert nodes == sorted(nodes, reverse=True), nodes


def test_rpm_alpha_ir_and_ims():
    rng = random.Random(6)
    for _ in range(40):
        p = random_profile(rng, rng.randint(2, 16))
        out = rpm_alpha(p, default_order(p, rng), alpha=0.2)
        for t in out.partition:
            for i in t:
                assert all(j in p.neighbors[i] for j in t if j != i)
        assert set(run_ims(p).matched) <= set(out.partition)


def test_hrpm_cycle(cycle):
    out = hrpm(cycle, ProposerOrder((0, 1, 2)), omega=2, beta=0.5)
    assert set(out.partition) == {frozenset({0, 1}), frozenset({2})}


def test_hrpm_low_beta_rejects(cycle):
    out = hrpm(cycle, ProposerOrder((0, 1, 2)), omega=2, beta=0.2)
    # 1 turns 0 down (score 0.25); 0 then asks 2, whose favourite 0 is
    assert set(out.partition) == {frozenset({0, 2}), frozenset({1})}


def test_hrpm_beta_one_is_greedy():
    rng = random.Random(9)
    for _ in range(30):
        p = random_profile(rng, rng.randint(2, 12))
        o = default_order(p, rng)
        out = hrpm(p, o, omega=2, beta=1.0)
        ims = run_ims(p)
        left = set(ims.residual)
        teams = set(ims.matched)
        for i in o.players:
            if i not in left:
                continue
            left.discard(i)
            mate = next((j for j in p.rankings[i] if j in left), None)
            if mate is None:
                teams.add(frozenset({i}))
            else:
                left.discard(mate)
                teams.add(frozenset({i, mate}))
        assert set(out.partition) == teams


def test_hrpm_edgeless():
    p = PreferenceProfile(4, ((), (), (), ()))
    out = hrpm(p, ProposerOrder((0, 1, 2, 3)), omega=3)
    assert all(len(t) == 1 for t in out.partition)


@pytest.mark.parametrize("omega", [2, 3, 4])
def test_hrpm_invariants(omega):
    rng = random.Random(omega)
    for _ in range(40):
        p = random_profile(rng, rng.randint(2, 30))
        out = hrpm(p, default_order(p, rng), omega=omega, beta=rng.random())
        for t in out.partition:
            assert len(t) <= omega
            for i in t:
                assert all(j in p.neighbors[i] for j in t if j != i)
        assert set(run_ims(p, omega=omega).matched) <= set(out.partition)
        assert out.stats.score_evals <= omega * p.n ** 2


def test_hrpm_eval_bound_dense():
    for n in (10, 25, 40):
        rng = random.Random(n)
        p = profile_from_network(complete_network(n), rng)
        out = hrpm(p, default_order(p, rng), omega=3, beta=0.0)
        assert out.stats.score_evals <= 3 * n * n


def test_hrpm_argument_checks(cycle):
    with pytest.raises(ValueError):
        hrpm(cycle, ProposerOrder((0, 1, 2)), omega=1)
    with pytest.raises(ValueError):
        hrpm(cycle, ProposerOrder((0, 1, 2)), beta=-0.1)

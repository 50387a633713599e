import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from menuforge.core import contains_point
from menuforge.corpus import PERTURBATIONS, counterexample_game, perturbed_game
from menuforge.game import best_responses, learner_utility, swap_regret, zero_sum_value
from menuforge.meanbased import (
    PLAIN, SPIRAL, Fingerprint, Segment, ShapeError, Trajectory, TrajectoryError, boundary_rays,
    build_mb_menu, discretize, discretize_runs, dumps_trajectory, enumerate_fingerprints,
    fingerprint_polytope, game_profile, loads_trajectory, profile, random_trajectory,
    spiral_unroll, tau_star, validate_trajectory, zero_regret_check,
)

N, Y = 0, 1
A, B, C = 0, 1, 2
THIRD = F(1, 3)
TAU = Trajectory((Segment((THIRD, 2 * THIRD), F(1, 2), C), Segment((1, 0), F(1, 2), B)))


# ---- trajectories


def test_tau_star_matches_construction(ce):
    assert tau_star(ce) == TAU


def test_tau_star_valid(ce):
    assert validate_trajectory(ce, TAU) == (True, None)


def test_single_segment_valid(ce):
    x = (F(1, 5), F(4, 5))
    b = min(best_responses(ce, x))
    assert validate_trajectory(ce, Trajectory((Segment(x, 1, b),)))[0]


def test_tau_with_wrong_action(ce):
    bad = Trajectory((TAU.segments[0], Segment((1, 0), F(1, 2), C)))
    ok, v = validate_trajectory(ce, bad)
    assert not ok and v.segment == 1
    assert C not in best_responses(ce, (F(2, 3), F(1, 3)))


def test_malformed_segments():
    with pytest.raises(TrajectoryError):
        Segment((1, 0), 0, 0)
    with pytest.raises(TrajectoryError):
        Segment((F(1, 2), F(1, 3)), 1, 0)
    with pytest.raises(TrajectoryError):
        Trajectory(())
    with pytest.raises(TrajectoryError):
        Trajectory((Segment((1, 0), 1, 0),), SPIRAL)
    with pytest.raises(TrajectoryError):
        Trajectory((Segment((1, 0), 1, 0),), PLAIN, (1, 1))


def test_profile_of_tau(ce, tau_profile):
    assert game_profile(ce, TAU) == tau_profile
    assert learner_utility(ce, tau_profile) == 0


def test_profile_single_segment():
    x = (F(1, 4), F(3, 4))
    assert profile(Trajectory((Segment(x, 5, 1),)), 3) == (0, F(1, 4), 0, 0, F(3, 4), 0)


@given(st.fractions(min_value=F(1, 100), max_value=100))
def test_profile_scale_invariant(c):
    assert profile(TAU.scaled(c), 3) == profile(TAU, 3)


def test_zero_regret_examples(ce):
    assert zero_regret_check(ce, TAU)
    assert zero_regret_check(ce, Trajectory((Segment((F(1, 5), F(4, 5)), 1, C),)))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_random_trajectories_zero_regret(seed):
    ce = counterexample_game()
    tau = random_trajectory(ce, random.Random(seed))
    assert validate_trajectory(ce, tau)[0]
    phi = game_profile(ce, tau)
    assert min(phi) >= 0 and sum(phi) == 1
    assert zero_regret_check(ce, tau)


def test_trajectory_json_roundtrip():
    text = dumps_trajectory(TAU)
    assert loads_trajectory(text) == TAU
    sp = Trajectory((Segment((1, 0), 1, B),), SPIRAL, (F(1, 3), F(2, 3)))
    assert loads_trajectory(dumps_trajectory(sp)) == sp
    with pytest.raises(TrajectoryError):
        loads_trajectory('{"segments": [{"x": ["1"]}]}')


# ---- best-response geometry


def test_boundary_rays(ce):
    rays = {r.id: r for r in boundary_rays(ce)}
    # A/B tie: -X_N/6 + X_Y/3 = 0, so X_N = 2 X_Y
    assert rays["AB"].direction == (F(2, 3), F(1, 3))
    # B/C tie: -X_N/6 + X_Y/3 = -X_N/2 + X_Y/2, so X_Y = 2 X_N
    assert rays["BC"].direction == (F(1, 3), F(2, 3))


@pytest.mark.parametrize("eps", PERTURBATIONS, ids=range(len(PERTURBATIONS)))
def test_perturbed_rays_close(eps):
    rays = {r.id: r.direction for r in boundary_rays(perturbed_game(eps))}
    assert abs(rays["AB"][0] - F(2, 3)) < F(1, 10)
    assert abs(rays["BC"][0] - F(1, 3)) < F(1, 10)


def test_shape_errors(rps):
    with pytest.raises(ShapeError):
        boundary_rays(rps)
    with pytest.raises(ShapeError):
        build_mb_menu(rps)


# ---- fingerprints


def test_fingerprint_counts(ce):
    fps = enumerate_fingerprints(ce)
    plain = [f for f in fps if f.kind == PLAIN]
    assert len(plain) == 21
    assert Fingerprint((C, B)) in plain
    with pytest.raises(TrajectoryError):
        Fingerprint((A, A))


def test_fingerprint_cb_contains_tau(ce, tau_profile):
    assert contains_point(fingerprint_polytope(ce, Fingerprint((C, B))), tau_profile)


def test_fingerprint_a_segment(ce):
    V = set(fingerprint_polytope(ce, Fingerprint((A,))).vertices)
    assert V == {ce.pure(N, A), (F(2, 3), 0, 0, F(1, 3), 0, 0)}


def test_inconsistent_spiral_is_empty(ce):
    assert fingerprint_polytope(ce, Fingerprint((A, B, A), SPIRAL, "BC")).vertices == ()
    assert fingerprint_polytope(ce, Fingerprint((C, B, C), SPIRAL, "AB")).vertices == ()


# ---- the mean-based menu


def test_mb_contains_tau(ce_mb, tau_profile):
    assert tau_profile in ce_mb.menu


def test_gamma_outside_mb(ce_mb, gamma_csp):
    assert gamma_csp not in ce_mb.menu


def test_mb_inside_nr(ce_mb, ce_nr):
    for v in ce_mb.menu.vertices:
        assert v in ce_nr


def test_mb_witnesses(ce, ce_mb):
    assert set(ce_mb.witnesses) == set(ce_mb.menu.vertices)
    for v, w in ce_mb.witnesses.items():
        tau = w.trajectory(ce)
        assert validate_trajectory(ce, tau)[0]
        assert zero_regret_check(ce, tau)
        if tau.kind == PLAIN:
            assert game_profile(ce, tau) == v


def test_mb_contains_single_segment_grid_points(ce, ce_mb):
    for k in range(13):
        x = (F(k, 12), 1 - F(k, 12))
        for b in best_responses(ce, x):
            y = [0, 0, 0]
            y[b] = 1
            assert tuple(a * c for a in x for c in y) in ce_mb.menu


@pytest.mark.parametrize("eps", PERTURBATIONS, ids=range(len(PERTURBATIONS)))
def test_perturbed_tau_star(eps):
    g = perturbed_game(eps)
    tau = tau_star(g)
    assert validate_trajectory(g, tau)[0]
    phi = game_profile(g, tau)
    assert learner_utility(g, phi) == zero_sum_value(g)[0]
    assert swap_regret(g, phi) >= F(1, 24)


# ---- spirals


def test_spiral_unroll_is_plain_and_valid(ce):
    psi = Trajectory((Segment((1, 0), F(1, 3), B), Segment((0, 1), F(2, 3), B)), SPIRAL, (F(1, 3), F(2, 3)))
    assert psi.states()[-1] == (F(2, 3), F(4, 3))
    assert validate_trajectory(ce, psi)[0]
    tau = spiral_unroll(ce, psi)
    assert tau.kind == PLAIN and validate_trajectory(ce, tau)[0]
    assert spiral_unroll(ce, TAU) is TAU


# ---- discretization


def test_discretize_no_perturbation(ce):
    mixes = discretize(ce, TAU, 1000)
    assert len(mixes) == 1000
    assert mixes[:500] == [(THIRD, 2 * THIRD)] * 500
    assert mixes[500:] == [(1, 0)] * 500


def test_discretize_with_perturbation(ce):
    runs = discretize_runs(ce, TAU, 1000, F(1, 100))
    seg_mixes = {(THIRD, 2 * THIRD), (F(1), F(0))}
    pert = [r for r, x in runs if x not in seg_mixes]
    assert 0 < sum(pert) <= 10
    assert sum(r for r, _ in runs) <= 1000
    # each perturbation prefix makes its segment's action the unique best response so far
    acc, total = [F(0), F(0)], 0
    for (r, x), b in zip([ru for ru in runs if ru[1] not in seg_mixes], (C, B)):
        acc = [a + r * v for a, v in zip(acc, x)]
        total += r
        assert best_responses(ce, [a / total for a in acc]) == {b}


def test_discretize_single_segment(ce):
    tau = Trajectory((Segment((1, 0), 1, A),))
    assert discretize(ce, tau, 7) == [(1, 0)] * 7


def test_discretize_rejects_invalid(ce):
    bad = Trajectory((TAU.segments[0], Segment((1, 0), F(1, 2), C)))
    with pytest.raises(TrajectoryError):
        discretize(ce, bad, 10)

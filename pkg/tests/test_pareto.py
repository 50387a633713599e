from fractions import Fraction as F

import pytest

from menuforge.core import contains_point
from menuforge.corpus import corpus
from menuforge.game import zero_sum_value
from menuforge.menus import build_nr_menu, build_nsr_menu, fixed_action_menu, is_valid_menu, value_faces
from menuforge.pareto import (
    MIN_FACE_MATCHES_NSR, MIN_FACE_STRICTLY_LARGER, NOT_NO_REGRET, ParetoVerdict, PreconditionError,
    SearchFailure, SeparationWitness, audit_dominance, check_pareto_optimal, circle_point,
    find_separating_uO, learner_value, sample_uO, sweep_parameters,
)

CORPUS = corpus()


def neg(u):
    return tuple(-a for a in u)


def diagonal(g):
    phi = [F(0)] * g.dim
    for i in range(g.m):
        phi[g.index(i, i)] = F(1, g.m)
    return tuple(phi)


# ---- learner value


def test_aligned_objectives(ce, ce_nsr, ce_nr):
    for M in (ce_nsr, ce_nr):
        assert learner_value(M, ce.uL_flat) == F(1, 2)


def test_zero_sum_objective_on_nr(ce, ce_nr, rps, rps_nr):
    assert learner_value(ce_nr, neg(ce.uL_flat)) == zero_sum_value(ce)[0]
    assert learner_value(rps_nr, neg(rps.uL_flat)) == 0


def test_zero_sum_objective_on_mb(ce, ce_mb):
    assert learner_value(ce_mb.menu, neg(ce.uL_flat)) == 0


@pytest.mark.parametrize("g", CORPUS, ids=lambda g: g.name)
def test_values_match_faces(g):
    for M in (build_nr_menu(g), build_nsr_menu(g)):
        f = value_faces(M)
        assert learner_value(M, g.uL_flat) == f.Uplus
        assert learner_value(M, neg(g.uL_flat)) == f.Uminus


def test_values_invariant_under_rescaling(ce, ce_nr):
    for u in sample_uO(6, 40, seed=3):
        for c in (F(1, 7), 3, 100):
            assert learner_value(ce_nr, tuple(c * a for a in u)) == learner_value(ce_nr, u)


# ---- verdicts


@pytest.mark.parametrize("g", CORPUS, ids=lambda g: g.name)
def test_nsr_is_optimal(g):
    v = check_pareto_optimal(build_nsr_menu(g))
    assert v.optimal and v.reason == MIN_FACE_MATCHES_NSR


def test_rps_nr_not_optimal(rps, rps_nr):
    v = check_pareto_optimal(rps_nr)
    assert not v.optimal and v.reason == MIN_FACE_STRICTLY_LARGER
    assert v.witness_vertex == diagonal(rps)
    assert v.dominating_menu is not None


def test_mb_not_optimal(ce, ce_mb, ce_nsr):
    v = check_pareto_optimal(ce_mb.menu)
    assert not v.optimal and v.reason == MIN_FACE_STRICTLY_LARGER
    assert not contains_point(value_faces(ce_nsr).Mminus, v.witness_vertex)


def test_verdict_invariant():
    with pytest.raises(ValueError):
        ParetoVerdict(True, NOT_NO_REGRET)


def test_high_regret_menu_abstains(ce, ce_nsr, ce_nr, ce_mb):
    # the always-C menu has positive-regret vertices: outside the characterization
    fixed = fixed_action_menu(ce, 2)
    assert is_valid_menu(fixed, 24).passed
    assert check_pareto_optimal(fixed).reason == NOT_NO_REGRET
    # none of the three standard menus dominates it
    samples = sample_uO(6, 300, seed=11)
    for other in (ce_nsr, ce_nr, ce_mb.menu):
        assert audit_dominance(fixed, other, samples).wins > 0


# ---- separating directions


def test_circle_points_exact():
    for t in sweep_parameters(60):
        c, s = circle_point(t)
        assert c * c + s * s == 1


def test_separation_witness_invariant():
    with pytest.raises(ValueError):
        SeparationWitness((0,), F(1), F(1))


def test_separate_rps_dominator(rps_nr):
    D = check_pareto_optimal(rps_nr).dominating_menu
    w = find_separating_uO(D, rps_nr)
    assert w.vL_winner > w.vL_loser
    assert learner_value(D, w.uO) == w.vL_winner and learner_value(rps_nr, w.uO) == w.vL_loser


def test_separate_identical_menus(rps_nr):
    with pytest.raises(PreconditionError):
        find_separating_uO(rps_nr, rps_nr)


def test_separate_nsr_from_mb(ce, ce_nsr, ce_mb):
    # both menus share the top face {phi+}, and M_MB has vertices outside M_NSR
    w = find_separating_uO(ce_nsr, ce_mb.menu)
    assert w.vL_winner > w.vL_loser
    D = check_pareto_optimal(ce_mb.menu).dominating_menu
    w = find_separating_uO(D, ce_mb.menu)
    assert learner_value(D, w.uO) > learner_value(ce_mb.menu, w.uO)


def test_separate_budget_exhausted(rps, rps_nr):
    D = check_pareto_optimal(rps_nr).dominating_menu
    # the loser beats the winner everywhere a witness could be found: swap roles
    with pytest.raises((SearchFailure, PreconditionError)):
        find_separating_uO(rps_nr, D, sweep_budget=3)


# ---- audits


def test_audit_self_ties(ce_nr):
    rep = audit_dominance(ce_nr, ce_nr, sample_uO(6, 50, seed=1))
    assert (rep.wins, rep.ties, rep.losses) == (0, 50, 0)


def test_audit_rps_dominator(rps_nr):
    D = check_pareto_optimal(rps_nr).dominating_menu
    rep = audit_dominance(D, rps_nr, sample_uO(9, 500, seed=0))
    assert rep.losses == 0 and rep.wins >= 1


def test_audit_incomparable(ce_nsr, ce_nr):
    rep = audit_dominance(ce_nsr, ce_nr, sample_uO(6, 500, seed=0))
    assert rep.wins + rep.ties + rep.losses == 500
    assert rep.wins > 0 and rep.losses > 0


def test_audit_dimension_mismatch(ce_nr):
    with pytest.raises(ValueError):
        audit_dominance(ce_nr, ce_nr, [(1, 2)])


def test_sampling_is_seeded():
    assert sample_uO(4, 10, 7) == sample_uO(4, 10, 7)
    assert sample_uO(4, 10, 7) != sample_uO(4, 10, 8)

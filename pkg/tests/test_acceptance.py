"""Acceptance criteria 1-9, each checked at its stated tolerance and time limit.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion lines
as they happen; a summary is printed at the end of every run.
"""
import random
import time
from fractions import Fraction as F

import numpy as np

from conftest import record
from menuforge.core import convex_hull, hausdorff_distance
from menuforge.corpus import PERTURBATIONS, corpus, counterexample_game, perturbed_game, rps_game, two_by_two_corpus
from menuforge.game import best_responses, learner_utility, swap_regret, validate, zero_sum_value
from menuforge.meanbased import (
    Segment, Trajectory, build_mb_menu, game_profile, random_trajectory,
    validate_trajectory, zero_regret_check,
)
from menuforge.menus import (
    build_nr_menu, build_nsr_menu, decompose_product, extend_menu, nsr_grid_points, nsr_system,
    oblivious_menu,
)
from menuforge.pareto import (
    MIN_FACE_MATCHES_NSR, MIN_FACE_STRICTLY_LARGER, audit_dominance, check_pareto_optimal,
    find_separating_uO, sample_uO,
)
from menuforge.sim import LearnerSpec, OptimizerSpec, empirical_csp, empirical_csp_rational, l1_distance, mean_based_audit, run
from menuforge.sim.fixtures import defect_schedule, example_learners, example_mixes, fixtures
from menuforge.sim.protocol import cooperative_optimizer, net_point, protocol_bound, protocol_parameters

N, Y = 0, 1
A, B, C = 0, 1, 2
THIRD = F(1, 3)


def non_optimal_cases():
    """(label, menu) pairs the characterization must reject."""
    cases = [("rps/NR", build_nr_menu(rps_game())), ("counterexample/MB", build_mb_menu(counterexample_game()))]
    for k, eps in enumerate(PERTURBATIONS):
        cases.append((f"perturbed[{k}]/MB", build_mb_menu(perturbed_game(eps))))
    return cases


# ---- 1


def test_criterion_1_counterexample_exact():
    t0 = time.perf_counter()
    g = counterexample_game()
    tau = Trajectory((Segment((THIRD, 2 * THIRD), F(1, 2), C), Segment((1, 0), F(1, 2), B)))
    phi = game_profile(g, tau)
    want = [F(0)] * 6
    want[g.index(N, C)] = F(1, 6)
    want[g.index(Y, C)] = F(1, 3)
    want[g.index(N, B)] = F(1, 2)
    checks = {
        "U_ZS = 0": zero_sum_value(g)[0] == 0,
        "tau* valid": validate_trajectory(g, tau)[0],
        "profile": phi == tuple(want),
        "u_L = 0": learner_utility(g, phi) == 0,
        "swap regret = 1/12": swap_regret(g, phi) == F(1, 12),
    }
    dt = time.perf_counter() - t0
    ok = all(checks.values()) and dt < 1
    record(1, "", ok, f"{sum(checks.values())}/5 exact checks, {dt:.3f}s (limit 1s)")
    assert ok, checks


# ---- 2


def test_criterion_2_mean_based_menu():
    t0 = time.perf_counter()
    g = counterexample_game()
    mb = build_mb_menu(g)
    nr = build_nr_menu(g)
    tau_phi = (F(0), F(1, 2), F(1, 6), F(0), F(0), F(1, 3))
    gamma = [F(0)] * 6
    gamma[g.index(N, A)] = gamma[g.index(Y, A)] = gamma[g.index(Y, C)] = THIRD
    checks = {
        "finite exact vertex list": len(mb.vertices) > 0 and all(isinstance(a, F) for v in mb.vertices for a in v),
        "profile(tau*) in M_MB": tau_phi in mb,
        "gamma in M_NR": tuple(gamma) in nr,
        "gamma not in M_MB": tuple(gamma) not in mb,
        "M_MB in M_NR": all(v in nr for v in mb.vertices),
    }
    dt = time.perf_counter() - t0
    ok = all(checks.values()) and dt < 30
    record(2, "", ok, f"{len(mb.vertices)} vertices, {sum(checks.values())}/5 checks, {dt:.2f}s (limit 30s)")
    assert ok, checks


# ---- 3


def test_criterion_3_pareto_verdicts():
    t0 = time.perf_counter()
    games = [g for g in corpus() if validate(g).valid]
    shapes = {(g.m, g.n) for g in games}
    nsr_ok = [check_pareto_optimal(build_nsr_menu(g)).reason == MIN_FACE_MATCHES_NSR for g in games]
    bad = []
    for label, menu in non_optimal_cases():
        v = check_pareto_optimal(menu)
        if v.optimal or v.reason != MIN_FACE_STRICTLY_LARGER or v.dominating_menu is None:
            bad.append(label)
    dt = time.perf_counter() - t0
    ok = (len(games) >= 10 and (2, 2) in shapes and (3, 3) in shapes and all(nsr_ok)
          and not bad and dt < 120)
    record(3, "", ok, f"NSR optimal on {sum(nsr_ok)}/{len(games)} games; "
           f"{len(PERTURBATIONS) + 2 - len(bad)}/{len(PERTURBATIONS) + 2} non-optimal cases rejected "
           f"with a dominating menu; {dt:.1f}s (limit 120s)")
    assert ok, bad


# ---- 4


def test_criterion_4_witnesses_and_audits():
    t0 = time.perf_counter()
    lines = []
    ok = True
    for label, menu in non_optimal_cases():
        D = check_pareto_optimal(menu).dominating_menu
        w = find_separating_uO(D, menu)
        rep = audit_dominance(D, menu, sample_uO(menu.game.dim, 500, seed=2024))
        good = w.vL_winner > w.vL_loser and rep.losses == 0
        ok &= good
        lines.append(f"{label} gap {w.vL_winner - w.vL_loser} losses {rep.losses}")
    dt = time.perf_counter() - t0
    ok &= dt < 120
    record(4, "", ok, "; ".join(lines) + f"; {dt:.1f}s (limit 120s)")
    assert ok


# ---- 5


def test_criterion_5_nsr_oracle():
    t0 = time.perf_counter()
    games = two_by_two_corpus()
    ok = True
    for g in games:
        nsr = build_nsr_menu(g)
        sys = nsr_system(g)
        hull = convex_hull(nsr_grid_points(g, 120))
        inside = all(sys.satisfied_by(p) for p in hull.vertices)
        decomposes = all(
            (d := decompose_product(g, v)) is not None and d[1] in best_responses(g, d[0])
            for v in nsr.vertices)
        ok &= inside and decomposes
    dt = time.perf_counter() - t0
    record(5, "", ok, f"{len(games)} 2x2 games, grid denominator 120, {dt:.1f}s")
    assert ok


# ---- 6


def test_criterion_6_zero_regret_trajectories():
    t0 = time.perf_counter()
    g = counterexample_game()
    rng = random.Random(6)
    taus = [random_trajectory(g, rng) for _ in range(1000)]
    valid = sum(validate_trajectory(g, t)[0] for t in taus)
    passed = sum(zero_regret_check(g, t) for t in taus)
    ok = valid == passed == 1000
    record(6, "", ok, f"{passed}/1000 zero-regret, {valid}/1000 valid, {time.perf_counter() - t0:.1f}s")
    assert ok


# ---- 7


def test_criterion_7a_mw_tau_star():
    g = counterexample_game()
    T = 200_000
    t0 = time.perf_counter()
    from menuforge.meanbased import tau_star
    tr = run(g, LearnerSpec("ftrl"), OptimizerSpec("trajectory", trajectory=tau_star(g), eps=F(1, 1000)), T)
    target = np.array([float(a) for a in game_profile(g, tau_star(g))])
    dist = float(np.abs(empirical_csp(tr) - target).sum())
    dt = time.perf_counter() - t0
    ok = dist <= 0.05 and dt < 60
    record(7, "a", ok, f"MW vs discretized tau*, T=2e5: L1 {dist:.4f} (limit 0.05), {dt:.1f}s")
    assert ok


def test_criterion_7b_swap_learner():
    T = 100_000
    worst, slowest = 0.0, 0.0
    for fx in fixtures():
        t0 = time.perf_counter()
        tr = run(fx.game, LearnerSpec("swap_regret"), fx.optimizer(T), T)
        d = float(l1_distance(empirical_csp_rational(tr), build_nsr_menu(fx.game).vertices))
        worst = max(worst, d)
        slowest = max(slowest, time.perf_counter() - t0)
    ok = worst <= 0.05 and slowest < 60
    record(7, "b", ok, f"swap-regret learner on {len(fixtures())} fixtures, T=1e5: worst L1 to M_NSR "
           f"{worst:.4f} (limit 0.05), slowest run {slowest:.1f}s")
    assert ok


def test_criterion_7c_blackwell():
    rps = rps_game()
    nsr = build_nsr_menu(rps)
    V = nsr.vertices
    out = []
    for opt_name, opt in [("fixed R", OptimizerSpec("fixed", x=(1, 0, 0))),
                          ("R/P/S cycle", fixtures()[5].optimizer(0))]:
        dists, slowest = [], 0.0
        for T in (1_000, 10_000, 100_000):
            t0 = time.perf_counter()
            tr = run(rps, LearnerSpec("blackwell", target_menu=nsr), opt, T)
            from menuforge.core.geometry import point_distance
            dists.append(point_distance(empirical_csp(tr), V))
            slowest = max(slowest, time.perf_counter() - t0)
        out.append((opt_name, dists, slowest))
    ok = all(d[0] > d[1] > d[2] and d[2] < 0.05 and s < 60 for _, d, s in out)
    record(7, "c", ok, "; ".join(f"Blackwell to M_NSR(RPS) vs {n}: " + ", ".join(f"{x:.2e}" for x in d)
                                 + f" (slowest {s:.1f}s)" for n, d, s in out))
    assert ok


def test_criterion_7d_protocol():
    g = counterexample_game()
    nsr = build_nsr_menu(g)
    tau_phi = (F(0), F(1, 2), F(1, 6), F(0), F(0), F(1, 3))
    ext = extend_menu(nsr, [tau_phi])
    spec = LearnerSpec("protocol", target_menu=ext, base=LearnerSpec("ftrl"))
    lines, ok = [], True
    for T in (10_000, 100_000):
        t0 = time.perf_counter()
        C = protocol_parameters(g.m, g.n, T).C
        counts = net_point(tau_phi, C)
        tr = run(g, spec, cooperative_optimizer(g, counts, T), T)
        gap = float(np.abs(empirical_csp(tr) - np.array(counts) / C).max())
        bound = protocol_bound(g.m, g.n, T)
        dt = time.perf_counter() - t0
        ok &= gap <= bound and dt < 60
        lines.append(f"T={T}: Linf {gap:.5f} <= {bound:.5f}, {dt:.1f}s")
    record(7, "d", ok, "protocol learner, target net point of profile(tau*): " + "; ".join(lines))
    assert ok


# ---- 8


def test_criterion_8_example_learners():
    from menuforge.corpus import examples_game
    g = examples_game()
    P, Q = 0, 1
    h = F(1, 2)
    T = 12
    checks = {}
    checks["A1"] = set(oblivious_menu(g, example_mixes("A1", T)).vertices) == {g.pure(0, Q), g.pure(1, Q)}
    checks["A2"] = set(oblivious_menu(g, example_mixes("A2", T)).vertices) == {(h, h, 0, 0), (0, 0, h, h)}
    A3 = oblivious_menu(g, example_mixes("A3", T))
    marginal = {(a, b) for a in range(2) for b in range(2)}
    want = {tuple(h * (i == a and k == P) + h * (i == b and k == Q) for i in range(2) for k in range(2))
            for a, b in marginal}
    checks["A3"] = set(A3.vertices) == want

    # A4: hull of the empirical CSPs of defect-at-t schedules
    T = 100_000
    t0 = time.perf_counter()
    spec = example_learners()["A4"]
    pts = []
    for t in (0, T // 4, T // 2, 3 * T // 4):
        for after in (0, 1):
            pts.append(empirical_csp_rational(run(g, spec, defect_schedule(t, after), T)))
    pts.append(empirical_csp_rational(run(g, spec, OptimizerSpec("fixed", x=(0, 1)), T)))
    target = convex_hull([g.pure(1, P), g.pure(0, Q), g.pure(1, Q)])
    hd = hausdorff_distance(convex_hull(pts), target)
    dt = time.perf_counter() - t0
    checks["A4"] = hd <= 0.02
    ok = all(checks.values())
    record(8, "", ok, f"A1/A2/A3 exact hulls {'match' if all(checks[k] for k in ('A1', 'A2', 'A3')) else 'DIFFER'}; "
           f"A4 Hausdorff {hd:.2e} (limit 0.02) at T=1e5, {dt:.1f}s")
    assert ok, checks


# ---- 9


def test_criterion_9_mean_based_audit():
    T = 100_000
    counts, slowest = {}, 0.0
    for fx in fixtures():
        t0 = time.perf_counter()
        tr = run(fx.game, LearnerSpec("ftrl"), fx.optimizer(T), T)
        counts[fx.name] = mean_based_audit(fx.game, tr)
        slowest = max(slowest, time.perf_counter() - t0)
    ok = not any(counts.values())
    record(9, "", ok, f"MW, gamma(t)=t^(-1/4), T=1e5: {sum(counts.values())} violations over "
           f"{len(counts)} fixtures (slowest {slowest:.1f}s)")
    assert ok, counts

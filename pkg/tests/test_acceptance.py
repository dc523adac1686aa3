"""End-to-end acceptance criteria.

Each test prints one PASS line when its assertions hold, pinning every
tolerance and runtime budget up front.
"""
import math
import time

import numpy as np
from foldfold import (B_coefficient, RegularizedSystem, big_orbit_side,
                      build_profile, canard_constants, chart,
                      find_periodic_orbit, first_order_g, fixed_alpha_limit,
                      half_return_numeric, hopf_criticality,
                      linear_ks_reduction, melnikov, numeric_canard,
                      saddle_node, unfolding_return_fixed_point)
from foldfold.canard import numeric_gap_slope
from foldfold.dynamics import ATTRACTING, LEFT_OF_C, RIGHT_OF_C, band_crossing_map
from foldfold.equilibria import SUBCRITICAL, SUPERCRITICAL
from foldfold.filippov import beta_coefficient


def _report(name, elapsed, budget):
    assert elapsed < budget, f"{name}: {elapsed:.1f}s exceeded budget {budget}s"
    print(f"ACCEPTANCE {name}: PASS ({elapsed:.2f}s < {budget}s)")


def test_criterion_1_exact_rational_chart(ii_family):
    t0 = time.time()
    ch = chart(ii_family, "cubic", criticality=False, numeric_eps=())
    assert abs(ch.D_coeff - 3.0 / 32.0) <= 1e-12
    assert abs(ch.delta_H - 4.0 / 3.0) <= 1e-12
    ch = chart(ii_family, "quintic", criticality=False, numeric_eps=())
    assert abs(ch.D_coeff - 1.0 / 32.0) <= 1e-12
    assert abs(ch.delta_H - 4.0) <= 1e-12
    _report("1 (exact rational chart values)", time.time() - t0, 1.0)


def test_criterion_2_visible_invisible_chart(vi_family):
    t0 = time.time()
    ch = chart(vi_family, "quintic-b", criticality=False, numeric_eps=())
    assert abs(ch.D_coeff - 9.0 / 32.0) <= 1e-3
    assert abs(ch.delta_H - 11.0 / 3.0) <= 1e-6
    assert abs(canard_constants(vi_family, "quintic-b").delta_C - 1.98) <= 0.01
    ch = chart(vi_family, "cubic", criticality=False, numeric_eps=())
    assert abs(ch.D_coeff - 0.84) <= 0.01
    assert abs(ch.delta_H - 1.22) <= 0.01
    assert abs(canard_constants(vi_family, "cubic").delta_C - 1.21) <= 0.01
    _report("2 (visible-invisible chart)", time.time() - t0, 5.0)


def test_criterion_3_bfield_diagnostics(bf_family):
    t0 = time.time()
    ch = chart(bf_family, "septic", criticality=False, numeric_eps=())
    assert abs(ch.delta_H - (-1.26)) <= 0.01
    assert abs(canard_constants(bf_family, "septic").delta_C - (-2.167)) <= 0.01
    assert abs(B_coefficient(bf_family, "septic") - (-2.17)) <= 0.05
    ch = chart(bf_family, "cubic", criticality=False, numeric_eps=())
    assert abs(ch.delta_H - (-0.8444)) <= 0.001
    assert abs(canard_constants(bf_family, "cubic").delta_C - (-1.01013)) <= 0.001
    assert abs(B_coefficient(bf_family, "cubic") - 5.66) <= 0.1
    _report("3 (b-field diagnostics)", time.time() - t0, 10.0)


def test_criterion_4_criticality_signs(ii_family, vi_family, bf_family):
    t0 = time.time()
    expected = [
        (ii_family, "cubic", SUPERCRITICAL),      # 4.3
        (ii_family, "quintic", SUBCRITICAL),      # 4.4
        (vi_family, "quintic-b", SUPERCRITICAL),  # 4.6
        (vi_family, "cubic", SUBCRITICAL),        # 4.7
        (bf_family, "septic", SUPERCRITICAL),     # 4.8
        (bf_family, "cubic", SUPERCRITICAL),      # 4.9
    ]
    for fam, phi, sign in expected:
        assert hopf_criticality(build_profile(fam, phi)) == sign
    _report("4 (Hopf criticality signs)", time.time() - t0, 60.0)


def test_criterion_5_saddle_node_localization(ii_family, vi_family):
    t0 = time.time()
    _, delta_s = saddle_node(build_profile(ii_family, "quintic"))
    assert 0.011 < delta_s * 0.006 < 0.012
    _report("5a (invisible-invisible saddle node)", time.time() - t0, 30.0)

    t0 = time.time()
    _, delta_s = saddle_node(build_profile(vi_family, "cubic"))
    assert 0.9 * 0.01216 < delta_s * 0.01 < 1.1 * 0.01217
    _report("5b (visible-invisible saddle node)", time.time() - t0, 30.0)


def test_criterion_6_numeric_canard(vi_family):
    t0 = time.time()
    rep = canard_constants(vi_family, "cubic")
    for eps in (1e-3, 4e-3):
        dc = numeric_canard(vi_family, "cubic", eps)
        assert abs(dc - rep.delta_C) <= 3.0 * math.sqrt(eps)
    eps = 1e-3
    slope = numeric_gap_slope(vi_family, "cubic", eps)
    predicted = math.sqrt(eps) * math.sqrt(2 * math.pi / rep.N4) * rep.N2
    assert abs(slope - predicted) <= 0.2 * abs(predicted)
    _report("6 (numeric canard convergence)", time.time() - t0, 60.0)


def test_criterion_7_linear_consistency(vi_family):
    t0 = time.time()
    red = linear_ks_reduction(vi_family)
    ch = chart(vi_family, "linear", criticality=False, numeric_eps=())
    assert abs(red.delta_H - ch.delta_H) <= 1e-10
    crit = hopf_criticality(build_profile(vi_family, "linear"))
    sign_gap = math.copysign(1, red.delta_C - red.delta_H)
    assert sign_gap == math.copysign(1, red.Abar)
    assert sign_gap == math.copysign(1, red.A_KS)
    assert crit == (SUPERCRITICAL if sign_gap < 0 else SUBCRITICAL)
    _report("7 (linear-transition consistency)", time.time() - t0, 30.0)


def test_criterion_8_property_suites(ii_family, vi_family, bf_family, ex1_family):
    t0 = time.time()

    # Melnikov identity suite
    prof = build_profile(ii_family, "cubic")
    prof_vi = build_profile(vi_family, "cubic")
    for p in (prof, prof_vi):
        for delta in (0.0, p.delta_H, p.delta_H + 1.0):
            assert melnikov(p, p.vstar, delta) == 0.0
        s1 = melnikov(p, p.vstar + 1e-3, p.delta_H) / 1e-3
        s2 = melnikov(p, p.vstar + 2e-3, p.delta_H) / 2e-3
        assert abs(2 * s1 - s2) < 1e-4
        for v0 in np.linspace(p.vstar + 0.05, p.vstar + 0.25, 5):
            m0 = melnikov(p, float(v0), p.delta_H - 0.5)
            m1 = melnikov(p, float(v0), p.delta_H + 0.5)
            mid = melnikov(p, float(v0), p.delta_H)
            assert abs(mid - 0.5 * (m0 + m1)) <= 1e-10

    def cross(p):
        h, dd = 1e-3, 1e-2
        return (melnikov(p, p.vstar + h, p.delta_H + dd)
                - melnikov(p, p.vstar + h, p.delta_H - dd)) / (2 * dd * h)

    assert cross(prof) > 0 and cross(prof_vi) < 0

    # beta quadratic-fit oracle
    xs = np.array([-0.08, -0.04, -0.02, 0.02, 0.04, 0.08])
    for fld in (ii_family.pair(0.0)[0], bf_family.pair(0.0)[1]):
        land = np.array([half_return_numeric(fld, float(x)) for x in xs])
        A = np.vstack([np.ones_like(xs), xs, xs**2]).T
        coef, *_ = np.linalg.lstsq(A, (land + xs) / xs**2, rcond=None)
        assert abs(coef[0] - beta_coefficient(fld)) <= 1e-4

    # band-crossing Richardson ratio
    g = first_order_g(RegularizedSystem(ii_family, "cubic", 0.0, 1e-3), -0.3)
    res = []
    for eps in (1e-3, 5e-4):
        reg = RegularizedSystem(ii_family, "cubic", 0.0, eps)
        res.append(band_crossing_map(reg, -0.3) + 0.3 - eps * g)
    assert 3.0 <= res[0] / res[1] <= 5.0

    # return-map/Melnikov first-order contract (15 percent)
    from scipy.integrate import solve_ivp

    delta = prof.delta_H + 0.4

    def one_turn(v0, eps):
        reg = RegularizedSystem(ii_family, "cubic", delta * eps, eps)

        def rhs(t, y):
            f1, f2 = reg.F(y[0], y[1])
            return (eps * f1, f2)

        d0 = rhs(0.0, (0.0, v0))

        def sec(t, y):
            return y[0]

        sec.terminal = True
        sec.direction = 1.0 if d0[0] > 0 else -1.0
        sol = solve_ivp(rhs, [0.0, 60.0 / math.sqrt(eps)],
                        [1e-9 * d0[0], v0 + 1e-9 * d0[1]],
                        rtol=1e-11, atol=1e-13, events=sec)
        return float(sol.y_events[0][0][1])

    for v0 in np.linspace(0.2, 0.7, 5):
        m_ref = melnikov(prof, float(v0), delta)
        d1 = (one_turn(float(v0), 1e-3) - v0) / math.sqrt(1e-3)
        d2 = (one_turn(float(v0), 2.5e-4) - v0) / math.sqrt(2.5e-4)
        assert abs(2 * d2 - d1 - m_ref) <= 0.15 * abs(m_ref)

    # fixed-alpha orbit converges linearly in eps to the crossing cycle
    f_alpha = unfolding_return_fixed_point(ii_family, 0.05)
    rows = fixed_alpha_limit(ii_family, "cubic", 0.05, (4e-3, 2e-3, 1e-3))
    gaps = [abs(x - f_alpha) for _, x, _ in rows]
    assert 1.5 <= gaps[0] / gaps[1] <= 2.7
    assert 1.5 <= gaps[1] / gaps[2] <= 2.7

    _report("8 (property suites)", time.time() - t0, 300.0)


def test_criterion_9_excluded_items_side_checks_only(bf_family):
    # The paper's Lyapunov-coefficient magnitudes and the exponentially thin
    # big-orbit windows are out of reach at desk scale; what remains checkable
    # is the side of the canard curve carrying the big orbit and, for the
    # stable case, its existence strictly right of the canard line.
    t0 = time.time()
    assert big_orbit_side(bf_family, "septic") == RIGHT_OF_C
    assert big_orbit_side(bf_family, "cubic") == LEFT_OF_C
    eps, delta = 2e-3, -2.0      # delta_C ~ -2.168 < delta < delta_H ~ -1.267
    reg = RegularizedSystem(bf_family, "septic", delta * eps, eps)
    cert = find_periodic_orbit(reg, 0.58, bracket_width=0.1)
    assert cert.stability == ATTRACTING
    _report("9 (excluded items: side checks only)", time.time() - t0, 60.0)

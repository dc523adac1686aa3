import math

import numpy as np
import pytest
from scipy.integrate import quad

from foldfold import build_profile, conjugate, cycle_zeros, hopf_criticality, melnikov, potential, saddle_node
from foldfold.errors import DomainError, NoSaddleNodeError
from foldfold.melnikov import concavity_certificate, delta_level, melnikov_slope
from foldfold.equilibria import SUBCRITICAL, SUPERCRITICAL


@pytest.fixture(scope="module")
def prof_ii_cubic(ii_family):
    return build_profile(ii_family, "cubic")


@pytest.fixture(scope="module")
def prof_ii_quintic(ii_family):
    return build_profile(ii_family, "quintic")


@pytest.fixture(scope="module")
def prof_vi_cubic(vi_family):
    return build_profile(vi_family, "cubic")


@pytest.fixture(scope="module")
def prof_vi_qb(vi_family):
    return build_profile(vi_family, "quintic-b")


# potential -------------------------------------------------------------------

def test_potential_basic_properties(prof_ii_cubic):
    p = prof_ii_cubic
    assert potential(p, p.vstar) == pytest.approx(0.0, abs=1e-14)
    assert p.dV(p.vstar) == pytest.approx(0.0, abs=1e-14)
    assert p.Vpp_star > 0


def test_potential_second_derivative_closed_form(prof_ii_cubic):
    # V''(v*) = -phi'(v*)((X1-Y1)(0))^2 / (2 (det Z)_x(0)) = 3/2 here,
    # cross-checked by a second difference of the quadrature
    p = prof_ii_cubic
    assert p.Vpp_star == pytest.approx(1.5, abs=1e-14)
    h = 1e-4
    d2 = (potential(p, p.vstar + h) - 2 * potential(p, p.vstar)
          + potential(p, p.vstar - h)) / h**2
    assert d2 == pytest.approx(1.5, abs=1e-5)


def test_potential_quadrature_oracle(prof_ii_cubic):
    # independent adaptive quadrature of -F1/F2_x; for this scenario the
    # integrand reduces to phi(r)
    p = prof_ii_cubic
    for v in (-0.8, -0.3, 0.4, 0.9):
        ref, _ = quad(lambda r: p.phi.value(r), 0.0, v, epsabs=1e-14, epsrel=1e-13)
        assert potential(p, v) == pytest.approx(ref, abs=1e-11)


def test_potential_symmetry(prof_ii_cubic):
    p = prof_ii_cubic
    for v in np.linspace(0.05, 0.95, 10):
        assert potential(p, v) == pytest.approx(potential(p, -v), abs=1e-12)


def test_potential_domain_error_past_vbar(prof_vi_cubic):
    with pytest.raises(DomainError) as err:
        potential(prof_vi_cubic, prof_vi_cubic.vbar + 0.01)
    assert "vanishes" in str(err.value)


# conjugate -------------------------------------------------------------------

def test_conjugate_examples(prof_ii_cubic):
    p = prof_ii_cubic
    assert conjugate(p, p.vstar) == p.vstar
    for v0 in (0.2, 0.5, 0.9):
        vb = conjugate(p, v0)
        assert vb == pytest.approx(-v0, abs=1e-10)       # symmetric potential
        assert abs(potential(p, vb) - potential(p, v0)) < 1e-12
        assert vb < p.vstar < v0


def test_conjugate_monotone(prof_vi_cubic):
    p = prof_vi_cubic
    grid = np.linspace(p.vstar + 0.02, p.domain_top, 12)
    conj = [conjugate(p, float(v)) for v in grid]
    assert all(b < a for a, b in zip(conj[:-1], conj[1:]))
    for v0, vb in zip(grid, conj):
        assert abs(potential(p, vb) - potential(p, float(v0))) < 1e-12


def test_conjugate_extends_below_band(prof_vi_cubic):
    # near the top of the domain the level partner lies below v = -1, where
    # the potential continues linearly with the clamped transition
    p = prof_vi_cubic
    vb = conjugate(p, p.domain_top - 1e-6)
    assert vb < -1.0


def test_conjugate_outside_domain_raises(prof_vi_cubic):
    with pytest.raises(DomainError):
        conjugate(prof_vi_cubic, prof_vi_cubic.domain_top + 0.05)


# Melnikov function ----------------------------------------------------------

def test_M_vanishes_at_vstar(prof_ii_cubic):
    p = prof_ii_cubic
    for delta in (0.0, p.delta_H, p.delta_H + 1.0, p.delta_H - 1.0):
        assert melnikov(p, p.vstar, delta) == 0.0


def test_M_slope_vanishes_at_hopf(prof_ii_cubic, prof_vi_cubic, prof_vi_qb):
    # slope at v* extrapolated from v*+1e-3 and v*+2e-3 tends to zero
    for p in (prof_ii_cubic, prof_vi_cubic, prof_vi_qb):
        s1 = melnikov(p, p.vstar + 1e-3, p.delta_H) / 1e-3
        s2 = melnikov(p, p.vstar + 2e-3, p.delta_H) / 2e-3
        assert abs(2 * s1 - s2) < 1e-4


def test_M_affine_in_delta(prof_ii_cubic, prof_vi_cubic):
    for p in (prof_ii_cubic, prof_vi_cubic):
        lo = p.vstar + 0.02
        hi = p.domain_top - 0.02 * (p.domain_top - p.vstar)
        for v0 in np.linspace(lo, hi, 20):
            m0 = melnikov(p, float(v0), p.delta_H - 0.7)
            m1 = melnikov(p, float(v0), p.delta_H + 0.9)
            mid = melnikov(p, float(v0), p.delta_H + 0.1)
            assert mid == pytest.approx(0.5 * (m0 + m1), abs=1e-10)


def test_cross_derivative_sign_by_fold_class(prof_ii_cubic, prof_vi_cubic):
    def cross(p):
        h, dd = 1e-3, 1e-2
        up = melnikov(p, p.vstar + h, p.delta_H + dd) / h
        dn = melnikov(p, p.vstar + h, p.delta_H - dd) / h
        return (up - dn) / (2 * dd)

    assert cross(prof_ii_cubic) > 0      # both folds invisible
    assert cross(prof_vi_cubic) < 0      # opposite visibility


def test_criticality_all_pairings(ii_family, vi_family, bf_family,
                                  prof_ii_cubic, prof_ii_quintic,
                                  prof_vi_cubic, prof_vi_qb):
    assert hopf_criticality(prof_ii_cubic) == SUPERCRITICAL
    assert hopf_criticality(prof_ii_quintic) == SUBCRITICAL
    assert hopf_criticality(prof_vi_cubic) == SUBCRITICAL
    assert hopf_criticality(prof_vi_qb) == SUPERCRITICAL
    assert hopf_criticality(build_profile(bf_family, "septic")) == SUPERCRITICAL
    assert hopf_criticality(build_profile(bf_family, "cubic")) == SUPERCRITICAL


def test_near_vstar_rescaled_branch_continuity(prof_ii_cubic):
    # the rescaled form (|v0 - v*| < 1e-4) must join the direct quadrature
    p = prof_ii_cubic
    delta = p.delta_H + 0.5
    inner = melnikov(p, p.vstar + 9e-5, delta) / 9e-5
    outer = melnikov(p, p.vstar + 1.2e-4, delta) / 1.2e-4
    assert inner == pytest.approx(outer, rel=2e-3)


# zeros, saddle nodes ---------------------------------------------------------

def test_cycle_zeros_supercritical_single(prof_ii_cubic):
    zs = cycle_zeros(prof_ii_cubic, prof_ii_cubic.delta_H + 0.2, n_grid=200)
    assert len(zs) == 1
    v0, slope = zs[0]
    assert slope == -1
    assert abs(melnikov(prof_ii_cubic, v0, prof_ii_cubic.delta_H + 0.2)) < 1e-9


def test_cycle_zeros_subcritical_pair(prof_ii_quintic):
    p = prof_ii_quintic
    _, delta_s = saddle_node(p)
    top_level = delta_level(p, p.domain_top - 1e-9)
    delta = delta_s + 0.55 * (min(p.delta_H, top_level) - delta_s)
    zs = cycle_zeros(p, delta, n_grid=300)
    assert len(zs) == 2
    assert zs[0][1] == 1 and zs[1][1] == -1     # unstable then stable


def test_cycle_zeros_below_saddle_node_empty(prof_ii_quintic):
    p = prof_ii_quintic
    _, delta_s = saddle_node(p)
    assert cycle_zeros(p, delta_s - 0.4, n_grid=200) == []


def test_saddle_node_ii_quintic_window(prof_ii_quintic):
    v_s, delta_s = saddle_node(prof_ii_quintic)
    assert 0.011 < delta_s * 0.006 < 0.012
    assert abs(melnikov(prof_ii_quintic, v_s, delta_s)) < 1e-9
    assert abs(melnikov_slope(prof_ii_quintic, v_s, delta_s)) < 1e-6


def test_saddle_node_vi_cubic_window(prof_vi_cubic):
    v_s, delta_s = saddle_node(prof_vi_cubic)
    # figure-caption interval widened +-10% for the leading-order truncation
    assert 0.9 * 0.01216 < delta_s * 0.01 < 1.1 * 0.01217
    assert delta_s > prof_vi_cubic.delta_H      # subcritical side


def test_saddle_node_absent_for_concave_profile(prof_ii_cubic):
    with pytest.raises(NoSaddleNodeError):
        saddle_node(prof_ii_cubic)


def test_concavity_certificate_supercritical(prof_ii_cubic):
    assert concavity_certificate(prof_ii_cubic, prof_ii_cubic.delta_H) < 0


# return-map oracle -----------------------------------------------------------

def test_melnikov_matches_return_map(ii_family, prof_ii_cubic):
    # (v1 - v0)/sqrt(eps) extrapolated over eps in {1e-3, 2.5e-4} matches
    # M(v0, delta) within 15 percent
    from foldfold.regularize import RegularizedSystem
    from scipy.integrate import solve_ivp

    p = prof_ii_cubic
    delta = p.delta_H + 0.4

    def one_turn(v0, eps):
        reg = RegularizedSystem(ii_family, "cubic", delta * eps, eps)

        def rhs(t, y):
            f1, f2 = reg.F(y[0], y[1])
            return (eps * f1, f2)

        d0 = rhs(0.0, (0.0, v0))

        def cross(t, y):
            return y[0]

        cross.terminal = True
        cross.direction = 1.0 if d0[0] > 0 else -1.0
        dt = 1e-9
        sol = solve_ivp(rhs, [0.0, 60.0 / math.sqrt(eps)],
                        [dt * d0[0], v0 + dt * d0[1]], rtol=1e-11, atol=1e-13,
                        events=cross)
        assert sol.t_events[0].size
        return float(sol.y_events[0][0][1])

    for v0 in (0.2, 0.3, 0.45, 0.6, 0.75):
        m_ref = melnikov(p, v0, delta)
        d1 = (one_turn(v0, 1e-3) - v0) / math.sqrt(1e-3)
        d2 = (one_turn(v0, 2.5e-4) - v0) / math.sqrt(2.5e-4)
        extrap = 2 * d2 - d1
        assert extrap == pytest.approx(m_ref, rel=0.15)

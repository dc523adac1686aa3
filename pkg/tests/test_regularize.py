import numpy as np
import pytest

from foldfold import RegularizedSystem, tangency_eps
from foldfold.errors import DomainError
from foldfold.regularize import CATALOG, from_odd_coefficients
from foldfold.equilibria import find_critical_point

C1_MEMBERS = ("cubic", "quintic", "quintic-b", "septic")


@pytest.mark.parametrize("label", sorted(CATALOG))
def test_catalog_transition_invariants(label):
    tf = CATALOG[label]
    tf.validate()
    assert tf.value(1.0) == pytest.approx(1.0, abs=1e-15)
    assert tf.value(-1.0) == pytest.approx(-1.0, abs=1e-15)
    grid = np.linspace(-1.0, 1.0, 2001)
    vals = tf.value(grid)
    assert np.all(np.abs(vals) <= 1.0 + 1e-12)
    assert np.allclose(tf.value(-grid), -vals, atol=1e-14)  # odd
    interior = grid[1:-1]
    assert np.all(tf.d1(interior) > 0.0)


@pytest.mark.parametrize("label", C1_MEMBERS)
def test_c1_members_flatten_at_band_edges(label):
    tf = CATALOG[label]
    assert tf.d1(1.0) == pytest.approx(0.0, abs=1e-14)
    assert tf.d1(-1.0) == pytest.approx(0.0, abs=1e-14)


def test_linear_keeps_interior_slope_at_edges():
    tf = CATALOG["linear"]
    assert tf.d1(1.0) == 1.0
    assert tf.d1(-1.0) == 1.0
    assert tf.d1(1.0 + 1e-12) == 0.0


def test_clamp_outside_band():
    tf = CATALOG["cubic"]
    assert tf.value(2.3) == 1.0
    assert tf.value(-5.0) == -1.0
    assert tf.d1(2.3) == 0.0
    assert tf.d2(-5.0) == 0.0


def test_custom_odd_coefficients_validation():
    tf = from_odd_coefficients("custom", [1.5, -0.5])
    assert tf.value(0.5) == pytest.approx(1.5 * 0.5 - 0.5 * 0.125)
    with pytest.raises(DomainError):
        from_odd_coefficients("bad-top", [1.0, 1.0])   # value(1) = 2
    with pytest.raises(DomainError):
        from_odd_coefficients("bad-slope", [3.0, -2.0])  # d1 < 0 inside


def test_G_clamps_to_doubled_fields(ii_family):
    reg = RegularizedSystem(ii_family, "cubic", 0.01, 1e-3)
    eps = reg.epsilon
    for x in (-0.2, 0.1):
        gx, gy = reg.G(x, 2 * eps)
        assert (gx, gy) == pytest.approx(tuple(2 * c for c in reg.X.eval(x, 2 * eps)))
        gx, gy = reg.G(x, -2 * eps)
        assert (gx, gy) == pytest.approx(tuple(2 * c for c in reg.Y.eval(x, -2 * eps)))


def test_F_slow_components_match_displayed_form(ii_family):
    # F1 = -2x + 2 phi(v)(1-x), F2 = -2x + a(1+phi(v)) for the
    # invisible-invisible scenario
    reg = RegularizedSystem(ii_family, "cubic", 0.0, 1e-3)
    f1, f2 = reg.F(0.1, 0.0)
    assert (f1, f2) == pytest.approx((-0.2, -0.2))
    reg = RegularizedSystem(ii_family, "cubic", 0.03, 1e-3)
    phi = reg.phi
    for x, v in ((0.05, 0.4), (-0.1, -0.7)):
        f1, f2 = reg.F(x, v)
        assert f1 == pytest.approx(-2 * x + 2 * phi.value(v) * (1 - x))
        assert f2 == pytest.approx(-2 * x + 0.03 * (1 + phi.value(v)))


def test_F_clamp_at_band_edge(ii_family):
    reg = RegularizedSystem(ii_family, "cubic", 0.01, 2e-3)
    f = reg.F(0.07, 1.0)
    expected = tuple(2 * c for c in reg.X.eval(0.07, reg.epsilon))
    assert f == pytest.approx(expected)


def test_F_vanishes_at_critical_point(ii_family):
    reg = RegularizedSystem(ii_family, "cubic", 0.01, 6e-3)
    cp = find_critical_point(reg)
    assert max(abs(c) for c in reg.F(cp.x, cp.v)) < 1e-12


def test_epsilon_must_be_positive(ii_family):
    with pytest.raises(DomainError):
        RegularizedSystem(ii_family, "cubic", 0.0, 0.0)


def test_tangency_eps_closed_forms(ii_family, vi_family):
    # X2 = -x + a is y-independent: TXe = alpha exactly; Y2 = -x: TYe = 0
    reg = RegularizedSystem(ii_family, "cubic", 0.01, 5e-3)
    txe, tye = tangency_eps(reg)
    assert txe == pytest.approx(0.01, abs=1e-12)
    assert tye == pytest.approx(0.0, abs=1e-12)

    # alpha = eps -> 0 collapses both tangencies to the fold-fold
    reg = RegularizedSystem(ii_family, "cubic", 0.0, 1e-9)
    txe, tye = tangency_eps(reg)
    assert abs(txe) < 1e-8 and abs(tye) < 1e-8

    # visible-invisible: X2(x, eps) = x + 3.5 eps so TXe = -0.035 at eps=0.01
    reg = RegularizedSystem(vi_family, "quintic-b", 0.0, 0.01)
    txe, tye = tangency_eps(reg)
    assert txe == pytest.approx(-0.035, abs=1e-12)
    assert tye == pytest.approx(0.0, abs=1e-12)


def test_tangency_eps_bisection_oracle(vi_family):
    reg = RegularizedSystem(vi_family, "quintic-b", 0.004, 0.01)
    txe, tye = tangency_eps(reg)

    def bisect(f, lo, hi):
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if f(lo) * f(mid) <= 0:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    bx = bisect(lambda x: reg.X.c2(x, reg.epsilon), -0.2, 0.2)
    by = bisect(lambda x: reg.Y.c2(x, -reg.epsilon), -0.2, 0.2)
    assert txe == pytest.approx(bx, abs=1e-10)
    assert tye == pytest.approx(by, abs=1e-10)


def test_tangency_eps_seed_agreement_order(bf_family):
    # refined root minus first-order seed shrinks like (|alpha| + eps)^2;
    # the b-field scenario has genuine quadratic x-terms
    devs = []
    for scale in (1.0, 0.5):
        alpha, eps = 0.004 * scale, 0.002 * scale
        reg = RegularizedSystem(bf_family, "cubic", alpha, eps)
        txe, _ = tangency_eps(reg)
        seed = alpha + 4.0 * eps   # -(Xt2/X2_x)*alpha - (X2_y/X2_x)*eps
        devs.append(abs(txe - seed))
    assert devs[0] > 0
    assert devs[0] / devs[1] == pytest.approx(4.0, rel=0.25)

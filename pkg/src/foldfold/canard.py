"""Maximal-Canard computations for the visible-invisible focus case.

The closed-form slope delta_C comes from the inner equation of the
rescaled fold region; the numeric routine continues the attracting and
repelling Fenichel manifolds to x = 0 and closes their gap in delta.
The linear-transition reduction maps the slow system onto the classical
planar canard normal form and ties the canard position to the Hopf
criticality.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from scipy.integrate import solve_ivp
from scipy.special import erfcx

from .errors import DomainError, ExtensionError, NotVersalError, NumericalError
from .fields import AlphaFamily
from .equilibria import constants_MN, origin_data
from .regularize import RegularizedSystem, get_transition
from .slowfast import fold_limit_geometry, m1_eval, m0_alpha_eval


@dataclass
class CanardReport:
    M0: float
    M1: float
    M2: float
    M3: float
    M4: float
    N1: float
    N2: float
    N3: float
    N4: float
    delta_C: float
    gap_slope_C: float
    vbar: float
    m0_slope_at_0: float
    numeric_delta_C: list = field(default_factory=list)


def canard_constants(family: AlphaFamily, phi) -> CanardReport:
    """Inner-equation constants and the closed-form canard slope delta_C."""
    phi = get_transition(phi)
    od = origin_data(family)
    if od.detZ_x >= 0:
        raise DomainError("canard constants require the focus case (det Z)_x(0) < 0")
    geo = fold_limit_geometry(family, phi)
    vb = geo.vbar
    ph = phi.value(vb)
    dph = phi.d1(vb)
    M0 = (od.X1 + od.Y1) + ph * (od.X1 - od.Y1)
    M1 = vb * ((od.X2_y + od.Y2_y) + ph * (od.X2_y - od.Y2_y))
    M2 = (od.Xt2 + od.Yt2) + ph * (od.Xt2 - od.Yt2)
    M3 = 0.5 * ((od.X2_xx + od.Y2_xx) + ph * (od.X2_xx - od.Y2_xx))
    M4 = dph * (od.X2_x - od.Y2_x)
    if M2 * M4 == 0.0:
        raise NotVersalError("M2*M4 = 0: transversality fails, no canard slope")
    delta_C = -(M0 * M3 + M1 * M4) / (M2 * M4)
    N1, N2, N3, N4 = M1 / M0, M2 / M0, M3 / M0, M4 / M0
    gap_slope = math.sqrt(2.0 * math.pi / N4) * N2
    return CanardReport(M0=M0, M1=M1, M2=M2, M3=M3, M4=M4,
                        N1=N1, N2=N2, N3=N3, N4=N4, delta_C=delta_C,
                        gap_slope_C=gap_slope, vbar=vb,
                        m0_slope_at_0=geo.m0_slope_at_0)


def inner_solution(report: CanardReport, sign: str, r: float,
                   delta: Optional[float] = None) -> float:
    """Inner-equation solutions s0^-/s0^+ bounded as r -> -/+ infinity.

    Evaluated through the scaled complementary error function so the
    Gaussian growth factor never overflows.
    """
    if report.N4 <= 0:
        raise DomainError("inner solutions require N4 > 0 (focus case)")
    if sign not in ("minus", "plus"):
        raise DomainError("sign must be 'minus' or 'plus'")
    d = report.delta_C if delta is None else delta
    bracket = report.N1 + report.N2 * d + report.N3 / report.N4
    scale = abs(report.N1) + abs(report.N2 * d) + abs(report.N3 / report.N4)
    if abs(bracket) <= 1e-13 * max(scale, 1.0):
        return report.m0_slope_at_0 * r      # exact Canard connection
    c = math.sqrt(report.N4 / 2.0)
    tail = math.sqrt(math.pi / (2.0 * report.N4))
    if sign == "minus":
        return report.m0_slope_at_0 * r + bracket * tail * erfcx(-c * r)
    return report.m0_slope_at_0 * r - bracket * tail * erfcx(c * r)


def inner_gap(report: CanardReport, delta: Optional[float] = None) -> float:
    """s0^-(0) - s0^+(0) = (N1 + N2*delta + N3/N4)*sqrt(2*pi/N4)."""
    d = report.delta_C if delta is None else delta
    bracket = report.N1 + report.N2 * d + report.N3 / report.N4
    return bracket * math.sqrt(2.0 * math.pi / report.N4)


def _extend_manifold(family: AlphaFamily, phi, delta: float, eps: float,
                     branch: str, x0: float) -> float:
    """Integrate one Fenichel branch in fast time to x = 0; return v there.

    The attracting branch runs forward from -x0, the repelling one
    backward from +x0, so the transverse error contracts along the way.
    The seed carries the first-order correction eps*m1(x).
    """
    reg = RegularizedSystem(family, phi, delta * eps, eps)
    frozen = RegularizedSystem(family, phi, 0.0, eps)
    sign = 1.0 if branch == "attracting" else -1.0
    x_start = -x0 if branch == "attracting" else x0
    v_start = m0_alpha_eval(frozen, x_start) + eps * m1_eval(frozen, delta, x_start)

    def rhs(t, y):
        f1, f2 = reg.F(y[0], y[1])
        return (eps * f1, f2)

    def hit_zero(t, y):
        return y[0]

    hit_zero.terminal = True

    def escaped(t, y):
        return 2.0 - max(abs(y[0]), abs(eps * y[1]))

    escaped.terminal = True

    t_span = [0.0, sign * 4.0 * x0 / eps]
    sol = solve_ivp(rhs, t_span, [x_start, v_start], rtol=1e-11, atol=1e-13,
                    events=(hit_zero, escaped), method="RK45")
    if sol.t_events[0].size:
        return float(sol.y_events[0][0][1])
    state = (float(sol.y[0, -1]), float(sol.y[1, -1]))
    raise ExtensionError(f"{branch} manifold escaped before x=0 near {state}", state=state)


def manifold_gap(family: AlphaFamily, phi, delta: float, eps: float,
                 x0: float = 0.3) -> float:
    """v^s(0, eps) - v^u(0, eps) for alpha = delta*eps."""
    vs = _extend_manifold(family, phi, delta, eps, "attracting", x0)
    vu = _extend_manifold(family, phi, delta, eps, "repelling", x0)
    return vs - vu


def numeric_canard(family: AlphaFamily, phi, eps: float, x0: float = 0.3,
                   gap_tol: float = 1e-10, max_iter: int = 60) -> float:
    """Secant solve of the Fenichel gap in delta; returns delta_C(eps)."""
    report = canard_constants(family, phi)
    d0 = report.delta_C - 0.5
    d1 = report.delta_C + 0.5
    g0 = manifold_gap(family, phi, d0, eps, x0)
    g1 = manifold_gap(family, phi, d1, eps, x0)
    for _ in range(max_iter):
        if g1 == g0:
            raise NumericalError("secant stalled on a flat Fenichel gap")
        d2 = d1 - g1 * (d1 - d0) / (g1 - g0)
        d0, g0 = d1, g1
        d1 = d2
        g1 = manifold_gap(family, phi, d1, eps, x0)
        if abs(g1) < gap_tol:
            return d1
    raise NumericalError("canard secant did not converge")


def numeric_gap_slope(family: AlphaFamily, phi, eps: float,
                      x0: float = 0.3, h: float = 0.05) -> float:
    """Finite-difference slope of the gap in delta around delta_C."""
    report = canard_constants(family, phi)
    gp = manifold_gap(family, phi, report.delta_C + h, eps, x0)
    gm = manifold_gap(family, phi, report.delta_C - h, eps, x0)
    return (gp - gm) / (2.0 * h)


@dataclass
class LinearCanardCoefficients:
    A: tuple
    gamma1: float
    gamma2: float
    gamma3: float
    gamma4: float
    gamma5: float
    kappa_H: float
    kappa_C: float
    A_KS: float
    Abar: float
    delta_H: float
    delta_C: float


def linear_ks_reduction(family: AlphaFamily) -> LinearCanardCoefficients:
    """Reduce the linear-transition slow system to the planar canard normal
    form and report its coefficient map.

    delta_H reproduces -M(Z)/N(Z, Zt) exactly; Abar is the canard-Hopf
    offset delta_C - delta_H from the inner-equation closed form, and A_KS
    is the normal-form Lyapunov quantity recovered from the kappa-line, so
    sgn(A_KS) = sgn(Abar) and the bifurcation is supercritical for
    A_KS < 0, subcritical for A_KS > 0.
    """
    phi = get_transition("linear")
    od = origin_data(family)
    if od.detZ_x >= 0:
        raise DomainError("linear reduction requires the focus case (det Z)_x(0) < 0")
    vis_x = od.X2_x * od.X1 > 0
    vis_y = od.Y2_x * od.Y1 < 0
    if vis_x == vis_y:
        raise DomainError("linear reduction requires a visible-invisible fold-fold")

    vs, xs, M_const, N_const = constants_MN(od, phi)
    A1 = (od.X1_x + od.Y1_x) + vs * (od.X1_x - od.Y1_x)
    A2 = (od.X1_x - od.Y1_x) / (od.X1 - od.Y1)
    A3 = 2.0 * od.detZ_x
    A4 = 2.0 * od.detZ_y * vs
    A5 = 2.0 * (od.Yt2 * od.X1 - od.Xt2 * od.Y1)
    A6 = od.X2_x - od.Y2_x
    A7 = 2.0 * od.detZ_y / (od.X1 - od.Y1) + (od.X2_y - od.Y2_y) * vs
    A8 = od.Xt2 - od.Yt2
    A9 = 0.5 * (od.X1 - od.Y1) * ((od.X2_xx + od.Y2_xx) + vs * (od.X2_xx - od.Y2_xx))
    A10 = 0.5 * (od.X2_xx - od.Y2_xx)

    denom = A5 * A6 / A3 - A8
    if denom == 0.0:
        raise NotVersalError("A5*A6/A3 - A8 = 0: family is not versal")
    delta_H = (A1 + A7 - A4 * A6 / A3) / denom

    root = math.sqrt(-A3)
    gamma1 = A1 / root
    gamma2 = 2.0 * A2 * root / A6
    gamma5 = (A7 + A8 * delta_H) / root
    gamma4 = -2.0 * A9 / (A6 * root) - gamma5 + 2.0 * gamma1
    gamma3 = (4.0 * A10 * root / A6**2 + gamma2) / 3.0
    kappa = lambda d: -(A6 / (2.0 * A3 * root)) * (A4 + A5 * d)
    kappa_H = kappa(delta_H)

    report = canard_constants(family, phi)
    delta_C = report.delta_C
    Abar = delta_C - delta_H
    kappa_C = kappa(delta_C)
    A_KS = -8.0 * (kappa_C - kappa_H)

    return LinearCanardCoefficients(
        A=(A1, A2, A3, A4, A5, A6, A7, A8, A9, A10),
        gamma1=gamma1, gamma2=gamma2, gamma3=gamma3, gamma4=gamma4, gamma5=gamma5,
        kappa_H=kappa_H, kappa_C=kappa_C, A_KS=A_KS, Abar=Abar,
        delta_H=delta_H, delta_C=delta_C)

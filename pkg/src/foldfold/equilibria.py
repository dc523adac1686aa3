"""Critical point of the regularized system and the D/H bifurcation curves.

All leading-order coefficients are evaluated from the origin jet of the
pair; the numeric branch refines the Hopf curve by root finding the trace
of the Jacobian at the continued critical point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .errors import (DomainError, NoEquilibriumError, NotVersalError,
                     NumericalError)
from .fields import AlphaFamily, alpha_derivative, eval_jet
from .filippov import FilippovPair, visibility
from .regularize import RegularizedSystem, TransitionFunction, get_transition

SADDLE = "saddle"
STABLE_NODE = "stable-node"
UNSTABLE_NODE = "unstable-node"
STABLE_FOCUS = "stable-focus"
UNSTABLE_FOCUS = "unstable-focus"
DEGENERATE = "degenerate"

SUPERCRITICAL = "supercritical"
SUBCRITICAL = "subcritical"


@dataclass
class OriginData:
    """Origin jet of the pair plus the alpha-derivatives: inputs to every
    leading-order formula."""

    X1: float
    Y1: float
    X1_x: float
    Y1_x: float
    X2_x: float
    Y2_x: float
    X2_y: float
    Y2_y: float
    X2_xx: float
    Y2_xx: float
    Xt2: float
    Yt2: float
    detZ_x: float
    detZ_y: float
    detZ_xx: float


def origin_data(family: AlphaFamily) -> OriginData:
    X, Y = family.pair(0.0)
    pair = FilippovPair(X, Y)
    o = (0.0, 0.0)
    return OriginData(
        X1=X.c1(*o), Y1=Y.c1(*o),
        X1_x=eval_jet(X, o, "c1_x"), Y1_x=eval_jet(Y, o, "c1_x"),
        X2_x=eval_jet(X, o, "c2_x"), Y2_x=eval_jet(Y, o, "c2_x"),
        X2_y=eval_jet(X, o, "c2_y"), Y2_y=eval_jet(Y, o, "c2_y"),
        X2_xx=eval_jet(X, o, "c2_xx"), Y2_xx=eval_jet(Y, o, "c2_xx"),
        Xt2=alpha_derivative(family, "X2", o),
        Yt2=alpha_derivative(family, "Y2", o),
        detZ_x=pair.det_x(*o), detZ_y=pair.det_y(*o), detZ_xx=pair.det_xx0(),
    )


def vstar_of(od: OriginData, phi: TransitionFunction) -> float:
    """Transition level of the limiting critical point: phi(v*) = -(X1+Y1)/(X1-Y1)."""
    target = -(od.X1 + od.Y1) / (od.X1 - od.Y1)
    if abs(target) >= 1.0:
        raise NoEquilibriumError("no critical point: |(X1+Y1)/(X1-Y1)|(0) >= 1")
    if phi.odd and abs(target) < 1e-14:
        return 0.0
    return phi.inverse(target)


def constants_MN(od: OriginData, phi: TransitionFunction):
    """(v*, x*, M, N): critical-point offsets and the trace-expansion constants."""
    vs = vstar_of(od, phi)
    xs = -(od.detZ_y / od.detZ_x) * vs
    ph = phi.value(vs)
    dph = phi.d1(vs)
    M = ((od.X1_x + od.Y1_x) + ph * (od.X1_x - od.Y1_x)
         + (od.X2_y + od.Y2_y) + ph * (od.X2_y - od.Y2_y)
         + dph * ((od.X2_x - od.Y2_x) * xs + (od.X2_y - od.Y2_y) * vs))
    N = (dph * (od.X1 - od.Y1) * (od.Y2_x * od.Xt2 - od.X2_x * od.Yt2)) / od.detZ_x
    return vs, xs, M, N


@dataclass
class CriticalPointReport:
    x: float
    v: float
    det_scaled: float
    trace_scaled: float
    kind: str


def _classify(det_s: float, trace_s: float, eps: float, tol: float = 1e-9) -> str:
    # det_scaled = eps*det, trace_scaled = eps*trace, so the discriminant
    # trace^2 - 4*det of the unscaled Jacobian has the sign of
    # trace_s^2 - 4*eps*det_s.
    if abs(det_s) <= tol:
        return DEGENERATE
    if det_s < 0:
        return SADDLE
    disc = trace_s * trace_s - 4.0 * eps * det_s
    if abs(trace_s) <= tol or abs(disc) <= tol * eps * det_s:
        return DEGENERATE
    if disc > 0:
        return STABLE_NODE if trace_s < 0 else UNSTABLE_NODE
    return STABLE_FOCUS if trace_s < 0 else UNSTABLE_FOCUS


def jacobian_scaled(reg: RegularizedSystem, point) -> tuple[float, float]:
    """eps*det and eps*trace of the doubled-field Jacobian at the critical point."""
    if isinstance(point, CriticalPointReport):
        x, v = point.x, point.v
    else:
        x, v = point
    J = reg.G_jacobian(x, reg.epsilon * v)
    det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
    trace = J[0, 0] + J[1, 1]
    return reg.epsilon * det, reg.epsilon * trace


def find_critical_point(reg: RegularizedSystem, tol: float = 1e-12,
                        max_iter: int = 50) -> CriticalPointReport:
    """Newton solve of F(x, v) = 0 from the leading-order seed."""
    od = origin_data(reg.family)
    if od.X1 * od.Y1 > 0:
        raise NoEquilibriumError("X1*Y1(0) > 0: regularized system has no critical point")
    vs, xs, _, _ = constants_MN(od, reg.phi)
    xbar = (od.Y1 * od.Xt2 - od.X1 * od.Yt2) / od.detZ_x

    def newton(x, v):
        for _ in range(max_iter):
            f = np.array(reg.F(x, v))
            if max(abs(f[0]), abs(f[1])) < tol:
                return x, v
            J = reg.F_jacobian(x, v)
            try:
                dx, dv = np.linalg.solve(J, -f)
            except np.linalg.LinAlgError:
                return None
            x, v = x + dx, v + dv
            if abs(x) > 1.0 or abs(v) > 1.5:
                return None
        f = np.array(reg.F(x, v))
        if max(abs(f[0]), abs(f[1])) < tol:
            return x, v
        return None

    seed = (xbar * reg.alpha + xs * reg.epsilon, vs)
    sol = newton(*seed)
    if sol is None:
        for v0 in np.linspace(-0.99, 0.99, 23):
            sol = newton(seed[0], v0)
            if sol is not None:
                break
    if sol is None:
        raise NumericalError("critical-point Newton did not converge")
    x, v = sol
    det_s, trace_s = jacobian_scaled(reg, (x, v))
    kind = _classify(det_s, trace_s, reg.epsilon)
    return CriticalPointReport(x=x, v=v, det_scaled=det_s, trace_scaled=trace_s, kind=kind)


@dataclass
class BifurcationChart:
    vstar: float
    xstar: float
    xbar: float
    M_of_Z: float
    N_of_ZZt: float
    D_coeff: float
    delta_H: float
    hopf_criticality: Optional[str]
    numeric_H: list = field(default_factory=list)
    fold_class: str = ""
    detZx0: float = 0.0


def chart(family: AlphaFamily, phi, criticality: bool = True,
          numeric_eps=(1e-3, 3e-3, 6e-3, 1e-2)) -> BifurcationChart:
    """Leading coefficients of the D and H curves plus numeric H samples.

    Requires a fold-fold with X1*Y1(0) < 0, nonzero (det Z)_x(0) and a
    versal family.  The Hopf criticality is delegated to the Melnikov
    second derivative.
    """
    phi = get_transition(phi)
    od = origin_data(family)
    if od.X1 * od.Y1 >= 0:
        raise DomainError("chart requires X1*Y1(0) < 0")
    if od.detZ_x == 0.0:
        raise DomainError("chart requires (det Z)_x(0) != 0")
    vs, xs, M, N = constants_MN(od, phi)
    if abs(N) < 1e-13:
        raise NotVersalError("N(Z, Zt) = 0: family is not versal")
    xbar = (od.Y1 * od.Xt2 - od.X1 * od.Yt2) / od.detZ_x
    D = -(N * N) / (8.0 * phi.d1(vs) * od.detZ_x)
    delta_H = -M / N

    X, Y = family.pair(0.0)
    vx = visibility(X, side="X")
    vy = visibility(Y, side="Y")
    fold_class = f"{vx}-{vy}"

    crit = None
    if criticality and od.detZ_x < 0:
        from .melnikov import build_profile, hopf_criticality

        crit = hopf_criticality(build_profile(family, phi))

    numeric = []
    if numeric_eps:
        for eps in numeric_eps:
            numeric.append((eps, _alpha_hopf(family, phi, eps, delta_H)))

    return BifurcationChart(vstar=vs, xstar=xs, xbar=xbar, M_of_Z=M, N_of_ZZt=N,
                            D_coeff=D, delta_H=delta_H, hopf_criticality=crit,
                            numeric_H=numeric, fold_class=fold_class, detZx0=od.detZ_x)


def _alpha_hopf(family: AlphaFamily, phi, eps: float, delta_H: float) -> float:
    """Root of trace(P(alpha, eps)) = 0 in alpha near delta_H * eps."""

    def trace_at(alpha: float) -> float:
        reg = RegularizedSystem(family, phi, alpha, eps)
        report = find_critical_point(reg)
        return report.trace_scaled

    center = delta_H * eps
    for widen in (0.5, 0.8, 0.95):
        lo, hi = center - widen * abs(center), center + widen * abs(center)
        try:
            flo, fhi = trace_at(lo), trace_at(hi)
        except (NoEquilibriumError, NumericalError):
            continue
        if flo * fhi < 0:
            return brentq(trace_at, lo, hi, xtol=1e-14)
    raise NumericalError(f"could not bracket the Hopf alpha at eps={eps}")


def classify_region(ch: BifurcationChart, alpha: float, eps: float) -> str:
    """Leading-order type of the critical point at (alpha, eps) from the chart.

    Node below the D parabola, focus above; stability flips across the H
    line, toward stable on the left for the invisible-invisible fold and
    toward unstable on the left for the visible-invisible one.
    """
    if ch.detZx0 >= 0:
        return SADDLE
    alpha_H = ch.delta_H * eps
    if ch.fold_class == "invisible-invisible":
        stable = alpha < alpha_H
    else:
        stable = alpha > alpha_H
    if eps < ch.D_coeff * alpha * alpha:
        return STABLE_NODE if stable else UNSTABLE_NODE
    return STABLE_FOCUS if stable else UNSTABLE_FOCUS

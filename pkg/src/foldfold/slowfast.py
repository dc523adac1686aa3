"""Critical manifolds of the slow-fast form and the fold-fold limit geometry."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable


from .errors import DomainError
from .fields import AlphaFamily, eval_jet
from .filippov import FilippovPair, unfolding_tangencies, visibility
from .regularize import RegularizedSystem, get_transition

ATTRACTING = "attracting"
REPELLING = "repelling"


def m0_alpha_eval(reg: RegularizedSystem, x: float, iters: int = 40) -> float:
    """Critical-manifold height over x: solve phi(v) = (X2+Y2)/(Y2-X2)(x, 0).

    Bisection is used because the transition derivative vanishes at the
    band edges, where Newton is unreliable.
    """
    x2 = reg.X.c2(x, 0.0)
    y2 = reg.Y.c2(x, 0.0)
    denom = y2 - x2
    if denom == 0.0:
        raise DomainError(f"Y2 = X2 at x={x}: critical manifold undefined")
    rhs = (x2 + y2) / denom
    if not -1.0 <= rhs <= 1.0:
        raise DomainError(f"x={x} lies in the crossing region (target {rhs:.3g})")
    lo, hi = -1.0, 1.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if reg.phi.value(mid) < rhs:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def manifold_stability(reg: RegularizedSystem, x: float) -> str:
    """Sign of the transverse rate phi'(m0)*(X2 - Y2)(x, 0)."""
    v = m0_alpha_eval(reg, x)
    rate = reg.phi.d1(v) * (reg.X.c2(x, 0.0) - reg.Y.c2(x, 0.0))
    return REPELLING if rate > 0 else ATTRACTING


@dataclass
class CriticalManifold:
    m0_alpha: Callable[[float], float]
    stability: Callable[[float], str]
    endpoints: tuple[float, float]


def critical_manifold(reg: RegularizedSystem) -> CriticalManifold:
    """The critical manifold of the unfolded slow system with its fold endpoints."""
    tx, ty = unfolding_tangencies(reg.family, reg.alpha)
    return CriticalManifold(
        m0_alpha=lambda x: m0_alpha_eval(reg, x),
        stability=lambda x: manifold_stability(reg, x),
        endpoints=(tx, ty),
    )


def induced_speed(reg: RegularizedSystem, x: float) -> float:
    """Slow drift along the manifold: F1(x, m0(x); alpha, 0) = 2*Zs(x)."""
    v = m0_alpha_eval(reg, x)
    ph = reg.phi.value(v)
    x1 = reg.X.c1(x, 0.0)
    y1 = reg.Y.c1(x, 0.0)
    return (x1 + y1) + ph * (x1 - y1)


def m0_slope(reg: RegularizedSystem, x: float) -> float:
    """Exact slope of the critical manifold away from the fold-fold point."""
    v = m0_alpha_eval(reg, x)
    x2 = reg.X.c2(x, 0.0)
    y2 = reg.Y.c2(x, 0.0)
    num = (eval_jet(reg.X, (x, 0.0), "c2_x") * y2
           - eval_jet(reg.Y, (x, 0.0), "c2_x") * x2)
    return 2.0 * num / (reg.phi.d1(v) * (y2 - x2) ** 2)


def m1_eval(reg: RegularizedSystem, delta: float, x: float) -> float:
    """First-order manifold correction from the orbit-equation balance.

    m1 = (m0' * F1(x, m0; 0, 0) - dF2/deps - delta*dF2/dalpha) / (dF2/dv),
    everything at (x, m0(x); 0, 0).  Used to seed Fenichel-manifold
    extensions with the O(eps) transient removed.
    """
    from .fields import alpha_derivative

    v = m0_alpha_eval(reg, x)
    ph = reg.phi.value(v)
    dph = reg.phi.d1(v)
    X, Y = reg.X, reg.Y
    f1 = (X.c1(x, 0.0) + Y.c1(x, 0.0)) + ph * (X.c1(x, 0.0) - Y.c1(x, 0.0))
    x2y = eval_jet(X, (x, 0.0), "c2_y")
    y2y = eval_jet(Y, (x, 0.0), "c2_y")
    f2_eps = v * ((x2y + y2y) + ph * (x2y - y2y))
    xt2 = alpha_derivative(reg.family, "X2", (x, 0.0))
    yt2 = alpha_derivative(reg.family, "Y2", (x, 0.0))
    f2_alpha = (xt2 + yt2) + ph * (xt2 - yt2)
    f2_v = dph * (X.c2(x, 0.0) - Y.c2(x, 0.0))
    if f2_v == 0.0:
        raise DomainError(f"normal hyperbolicity lost at x={x}")
    return (m0_slope(reg, x) * f1 - f2_eps - delta * f2_alpha) / f2_v


@dataclass
class FoldLimitGeometry:
    vbar: float
    m0_slope_at_0: float
    ordering: str


def fold_limit_geometry(family: AlphaFamily, phi) -> FoldLimitGeometry:
    """Limit manifold height vbar and its ordering against vstar.

    The ordering follows the sign of (det Z)_x(0) through
    phi(v*) - phi(vbar) = C*(det Z)_x(0) with C > 0.
    """
    phi = get_transition(phi)
    X, Y = family.pair(0.0)
    if visibility(X, side="X") == visibility(Y, side="Y"):
        raise DomainError("fold limit geometry requires a visible-invisible fold-fold")
    o = (0.0, 0.0)
    p = eval_jet(X, o, "c2_x")
    q = eval_jet(Y, o, "c2_x")
    target = (p + q) / (q - p)
    if not -1.0 < target < 1.0:
        raise DomainError(f"(X2_x+Y2_x)/(Y2_x-X2_x)(0) = {target:.3g} outside (-1, 1)")
    vbar = phi.inverse(target)
    h = eval_jet(X, o, "c2_xx")
    k = eval_jet(Y, o, "c2_xx")
    slope0 = (h * q - k * p) / (phi.d1(vbar) * (q - p) ** 2)
    od_pair = FilippovPair(X, Y)
    detx = od_pair.det_x(0.0, 0.0)
    ordering = "vstar<vbar" if detx < 0 else "vbar<vstar"
    return FoldLimitGeometry(vbar=vbar, m0_slope_at_0=slope0, ordering=ordering)

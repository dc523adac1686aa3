"""First-order displacement function of the rescaled regularized system.

In the scaled chart u = x/sqrt(eps), alpha = delta*eps, the system is a
perturbed nonlinear center around (0, v*) with first integral
u^2/2 + V(v).  The displacement of the return map on the half-section
{u = 0, v > v*} is sqrt(eps)*M(v0, delta) to first order; simple zeros of
M continue to limit cycles, double zeros to saddle-node bifurcations of
cycles, and the second derivative at (v*, delta_H) fixes the Hopf
criticality.

Everything here is evaluated from the origin jet of the pair; the
transition is used with its clamped extension, so orbits of the frozen
center may leave the band |v| <= 1 (that is how the moderate-size cycles
of the full system appear in this chart).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import (DomainError, IndeterminateError, NoSaddleNodeError,
                     NumericalError)
from .fields import AlphaFamily
from .regularize import TransitionFunction, get_transition
from .equilibria import (SUBCRITICAL, SUPERCRITICAL, OriginData, constants_MN,
                         origin_data)

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


def _gl_panels(fn, a: float, b: float, n_panels: int) -> float:
    edges = np.linspace(a, b, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = fn(nodes.ravel()).reshape(nodes.shape)
    return float(np.sum(half * (vals @ _GL_WEIGHTS)))


def _adaptive_gl(fn, a: float, b: float, rel: float = 1e-10, abs_tol: float = 1e-13,
                 scale: float = 1.0) -> float:
    if a == b:
        return 0.0
    prev = _gl_panels(fn, a, b, 2)
    for n in (4, 8, 16, 32, 64, 128):
        cur = _gl_panels(fn, a, b, n)
        if abs(cur - prev) <= max(abs_tol, rel * max(abs(cur), scale)):
            return cur
        prev = cur
    return prev


class _Potential:
    """V(v) with V(v*) = 0: Gauss-Legendre cumulative inside the band and
    exact linear tails outside (the transition clamps there)."""

    def __init__(self, g: Callable, vstar: float, hi_inner: float,
                 slope_lo: float, slope_hi: float):
        lo = -1.0
        hi = min(hi_inner, 1.0)
        n = max(8, int(math.ceil((hi - lo) / 0.02)))
        self.edges = np.linspace(lo, hi, n + 1)
        mid = 0.5 * (self.edges[:-1] + self.edges[1:])
        half = 0.5 * (self.edges[1:] - self.edges[:-1])
        nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
        vals = g(nodes.ravel()).reshape(nodes.shape)
        panel = half * (vals @ _GL_WEIGHTS)
        self.cum = np.concatenate([[0.0], np.cumsum(panel)])
        self.g = g
        self.slope_lo = slope_lo   # dV/dv for v <= -1
        self.slope_hi = slope_hi   # dV/dv for v >= hi (band top), if reachable
        self.hi = hi
        self.offset = 0.0
        self.offset = float(self._raw(np.array([vstar]))[0])

    def _raw(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        vc = np.clip(v, self.edges[0], self.edges[-1])
        idx = np.clip(np.searchsorted(self.edges, vc, side="right") - 1,
                      0, len(self.edges) - 2)
        a = self.edges[idx]
        mid = 0.5 * (a + vc)
        half = 0.5 * (vc - a)
        nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
        part = half * (self.g(nodes.ravel()).reshape(nodes.shape) @ _GL_WEIGHTS)
        inner = self.cum[idx] + part
        below = self.slope_lo * (v - self.edges[0])
        above = self.slope_hi * (v - self.edges[-1])
        return inner + np.where(v < self.edges[0], below, 0.0) \
                     + np.where(v > self.edges[-1], above, 0.0)

    def __call__(self, v):
        out = self._raw(np.atleast_1d(v)) - self.offset
        return out if np.ndim(v) else float(out[0])


@dataclass
class MelnikovProfile:
    """Frozen-center data of one (family, transition) pairing."""

    od: OriginData
    phi: TransitionFunction
    vstar: float
    vbar: Optional[float]
    domain_top: float
    fold_class: str
    delta_H: float
    Vpp_star: float
    V: Callable = field(repr=False, default=None)
    _floor: float = -1.0

    # -- pointwise pieces of the integrand ---------------------------------
    def S1(self, v):
        od = self.od
        return (od.X1 + od.Y1) + self.phi.value(v) * (od.X1 - od.Y1)

    def T1(self, v):
        od = self.od
        return (od.X1_x + od.Y1_x) + self.phi.value(v) * (od.X1_x - od.Y1_x)

    def T2(self, v):
        od = self.od
        return (od.X2_x + od.Y2_x) + self.phi.value(v) * (od.X2_x - od.Y2_x)

    def T3(self, v):
        od = self.od
        return (od.X2_xx + od.Y2_xx) + self.phi.value(v) * (od.X2_xx - od.Y2_xx)

    def T4(self, v):
        od = self.od
        return v * ((od.X2_y + od.Y2_y) + self.phi.value(v) * (od.X2_y - od.Y2_y))

    def T5(self, v):
        od = self.od
        return (od.Xt2 + od.Yt2) + self.phi.value(v) * (od.Xt2 - od.Yt2)

    def dV(self, v):
        return -self.S1(v) / self.T2(v)

    def Vpp(self, v):
        od, ph = self.od, self.phi
        s1p = ph.d1(v) * (od.X1 - od.Y1)
        t2p = ph.d1(v) * (od.X2_x - od.Y2_x)
        return -(s1p * self.T2(v) - self.S1(v) * t2p) / self.T2(v) ** 2

    def vbar0(self, v0: float) -> float:
        return conjugate(self, v0)

    def M(self, v0: float, delta: float) -> float:
        return melnikov(self, v0, delta)


def build_profile(family: AlphaFamily, phi, domain_top: Optional[float] = None) -> MelnikovProfile:
    """Assemble the Melnikov profile for a focus-case fold-fold family."""
    phi = get_transition(phi)
    od = origin_data(family)
    if od.detZ_x >= 0:
        raise DomainError("Melnikov profile requires the focus case (det Z)_x(0) < 0")
    if od.X1 * od.Y1 >= 0:
        raise DomainError("Melnikov profile requires X1*Y1(0) < 0")
    vs, xs, M_const, N_const = constants_MN(od, phi)
    if abs(N_const) < 1e-13:
        raise DomainError("family is not versal; delta_H undefined")
    delta_H = -M_const / N_const

    vis_x = od.X2_x * od.X1 > 0
    vis_y = od.Y2_x * od.Y1 < 0
    if vis_x == vis_y:
        fold_class = "visible-visible" if vis_x else "invisible-invisible"
    else:
        fold_class = "visible-invisible"

    vbar = None
    if fold_class == "visible-invisible":
        target = (od.X2_x + od.Y2_x) / (od.Y2_x - od.X2_x)
        vbar = phi.inverse(target)
        top = vbar - 1e-3 if domain_top is None else min(domain_top, vbar - 1e-3)
    else:
        top = vs + 1.5 if domain_top is None else domain_top

    Vpp_star = -phi.d1(vs) * (od.X1 - od.Y1) ** 2 / (2.0 * od.detZ_x)

    prof = MelnikovProfile(od=od, phi=phi, vstar=vs, vbar=vbar, domain_top=top,
                           fold_class=fold_class, delta_H=delta_H, Vpp_star=Vpp_star)
    g = lambda r: -prof.S1(r) / prof.T2(r)
    slope_lo = float(g(np.array([-1.5]))[0])
    if vbar is not None:
        hi_inner = min(vbar - 1e-6, 1.0)
        slope_hi = 0.0
    else:
        hi_inner = 1.0
        slope_hi = float(g(np.array([1.5]))[0])
    prof.V = _Potential(g, vs, hi_inner, slope_lo, slope_hi)

    if slope_lo >= 0:
        raise NumericalError("potential does not grow below the band; "
                             "conjugate points would be unbounded")
    v_need = prof.V(top - 1e-9 if vbar is not None else top)
    prof._floor = -1.0 + min(0.0, (v_need - prof.V(-1.0)) / slope_lo) * 1.02 - 1e-6
    return prof


def potential(profile: MelnikovProfile, v: float) -> float:
    """V(v); raises DomainError past the level where F2_x(0, .) vanishes."""
    if profile.vbar is not None and v >= profile.vbar:
        raise DomainError(f"F2_x(0, r; 0, 0) vanishes at r = {profile.vbar:.6g}")
    return profile.V(v)


def conjugate(profile: MelnikovProfile, v0: float, tol: float = 1e-13) -> float:
    """Level partner below v*: V(vbar0) = V(v0), vbar0 < v* < v0."""
    if not profile.vstar <= v0 <= profile.domain_top + 1e-12:
        raise DomainError(f"v0={v0} outside (vstar, domain_top)")
    if abs(v0 - profile.vstar) < 1e-15:
        return profile.vstar
    target = profile.V(v0)
    v_m1 = profile.V(-1.0)
    if target > v_m1:
        # exact linear tail below the band
        return -1.0 + (target - v_m1) / profile.V.slope_lo
    if v_m1 - target < 0:
        raise DomainError("no level match before v = -1+1e-9")
    lo, hi = -1.0, profile.vstar
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if profile.V(mid) - target > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _f_parts(profile: MelnikovProfile, v: np.ndarray, Vv0: float):
    """(f_a, f_b) with f = f_a + delta*f_b, expanded analytically in the jets."""
    p = profile
    ph = p.phi
    dphi = ph.d1(v)
    od = p.od
    t2 = p.T2(v)
    dt2 = dphi * (od.X2_x - od.Y2_x)
    t3 = p.T3(v)
    dt3 = dphi * (od.X2_xx - od.Y2_xx)
    t4 = p.T4(v)
    dt4 = ((od.X2_y + od.Y2_y) + ph.value(v) * (od.X2_y - od.Y2_y)
           + v * dphi * (od.X2_y - od.Y2_y))
    t5 = p.T5(v)
    dt5 = dphi * (od.Xt2 - od.Yt2)
    dv = -p.S1(v) / t2
    rem = Vv0 - p.V(v)
    inner_a = t3 * rem + t4
    dinner_a = dt3 * rem - t3 * dv + dt4
    f_a = p.T1(v) / t2 + dinner_a / t2 - dt2 * inner_a / t2**2
    f_b = dt5 / t2 - dt2 * t5 / t2**2
    return f_a, f_b


def _sqrt_term(profile: MelnikovProfile, v: np.ndarray, Vv0: float) -> np.ndarray:
    return np.sqrt(np.maximum(2.0 * (Vv0 - profile.V(v)), 0.0))


def _melnikov_parts(profile: MelnikovProfile, v0: float) -> tuple[float, float]:
    """(M_a, M_b) with M(v0, delta) = M_a + delta*M_b."""
    p = profile
    if abs(v0 - p.vstar) < 1e-12:
        return 0.0, 0.0
    if abs(v0 - p.vstar) < 1e-4:
        return _melnikov_parts_rescaled(p, v0)
    Vv0 = p.V(v0)
    vb = conjugate(p, v0)
    span = v0 - vb
    s = 0.05 * span
    breaks = [c for c in (-1.0, 1.0) if vb < c < v0]
    s_left = s if not breaks else min(s, 0.5 * (breaks[0] - vb))
    s_right = s if not breaks else min(s, 0.5 * (v0 - breaks[-1]))
    edges = sorted({vb + s_left, *breaks, v0 - s_right})
    scale = max(abs(Vv0), 1e-6)

    def accumulate(which: int) -> float:
        # endpoint pieces under v = vb + w^2 and v = v0 - w^2: the square
        # root of V(v0) - V(v) becomes smooth in w
        total = _adaptive_gl(
            lambda w: _f_parts(p, vb + w * w, Vv0)[which]
            * _sqrt_term(p, vb + w * w, Vv0) * 2.0 * w,
            0.0, math.sqrt(s_left), scale=scale)
        for a, b in zip(edges[:-1], edges[1:]):
            total += _adaptive_gl(
                lambda v: _f_parts(p, v, Vv0)[which] * _sqrt_term(p, v, Vv0),
                a, b, scale=scale)
        total += _adaptive_gl(
            lambda w: _f_parts(p, v0 - w * w, Vv0)[which]
            * _sqrt_term(p, v0 - w * w, Vv0) * 2.0 * w,
            0.0, math.sqrt(s_right), scale=scale)
        return total

    pref = -2.0 / p.dV(v0)
    return pref * accumulate(0), pref * accumulate(1)


def _melnikov_parts_rescaled(profile: MelnikovProfile, v0: float) -> tuple[float, float]:
    """Near-v* form: both half-integrals rescaled to t in [0, 1] through
    V(v) = (v - v*)^2 * Vtilde(v), which kills the 0/0 of the direct form."""
    p = profile
    vs = p.vstar

    def vtilde(v):
        v = np.asarray(v, dtype=float)
        dv = v - vs
        small = np.abs(dv) < 1e-7
        safe = np.where(small, 1.0, dv)
        return np.where(small, 0.5 * p.Vpp_star, np.asarray(p.V(v)) / safe**2)

    vt0 = float(vtilde(np.array([v0]))[0])
    V0 = (v0 - vs) ** 2 * vt0
    vb = conjugate(p, v0)

    def half(offset: float, which: int) -> float:
        # offset = vb - vs (left half, <= 0) or v0 - vs (right half, >= 0)
        def fn(t):
            v = vs + t * offset
            rad = np.maximum(2.0 * (V0 - (t * offset) ** 2 * vtilde(v)), 0.0)
            return _f_parts(p, v, V0)[which] * np.sqrt(rad)

        return abs(offset) * _adaptive_gl(fn, 0.0, 1.0, scale=max(abs(V0), 1e-12))

    pref = -2.0 / p.dV(v0)
    m_a = pref * (half(vb - vs, 0) + half(v0 - vs, 0))
    m_b = pref * (half(vb - vs, 1) + half(v0 - vs, 1))
    return m_a, m_b


def melnikov(profile: MelnikovProfile, v0: float, delta: float) -> float:
    """M(v0, delta); zero exactly at v0 = v*."""
    if not profile.vstar - 1e-12 <= v0 <= profile.domain_top + 1e-12:
        raise DomainError(f"v0={v0} outside [vstar, domain_top]")
    m_a, m_b = _melnikov_parts(profile, v0)
    return m_a + delta * m_b


def melnikov_slope(profile: MelnikovProfile, v0: float, delta: float,
                   h: float = 1e-5) -> float:
    lo = max(profile.vstar, v0 - h)
    hi = min(profile.domain_top, v0 + h)
    return (melnikov(profile, hi, delta) - melnikov(profile, lo, delta)) / (hi - lo)


def hopf_criticality(profile: MelnikovProfile, delta_H: Optional[float] = None) -> str:
    """Sign of the second v-difference of M at (v*, delta_H).

    Positive curvature means the Hopf bifurcation is subcritical, negative
    supercritical.  The one-sided second differences at steps 1e-3 and
    2e-3 must agree in sign (the curvature scale, not an extrapolated
    limit, carries the criticality).
    """
    dH = profile.delta_H if delta_H is None else delta_H
    vs = profile.vstar

    def d2(h):
        m1 = melnikov(profile, vs + h, dH)
        m2 = melnikov(profile, vs + 2 * h, dH)
        return (m2 - 2.0 * m1) / h**2

    a, b = d2(1e-3), d2(2e-3)
    if a * b <= 0.0:
        a, b = d2(5e-4), d2(1e-3)
    if a * b <= 0.0 or abs(a) < 1e-6:
        raise IndeterminateError("degenerate Hopf: curvature below resolution")
    return SUBCRITICAL if a > 0 else SUPERCRITICAL


def cycle_zeros(profile: MelnikovProfile, delta: float,
                n_grid: int = 400) -> list[tuple[float, int]]:
    """Zeros of M(., delta) on (v*+1e-4, domain_top) with their slope signs.

    Zeros with nonpositive slope continue to attracting cycles.
    """
    lo = profile.vstar + 1e-4
    hi = profile.domain_top
    grid = np.linspace(lo, hi, n_grid)
    vals = np.array([melnikov(profile, v, delta) for v in grid])
    zeros = []
    for i in range(n_grid - 1):
        if vals[i] == 0.0:
            zeros.append(grid[i])
        elif vals[i] * vals[i + 1] < 0:
            zeros.append(brentq(lambda v: melnikov(profile, v, delta),
                                grid[i], grid[i + 1], xtol=1e-10))
    out = []
    for z in zeros:
        slope = melnikov_slope(profile, z, delta)
        out.append((float(z), int(math.copysign(1, slope)) if slope != 0 else 0))
    return out


def concavity_certificate(profile: MelnikovProfile, delta: float,
                          n_grid: int = 60) -> float:
    """Extremal second difference of M(., delta) over the scan grid.

    Returns the largest second difference: a negative certificate means M
    is strictly concave on the grid, which is what makes the cycle born at
    the Hopf bifurcation globally unique.
    """
    lo = profile.vstar + 1e-3
    hi = profile.domain_top - 1e-9
    grid = np.linspace(lo, hi, n_grid)
    vals = np.array([melnikov(profile, v, delta) for v in grid])
    h = grid[1] - grid[0]
    second = (vals[2:] - 2 * vals[1:-1] + vals[:-2]) / h**2
    return float(np.max(second))


def delta_level(profile: MelnikovProfile, v0: float) -> float:
    """The delta at which M(v0, .) vanishes (M is affine in delta)."""
    m_a, m_b = _melnikov_parts(profile, v0)
    if m_b == 0.0:
        raise NumericalError(f"M_b(v0={v0}) = 0: delta level undefined")
    return -m_a / m_b


def saddle_node(profile: MelnikovProfile, n_grid: int = 48) -> tuple[float, float]:
    """Solve M = 0, dM/dv = 0 through the stationary point of delta(v).

    Affinity in delta reduces the system to finding an interior stationary
    point of v -> delta(v); its absence raises NoSaddleNodeError.
    """
    span = profile.domain_top - profile.vstar
    lo = profile.vstar + max(1e-3, 0.02 * span)
    hi = profile.domain_top - 1e-9
    grid = np.linspace(lo, hi, n_grid)
    levels = np.array([delta_level(profile, v) for v in grid])
    d = np.diff(levels)
    idx = None
    for i in range(len(d) - 1):
        if d[i] * d[i + 1] < 0:
            idx = i + 1
            break
    if idx is None:
        raise NoSaddleNodeError("delta(v) has no interior stationary point")
    a, b = grid[idx - 1], grid[idx + 1]
    sign = -1.0 if d[idx - 1] > 0 else 1.0  # max if rising then falling
    res = minimize_scalar(lambda v: sign * delta_level(profile, v),
                          bounds=(a, b), method="bounded",
                          options={"xatol": 1e-9})
    v_s = float(res.x)
    delta_s = delta_level(profile, v_s)
    if abs(melnikov(profile, v_s, delta_s)) > 1e-9:
        raise NumericalError("saddle-node residual |M| too large")
    if abs(melnikov_slope(profile, v_s, delta_s)) > 1e-6:
        raise NumericalError("saddle-node residual |dM/dv| too large")
    return v_s, delta_s

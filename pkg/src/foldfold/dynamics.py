"""Trajectories of the regularized system and its periodic orbits.

All integration uses the fast-time chart (x' = eps*F1, v' = F2): inside
the band both rates are O(1) and outside it the chart is just the smooth
upper/lower field in stretched coordinates, so no stiff solver is needed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import (DomainError, EscapeError, IndeterminateError,
                     NoOrbitError, NumericalError)
from .fields import AlphaFamily, eval_jet
from .filippov import FilippovPair, half_return_numeric, unfolding_return_fixed_point
from .equilibria import find_critical_point
from .regularize import RegularizedSystem, get_transition
from .slowfast import m0_alpha_eval

BOX = 1.0
ESCAPE_FACTOR = 10.0

ATTRACTING = "attracting"
REPELLING = "repelling"

RIGHT_OF_C = "right-of-C"
LEFT_OF_C = "left-of-C"


@dataclass
class BandEvent:
    t: float
    x: float
    v: float
    which: str        # "v=+1" or "v=-1"
    direction: int    # +1 upward, -1 downward


@dataclass
class Trajectory:
    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    events: list[BandEvent] = field(default_factory=list)


def _fast_rhs(reg: RegularizedSystem):
    eps = reg.epsilon

    def rhs(t, y):
        f1, f2 = reg.F(y[0], y[1])
        return (eps * f1, f2)

    return rhs


def integrate(reg: RegularizedSystem, start, t_end: float,
              direction: str = "forward", sections=(),
              rtol: float = 1e-10, atol: float = 1e-12,
              dense: bool = False) -> Trajectory:
    """Adaptive fast-time integration with band-crossing event location."""
    rhs = _fast_rhs(reg)
    sgn = 1.0 if direction == "forward" else -1.0
    eps = reg.epsilon

    def up(t, y):
        return y[1] - 1.0

    def down(t, y):
        return y[1] + 1.0

    def escaped(t, y):
        return ESCAPE_FACTOR * BOX - max(abs(y[0]), abs(eps * y[1]))

    escaped.terminal = True
    events = [up, down, escaped] + list(sections)
    sol = solve_ivp(lambda t, y: tuple(sgn * f for f in rhs(t, y)),
                    [0.0, abs(t_end)], list(start), rtol=rtol, atol=atol,
                    events=events, dense_output=dense)
    recorded = []
    labels = [("v=+1", 0), ("v=-1", 1)]
    labels += [(getattr(s, "label", f"section-{k}"), 3 + k)
               for k, s in enumerate(sections)]
    for which, idx in labels:
        for t_ev, y_ev in zip(sol.t_events[idx], sol.y_events[idx]):
            f2 = reg.F(y_ev[0], y_ev[1])[1] * sgn
            recorded.append(BandEvent(t=float(t_ev), x=float(y_ev[0]), v=float(y_ev[1]),
                                      which=which, direction=1 if f2 > 0 else -1))
    recorded.sort(key=lambda e: e.t)
    if sol.t_events[2].size:
        y_esc = sol.y_events[2][0]
        raise EscapeError(f"trajectory left the working box at {tuple(y_esc)}",
                          state=tuple(y_esc))
    traj = Trajectory(t=sgn * sol.t, x=sol.y[0], v=sol.y[1], events=recorded)
    traj.sol = sol
    return traj


def rk4_fixed(reg: RegularizedSystem, start, t_end: float, dt: float = 1e-5):
    """Fixed-step RK4 reference integrator (oracle for the adaptive one)."""
    eps = reg.epsilon
    F = reg.F
    x, v = float(start[0]), float(start[1])
    n = int(round(abs(t_end) / dt))
    h = t_end / n
    for _ in range(n):
        k1a, k1b = F(x, v)
        k1a *= eps
        k2a, k2b = F(x + 0.5 * h * k1a, v + 0.5 * h * k1b)
        k2a *= eps
        k3a, k3b = F(x + 0.5 * h * k2a, v + 0.5 * h * k2b)
        k3a *= eps
        k4a, k4b = F(x + h * k3a, v + h * k3b)
        k4a *= eps
        x += h * (k1a + 2 * k2a + 2 * k3a + k4a) / 6.0
        v += h * (k1b + 2 * k2b + 2 * k3b + k4b) / 6.0
    return x, v


def band_crossing_map(reg: RegularizedSystem, x_at_entry: float,
                      start: str = "top") -> float:
    """Landing x on the opposite band edge of the orbit through the entry edge.

    Integrates the orbit equation dx/dv = eps*F1/F2 from v = +1 to -1
    (``start="top"``) or the reverse, which requires F2 to keep one sign
    across the band at this x.
    """
    probe = np.linspace(-1.0, 1.0, 201)
    signs = np.array([reg.F(x_at_entry, v)[1] for v in probe])
    if signs.max() > 0 and signs.min() < 0:
        raise DomainError(f"F2 changes sign inside the band at x={x_at_entry}")
    eps = reg.epsilon

    def rhs(v, y):
        f1, f2 = reg.F(y[0], v)
        return (eps * f1 / f2,)

    span = [1.0, -1.0] if start == "top" else [-1.0, 1.0]
    sol = solve_ivp(rhs, span, [x_at_entry], rtol=1e-12, atol=1e-14)
    if not sol.success:
        raise NumericalError("band-crossing orbit solve failed")
    return float(sol.y[0, -1])


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(40)


def first_order_g(reg: RegularizedSystem, x: float, start: str = "top") -> float:
    """First-order band-crossing shift: the integral of F1/F2 at eps = 0
    from v = 1 to -1 (``start="top"``) or the reverse."""
    X, Y = reg.X, reg.Y
    x1, x2 = X.eval(x, 0.0)
    y1, y2 = Y.eval(x, 0.0)

    def ratio(v):
        ph = reg.phi.value(v)
        f1 = (x1 + y1) + ph * (x1 - y1)
        f2 = (x2 + y2) + ph * (x2 - y2)
        return f1 / f2

    val = float(np.dot(_GL_WEIGHTS, ratio(_GL_NODES)))
    return -val if start == "top" else val


def divergence_fast(reg: RegularizedSystem, x: float, v: float) -> float:
    """Divergence of the fast-time field at (x, v)."""
    eps = reg.epsilon
    y = eps * v
    ph = reg.phi.value(v)
    dph = reg.phi.d1(v)
    jx = lambda w: eval_jet(reg.X, (x, y), w)
    jy = lambda w: eval_jet(reg.Y, (x, y), w)
    d_x = eps * ((jx("c1_x") + jy("c1_x")) + ph * (jx("c1_x") - jy("c1_x")))
    x2 = reg.X.c2(x, y)
    y2 = reg.Y.c2(x, y)
    d_v = eps * ((jx("c2_y") + jy("c2_y")) + ph * (jx("c2_y") - jy("c2_y"))) \
        + dph * (x2 - y2)
    return d_x + d_v


@dataclass
class OrbitCertificate:
    section_point: tuple[float, float]
    period: float
    stability: str
    floquet_log: float


def _return_state(reg: RegularizedSystem, x_sec: float, v_start: float, v_min: float,
                  t_max: float, with_divergence: bool = False):
    """First return to the section {x = x_sec} crossed the same way as the
    departure; the caller screens v > v_min."""
    eps = reg.epsilon

    def rhs(t, y):
        f1, f2 = reg.F(y[0], y[1])
        out = [eps * f1, f2]
        if with_divergence:
            out.append(divergence_fast(reg, y[0], y[1]))
        return out

    d0 = rhs(0.0, [x_sec, v_start, 0.0][:2 + with_divergence])
    if d0[0] == 0.0:
        raise NumericalError("section is tangent to the flow at the seed")
    direction = 1.0 if d0[0] > 0 else -1.0

    def cross(t, y):
        return y[0] - x_sec

    cross.terminal = True
    cross.direction = direction

    def escaped(t, y):
        return ESCAPE_FACTOR * BOX - max(abs(y[0]), abs(eps * y[1]))

    escaped.terminal = True

    dt = 1e-9
    y0 = [x_sec + dt * d0[0], v_start + dt * d0[1]]
    if with_divergence:
        y0.append(dt * d0[2])
    sol = solve_ivp(rhs, [0.0, t_max], y0, rtol=1e-10, atol=1e-12,
                    events=(cross, escaped), dense_output=False)
    if sol.t_events[0].size:
        t_ev = float(sol.t_events[0][0])
        y_ev = sol.y_events[0][0]
        if y_ev[1] > v_min:
            return t_ev, y_ev
        raise NoOrbitError(f"return crossed below the section cut at v={y_ev[1]:.4g}")
    if sol.t_events[1].size:
        raise EscapeError("orbit escaped the working box",
                          state=tuple(sol.y_events[1][0][:2]))
    raise NoOrbitError(f"no return to the section x={x_sec} within t={t_max}")


def find_periodic_orbit(reg: RegularizedSystem, seed_v0: float,
                        bracket_width: float = 0.5,
                        t_max: Optional[float] = None) -> OrbitCertificate:
    """Shooting on the Poincare half-section through the critical point.

    The displacement v -> return(v) - v is bracketed around ``seed_v0``
    and closed with a hybrid bisection/secant solve; the Floquet log is
    the divergence integral over one period.
    """
    cp = find_critical_point(reg)
    x_sec, v_min = cp.x, cp.v
    if t_max is None:
        t_max = 80.0 / math.sqrt(reg.epsilon)

    def displacement(v):
        _, y = _return_state(reg, x_sec, v, v_min, t_max)
        return y[1] - v

    lo = max(v_min + 1e-6, seed_v0 - bracket_width)
    hi = seed_v0 + bracket_width
    grid = np.linspace(lo, hi, 7)
    vals = []
    for v in grid:
        try:
            vals.append(displacement(v))
        except (NoOrbitError, EscapeError):
            vals.append(np.nan)
    vals = np.array(vals)
    candidates = [(grid[i], grid[i + 1]) for i in range(len(grid) - 1)
                  if np.isfinite(vals[i]) and np.isfinite(vals[i + 1])
                  and vals[i] * vals[i + 1] < 0]
    if not candidates:
        raise NoOrbitError("displacement has no sign change over the seed bracket")
    bracket = min(candidates, key=lambda br: abs(0.5 * (br[0] + br[1]) - seed_v0))
    v_star = brentq(displacement, *bracket, xtol=1e-10)
    period, y_end = _return_state(reg, x_sec, v_star, v_min, t_max, with_divergence=True)
    if abs(y_end[1] - v_star) > 1e-6:
        raise NumericalError("orbit closure residual too large")
    flog = float(y_end[2])
    return OrbitCertificate(section_point=(x_sec, v_star), period=float(period),
                            stability=ATTRACTING if flog < 0 else REPELLING,
                            floquet_log=flog)


def orbit_band_crossing_x(reg: RegularizedSystem, cert: OrbitCertificate) -> float:
    """x-position where the certified orbit crosses v = +1 going upward."""
    x_sec, v_star = cert.section_point
    traj = integrate(reg, (x_sec, v_star), cert.period * 1.05)
    ups = [e for e in traj.events if e.which == "v=+1" and e.direction > 0]
    if not ups:
        raise NoOrbitError("orbit does not cross v = +1 upward")
    return ups[0].x


def fixed_alpha_limit(family: AlphaFamily, phi, alpha: float,
                      eps_seq: Sequence[float]) -> list[tuple[float, float, float]]:
    """Orbit crossings of v = 1 for fixed alpha and shrinking eps.

    Returns (eps, x_crossing, floquet_log) rows; the crossings converge
    linearly in eps to the nonsmooth crossing-cycle point F(alpha).
    """
    f_alpha = unfolding_return_fixed_point(family, alpha)
    if f_alpha is None:
        raise NoOrbitError(f"no crossing cycle at alpha={alpha}")
    rows = []
    for eps in eps_seq:
        reg = RegularizedSystem(family, phi, alpha, eps)
        # the upper arc of the crossing cycle reaches heights O(alpha^2)/eps
        seed = 0.6 * abs(f_alpha) ** 2 / eps
        found = None
        for v_seed in (seed, 1.6 * seed, 0.5 * seed):
            try:
                found = find_periodic_orbit(reg, v_seed, bracket_width=0.9 * v_seed)
                break
            except (NoOrbitError, EscapeError):
                continue
        if found is None:
            raise NoOrbitError(f"no periodic orbit located at eps={eps}")
        rows.append((eps, orbit_band_crossing_x(reg, found), found.floquet_log))
    return rows


def way_in_way_out(family: AlphaFamily, phi, x: float) -> float:
    """Divergence integral R(x) along the canard segment.

    R(x) = -int_{phi_Y(x)}^{x} phi'(m0(s)) (X2-Y2)^2 / (2 det Z)(s, 0) ds,
    with the lower endpoint the invisible-fold return of Y.  The integrand
    has a removable zero at s = 0.
    """
    phi = get_transition(phi)
    X, Y = family.pair(0.0)
    pair = FilippovPair(X, Y)
    reg0 = RegularizedSystem(family, phi, 0.0, 1e-6)
    if x == 0.0:
        return 0.0
    lower = half_return_numeric(Y, x)

    detx0 = pair.det_x(0.0, 0.0)
    p = eval_jet(X, (0.0, 0.0), "c2_x")
    q = eval_jet(Y, (0.0, 0.0), "c2_x")
    target = (p + q) / (q - p)
    vbar = phi.inverse(target)

    def integrand(s_arr):
        out = []
        for s in np.atleast_1d(s_arr):
            if abs(s) < 1e-8:
                out.append(phi.d1(vbar) * (p - q) ** 2 * s / (2.0 * detx0))
                continue
            m0 = m0_alpha_eval(reg0, s)
            x2 = X.c2(s, 0.0)
            y2 = Y.c2(s, 0.0)
            out.append(phi.d1(m0) * (x2 - y2) ** 2 / (2.0 * pair.det(s, 0.0)))
        return np.array(out)

    total = 0.0
    pieces = sorted({lower, 0.0, x})
    for a, b in zip(pieces[:-1], pieces[1:]):
        mid = 0.5 * (a + b)
        half = 0.5 * (b - a)
        nodes = mid + half * _GL_NODES
        total += half * float(np.dot(_GL_WEIGHTS, integrand(nodes)))
    return -total


def B_coefficient(family: AlphaFamily, phi) -> float:
    """Leading cubic coefficient sign quantity of R(x).

    Negative B means the big orbit born at the canard explosion is stable.
    """
    phi = get_transition(phi)
    X, Y = family.pair(0.0)
    pair = FilippovPair(X, Y)
    o = (0.0, 0.0)
    p = eval_jet(X, o, "c2_x")
    q = eval_jet(Y, o, "c2_x")
    h = eval_jet(X, o, "c2_xx")
    k = eval_jet(Y, o, "c2_xx")
    detx = pair.det_x(*o)
    detxx = pair.det_xx0()
    target = (p + q) / (q - p)
    vbar = phi.inverse(target)
    from .filippov import beta_coefficient

    beta_y = beta_coefficient(Y)
    term1 = phi.d1(vbar) * (3.0 * beta_y + 2.0 * ((h - k) / (p - q) - detxx / (2.0 * detx)))
    term2 = (2.0 * phi.d2(vbar) / phi.d1(vbar)) * (h * q - k * p) / (q - p) ** 2
    return term1 + term2


def big_orbit_side(family: AlphaFamily, phi, tol: float = 1e-6) -> str:
    """Which side of the canard curve carries the big periodic orbit."""
    b = B_coefficient(family, phi)
    if abs(b) < tol:
        raise IndeterminateError(f"|B| = {abs(b):.2g} below resolution")
    return RIGHT_OF_C if b < 0 else LEFT_OF_C

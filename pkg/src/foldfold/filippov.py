"""Switching-line analysis of a planar Filippov pair near a fold-fold.

Covers the region decomposition of the discontinuity line, the sliding
vector field and its pseudo-equilibria, fold visibility, the quadratic
return-map coefficients around invisible folds, and the intrinsic
quantities of the fold-fold unfolding (tangency positions, versality
margin, crossing-cycle fixed point).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import (DegenerateError, DomainError, NoReturnError,
                     NumericalError)
from .fields import AlphaFamily, PlanarField, eval_jet

TANGENCY_TOL = 1e-10

CROSSING = "crossing"
SLIDING = "sliding"
ESCAPING = "escaping"
TANGENCY_X = "tangency-X"
TANGENCY_Y = "tangency-Y"
FOLD_FOLD = "fold-fold"

VISIBLE = "visible"
INVISIBLE = "invisible"

PSEUDO_NODE = "pseudo-node"
PSEUDO_SADDLE = "pseudo-saddle"


@dataclass
class FilippovPair:
    """The two smooth fields of a Filippov system, X above and Y below y=0."""

    X: PlanarField
    Y: PlanarField

    def det(self, x: float, y: float) -> float:
        x1, x2 = self.X.eval(x, y)
        y1, y2 = self.Y.eval(x, y)
        return x1 * y2 - x2 * y1

    def det_x(self, x: float, y: float) -> float:
        x1, x2 = self.X.eval(x, y)
        y1, y2 = self.Y.eval(x, y)
        return (eval_jet(self.X, (x, y), "c1_x") * y2
                + x1 * eval_jet(self.Y, (x, y), "c2_x")
                - eval_jet(self.X, (x, y), "c2_x") * y1
                - x2 * eval_jet(self.Y, (x, y), "c1_x"))

    def det_y(self, x: float, y: float) -> float:
        x1, x2 = self.X.eval(x, y)
        y1, y2 = self.Y.eval(x, y)
        return (eval_jet(self.X, (x, y), "c1_y") * y2
                + x1 * eval_jet(self.Y, (x, y), "c2_y")
                - eval_jet(self.X, (x, y), "c2_y") * y1
                - x2 * eval_jet(self.Y, (x, y), "c1_y"))

    def det_xx0(self) -> float:
        """Second x-derivative of det along y=0 at the origin (fold-fold form)."""
        jx = lambda w: eval_jet(self.X, (0.0, 0.0), w)
        jy = lambda w: eval_jet(self.Y, (0.0, 0.0), w)
        x1 = self.X.c1(0.0, 0.0)
        y1 = self.Y.c1(0.0, 0.0)
        return (2 * jx("c1_x") * jy("c2_x") + x1 * jy("c2_xx")
                - jx("c2_xx") * y1 - 2 * jx("c2_x") * jy("c1_x"))


def classify_sigma(pair: FilippovPair, x: float, tol: float = TANGENCY_TOL) -> str:
    """Region of the switching line at (x, 0): crossing/sliding/escaping/tangency."""
    x2 = pair.X.c2(x, 0.0)
    y2 = pair.Y.c2(x, 0.0)
    tx, ty = abs(x2) <= tol, abs(y2) <= tol
    if tx and ty:
        return FOLD_FOLD
    if tx:
        return TANGENCY_X
    if ty:
        return TANGENCY_Y
    if x2 * y2 > tol * tol:
        return CROSSING
    if x2 < -tol and y2 > tol:
        return SLIDING
    return ESCAPING


def sliding_value(pair: FilippovPair, x: float) -> float:
    """Sliding field Zs(x); at a fold-fold the L'Hopital extension gamma."""
    x2 = pair.X.c2(x, 0.0)
    y2 = pair.Y.c2(x, 0.0)
    if abs(x2) <= TANGENCY_TOL and abs(y2) <= TANGENCY_TOL:
        denom = (eval_jet(pair.Y, (x, 0.0), "c2_x") - eval_jet(pair.X, (x, 0.0), "c2_x"))
        if denom == 0.0:
            raise DegenerateError("Y2_x - X2_x vanishes at the fold-fold")
        return pair.det_x(x, 0.0) / denom
    region = classify_sigma(pair, x)
    if region == CROSSING:
        raise DomainError(f"x={x} lies in the crossing region")
    denom = y2 - x2
    if denom == 0.0:
        raise DegenerateError(f"Y2 - X2 vanishes at x={x}")
    x1 = pair.X.c1(x, 0.0)
    y1 = pair.Y.c1(x, 0.0)
    return (y2 * x1 - x2 * y1) / denom


@dataclass
class PseudoEquilibrium:
    x: float
    slope: float
    region: str
    kind: str


def sliding_slope(pair: FilippovPair, x_p: float) -> PseudoEquilibrium:
    """Slope of the sliding field at a pseudo-equilibrium and its type."""
    if abs(pair.det(x_p, 0.0)) > 1e-10:
        raise DomainError(f"det Z({x_p}, 0) != 0: not a pseudo-equilibrium")
    x2 = pair.X.c2(x_p, 0.0)
    y2 = pair.Y.c2(x_p, 0.0)
    denom = y2 - x2
    if abs(denom) < 1e-14:
        raise DegenerateError("Y2 = X2 at the pseudo-equilibrium")
    slope = pair.det_x(x_p, 0.0) / denom
    region = classify_sigma(pair, x_p)
    if region not in (SLIDING, ESCAPING):
        raise DomainError(f"pseudo-equilibrium at x={x_p} not in a sliding/escaping region")
    if (slope < 0 and region == SLIDING) or (slope > 0 and region == ESCAPING):
        kind = PSEUDO_NODE
    else:
        kind = PSEUDO_SADDLE
    return PseudoEquilibrium(x=x_p, slope=slope, region=region, kind=kind)


def visibility(field: PlanarField, p0=(0.0, 0.0), side: str = "X") -> str:
    """Fold visibility at p0: sign of c2_x * c1, reversed convention for Y."""
    lie2 = eval_jet(field, p0, "c2_x") * field.c1(*p0)
    if lie2 == 0.0:
        raise DomainError(f"{side} has a degenerate tangency at {p0}")
    if side == "X":
        return VISIBLE if lie2 > 0 else INVISIBLE
    return VISIBLE if lie2 < 0 else INVISIBLE


def is_fold(field: PlanarField, p0, tol: float = 1e-8) -> bool:
    return abs(field.c2(*p0)) <= tol and eval_jet(field, p0, "c2_x") * field.c1(*p0) != 0.0


def beta_coefficient(field: PlanarField, p0=(0.0, 0.0)) -> float:
    """Quadratic coefficient of the fold return map at p0."""
    if not is_fold(field, p0):
        raise DomainError(f"{p0} is not a fold point of the field")
    c1 = field.c1(*p0)
    return (-eval_jet(field, p0, "c2_xx") / eval_jet(field, p0, "c2_x")
            + 2 * eval_jet(field, p0, "c1_x") / c1
            + 2 * eval_jet(field, p0, "c2_y") / c1) / 3.0


def half_return_numeric(field: PlanarField, x0: float, section_height: float = 0.0,
                        t_max: float = 50.0, box: float = 10.0) -> float:
    """Landing x of the orbit through (x0, section_height) back on the section.

    The orbit arc is time-direction independent: if the forward flow leaves
    the section and never comes back, the backward arc is used instead.
    """
    h = section_height

    def attempt(sign: float) -> Optional[float]:
        def rhs(t, y):
            c1, c2 = field.eval(y[0], y[1])
            return (sign * c1, sign * c2)

        d = rhs(0.0, (x0, h))
        if d[1] == 0.0:
            return None

        def hit(t, y):
            return y[1] - h

        hit.terminal = True
        hit.direction = 1.0 if d[1] < 0 else -1.0

        def escaped(t, y):
            return box - max(abs(y[0]), abs(y[1]))

        escaped.terminal = True

        dt = 1e-10
        y_start = [x0 + dt * d[0], h + dt * d[1]]
        sol = solve_ivp(rhs, [0.0, t_max], y_start, rtol=1e-12, atol=1e-14,
                        events=(hit, escaped), max_step=1.0)
        if sol.t_events[0].size:
            return float(sol.y_events[0][0][0])
        return None

    for sign in (1.0, -1.0):
        landing = attempt(sign)
        if landing is not None:
            return landing
    raise NoReturnError(f"orbit through ({x0}, {h}) never returned to the section")


def _origin_jets(pair: FilippovPair) -> dict[str, float]:
    o = (0.0, 0.0)
    return {
        "X1": pair.X.c1(*o), "Y1": pair.Y.c1(*o),
        "X2": pair.X.c2(*o), "Y2": pair.Y.c2(*o),
        "X2_x": eval_jet(pair.X, o, "c2_x"), "Y2_x": eval_jet(pair.Y, o, "c2_x"),
    }


def fold_fold_at_origin(pair: FilippovPair, tol: float = 1e-10) -> bool:
    j = _origin_jets(pair)
    return (abs(j["X2"]) <= tol and abs(j["Y2"]) <= tol
            and j["X2_x"] * j["X1"] != 0.0 and j["Y2_x"] * j["Y1"] != 0.0)


def mu_Z(pair: FilippovPair) -> float:
    """Return-map coefficient of an invisible fold-fold at the origin.

    Composition order follows the horizontal direction of X at the origin,
    so the coefficient is beta_Y - beta_X when X1(0) > 0 and the mirror
    combination otherwise.
    """
    if not fold_fold_at_origin(pair):
        raise DomainError("origin is not a fold-fold point")
    if visibility(pair.X, side="X") != INVISIBLE or visibility(pair.Y, side="Y") != INVISIBLE:
        raise DomainError("mu_Z is defined for the invisible-invisible fold-fold")
    bx = beta_coefficient(pair.X)
    by = beta_coefficient(pair.Y)
    return by - bx if pair.X.c1(0.0, 0.0) > 0 else bx - by


@dataclass
class FoldFoldDiagnosis:
    visX: str
    visY: str
    sign_X1Y1: int
    detZx0: float
    gamma: Optional[float]
    muZ: Optional[float]
    betaX: float
    betaY: float
    versal_margin: float
    case: str

    def as_dict(self) -> dict:
        return {
            "visX": self.visX, "visY": self.visY, "sign_X1Y1": self.sign_X1Y1,
            "detZx0": self.detZx0, "gamma": self.gamma, "muZ": self.muZ,
            "betaX": self.betaX, "betaY": self.betaY,
            "versal_margin": self.versal_margin, "case": self.case,
        }


def diagnose(family: AlphaFamily) -> FoldFoldDiagnosis:
    """Classify the fold-fold of the family at alpha = 0."""
    pair = FilippovPair(*family.pair(0.0))
    if not fold_fold_at_origin(pair):
        raise DomainError("family has no fold-fold at the origin for alpha=0")
    vx = visibility(pair.X, side="X")
    vy = visibility(pair.Y, side="Y")
    x1y1 = pair.X.c1(0.0, 0.0) * pair.Y.c1(0.0, 0.0)
    detx = pair.det_x(0.0, 0.0)

    # The sliding field extends to the origin only when Sigma near 0 is
    # sliding/escaping (same visibility and X1*Y1 > 0, or opposite and < 0).
    sliding_side = (vx == vy and x1y1 > 0) or (vx != vy and x1y1 < 0)
    gamma = sliding_value(pair, 0.0) if sliding_side else None

    muz = None
    if vx == INVISIBLE and vy == INVISIBLE:
        muz = mu_Z(pair)
    bx = beta_coefficient(pair.X)
    by = beta_coefficient(pair.Y)
    margin = check_versal(family)

    if vx == VISIBLE and vy == VISIBLE:
        case = "A"
    elif vx == INVISIBLE and vy == INVISIBLE:
        case = "B"
    else:
        case = "C"
    return FoldFoldDiagnosis(visX=vx, visY=vy, sign_X1Y1=int(math.copysign(1, x1y1)),
                             detZx0=detx, gamma=gamma, muZ=muz, betaX=bx, betaY=by,
                             versal_margin=margin, case=case)


def unfolding_tangencies(family: AlphaFamily, alpha: float,
                         max_iter: int = 60) -> tuple[float, float]:
    """Newton-refined fold positions of X^alpha and Y^alpha on y = 0."""
    from .fields import alpha_derivative

    X, Y = family.pair(alpha)
    X0, Y0 = family.pair(0.0)
    xt2 = alpha_derivative(family, "X2", (0.0, 0.0))
    yt2 = alpha_derivative(family, "Y2", (0.0, 0.0))
    seeds = (-(xt2 / eval_jet(X0, (0.0, 0.0), "c2_x")) * alpha,
             -(yt2 / eval_jet(Y0, (0.0, 0.0), "c2_x")) * alpha)
    roots = []
    for fld, seed in ((X, seeds[0]), (Y, seeds[1])):
        x = seed
        for _ in range(max_iter):
            g = fld.c2(x, 0.0)
            dg = eval_jet(fld, (x, 0.0), "c2_x")
            if dg == 0.0:
                raise NumericalError(f"tangency Newton stalled at x={x}")
            step = g / dg
            x -= step
            if abs(step) < 1e-14:
                break
        else:
            raise NumericalError(f"tangency Newton did not converge near {seed}")
        if abs(x - seed) > 0.2:
            raise NumericalError(f"tangency Newton diverged from seed {seed}")
        roots.append(x)
    return roots[0], roots[1]


def check_versal(family: AlphaFamily) -> float:
    """Versality margin Yt2/Y2_x - Xt2/X2_x at the origin (versal iff != 0)."""
    from .fields import alpha_derivative

    X0, Y0 = family.pair(0.0)
    xt2 = alpha_derivative(family, "X2", (0.0, 0.0))
    yt2 = alpha_derivative(family, "Y2", (0.0, 0.0))
    return yt2 / eval_jet(Y0, (0.0, 0.0), "c2_x") - xt2 / eval_jet(X0, (0.0, 0.0), "c2_x")


def _numeric_return_map(family: AlphaFamily, alpha: float):
    """Compose the two half-return arcs of the unfolded pair on y = 0."""
    X, Y = family.pair(alpha)
    first, second = (X, Y) if X.c1(0.0, 0.0) > 0 else (Y, X)

    def phi(x: float) -> float:
        mid = half_return_numeric(first, x)
        return half_return_numeric(second, mid)

    return phi


def unfolding_return_fixed_point(family: AlphaFamily, alpha: float) -> Optional[float]:
    """Crossing-cycle fixed point of the unfolded return map, if one exists.

    Returns the leading expression -sqrt(2*(T_X - T_Y)/mu_Z) refined by root
    finding on the numerically composed map, or None on the no-cycle side.
    """
    pair = FilippovPair(*family.pair(0.0))
    muz = mu_Z(pair)
    if muz == 0.0:
        raise DomainError("mu_Z = 0: unfolding return map is degenerate")
    tx, ty = unfolding_tangencies(family, alpha)
    # cycle side: the quadratic and constant terms of the displacement must
    # have opposite signs; orientation enters through the direction of X
    orient = 1.0 if pair.X.c1(0.0, 0.0) > 0 else -1.0
    lead_sq = 2.0 * orient * (tx - ty) / muz
    if lead_sq <= 0.0:
        return None
    lead = -math.sqrt(lead_sq)
    phi = _numeric_return_map(family, alpha)
    f = lambda x: phi(x) - x
    lo, hi = 1.6 * lead, 0.45 * lead
    try:
        flo, fhi = f(lo), f(hi)
        if flo * fhi > 0:
            lo = 2.5 * lead
            flo = f(lo)
        if flo * fhi > 0:
            raise NumericalError(f"could not bracket the cycle near {lead}")
        return brentq(f, lo, hi, xtol=1e-12)
    except (NoReturnError, ValueError) as exc:
        raise NumericalError(f"return-map root finding failed near {lead}: {exc}") from exc

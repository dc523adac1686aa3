"""Transition functions and the smooth regularization of a Filippov pair.

The regularized field replaces the jump across y = 0 by a monotone
transition phi(y/eps) inside the band |y| <= eps.  In slow coordinates
(x, v) with y = eps*v the band becomes |v| <= 1 and the field splits into
the slow components F = (F1, F2).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, NumericalError
from .fields import AlphaFamily, PlanarField, eval_jet


def _polyval_odd(coeffs: dict[int, float], v):
    out = np.zeros_like(np.asarray(v, dtype=float))
    for power, c in coeffs.items():
        out = out + c * np.asarray(v, dtype=float) ** power
    return out


@dataclass
class TransitionFunction:
    """Monotone transition on (-1, 1), clamped to sign(v) outside.

    ``coeffs`` maps odd powers to coefficients.  ``d1`` and ``d2`` vanish
    for |v| > 1; on the closed band they are taken from the interior, so
    the linear member has d1(+-1) = 1.
    """

    label: str
    coeffs: dict[int, float]
    odd: bool = True

    def __post_init__(self):
        self._d1_coeffs = {p - 1: p * c for p, c in self.coeffs.items()}
        self._d2_coeffs = {p - 2: p * (p - 1) * c for p, c in self.coeffs.items() if p >= 2}

    def value(self, v):
        if isinstance(v, float) or isinstance(v, int):
            if v >= 1.0:
                return 1.0
            if v <= -1.0:
                return -1.0
            return sum(c * v**p for p, c in self.coeffs.items())
        v = np.asarray(v, dtype=float)
        inner = _polyval_odd(self.coeffs, np.clip(v, -1.0, 1.0))
        out = np.where(v >= 1.0, 1.0, np.where(v <= -1.0, -1.0, inner))
        return out if out.ndim else float(out)

    def d1(self, v):
        if isinstance(v, float) or isinstance(v, int):
            if abs(v) > 1.0:
                return 0.0
            return sum(c * v**p if p else c for p, c in self._d1_coeffs.items())
        v = np.asarray(v, dtype=float)
        inner = _polyval_odd(self._d1_coeffs, np.clip(v, -1.0, 1.0))
        out = np.where(np.abs(v) > 1.0, 0.0, inner)
        return out if out.ndim else float(out)

    def d2(self, v):
        if isinstance(v, float) or isinstance(v, int):
            if abs(v) > 1.0:
                return 0.0
            return sum(c * v**p if p else c for p, c in self._d2_coeffs.items())
        v = np.asarray(v, dtype=float)
        inner = _polyval_odd(self._d2_coeffs, np.clip(v, -1.0, 1.0))
        out = np.where(np.abs(v) > 1.0, 0.0, inner)
        return out if out.ndim else float(out)

    def inverse(self, target: float, tol: float = 1e-15) -> float:
        """Invert on [-1, 1] by bisection (the value is strictly increasing)."""
        if not -1.0 <= target <= 1.0:
            raise DomainError(f"transition value {target} outside [-1, 1]")
        lo, hi = -1.0, 1.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.value(mid) < target:
                lo = mid
            else:
                hi = mid
            if hi - lo < tol:
                break
        return 0.5 * (lo + hi)

    def validate(self) -> None:
        inner_top = sum(self.coeffs.values())   # polynomial value at v = 1
        if abs(inner_top - 1.0) > 1e-12:
            raise DomainError(f"transition {self.label!r}: value(+-1) != +-1")
        grid = np.arange(-1.0 + 1e-3, 1.0, 1e-3)
        if np.any(self.d1(grid) <= 0.0):
            raise DomainError(f"transition {self.label!r}: not strictly increasing")


def from_odd_coefficients(label: str, odd_coeffs: Sequence[float]) -> TransitionFunction:
    """Build a transition from coefficients of v, v^3, v^5, ... and validate."""
    coeffs = {2 * i + 1: float(c) for i, c in enumerate(odd_coeffs) if c != 0.0}
    tf = TransitionFunction(label=label, coeffs=coeffs)
    tf.validate()
    return tf


# Catalog.  The quintic printed for the visible-invisible supercritical
# example carries a sign typo upstream (as printed it violates
# value(1) = 1); the corrected coefficients coincide with the plain
# quintic, so "quintic-b" is kept as a scenario-pairing alias.
CATALOG: dict[str, TransitionFunction] = {
    "linear": TransitionFunction("linear", {1: 1.0}),
    "cubic": TransitionFunction("cubic", {1: 1.5, 3: -0.5}),
    "quintic": TransitionFunction("quintic", {1: 0.5, 3: 1.5, 5: -1.0}),
    "quintic-b": TransitionFunction("quintic-b", {1: 0.5, 3: 1.5, 5: -1.0}),
    "septic": TransitionFunction("septic", {1: 1.0, 3: -2.0, 5: 4.5, 7: -2.5}),
}


def get_transition(name_or_coeffs) -> TransitionFunction:
    if isinstance(name_or_coeffs, TransitionFunction):
        return name_or_coeffs
    if isinstance(name_or_coeffs, str):
        try:
            return CATALOG[name_or_coeffs]
        except KeyError:
            raise DomainError(f"unknown transition function {name_or_coeffs!r}") from None
    return from_odd_coefficients("custom", name_or_coeffs)


@dataclass
class RegularizedSystem:
    """A family member together with its transition and (alpha, eps)."""

    family: AlphaFamily
    phi: TransitionFunction
    alpha: float
    epsilon: float
    X: PlanarField = field(init=False)
    Y: PlanarField = field(init=False)

    def __post_init__(self):
        if self.epsilon <= 0.0:
            raise DomainError("epsilon must be positive")
        self.phi = get_transition(self.phi)
        self.X, self.Y = self.family.pair(self.alpha)

    def G(self, x: float, y: float) -> tuple[float, float]:
        """Doubled regularized field in the original (x, y) plane."""
        ph = self.phi.value(y / self.epsilon)
        x1, x2 = self.X.eval(x, y)
        y1, y2 = self.Y.eval(x, y)
        return ((x1 + y1) + ph * (x1 - y1), (x2 + y2) + ph * (x2 - y2))

    def F(self, x: float, v: float) -> tuple[float, float]:
        """Slow components at (x, v): the same field evaluated at y = eps*v."""
        y = self.epsilon * v
        ph = self.phi.value(v)
        x1, x2 = self.X.eval(x, y)
        y1, y2 = self.Y.eval(x, y)
        return ((x1 + y1) + ph * (x1 - y1), (x2 + y2) + ph * (x2 - y2))

    def F_jacobian(self, x: float, v: float) -> np.ndarray:
        """d(F1,F2)/d(x,v) from the exact jets; used by Newton solvers."""
        y = self.epsilon * v
        ph = self.phi.value(v)
        dph = self.phi.d1(v)
        jx = lambda w: eval_jet(self.X, (x, y), w)
        jy = lambda w: eval_jet(self.Y, (x, y), w)
        x1, x2 = self.X.eval(x, y)
        y1, y2 = self.Y.eval(x, y)
        f1x = (jx("c1_x") + jy("c1_x")) + ph * (jx("c1_x") - jy("c1_x"))
        f2x = (jx("c2_x") + jy("c2_x")) + ph * (jx("c2_x") - jy("c2_x"))
        f1v = self.epsilon * ((jx("c1_y") + jy("c1_y")) + ph * (jx("c1_y") - jy("c1_y"))) \
            + dph * (x1 - y1)
        f2v = self.epsilon * ((jx("c2_y") + jy("c2_y")) + ph * (jx("c2_y") - jy("c2_y"))) \
            + dph * (x2 - y2)
        return np.array([[f1x, f1v], [f2x, f2v]])

    def G_jacobian(self, x: float, y: float) -> np.ndarray:
        """Jacobian of the doubled field G at (x, y)."""
        eps = self.epsilon
        ph = self.phi.value(y / eps)
        dph = self.phi.d1(y / eps) / eps
        jx = lambda w: eval_jet(self.X, (x, y), w)
        jy = lambda w: eval_jet(self.Y, (x, y), w)
        x1, x2 = self.X.eval(x, y)
        y1, y2 = self.Y.eval(x, y)
        g1x = (jx("c1_x") + jy("c1_x")) + ph * (jx("c1_x") - jy("c1_x"))
        g1y = (jx("c1_y") + jy("c1_y")) + ph * (jx("c1_y") - jy("c1_y")) + dph * (x1 - y1)
        g2x = (jx("c2_x") + jy("c2_x")) + ph * (jx("c2_x") - jy("c2_x"))
        g2y = (jx("c2_y") + jy("c2_y")) + ph * (jx("c2_y") - jy("c2_y")) + dph * (x2 - y2)
        return np.array([[g1x, g1y], [g2x, g2y]])


def tangency_eps(reg: RegularizedSystem, max_iter: int = 60) -> tuple[float, float]:
    """Newton-refined fold positions of X on v = 1 and Y on v = -1.

    Seeds come from the first-order expansions in (alpha, eps); Newton then
    solves X2(x, eps) = 0 and Y2(x, -eps) = 0 exactly.
    """
    from .fields import alpha_derivative

    eps, alpha = reg.epsilon, reg.alpha
    fam = reg.family
    X0, Y0 = fam.pair(0.0)
    xt2 = alpha_derivative(fam, "X2", (0.0, 0.0))
    yt2 = alpha_derivative(fam, "Y2", (0.0, 0.0))
    x2x = eval_jet(X0, (0.0, 0.0), "c2_x")
    y2x = eval_jet(Y0, (0.0, 0.0), "c2_x")
    x2y = eval_jet(X0, (0.0, 0.0), "c2_y")
    y2y = eval_jet(Y0, (0.0, 0.0), "c2_y")
    seeds = (-(xt2 / x2x) * alpha - (x2y / x2x) * eps,
             -(yt2 / y2x) * alpha - (y2y / y2x) * eps)

    out = []
    for fld, y_level, seed in ((reg.X, eps, seeds[0]), (reg.Y, -eps, seeds[1])):
        x = seed
        for _ in range(max_iter):
            g = fld.c2(x, y_level)
            dg = eval_jet(fld, (x, y_level), "c2_x")
            if dg == 0.0:
                raise NumericalError(f"Newton stalled near x={x}")
            step = g / dg
            x -= step
            if abs(step) < 1e-14:
                break
        else:
            raise NumericalError(f"Newton did not converge near x={x}")
        if abs(x - seed) > 0.2:
            raise NumericalError(f"Newton diverged from seed {seed} to {x}")
        out.append(x)
    return out[0], out[1]

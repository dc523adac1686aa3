"""Planar vector fields with exact or finite-difference jets.

Fields are either built from polynomial coefficient tables (exact partial
derivatives, used by every built-in scenario) or wrapped around arbitrary
callables, in which case the second-order jet is recovered by central
finite differences.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from .errors import DomainError, NumericalError

_EPS = np.finfo(float).eps
_H1 = _EPS ** (1.0 / 3.0)       # first partials, central difference
_H2 = _EPS ** (1.0 / 6.0)       # pure second partials, five-point stencil
_HM = _EPS ** 0.25              # mixed second partial, cross stencil

JET_SELECTORS = ("c1_x", "c1_y", "c2_x", "c2_y", "c2_xx", "c2_xy", "c2_yy", "c1_xx")

_TERM_RE = re.compile(r"^([xya])(?:\^(\d+))?$")


def parse_term(term: str) -> tuple[int, int, int]:
    """Parse a monomial key like ``"x^2 y a"`` into exponents (i, j, k).

    The empty string and ``"1"`` denote the constant term.
    """
    term = term.strip()
    if term in ("", "1"):
        return (0, 0, 0)
    exps = {"x": 0, "y": 0, "a": 0}
    for factor in term.split():
        m = _TERM_RE.match(factor)
        if m is None:
            raise ValueError(f"bad monomial factor {factor!r} in term {term!r}")
        var, power = m.group(1), m.group(2)
        exps[var] += int(power) if power else 1
    return (exps["x"], exps["y"], exps["a"])


class Poly3:
    """Polynomial in (x, y, a) stored as {(i, j, k): coefficient}."""

    def __init__(self, coeffs: Mapping[tuple[int, int, int], float]):
        self.coeffs = {k: float(v) for k, v in coeffs.items() if v != 0.0}

    @classmethod
    def from_table(cls, table: Mapping[str, float]) -> "Poly3":
        coeffs: dict[tuple[int, int, int], float] = {}
        for term, c in table.items():
            key = parse_term(term)
            coeffs[key] = coeffs.get(key, 0.0) + float(c)
        return cls(coeffs)

    def __call__(self, x: float, y: float, a: float) -> float:
        total = 0.0
        for (i, j, k), c in self.coeffs.items():
            total += c * x**i * y**j * a**k
        return total

    def diff(self, var: str) -> "Poly3":
        pos = {"x": 0, "y": 1, "a": 2}[var]
        out: dict[tuple[int, int, int], float] = {}
        for key, c in self.coeffs.items():
            n = key[pos]
            if n == 0:
                continue
            new = list(key)
            new[pos] = n - 1
            out[tuple(new)] = out.get(tuple(new), 0.0) + c * n
        return Poly3(out)

    def at_alpha(self, alpha: float) -> "Poly2":
        out: dict[tuple[int, int], float] = {}
        for (i, j, k), c in self.coeffs.items():
            out[(i, j)] = out.get((i, j), 0.0) + c * alpha**k
        return Poly2(out)

    def alpha_slope(self) -> "Poly2":
        """d/da at a=0: keep the k=1 coefficients."""
        out = {(i, j): c for (i, j, k), c in self.coeffs.items() if k == 1}
        return Poly2(out)


class Poly2:
    """Polynomial in (x, y) stored as {(i, j): coefficient}."""

    def __init__(self, coeffs: Mapping[tuple[int, int], float]):
        self.coeffs = {k: float(v) for k, v in coeffs.items() if v != 0.0}

    def __call__(self, x, y):
        total = 0.0
        for (i, j), c in self.coeffs.items():
            total = total + c * x**i * y**j
        return total

    def diff(self, var: str) -> "Poly2":
        pos = {"x": 0, "y": 1}[var]
        out: dict[tuple[int, int], float] = {}
        for key, c in self.coeffs.items():
            n = key[pos]
            if n == 0:
                continue
            new = list(key)
            new[pos] = n - 1
            out[tuple(new)] = out.get(tuple(new), 0.0) + c * n
        return Poly2(out)


@dataclass
class PlanarField:
    """A smooth planar field with partial derivatives up to second order.

    ``jets`` maps selectors from :data:`JET_SELECTORS` to (x, y) callables.
    When absent, :func:`eval_jet` falls back to central finite differences
    of ``eval``.
    """

    eval: Callable[[float, float], tuple[float, float]]
    jets: Optional[dict[str, Callable[[float, float], float]]] = None

    def c1(self, x, y):
        return self.eval(x, y)[0]

    def c2(self, x, y):
        return self.eval(x, y)[1]

    @classmethod
    def from_polys(cls, p1: Poly2, p2: Poly2) -> "PlanarField":
        jets = {
            "c1_x": p1.diff("x"),
            "c1_y": p1.diff("y"),
            "c2_x": p2.diff("x"),
            "c2_y": p2.diff("y"),
            "c2_xx": p2.diff("x").diff("x"),
            "c2_xy": p2.diff("x").diff("y"),
            "c2_yy": p2.diff("y").diff("y"),
            "c1_xx": p1.diff("x").diff("x"),
        }
        return cls(eval=lambda x, y: (p1(x, y), p2(x, y)), jets=jets)

    @classmethod
    def from_callable(cls, fn: Callable[[float, float], tuple[float, float]]) -> "PlanarField":
        return cls(eval=fn, jets=None)


def _component(field: PlanarField, idx: int, x: float, y: float) -> float:
    return field.eval(x, y)[idx]


def eval_jet(f: PlanarField, p: tuple[float, float], which: str) -> float:
    """Evaluate one partial derivative of the field at ``p``.

    Uses the exact jet when the field carries one, otherwise a central
    finite difference: three-point for first partials (step scaled by
    cbrt(machine eps)), five-point for pure second partials and a cross
    stencil for the mixed one.
    """
    if which not in JET_SELECTORS:
        raise ValueError(f"unknown jet selector {which!r}")
    x, y = p
    if f.jets is not None:
        val = float(f.jets[which](x, y))
        if not math.isfinite(val):
            raise NumericalError(f"non-finite jet {which} at {p}")
        return val

    comp = 0 if which.startswith("c1") else 1
    suffix = which.split("_")[1]
    g = lambda u, v: _component(f, comp, u, v)

    if suffix in ("x", "y"):
        coord = x if suffix == "x" else y
        h = max(1.0, abs(coord)) * _H1
        if suffix == "x":
            val = (g(x + h, y) - g(x - h, y)) / (2 * h)
        else:
            val = (g(x, y + h) - g(x, y - h)) / (2 * h)
    elif suffix in ("xx", "yy"):
        coord = x if suffix == "xx" else y
        h = max(1.0, abs(coord)) * _H2
        if suffix == "xx":
            val = (-g(x + 2 * h, y) + 16 * g(x + h, y) - 30 * g(x, y)
                   + 16 * g(x - h, y) - g(x - 2 * h, y)) / (12 * h * h)
        else:
            val = (-g(x, y + 2 * h) + 16 * g(x, y + h) - 30 * g(x, y)
                   + 16 * g(x, y - h) - g(x, y - 2 * h)) / (12 * h * h)
    else:  # xy
        h = max(1.0, abs(x), abs(y)) * _HM
        val = (g(x + h, y + h) - g(x + h, y - h)
               - g(x - h, y + h) + g(x - h, y - h)) / (4 * h * h)
    if not math.isfinite(val):
        raise NumericalError(f"non-finite finite-difference jet {which} at {p}")
    return val


@dataclass
class AlphaFamily:
    """An alpha-parameterized Filippov pair and its alpha-derivative at 0."""

    X_of_alpha: Callable[[float], PlanarField]
    Y_of_alpha: Callable[[float], PlanarField]
    xtilde: Optional[PlanarField] = None
    ytilde: Optional[PlanarField] = None

    def pair(self, alpha: float) -> tuple[PlanarField, PlanarField]:
        return self.X_of_alpha(alpha), self.Y_of_alpha(alpha)


def alpha_derivative(family: AlphaFamily, component: str, p: tuple[float, float]) -> float:
    """Second component of Xtilde/Ytilde at ``p`` (central difference fallback)."""
    if component not in ("X2", "Y2"):
        raise ValueError("component must be 'X2' or 'Y2'")
    tilde = family.xtilde if component == "X2" else family.ytilde
    if tilde is not None:
        return tilde.c2(*p)
    of_alpha = family.X_of_alpha if component == "X2" else family.Y_of_alpha
    h = 1e-5
    hi = of_alpha(h).c2(*p)
    lo = of_alpha(-h).c2(*p)
    val = (hi - lo) / (2 * h)
    if not math.isfinite(val):
        raise NumericalError(f"non-finite alpha derivative of {component} at {p}")
    return val


def family_from_tables(tables: Mapping[str, Mapping[str, float]]) -> AlphaFamily:
    """Build an :class:`AlphaFamily` from four polynomial coefficient tables.

    ``tables`` must contain keys ``X1, X2, Y1, Y2``; each value maps
    monomial strings over ``x, y, a`` (e.g. ``"x^2 y"``, ``"a"``) to real
    coefficients.
    """
    missing = {"X1", "X2", "Y1", "Y2"} - set(tables)
    if missing:
        raise DomainError(f"scenario tables missing components {sorted(missing)}")
    polys = {name: Poly3.from_table(tables[name]) for name in ("X1", "X2", "Y1", "Y2")}

    def X_of_alpha(alpha: float) -> PlanarField:
        return PlanarField.from_polys(polys["X1"].at_alpha(alpha), polys["X2"].at_alpha(alpha))

    def Y_of_alpha(alpha: float) -> PlanarField:
        return PlanarField.from_polys(polys["Y1"].at_alpha(alpha), polys["Y2"].at_alpha(alpha))

    xtilde = PlanarField.from_polys(polys["X1"].alpha_slope(), polys["X2"].alpha_slope())
    ytilde = PlanarField.from_polys(polys["Y1"].alpha_slope(), polys["Y2"].alpha_slope())
    return AlphaFamily(X_of_alpha, Y_of_alpha, xtilde, ytilde)

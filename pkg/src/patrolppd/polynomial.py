"""Univariate polynomials in the patrol parameter ``p``.

Every detection curve is a polynomial in ``p`` with real coefficients, stored
in ascending order (``coeffs[j]`` multiplies ``p**j``). Coefficients are
double precision by default; :class:`fractions.Fraction` coefficients are
accepted as well and are carried through the arithmetic unchanged, which is
what the exact-rational cross-check mode relies on.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Real
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "Poly",
    "ZeroPolynomial",
    "poly_eval",
    "poly_add",
    "poly_sub",
    "poly_mul",
    "poly_scale",
    "poly_derivative",
    "real_roots_open_unit",
]

ROOT_TOL = 1e-12


class ZeroPolynomial(ValueError):
    """Raised when roots are requested for the identically-zero polynomial."""


def _normalize(coeffs: Iterable) -> tuple:
    c = list(coeffs)
    if not c:
        return (0.0,)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c)


class Poly:
    """Immutable polynomial with ascending coefficients.

    >>> Poly([0, 1]) * Poly([1, -1])
    Poly([0.0, 1.0, -1.0])
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = (0.0,)):
        c = list(coeffs)
        for x in c:
            if not isinstance(x, Fraction) and not math.isfinite(x):
                raise ValueError(f"non-finite coefficient {x!r}")
        if any(isinstance(x, Fraction) for x in c):
            # exact mode: promote every entry (floats convert without rounding)
            c = [Fraction(x) for x in c]
        else:
            c = [float(x) for x in c]
        object.__setattr__(self, "_c", _normalize(c))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial reported as 0."""
        return len(self._c) - 1

    @property
    def is_zero(self) -> bool:
        return len(self._c) == 1 and self._c[0] == 0

    @property
    def is_exact(self) -> bool:
        return any(isinstance(x, Fraction) for x in self._c)

    def to_float(self) -> "Poly":
        return Poly([float(x) for x in self._c])

    def to_exact(self) -> "Poly":
        return Poly([Fraction(x) for x in self._c])

    def max_abs_coeff(self) -> float:
        return max(abs(float(x)) for x in self._c)

    def __call__(self, x):
        return poly_eval(self, x)

    def __add__(self, other):
        return poly_add(self, _as_poly(other))

    __radd__ = __add__

    def __sub__(self, other):
        return poly_sub(self, _as_poly(other))

    def __rsub__(self, other):
        return poly_sub(_as_poly(other), self)

    def __mul__(self, other):
        if isinstance(other, Poly):
            return poly_mul(self, other)
        return poly_scale(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return poly_scale(self, -1)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        if self.is_exact:
            return f"Poly([{', '.join(str(x) for x in self._c)}])"
        return f"Poly({list(self._c)!r})"

    def derivative(self) -> "Poly":
        return poly_derivative(self)

    def allclose(self, other: "Poly", atol: float = 1e-10) -> bool:
        """Coefficient-wise comparison after zero padding."""
        n = max(len(self._c), len(other._c))
        a = np.zeros(n)
        b = np.zeros(n)
        a[: len(self._c)] = [float(x) for x in self._c]
        b[: len(other._c)] = [float(x) for x in other._c]
        return bool(np.all(np.abs(a - b) <= atol))


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (Real, Fraction)):
        return Poly([x])
    return Poly(x)


def poly_eval(f: Poly, x):
    """Horner evaluation; ``x`` may be a scalar or a numpy array."""
    c = f.coeffs
    if f.is_exact and isinstance(x, (Fraction, int)):
        acc = Fraction(0)
        for a in reversed(c):
            acc = acc * x + a
        return acc
    acc = np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0
    for a in reversed(c):
        acc = acc * x + float(a)
    return acc


def poly_add(f: Poly, g: Poly) -> Poly:
    if f.is_exact != g.is_exact:
        f, g = f.to_exact(), g.to_exact()
    a, b = f.coeffs, g.coeffs
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for j, x in enumerate(b):
        out[j] = out[j] + x
    return Poly(out)


def poly_sub(f: Poly, g: Poly) -> Poly:
    return poly_add(f, poly_scale(g, -1))


def poly_mul(f: Poly, g: Poly) -> Poly:
    if f.is_exact or g.is_exact:
        # np.convolve drops to float64 on object arrays, so convolve by hand
        a, b = f.to_exact().coeffs, g.to_exact().coeffs
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly(out)
    if f.is_zero or g.is_zero:
        return Poly()
    return Poly(np.convolve(np.asarray(f.coeffs), np.asarray(g.coeffs)).tolist())


def poly_scale(f: Poly, c) -> Poly:
    if f.is_exact:
        c = Fraction(c)
    elif not isinstance(c, (Fraction, int)):
        c = float(c)
    return Poly([x * c for x in f.coeffs])


def poly_derivative(f: Poly) -> Poly:
    return Poly([j * x for j, x in enumerate(f.coeffs)][1:])


def _polish(f: Poly, df: Poly, r: float, lo: float, hi: float) -> float:
    # single guarded Newton step: keep it only if it stays in the bracket and helps
    slope = poly_eval(df, r)
    if slope == 0:
        return r
    cand = r - poly_eval(f, r) / slope
    if lo <= cand <= hi and abs(poly_eval(f, cand)) <= abs(poly_eval(f, r)):
        return cand
    return r


def real_roots_open_unit(f: Poly, tol: float = ROOT_TOL) -> list[float]:
    """Real roots of ``f`` strictly inside ``(0, 1)``, sorted and deduplicated.

    Sign changes are bracketed on a uniform grid of ``max(4*deg, 256)`` cells,
    refined by the (recursively located) roots of ``f'`` so that every
    bracket holds a monotone piece of ``f``. Each bracket is solved with
    Brent's method and polished with one guarded Newton step. Even-multiplicity
    roots, which produce no sign change, are picked up at derivative roots
    where ``|f|`` is within ``tol`` of zero.

    Parameters
    ----------
    f : Poly
        Polynomial to solve; must not be identically zero.
    tol : float
        Location tolerance for each root.

    Raises
    ------
    ZeroPolynomial
        If ``f`` is the zero polynomial.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if f.is_exact:
        f = f.to_float()
    if all(x == 0 for x in f.coeffs):
        raise ZeroPolynomial("every point is a root of the zero polynomial")
    if f.degree == 0:
        return []
    return _roots(f, tol)


def _roots(f: Poly, tol: float) -> list[float]:
    deg = f.degree
    if deg == 1:
        r = -f.coeffs[0] / f.coeffs[1]
        return [r] if 0.0 < r < 1.0 else []

    df = poly_derivative(f)
    crit = _roots(df, tol) if df.degree >= 1 else []

    n = max(4 * deg, 256)
    grid = np.union1d(np.linspace(0.0, 1.0, n + 1), np.asarray(crit, dtype=float))
    vals = poly_eval(f, grid)
    scale = tol * (1.0 + f.max_abs_coeff())

    found: list[float] = []
    for k in range(len(grid) - 1):
        a, b = grid[k], grid[k + 1]
        fa, fb = vals[k], vals[k + 1]
        if fa == 0.0:
            if 0.0 < a < 1.0:
                found.append(float(a))
            continue
        if fa * fb < 0.0:
            r = brentq(lambda x: poly_eval(f, x), a, b, xtol=tol * 1e-2, rtol=4 * np.finfo(float).eps)
            found.append(_polish(f, df, r, a, b))
    # tangential roots: no sign change, but |f| vanishes at a critical point
    for c in crit:
        if abs(poly_eval(f, c)) <= scale:
            found.append(float(c))

    found = sorted(r for r in found if 0.0 < r < 1.0)
    out: list[float] = []
    for r in found:
        if out and r - out[-1] <= tol:
            continue
        out.append(r)
    return out


def poly_from_roots(roots: Sequence[float]) -> Poly:
    """Monic polynomial with the given roots (test and demo helper)."""
    out = Poly([1.0])
    for r in roots:
        out = out * Poly([-r, 1.0])
    return out

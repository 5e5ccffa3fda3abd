"""Maximin patrol parameter: the top of the lower envelope of the curves.

The envelope maximum on ``(0, 1)`` sits either where two curves cross or at a
local maximum of a single curve, so both kinds of point are collected and each
is scored by evaluating every curve there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .polynomial import Poly, real_roots_open_unit
from .ppd import FencePpdTable, PpdProfile

__all__ = [
    "Intersection",
    "LocalMaximum",
    "Endpoint",
    "Candidate",
    "MaximinResult",
    "EmptyProfile",
    "candidates",
    "find_p",
    "maximin_fence",
]

DEDUP_TOL = 1e-9
TIE_TOL = 1e-9


class EmptyProfile(ValueError):
    pass


@dataclass(frozen=True)
class Intersection:
    i: int
    j: int

    def __str__(self):
        return f"intersection({self.i},{self.j})"


@dataclass(frozen=True)
class LocalMaximum:
    i: int

    def __str__(self):
        return f"local_max({self.i})"


@dataclass(frozen=True)
class Endpoint:
    p: float

    def __str__(self):
        return f"endpoint({self.p:g})"


Kind = Union[Intersection, LocalMaximum, Endpoint]


@dataclass(frozen=True)
class Candidate:
    p: float
    value: float
    kind: Kind


@dataclass(frozen=True)
class MaximinResult:
    p_opt: float
    value: float
    witness_segments: frozenset
    candidate_kind: Kind
    all_candidates: tuple


def _curves(profile) -> tuple:
    if isinstance(profile, PpdProfile):
        return tuple(c.to_float() if c.is_exact else c for c in profile.curves)
    return tuple(c if isinstance(c, Poly) else Poly(c) for c in profile)


def _is_local_max(f: Poly, r: float) -> bool:
    f2 = f.derivative().derivative()
    curv = f2(r)
    if abs(curv) > 1e-12 * (1 + f2.max_abs_coeff()):
        return curv < 0
    h = 1e-4
    return f(r - h) + f(r + h) - 2 * f(r) < 0


def candidates(profile) -> list[tuple[float, Kind]]:
    """Interior crossing points and local maxima of the curves, sorted by ``p``.

    Identical curves contribute no crossings; points closer than ``1e-9`` are
    merged, keeping the first kind found.
    """
    curves = _curves(profile)
    if not curves:
        raise EmptyProfile("no curves")
    found: list[tuple[float, Kind]] = []
    n = len(curves)
    for a in range(n):
        for b in range(a + 1, n):
            diff = curves[a] - curves[b]
            if diff.max_abs_coeff() <= 1e-13 * (1 + curves[a].max_abs_coeff()):
                continue
            found.extend((r, Intersection(a + 1, b + 1)) for r in real_roots_open_unit(diff))
    for a, f in enumerate(curves):
        df = f.derivative()
        if df.is_zero:
            continue
        found.extend((r, LocalMaximum(a + 1)) for r in real_roots_open_unit(df) if _is_local_max(f, r))

    found.sort(key=lambda c: c[0])
    merged: list[tuple[float, Kind]] = []
    for p, kind in found:
        if merged and p - merged[-1][0] <= DEDUP_TOL:
            continue
        merged.append((p, kind))
    return merged


def find_p(profile) -> MaximinResult:
    """Patrol parameter maximizing the minimum detection probability.

    Accepts a :class:`PpdProfile` or a plain sequence of curves. Ties within
    ``1e-9`` go to the smallest ``p``. The endpoints ``p = 0`` and ``p = 1``
    are scored and listed for diagnostics; one is only returned when it beats
    every interior candidate, since deterministic patrols are otherwise never
    preferred. When all curves are constant the answer is ``p = 0.5``.
    """
    curves = _curves(profile)
    if not curves:
        raise EmptyProfile("no curves")

    def score(p):
        vals = np.array([c(p) for c in curves])
        return float(vals.min()), vals

    scored = []
    for p, kind in candidates(curves):
        g, _ = score(p)
        scored.append(Candidate(p, g, kind))
    ends = [Candidate(e, score(e)[0], Endpoint(e)) for e in (0.0, 1.0)]

    if not scored and all(c.degree == 0 for c in curves):
        scored.append(Candidate(0.5, score(0.5)[0], LocalMaximum(int(np.argmin([c(0.5) for c in curves])) + 1)))

    best = None
    for c in scored:
        if best is None or c.value > best.value + TIE_TOL:
            best = c
    end_best = max(ends, key=lambda c: c.value)
    if best is None or end_best.value > best.value + TIE_TOL:
        best = end_best

    g, vals = score(best.p)
    witness = frozenset(int(i) + 1 for i in np.flatnonzero(vals - g <= TIE_TOL))
    return MaximinResult(
        p_opt=best.p,
        value=g,
        witness_segments=witness,
        candidate_kind=best.kind,
        all_candidates=tuple(scored + ends),
    )


def maximin_fence(table: FencePpdTable) -> list[MaximinResult]:
    """One maximin result per robot location ``j = 1..d`` (clockwise heading)."""
    return [find_p(table.location(j)) for j in range(1, table.d + 1)]

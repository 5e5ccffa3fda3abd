"""Detection-probability profiles: ``ppd_i(p)`` for perimeters and
``ppd_i^j(p)`` tables for fences."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .markov import (
    DETECTED,
    ChainSpec,
    Heading,
    build_fence_chain,
    build_perimeter_chain,
    propagate_many,
)
from .model import BMP, ValidatedConfig
from .polynomial import Poly

__all__ = ["PpdProfile", "FencePpdTable", "find_func", "find_fence_ppd"]


@dataclass(frozen=True)
class PpdProfile:
    """One curve per segment; ``curves[i - 1]`` is ``ppd_i``."""

    curves: tuple
    config: ValidatedConfig | None = None
    chain: ChainSpec | None = field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.curves)

    def curve(self, segment: int) -> Poly:
        return self.curves[segment - 1]

    def evaluate(self, p) -> np.ndarray:
        """Array of shape ``(d,)`` for scalar ``p`` or ``(d, len(p))`` otherwise."""
        return np.array([c(p) for c in self.curves])

    def minimum(self, p):
        return self.evaluate(p).min(axis=0)

    def weakest_segment(self, p: float) -> int:
        return int(np.argmin(self.evaluate(p))) + 1


@dataclass(frozen=True)
class FencePpdTable:
    """``curves[j - 1][i - 1]`` is ``ppd_i^j``: penetration at ``i`` while the
    robot stands at ``j`` heading clockwise."""

    curves: tuple
    config: ValidatedConfig | None = None

    @property
    def d(self) -> int:
        return len(self.curves)

    def location(self, j: int) -> PpdProfile:
        return PpdProfile(self.curves[j - 1], self.config)

    def cc_curves(self) -> tuple:
        """Table for a robot heading counterclockwise, by reflecting the
        clockwise one. BMP robots have no heading, so the table is returned
        unchanged."""
        if self.config is not None and isinstance(self.config.movement, BMP):
            return self.curves
        d = self.d
        return tuple(
            tuple(self.curves[d - j][d - i] for i in range(1, d + 1)) for j in range(1, d + 1)
        )


def find_func(cfg: ValidatedConfig, exact: bool = False) -> PpdProfile:
    """Detection curves of every segment of a perimeter section.

    Each curve is the detected-state entry after ``chain.steps`` transitions
    from the segment's clockwise start state.
    """
    chain = build_perimeter_chain(cfg, exact=exact)
    starts = [chain.start_state(i) for i in range(1, cfg.d + 1)]
    dists = propagate_many(chain, starts, chain.steps)
    return PpdProfile(tuple(dist[DETECTED] for dist in dists), cfg, chain)


def find_fence_ppd(cfg: ValidatedConfig, exact: bool = False,
                   heading: Heading = Heading.CW) -> FencePpdTable:
    """The ``d x d`` fence table, one chain per penetration segment.

    ``heading`` is the robot's initial heading; the table is normally built
    for clockwise robots and :meth:`FencePpdTable.cc_curves` reflects it.
    """
    d = cfg.d
    cols = []
    for target in range(1, d + 1):
        chain = build_fence_chain(cfg, target, exact=exact)
        starts = [chain.start_state(j, heading) for j in range(1, d + 1)]
        cols.append([dist[DETECTED] for dist in propagate_many(chain, starts, chain.steps)])
    rows = tuple(tuple(cols[i][j] for i in range(d)) for j in range(d))
    return FencePpdTable(rows, cfg)

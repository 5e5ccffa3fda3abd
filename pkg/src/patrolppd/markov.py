"""Absorbing Markov chains of the coordinated patrol and symbolic propagation.

Conventions
-----------
Physical clockwise (``Heading.CW``) is the ``+1`` direction. Every robot
starts heading clockwise.

Perimeter chains live in the frame of one section: a segment state with index
``x`` means the penetrated segment lies ``x`` segments clockwise of the robot
behind it (``R_l``) and ``d + 1 - x`` segments counterclockwise of the robot
ahead of it (``R_r``). A physical step ``delta`` of the team maps ``x`` to
``x - delta``. With perfect local sensing the chain has the classic
``2d + 1`` layout whose borders (``x = 0`` and ``x = d + 1``) are the detected
state. Every other sensing model uses the ring ``x in 0..d`` (``x = 0`` means
a robot stands on the segment; passing it wraps into the neighbouring
section) and splits detection mass off each state with the probability that
the state's sensing succeeds.

Fence chains follow a single robot on segments ``1..d`` with a fixed target;
moves that would leave the fence become forced turns.

Sensing happens at every instant ``0..t``. A state senses the segments ahead
of its heading up to the sensing range; turn intermediates sense only the
current segment. Split chains reach the detected state one step after the
sensing instant, so they are read after ``t + 1`` steps; the classic chain
absorbs on arrival and is read after ``t`` steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .model import BMP, DCP, DNCP, Perfect, ValidatedConfig
from .polynomial import Poly

__all__ = [
    "Heading",
    "StateId",
    "DETECTED",
    "ChainSpec",
    "StateDistribution",
    "UnsupportedCombination",
    "TargetOutOfRange",
    "build_perimeter_chain",
    "build_fence_chain",
    "propagate",
    "propagate_many",
]


class UnsupportedCombination(ValueError):
    pass


class TargetOutOfRange(ValueError):
    pass


class Heading(Enum):
    CW = 1
    CC = -1

    @property
    def flipped(self) -> "Heading":
        return Heading.CC if self is Heading.CW else Heading.CW


@dataclass(frozen=True)
class StateId:
    """A chain state.

    ``kind`` is ``"segment"``, ``"turn"`` (an intermediate of a multi-cycle
    turn; ``heading`` is the heading being turned to, ``step`` counts from 1)
    or ``"detected"``.
    """

    kind: str
    index: int = 0
    heading: Heading | None = None
    step: int = 0

    @classmethod
    def segment(cls, index: int, heading: Heading | None = None) -> "StateId":
        return cls("segment", index, heading)

    @classmethod
    def turn(cls, index: int, heading: Heading, step: int) -> "StateId":
        return cls("turn", index, heading, step)

    def __repr__(self):
        if self.kind == "detected":
            return "DETECTED"
        h = "" if self.heading is None else "^" + self.heading.name.lower()
        if self.kind == "turn":
            return f"T{self.index}{h}/{self.step}"
        return f"s{self.index}{h}"


DETECTED = StateId("detected")


@dataclass(frozen=True)
class ChainSpec:
    """Sparse transition structure with polynomial edge weights.

    ``steps`` is the number of transitions after which the detected-state
    mass equals the detection probability.
    """

    states: tuple
    edges: tuple
    config: ValidatedConfig
    steps: int
    target: int | None = None

    def out_edges(self) -> dict:
        out: dict = {s: [] for s in self.states}
        for a, b, w in self.edges:
            out[a].append((b, w))
        return out

    def start_state(self, index: int, heading: Heading | None = Heading.CW) -> StateId:
        if isinstance(self.config.movement, BMP):
            heading = None
        return StateId.segment(index, heading)

    def row_sums(self, p: float) -> dict:
        sums = {s: 0.0 for s in self.states}
        for a, _, w in self.edges:
            sums[a] += float(w(p))
        return sums


@dataclass(frozen=True)
class StateDistribution:
    entries: Mapping = field(default_factory=dict)

    def __getitem__(self, state: StateId) -> Poly:
        return self.entries.get(state, Poly())

    def total(self) -> Poly:
        acc = Poly()
        for v in self.entries.values():
            acc = acc + v
        return acc


# -- construction ------------------------------------------------------------


def _weights(exact: bool):
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    p = Poly([zero, one])
    return p, Poly([one, -one]), Poly([one])


def _num(x, exact: bool):
    return Fraction(x) if exact else float(x)


def _moves(state: StateId, cfg: ValidatedConfig, step: Callable, p_w, q_w, one):
    """Movement transitions ``[(dest, weight)]`` before sensing is applied.

    ``step(index, delta)`` returns the destination index, ``DETECTED`` for an
    absorbing border, or ``None`` if the move would leave a fence.
    """
    mv = cfg.movement
    i, h = state.index, state.heading

    if state.kind == "turn":
        tau = mv.tau
        nxt = StateId.turn(i, h, state.step + 1) if state.step + 1 < tau else StateId.segment(i, h)
        return [(nxt, one)]

    def seg(dest, heading):
        return dest if dest is DETECTED else StateId.segment(dest, heading)

    if isinstance(mv, BMP):
        left, right = step(i, -1), step(i, +1)
        if left is None and right is None:
            return [(state, one)]
        if left is None:
            return [(seg(right, None), one)]
        if right is None:
            return [(seg(left, None), one)]
        return [(seg(left, None), p_w), (seg(right, None), q_w)]

    back = h.flipped
    if isinstance(mv, DCP):
        turned = StateId.turn(i, back, 1) if mv.tau > 1 else StateId.segment(i, back)
    else:
        dest = step(i, back.value)
        turned = StateId.segment(i, back) if dest is None else seg(dest, back)

    ahead = step(i, h.value)
    if ahead is None:
        return [(turned, one)]
    return [(seg(ahead, h), p_w), (turned, q_w)]


def _assemble(cfg, segment_states, step, sense, steps, exact, target=None) -> ChainSpec:
    p_w, q_w, one = _weights(exact)
    mv = cfg.movement

    states = list(segment_states)
    if isinstance(mv, DCP) and mv.tau > 1:
        for s in segment_states:
            for k in range(1, mv.tau):
                states.append(StateId.turn(s.index, s.heading.flipped, k))
    states.append(DETECTED)

    edges: dict = {}

    def add(a, b, w):
        edges[(a, b)] = edges[(a, b)] + w if (a, b) in edges else w

    for s in states[:-1]:
        q = sense(s)
        if q:
            add(s, DETECTED, Poly([_num(q, exact)]))
        if q == 1:
            continue
        keep = 1 - _num(q, exact) if q else None
        for dest, w in _moves(s, cfg, step, p_w, q_w, one):
            add(s, dest, w * keep if keep is not None else w)
    add(DETECTED, DETECTED, one)

    return ChainSpec(
        states=tuple(states),
        edges=tuple((a, b, w) for (a, b), w in edges.items()),
        config=cfg,
        steps=steps,
        target=target,
    )


def _directed(mv) -> bool:
    return not isinstance(mv, BMP)


def _check_supported(cfg: ValidatedConfig):
    if isinstance(cfg.movement, BMP) and cfg.sensing.range > 0:
        raise UnsupportedCombination(
            "long-range sensing looks ahead of the heading; BMP robots have none"
        )


def _segments(indices: Iterable[int], directed: bool) -> list:
    if not directed:
        return [StateId.segment(i) for i in indices]
    return [StateId.segment(i, h) for i in indices for h in (Heading.CW, Heading.CC)]


def build_perimeter_chain(cfg: ValidatedConfig, exact: bool = False) -> ChainSpec:
    """Chain of one perimeter section for the configured movement and sensing.

    Parameters
    ----------
    cfg : ValidatedConfig
        A validated perimeter scenario.
    exact : bool
        Use :class:`~fractions.Fraction` edge weights.
    """
    if cfg.is_fence:
        raise ValueError("use build_fence_chain for fence scenarios")
    _check_supported(cfg)
    d = cfg.d
    directed = _directed(cfg.movement)

    if isinstance(cfg.sensing, Perfect):
        def step(x, delta):
            y = x - delta
            return DETECTED if y in (0, d + 1) else y

        return _assemble(cfg, _segments(range(1, d + 1), directed), step,
                         lambda s: 0, cfg.t, exact)

    v = cfg.sensing.detection
    L = cfg.sensing.range
    ring = d + 1

    def step(x, delta):
        return (x - delta) % ring

    def sense(s: StateId):
        x = s.index
        if s.kind == "turn" or s.heading is None:
            return v[0] if x == 0 else 0
        dist = x if s.heading is Heading.CW else (ring - x) % ring
        return v[dist] if dist <= L else 0

    return _assemble(cfg, _segments(range(0, d + 1), directed), step, sense,
                     cfg.t + 1, exact)


def build_fence_chain(cfg: ValidatedConfig, target: int, exact: bool = False) -> ChainSpec:
    """Chain of a single fence robot for penetration at segment ``target``."""
    if not cfg.is_fence:
        raise ValueError("use build_perimeter_chain for perimeter scenarios")
    d = cfg.d
    if not (isinstance(target, int) and 1 <= target <= d):
        raise TargetOutOfRange(f"target {target!r} outside 1..{d}")
    _check_supported(cfg)
    v = cfg.sensing.detection
    L = cfg.sensing.range

    def step(j, delta):
        y = j + delta
        return y if 1 <= y <= d else None

    def sense(s: StateId):
        if s.kind == "turn" or s.heading is None:
            return v[0] if s.index == target else 0
        dist = (target - s.index) * s.heading.value
        return v[dist] if 0 <= dist <= L else 0

    return _assemble(cfg, _segments(range(1, d + 1), _directed(cfg.movement)), step,
                     sense, cfg.t + 1, exact, target=target)


# -- propagation -------------------------------------------------------------


def propagate_many(chain: ChainSpec, starts: Sequence[StateId], steps: int) -> list:
    """Distributions after ``steps`` transitions from each start state.

    All starts are advanced together by edge-wise multiply-accumulate of the
    polynomial weights on a ``(states, starts, coefficients)`` array; no
    matrix power is ever formed.
    """
    index = {s: n for n, s in enumerate(chain.states)}
    for s in starts:
        if s not in index:
            raise KeyError(f"{s!r} is not a state of this chain")
    exact = any(w.is_exact for _, _, w in chain.edges)
    dtype = object if exact else float
    max_deg = max(w.degree for _, _, w in chain.edges)
    width = steps * max_deg + 1

    dist = np.zeros((len(chain.states), len(starts), width), dtype=dtype)
    for j, s in enumerate(starts):
        dist[index[s], j, 0] = 1
    edges = [(index[a], index[b], w.coeffs) for a, b, w in chain.edges]

    for _ in range(steps):
        new = np.zeros_like(dist)
        for a, b, coeffs in edges:
            src = dist[a]
            for k, c in enumerate(coeffs):
                if c:
                    new[b, :, k:] += c * src[:, : width - k]
        dist = new

    out = []
    for j in range(len(starts)):
        entries = {}
        for n, s in enumerate(chain.states):
            col = dist[n, j]
            if any(col):
                entries[s] = Poly(col.tolist())
        out.append(StateDistribution(entries))
    return out


def propagate(chain: ChainSpec, start: StateId, steps: int) -> StateDistribution:
    """Distribution after ``steps`` transitions from the indicator at ``start``."""
    return propagate_many(chain, [start], steps)[0]

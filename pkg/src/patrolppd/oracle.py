"""Ground truth for the chain construction.

Everything here works on physical robot positions rather than on chain
states: the team is literally moved around a ring (perimeter) or along a line
segment (fence), and every sensing instant ``0..t`` is scored with the
per-robot detection probabilities. ``brute_force_ppd`` enumerates all weighted
decision sequences; ``estimate_ppd`` and ``adversary_game`` sample them.

Geometry: on a perimeter, robot ``m`` starts at ``m * (d + 1)`` on a ring of
``k * (d + 1)`` positions, so consecutive robots have ``d`` free segments
between them and the penetrated segment ``i`` lies at position ``i``. On a
fence the single robot starts at ``location`` on positions ``1..d``.

Random streams: trials are grouped in blocks of ``BLOCK`` consecutive indices;
block ``b`` draws from ``PCG64(SeedSequence(seed, spawn_key=(b,)))`` a full
block of adversary choices, then movement uniforms ``(BLOCK, t)``, then
sensing uniforms ``(BLOCK, t + 1, robots)``. Trial ``i`` uses row ``i % BLOCK``
of block ``i // BLOCK``, so its outcome depends only on ``(seed, i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .model import BMP, DCP, DNCP, ValidatedConfig
from .ppd import FencePpdTable, PpdProfile, find_fence_ppd, find_func

__all__ = [
    "TooLargeToEnumerate",
    "AdversaryStrategy",
    "SimOutcome",
    "brute_force_ppd",
    "single_robot_reach",
    "estimate_ppd",
    "adversary_game",
]

MAX_ENUM_STEPS = 20
BLOCK = 1 << 15


class TooLargeToEnumerate(ValueError):
    pass


class AdversaryStrategy(str, Enum):
    FULL_KNOWLEDGE = "full"
    UNIFORM_RANDOM = "random"


@dataclass(frozen=True)
class SimOutcome:
    detected_fraction: float
    trials: int
    confidence_halfwidth_3sigma: float
    seed: int
    segment: Optional[int] = None


@dataclass(frozen=True)
class _World:
    kind: str  # "ring", "fence" or "line"
    size: int  # ring length, or fence length
    offsets: tuple
    movement: object
    detection: tuple
    L: int

    def wrap(self, x):
        return x % self.size if self.kind == "ring" else x

    def inside(self, x):
        if self.kind == "fence":
            return (1 <= x) & (x <= self.size)
        return np.ones_like(x, dtype=bool) if np.ndim(x) else True


def _world(cfg: ValidatedConfig) -> _World:
    d = cfg.d
    s = cfg.sensing
    if isinstance(cfg.movement, BMP) and s.range > 0:
        raise ValueError("long-range sensing is not defined for BMP robots")
    if cfg.is_fence:
        return _World("fence", d, (0,), cfg.movement, s.detection, s.range)
    return _World("ring", cfg.k * (d + 1), tuple(m * (d + 1) for m in range(cfg.k)),
                  cfg.movement, s.detection, s.range)


def _miss(world: _World, pos: int, heading: int, turning: bool, target: int) -> float:
    """Probability that no robot detects the penetrator at this instant."""
    miss = 1.0
    for off in world.offsets:
        r = world.wrap(pos + off)
        if turning or isinstance(world.movement, BMP):
            dist = 0 if r == target else -1
        else:
            dist = world.wrap((target - r) * heading)
        if 0 <= dist <= world.L:
            miss *= 1.0 - world.detection[dist]
    return miss


def _branches(world: _World, pos: int, heading: int, turn_left: int):
    """Successor states as ``(pos, heading, turn_left, factor)``; ``factor`` is
    ``"p"``, ``"q"`` (for ``1 - p``) or ``None`` for a forced move."""
    mv = world.movement
    if turn_left:
        return [(pos, heading, turn_left - 1, None)]
    if isinstance(mv, BMP):
        left, right = pos - 1, pos + 1
        ok_l, ok_r = world.inside(left), world.inside(right)
        if not ok_l and not ok_r:
            return [(pos, heading, 0, None)]
        if not ok_l:
            return [(world.wrap(right), heading, 0, None)]
        if not ok_r:
            return [(world.wrap(left), heading, 0, None)]
        return [(world.wrap(left), heading, 0, "p"), (world.wrap(right), heading, 0, "q")]

    if isinstance(mv, DCP):
        turned = (pos, -heading, mv.tau - 1)
    else:
        nxt = pos - heading
        turned = (world.wrap(nxt), -heading, 0) if world.inside(nxt) else (pos, -heading, 0)
    ahead = pos + heading
    if not world.inside(ahead):
        return [turned + (None,)]
    return [(world.wrap(ahead), heading, 0, "p"), turned + ("q",)]


def _enumerate(world: _World, start: int, target: int, t: int, ps: np.ndarray) -> np.ndarray:
    if t > MAX_ENUM_STEPS:
        raise TooLargeToEnumerate(f"2^{t} move sequences exceed the 2^{MAX_ENUM_STEPS} budget")
    total = np.zeros_like(ps)
    factors = {"p": ps, "q": 1.0 - ps}

    def walk(pos, heading, turn_left, time, weight, miss):
        nonlocal total
        miss *= _miss(world, pos, heading, turn_left > 0, target)
        if miss == 0.0 or time == t:
            total = total + weight * (1.0 - miss)
            return
        for npos, nh, ntl, f in _branches(world, pos, heading, turn_left):
            w = weight if f is None else weight * factors[f]
            if np.any(w):
                walk(npos, nh, ntl, time + 1, w, miss)

    walk(start, 1, 0, 0, np.ones_like(ps), 1.0)
    return total


def brute_force_ppd(cfg: ValidatedConfig, p, segment: int, location: int | None = None):
    """Exact detection probability by enumerating every move sequence.

    Parameters
    ----------
    cfg : ValidatedConfig
    p : float or array_like
        Patrol parameter(s); an array is evaluated in a single enumeration.
    segment : int
        Penetrated segment, ``1..d``.
    location : int, optional
        Starting segment of the fence robot (required for fences).
    """
    world = _world(cfg)
    ps = np.atleast_1d(np.asarray(p, dtype=float))
    if cfg.is_fence:
        if location is None:
            raise ValueError("fence scenarios need the robot location")
        start = location
    else:
        start = 0
    out = _enumerate(world, start, segment, cfg.t, ps)
    return float(out[0]) if np.ndim(p) == 0 else out


def single_robot_reach(movement, t: int, p, distance: int):
    """Probability that one robot on an unbounded line, initially heading
    towards a point ``distance`` segments ahead, stands on it within ``t``."""
    world = _World("line", 0, (0,), movement, (1.0,), 0)
    ps = np.atleast_1d(np.asarray(p, dtype=float))
    out = _enumerate(world, 0, distance, t, ps)
    return float(out[0]) if np.ndim(p) == 0 else out


# -- Monte Carlo -------------------------------------------------------------


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def _simulate(world: _World, start: int, targets: np.ndarray, t: int, p: float,
              u_move: np.ndarray, u_sense: np.ndarray) -> np.ndarray:
    n = len(targets)
    mv = world.movement
    pos = np.full(n, start, dtype=np.int64)
    heading = np.ones(n, dtype=np.int64)
    turn_left = np.zeros(n, dtype=np.int64)
    detected = np.zeros(n, dtype=bool)
    det = np.asarray(world.detection, dtype=float)
    bmp = isinstance(mv, BMP)

    for time in range(t + 1):
        turning = turn_left > 0
        for m, off in enumerate(world.offsets):
            r = world.wrap(pos + off)
            dist = world.wrap((targets - r) * heading)
            dist = np.where(turning | bmp, np.where(r == targets, 0, -1), dist)
            ok = (dist >= 0) & (dist <= world.L)
            q = np.where(ok, det[np.clip(dist, 0, world.L)], 0.0)
            detected |= u_sense[:, time, m] < q
        if time == t:
            break

        straight = u_move[:, time] < p
        if bmp:
            step = np.where(straight, -1, 1)
            blocked = ~world.inside(pos + step)
            step = np.where(blocked, -step, step)
            step = np.where(blocked & ~world.inside(pos + step), 0, step)
            pos = world.wrap(pos + step)
            continue

        free = ~turning
        ahead_ok = world.inside(pos + heading)
        go = free & straight & ahead_ok
        turn = free & ~go
        turn_left = np.where(turning, turn_left - 1, turn_left)
        new_pos = np.where(go, pos + heading, pos)
        if isinstance(mv, DCP):
            turn_left = np.where(turn, mv.tau - 1, turn_left)
        else:
            back = pos - heading
            new_pos = np.where(turn & world.inside(back), back, new_pos)
        heading = np.where(turn, -heading, heading)
        pos = world.wrap(new_pos)
    return detected


def _run(cfg: ValidatedConfig, p: float, trials: int, seed: int, start: int, target_fn):
    if trials < 1:
        raise ValueError("trials must be >= 1")
    world = _world(cfg)
    if world.kind == "ring":
        # only the two robots bounding the section can reach it within t
        world = _World("ring", world.size, world.offsets[:2], world.movement,
                       world.detection, world.L)
    t = cfg.t
    hits = 0
    for b in range(math.ceil(trials / BLOCK)):
        rng = _block_rng(seed, b)
        choice = rng.integers(0, cfg.d, size=BLOCK)
        u_move = rng.random((BLOCK, t))
        u_sense = rng.random((BLOCK, t + 1, len(world.offsets)))
        n = min(BLOCK, trials - b * BLOCK)
        targets = target_fn(choice[:n])
        hits += int(_simulate(world, start, targets, t, p, u_move[:n], u_sense[:n]).sum())
    f = hits / trials
    return f, 3.0 * math.sqrt(f * (1.0 - f) / trials)


def estimate_ppd(cfg: ValidatedConfig, p: float, segment: int, trials: int, seed: int,
                 location: int | None = None) -> SimOutcome:
    """Monte Carlo estimate of the detection probability at ``segment``."""
    if cfg.is_fence and location is None:
        raise ValueError("fence scenarios need the robot location")
    start = location if cfg.is_fence else 0
    f, hw = _run(cfg, p, trials, seed, start, lambda c: np.full(len(c), segment))
    return SimOutcome(f, trials, hw, seed, segment)


def adversary_game(cfg: ValidatedConfig, p: float, adversary, trials: int, seed: int,
                   profile: PpdProfile | FencePpdTable | None = None,
                   location: int | None = None) -> SimOutcome:
    """Simulated penetrations against the randomized patrol.

    A full-knowledge adversary attacks the segment of minimal detection
    probability at ``p`` (taken from ``profile``, computed if omitted); a
    uniform adversary draws its segment per trial from the trial's stream.
    """
    adversary = AdversaryStrategy(adversary)
    if cfg.is_fence:
        location = 1 if location is None else location
        start = location
    else:
        start = 0
    if adversary is AdversaryStrategy.UNIFORM_RANDOM:
        f, hw = _run(cfg, p, trials, seed, start, lambda c: c + 1)
        return SimOutcome(f, trials, hw, seed, None)

    if profile is None:
        profile = find_fence_ppd(cfg) if cfg.is_fence else find_func(cfg)
    if isinstance(profile, FencePpdTable):
        profile = profile.location(location)
    segment = profile.weakest_segment(p)
    f, hw = _run(cfg, p, trials, seed, start, lambda c: np.full(len(c), segment))
    return SimOutcome(f, trials, hw, seed, segment)

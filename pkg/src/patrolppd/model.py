"""Patrol scenario configuration and validity bounds.

A scenario is a team of ``k`` coordinated robots spread uniformly over ``N``
segments (``d = N/k`` segments per section), an adversary that needs ``t``
time cycles to penetrate, a movement model and a sensing model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

__all__ = [
    "Environment",
    "DCP",
    "DNCP",
    "BMP",
    "Perfect",
    "ImpDetect",
    "LRange",
    "ImpDetLRange",
    "PatrolConfig",
    "ValidatedConfig",
    "ConfigError",
    "InvalidParameter",
    "NonUniformPlacement",
    "TPenetrationTooShort",
    "TPenetrationTooLong",
    "validate_config",
    "perimeter",
    "fence",
]


class Environment(str, Enum):
    PERIMETER = "perimeter"
    FENCE = "fence"


# -- movement models ---------------------------------------------------------


@dataclass(frozen=True)
class DCP:
    """Directed movement; a turn keeps the robot in place for ``tau`` cycles."""

    tau: int = 1

    name = "dcp"

    @property
    def turn_cost(self) -> int:
        return self.tau


@dataclass(frozen=True)
class DNCP:
    """Directed movement; turning is free and the robot moves in the same cycle."""

    name = "dncp"

    @property
    def turn_cost(self) -> int:
        return 0


@dataclass(frozen=True)
class BMP:
    """Bidirectional movement: a step left or right, no heading.

    ``p`` is the probability of a counterclockwise step.
    """

    name = "bmp"

    @property
    def turn_cost(self) -> int:
        return 0


Movement = Union[DCP, DNCP, BMP]


# -- sensing models ----------------------------------------------------------


@dataclass(frozen=True)
class Perfect:
    name = "perfect"

    @property
    def range(self) -> int:
        return 0

    @property
    def detection(self) -> tuple:
        return (1.0,)


@dataclass(frozen=True)
class ImpDetect:
    """Local sensing that detects a present penetrator with probability ``p_d``."""

    p_d: float

    name = "impdetect"

    @property
    def range(self) -> int:
        return 0

    @property
    def detection(self) -> tuple:
        return (float(self.p_d),)


@dataclass(frozen=True)
class LRange:
    """Perfect sensing of the current segment and ``L`` segments ahead."""

    L: int

    name = "lrange"

    @property
    def range(self) -> int:
        return self.L

    @property
    def detection(self) -> tuple:
        return (1.0,) * (self.L + 1)


@dataclass(frozen=True)
class ImpDetLRange:
    """Long-range imperfect sensing; ``v_s[i]`` is the detection probability
    for a penetrator ``i`` segments ahead (``v_s[0]`` is the current segment)."""

    L: int
    v_s: tuple = field(default=())

    name = "impdetlrange"

    def __post_init__(self):
        object.__setattr__(self, "v_s", tuple(float(v) for v in self.v_s))

    @property
    def range(self) -> int:
        return self.L

    @property
    def detection(self) -> tuple:
        return self.v_s


Sensing = Union[Perfect, ImpDetect, LRange, ImpDetLRange]


# -- configuration -----------------------------------------------------------


class ConfigError(ValueError):
    """Base class of configuration rejections."""


class InvalidParameter(ConfigError):
    pass


class NonUniformPlacement(ConfigError):
    pass


class TPenetrationTooShort(ConfigError):
    """Some segment can never be visited within ``t``; the adversary always wins."""


class TPenetrationTooLong(ConfigError):
    """A deterministic patrol already detects every penetration."""


@dataclass(frozen=True)
class PatrolConfig:
    environment: Environment
    N: int
    k: int
    t: int
    movement: Movement = field(default_factory=DCP)
    sensing: Sensing = field(default_factory=Perfect)

    @property
    def d(self) -> int:
        return self.N // self.k


def perimeter(d: int, t: int, movement: Movement | None = None,
              sensing: Sensing | None = None, k: int = 2) -> PatrolConfig:
    """Shorthand for a perimeter scenario given the section length ``d``."""
    return PatrolConfig(Environment.PERIMETER, N=k * d, k=k, t=t,
                        movement=movement or DCP(), sensing=sensing or Perfect())


def fence(d: int, t: int, movement: Movement | None = None,
          sensing: Sensing | None = None, k: int = 1) -> PatrolConfig:
    """Shorthand for a fence scenario given the section length ``d``."""
    return PatrolConfig(Environment.FENCE, N=k * d, k=k, t=t,
                        movement=movement or DCP(), sensing=sensing or Perfect())


@dataclass(frozen=True)
class ValidatedConfig:
    """A :class:`PatrolConfig` that passed :func:`validate_config`, with the
    admissible penetration-time range ``[t_min, t_max]`` that was applied."""

    config: PatrolConfig
    t_min: int
    t_max: int

    @property
    def environment(self) -> Environment:
        return self.config.environment

    @property
    def d(self) -> int:
        return self.config.d

    @property
    def t(self) -> int:
        return self.config.t

    @property
    def k(self) -> int:
        return self.config.k

    @property
    def movement(self) -> Movement:
        return self.config.movement

    @property
    def sensing(self) -> Sensing:
        return self.config.sensing

    @property
    def is_fence(self) -> bool:
        return self.config.environment is Environment.FENCE


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _check_probability(name, v):
    if not (isinstance(v, (int, float)) and 0.0 <= v <= 1.0):
        raise InvalidParameter(f"{name} must be a probability in [0, 1], got {v!r}")


def _check_sensing(s: Sensing):
    if isinstance(s, ImpDetect):
        _check_probability("p_d", s.p_d)
    elif isinstance(s, (LRange, ImpDetLRange)):
        if not _is_int(s.L) or s.L < 0:
            raise InvalidParameter(f"L must be a nonnegative integer, got {s.L!r}")
        if isinstance(s, ImpDetLRange):
            if len(s.v_s) != s.L + 1:
                raise InvalidParameter(f"V_S needs L+1 = {s.L + 1} entries, got {len(s.v_s)}")
            for v in s.v_s:
                _check_probability("V_S entry", v)
            if any(b > a for a, b in zip(s.v_s, s.v_s[1:])):
                raise InvalidParameter("V_S must be non-increasing")
    elif not isinstance(s, Perfect):
        raise InvalidParameter(f"unknown sensing model {s!r}")


def t_bounds(cfg: PatrolConfig) -> tuple[int, int]:
    """Admissible ``(t_min, t_max)`` for the scenario (both inclusive)."""
    d = cfg.d
    if cfg.environment is Environment.FENCE:
        t_min = math.ceil(d / 2)
        return t_min, max(2 * d - 2, t_min)
    L = cfg.sensing.range
    t_min = math.ceil((d + cfg.movement.turn_cost) / 2) - L
    return max(t_min, 1), d - L - 1


def validate_config(cfg: PatrolConfig) -> ValidatedConfig:
    """Check a scenario and stamp it valid.

    Raises
    ------
    InvalidParameter
        Malformed field values (non-integer counts, probabilities outside
        ``[0, 1]``, a ``V_S`` of the wrong length or not non-increasing).
    NonUniformPlacement
        ``N`` is not a multiple of ``k``.
    TPenetrationTooShort, TPenetrationTooLong
        ``t`` outside the admissible range for the scenario.
    """
    if not isinstance(cfg.environment, Environment):
        raise InvalidParameter(f"unknown environment {cfg.environment!r}")
    for name in ("N", "k", "t"):
        v = getattr(cfg, name)
        if not _is_int(v) or v < 1:
            raise InvalidParameter(f"{name} must be a positive integer, got {v!r}")
    if cfg.environment is Environment.PERIMETER and cfg.k < 2:
        raise InvalidParameter("perimeter patrol needs k > 1 robots")
    if cfg.N % cfg.k:
        raise NonUniformPlacement(f"N={cfg.N} is not divisible by k={cfg.k}")
    mv = cfg.movement
    if isinstance(mv, DCP):
        if not _is_int(mv.tau) or mv.tau < 1:
            raise InvalidParameter(f"DCP needs tau >= 1, got {mv.tau!r}")
    elif not isinstance(mv, (DNCP, BMP)):
        raise InvalidParameter(f"unknown movement model {mv!r}")
    _check_sensing(cfg.sensing)

    t_min, t_max = t_bounds(cfg)
    if cfg.t < t_min:
        raise TPenetrationTooShort(f"t={cfg.t} < t_min={t_min} for d={cfg.d}")
    if cfg.t > t_max:
        raise TPenetrationTooLong(f"t={cfg.t} > t_max={t_max} for d={cfg.d}")
    return ValidatedConfig(cfg, t_min, t_max)

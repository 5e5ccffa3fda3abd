"""Probability-of-penetration-detection curves and maximin patrol parameters
for coordinated robot teams on perimeters and fences."""

from .maximin import (
    Candidate,
    EmptyProfile,
    Endpoint,
    Intersection,
    LocalMaximum,
    MaximinResult,
    candidates,
    find_p,
    maximin_fence,
)
from .markov import (
    DETECTED,
    ChainSpec,
    Heading,
    StateDistribution,
    StateId,
    TargetOutOfRange,
    UnsupportedCombination,
    build_fence_chain,
    build_perimeter_chain,
    propagate,
    propagate_many,
)
from .model import (
    BMP,
    DCP,
    DNCP,
    ConfigError,
    Environment,
    ImpDetect,
    ImpDetLRange,
    InvalidParameter,
    LRange,
    NonUniformPlacement,
    PatrolConfig,
    Perfect,
    TPenetrationTooLong,
    TPenetrationTooShort,
    ValidatedConfig,
    fence,
    perimeter,
    t_bounds,
    validate_config,
)
from .polynomial import Poly, ZeroPolynomial, poly_eval, real_roots_open_unit
from .ppd import FencePpdTable, PpdProfile, find_fence_ppd, find_func

__version__ = "0.1.0"

"""Scenario grids shared by the test modules."""

from __future__ import annotations

import itertools

from patrolppd import (
    BMP,
    DCP,
    DNCP,
    ImpDetect,
    ImpDetLRange,
    LRange,
    Perfect,
    fence,
    perimeter,
    t_bounds,
    validate_config,
)

MOVEMENTS = (DCP(1), DCP(2), DNCP(), BMP())
SENSING = (Perfect(), ImpDetect(0.7), LRange(1), ImpDetLRange(1, (0.9, 0.6)))
P_NINE = [0.1 * k for k in range(1, 10)]


def supported(movement, sensing) -> bool:
    return not (isinstance(movement, BMP) and sensing.range > 0)


def valid_configs(env, d, movement, sensing):
    make = perimeter if env == "perimeter" else fence
    lo, hi = t_bounds(make(d, 1, movement, sensing))
    for t in range(lo, hi + 1):
        yield validate_config(make(d, t, movement, sensing))


def config_grid(ds=range(3, 7), envs=("perimeter", "fence"), movements=MOVEMENTS,
                sensing=SENSING):
    for env, d, mv, s in itertools.product(envs, ds, movements, sensing):
        if supported(mv, s):
            yield from valid_configs(env, d, mv, s)


def label(cfg) -> str:
    return f"{cfg.environment.value}-d{cfg.d}-t{cfg.t}-{cfg.movement}-{cfg.sensing}"

# %% [markdown]
# # Checking the curves by brute force and by simulation
#
# The chains are an abstraction; the oracle moves robots around a ring (or a
# fence) directly. Small cases are enumerated exhaustively, larger ones are
# sampled.

# %%
import numpy as np

from patrolppd import DNCP, ImpDetLRange, find_func, find_p, perimeter, validate_config
from patrolppd.oracle import adversary_game, brute_force_ppd, estimate_ppd

cfg = validate_config(perimeter(6, 4, DNCP(), ImpDetLRange(1, (0.9, 0.6))))
prof = find_func(cfg)
ps = np.linspace(0.1, 0.9, 9)
gap = max(np.abs(prof.curve(i)(ps) - brute_force_ppd(cfg, ps, i)).max() for i in range(1, 7))
print(f"largest difference to enumeration: {gap:.1e}")

# %% [markdown]
# ## An informed adversary against the optimal patrol

# %%
cfg = validate_config(perimeter(9, 8))
prof = find_func(cfg)
r = find_p(prof)
for who in ("full", "random"):
    out = adversary_game(cfg, r.p_opt, who, 400_000, seed=1, profile=prof)
    print(f"{who:6s} adversary: caught {out.detected_fraction:.4f} +- {out.confidence_halfwidth_3sigma:.4f}")
print(f"predicted worst case: {r.value:.4f}")

# %% [markdown]
# A deterministic patrol (`p = 1`) leaves segments that are never reached:

# %%
print(adversary_game(cfg, 1.0, "full", 100_000, seed=2))
print(estimate_ppd(cfg, 1.0, 1, 10_000, seed=3))

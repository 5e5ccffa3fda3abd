# %% [markdown]
# # Movement and sensing models
#
# Turning can cost a cycle (DCP), be free (DNCP), or the robots may have no
# heading at all (BMP, a coordinated random walk). Sensors can miss
# (ImpDetect), look ahead (LRange) or both (ImpDetLRange).

# %%
import numpy as np

from patrolppd import (
    BMP,
    DCP,
    DNCP,
    ImpDetect,
    ImpDetLRange,
    LRange,
    Perfect,
    find_func,
    find_p,
    perimeter,
    validate_config,
)

# %% [markdown]
# ## Free turns never hurt

# %%
ps = np.linspace(0, 1, 64)
curves = {}
for mv in (DCP(1), DNCP(), BMP()):
    prof = find_func(validate_config(perimeter(16, 12, mv)))
    curves[mv.name] = prof.evaluate(ps)
    r = find_p(prof)
    print(f"{mv.name:5s} p_opt={r.p_opt:.3f} maximin={r.value:.4f}")
print("DCP <= DNCP everywhere:", bool(np.all(curves["dcp"] <= curves["dncp"] + 1e-12)))

# %% [markdown]
# For BMP, mirroring the section swaps left and right steps, so the weakest
# segment at `p` mirrors the weakest at `1 - p`. The lower envelope is
# therefore symmetric about one half:

# %%
env = curves["bmp"].min(axis=0)
print("max |g(p) - g(1-p)| =", np.abs(env - env[::-1]).max())

# %% [markdown]
# ## Sensing

# %%
for s in (Perfect(), ImpDetect(0.8), LRange(1), ImpDetLRange(1, (0.9, 0.5))):
    r = find_p(find_func(validate_config(perimeter(12, 8, DCP(1), s))))
    print(f"{str(s):38s} p_opt={r.p_opt:.3f} maximin={r.value:.4f}")

# %% [markdown]
# A turn that takes two cycles shifts the lower bound on `t`:

# %%
r = find_p(find_func(validate_config(perimeter(12, 8, DCP(2)))))
print(f"tau=2: p_opt={r.p_opt:.3f} maximin={r.value:.4f}")

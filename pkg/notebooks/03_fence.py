# %% [markdown]
# # Fences: one robot, two dead ends
#
# On an open fence the robot must turn at each end, so detection depends on
# where the robot currently stands. We get a `d x d` table of curves and one
# optimum per location.

# %%
import numpy as np

from patrolppd import Heading, fence, find_fence_ppd, maximin_fence, validate_config

cfg = validate_config(fence(d=8, t=10))
table = find_fence_ppd(cfg)
for j, r in enumerate(maximin_fence(table), start=1):
    print(f"robot at {j}: p_opt={r.p_opt:.3f} maximin={r.value:.4f} ({r.candidate_kind})")

# %% [markdown]
# Near the far end a clockwise robot reaches the wall, turns and sweeps the
# whole fence inside the window, so going straight (`p = 1`) is optimal there.
#
# A counterclockwise robot sees the mirror image of the table:

# %%
cc = find_fence_ppd(cfg, heading=Heading.CC)
same = all(a.allclose(b, 1e-12) for ra, rb in zip(table.cc_curves(), cc.curves) for a, b in zip(ra, rb))
print("mirror image matches direct computation:", same)

ps = np.array([0.25, 0.5, 0.75])
print(np.round(table.location(3).evaluate(ps), 3))

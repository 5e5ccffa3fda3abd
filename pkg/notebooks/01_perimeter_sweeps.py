# %% [markdown]
# # Perimeter patrol: how the optimum moves with d and t
#
# Two coordinated robots guard a section of `d` segments each; an adversary
# needs `t` cycles to get through. We compute every segment's detection curve
# as a polynomial in the patrol parameter `p` and pick the `p` that maximizes
# the weakest segment.

# %%
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from patrolppd import find_func, find_p, perimeter, validate_config

# %% [markdown]
# ## One scenario up close

# %%
cfg = validate_config(perimeter(d=9, t=8))
prof = find_func(cfg)
res = find_p(prof)
print(f"p_opt = {res.p_opt:.4f}, maximin = {res.value:.4f}, weakest = {sorted(res.witness_segments)}")

ps = np.linspace(0, 1, 401)
fig, ax = plt.subplots(figsize=(7, 4))
for i, c in enumerate(prof.curves, start=1):
    ax.plot(ps, c(ps), lw=1, label=f"seg {i}")
ax.plot(ps, prof.minimum(ps), "k", lw=2.5, label="lower envelope")
ax.axvline(res.p_opt, ls="--", c="gray")
ax.set(xlabel="p", ylabel="detection probability", title="d=9, t=8")
ax.legend(fontsize=7, ncol=2)
fig.savefig("perimeter_d9_t8.png", dpi=120, bbox_inches="tight")

# %% [markdown]
# ## Longer sections are harder to guard

# %%
for d in range(9, 16):
    r = find_p(find_func(validate_config(perimeter(d, 8))))
    print(f"d={d:2d}  p_opt={r.p_opt:.3f}  maximin={r.value:.4f}")

# %% [markdown]
# ## A slower adversary helps, and the weak spot sits right of centre

# %%
fig, ax = plt.subplots(figsize=(7, 4))
for t in range(9, 16):
    prof = find_func(validate_config(perimeter(16, t)))
    r = find_p(prof)
    ax.plot(range(1, 17), prof.evaluate(r.p_opt), marker="o", ms=3, label=f"t={t}")
    print(f"t={t:2d}  p_opt={r.p_opt:.3f}  maximin={r.value:.4f}")
ax.set(xlabel="segment", ylabel="ppd at p_opt", title="d=16")
ax.legend(fontsize=7)
fig.savefig("perimeter_d16_segments.png", dpi=120, bbox_inches="tight")

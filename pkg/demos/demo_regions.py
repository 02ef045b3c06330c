# %% [markdown]
# # Where the methane model applies
#
# The bounds below are illustrative choices for methane:
# - density at most 10 kg/m^3
# - pressure between 1 kPa and 300 kPa
# - temperature between the melting point (90.7 K) and the autoignition
#   temperature (about 810 K)
#
# Each bound holds on a set of r values, so on the (d, t) plane every
# region boundary is a parabola d = r* sqrt(t).

# %%
import numpy as np

from filtrate import regions
from filtrate.config import METHANE_EXAMPLE, parse_config

cfg = parse_config(METHANE_EXAMPLE)
sol, spec, gas = cfg.solution_obj(), cfg.region_spec(), cfg.potential()

for c in regions.boundary_curves(sol, spec):
    print(f"{c.label:6s} crosses at r* = {c.r_star:.6f}")
print("all bounds hold for r in", regions.all_ok_intervals(sol, spec))

# %% [markdown]
# ## Phase transitions
# The gas trajectory (v(r), T(r)) crosses the coexistence curve and the
# spinodal only at large r, far outside the admissible band.

# %%
curves = regions.phase_curves(sol, gas)
report = regions.physical_phase_report(sol, gas, spec, curves=curves)
for c in curves:
    print(f"{c.kind:12s} r* = {c.r_star:.4f}   T = {c.info['T']:.3e} K")
print("no transition inside the admissible region:", report.no_transition_in_region)

# %% [markdown]
# ## Picture
# A 200 x 200 grid of the all_ok flag with the boundary parabolas overlaid.

# %%
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    grid = regions.region_grid(sol, spec)
    d, t = spec.axes()
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.pcolormesh(d, t, grid.as_matrix("all_ok").T, shading="nearest", cmap="Greens")
    for c in regions.boundary_curves(sol, spec):
        ax.plot(c.d_at(t), t, lw=0.8, label=c.label)
    ax.set_xlim(0, spec.d_max)
    ax.set_xlabel("d")
    ax.set_ylabel("t")
    ax.legend(fontsize=7)
    fig.savefig("regions.png", dpi=120)
    print("wrote regions.png")

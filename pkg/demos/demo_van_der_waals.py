# %% [markdown]
# # Van der Waals gas: phase equilibrium and first-order corrections
#
# The gas is described by its Massieu-Planck potential
# phi = n/2 ln T + ln(v - b) + a / (R v T). Pressure, energy and entropy
# all follow from its derivatives.

# %%
import numpy as np

from filtrate import perturb, thermo
from filtrate.media import MediumLaw
from filtrate.perturb import CorrectionSet
from filtrate.selfsim import SelfSimilarSolution

gas = thermo.PotentialModel.van_der_waals(a=1.0, b=0.1, n=3, R=1.0)

# %% [markdown]
# ## Critical point and the coexistence dome
# The critical point is where both phi_vv and phi_vvv vanish. It should sit
# at (3b, 8a / (27 R b)).

# %%
v_c, T_c = thermo.critical_point(gas)
print(f"v_c = {v_c:.12f}  (3b = {3 * gas.b})")
print(f"T_c = {T_c:.12f}  (8a/27Rb = {8 / 2.7:.12f})")

for T, v1, v2 in thermo.coexistence_curve(gas, 0.5 * T_c, 0.99 * T_c, 6):
    print(f"T/T_c = {T / T_c:.3f}   liquid v = {v1:.6f}   vapour v = {v2:.6f}")

# %% [markdown]
# ## Weak non-ideality in the filtration flow
# For small a and b the temperature picks up corrections
# T = T0 + a T1 + b T2 while the volume and the flow are unchanged.

# %%
base = SelfSimilarSolution(0.55, 2.7e-3, 3e5, 518.28, MediumLaw.ratio_power(5e-4, -1.0), n=6.0)
cs = CorrectionSet(base, a=9e-5, b=3e-3)
r = np.array([0.5, 1.0, 1.5, 2.0])
f = perturb.corrected_fields(cs, r)
for i, ri in enumerate(r):
    print(f"r={ri:.1f}  T0={f['T0'][i]:10.4f}  aT1={9e-5 * f['T1'][i]: .2e}  "
          f"bT2={3e-3 * f['T2'][i]: .3e}")

# %% [markdown]
# Halving (a, b) should shrink the residual of the corrected fields by
# four. Without the corrections it shrinks only by two.

# %%
pts = [(1.0, 0.6, 0.5, 0.4), (1.5, 0.8, 0.6, 0.5)]
print("with corrections   :", perturb.correction_order_check(cs, pts)["ratios"])
print("without corrections:", perturb.correction_order_check(cs, pts, include_corrections=False)["ratios"])

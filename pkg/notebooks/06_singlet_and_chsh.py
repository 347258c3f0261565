# %% [markdown]
# # Two spins with opposite c-variables
#
# Joint law of the two sign answers, the correlation `-a.b`, and the CHSH combination.

# %%
import numpy as np

from qfocus.scenarios import chsh_combination, chsh_pointwise, maximize_chsh, planar, singlet_joint

a, b = planar(0).array, planar(60).array
print(np.round(singlet_joint(a, b), 6))

holds, gap, rows = chsh_pointwise()
print("pointwise inequality over 16 sign assignments:", holds, "max gap", gap)

angles = dict(a=0, a2=90, b=135, b2=45)
s = chsh_combination(*(planar(v).array for v in angles.values()))
print(angles, "->", s, "(2 sqrt 2 =", 2 * np.sqrt(2), ")")
best, x = maximize_chsh(seed=0)
print("planar maximum", best, "at", np.round(np.degrees(x), 2))

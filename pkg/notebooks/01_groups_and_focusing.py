# %% [markdown]
# # Groups, actions and focused parameters
#
# A finite group is a composition table, an action is a table `map[phi, g] = phi g`.
# We build the rotation group of the cube acting on its 8 vertices and look at
# the sign of one coordinate as a focused question.

# %%
import numpy as np

from qfocus.focusing import find_transition, reduce_to_orbit, verify_coupling
from qfocus.groups import generated_subgroup, invariant_measure, maximal_permissible_subgroup, orbits
from qfocus.models import cube_model, reflection_model
from qfocus.focusing import focused_parameter

cube = cube_model()
print(cube.group)
print("orbits on vertices:", orbits(cube.action).blocks)
print("invariant measure:", [str(w) for w in invariant_measure(cube.action).weights])

# %% [markdown]
# The largest subgroup that permutes the level sets of `sign(phi . z)`.
# Four quarter turns about z keep both sets, four half turns about horizontal axes swap them.

# %%
sign_z = cube.sign_parameter("z")
Gz = maximal_permissible_subgroup(sign_z, cube.action)
print("|G^z| =", Gz.order)
for g in Gz.embedding:
    print(g, cube.matrices[g].tolist())

# %% [markdown]
# Moving between foci: `sign_x(phi) = sign_z(phi g)` for a quarter turn about y,
# and the two permissible subgroups are conjugate.

# %%
sign_x = cube.sign_parameter("x")
g = find_transition(sign_z, sign_x, cube.action)
print("g_zx =", g, cube.matrices[g].tolist())
print(verify_coupling(sign_z, sign_x, cube.action, g).to_dict())

subs = [maximal_permissible_subgroup(cube.sign_parameter(a), cube.action) for a in "xyz"]
gens = sorted(set().union(*(s.embedding for s in subs)))
print("the three subgroups generate", generated_subgroup(cube.group, gens).order, "elements")

# %% [markdown]
# Reduction: a three-valued parameter under a reflection has value orbits `{-k, k}` and `{0}`.
# Restricting to the two-point orbit and rescaling gives a `{-1, +1}` question.

# %%
refl, pts = reflection_model()
theta = focused_parameter("theta", range(3), lambda p: 0.5 * pts[p])
red = reduce_to_orbit(theta, refl, {-0.5, 0.5})
print(red)

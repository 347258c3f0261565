# %% [markdown]
# # The spin-1/2 quantum space
#
# States of `sign(phi . a)` are the eigenvectors of `a . sigma`. The probability of
# answering `b` after preparing `a` is `cos^2` or `sin^2` of half the angle between them.

# %%
import numpy as np

from qfocus.measurement import born_transition_matrix
from qfocus.models import spin_operator, spin_states, su2_from_rotation
from qfocus.scenarios import planar, rotation_between, run_spin_half

for deg in (0, 45, 90, 135, 180):
    b = born_transition_matrix(spin_states(planar(0).array), spin_states(planar(deg).array))
    print(f"{deg:3d} deg", np.round(b, 6).tolist(), "cos^2(t/2) =", round(np.cos(np.radians(deg) / 2) ** 2, 6))

# %% [markdown]
# A rotation carrying `a` to `b` lifts to SU(2) and carries the states along.

# %%
a, b = np.array([0, 0, 1.0]), np.array([1.0, 2.0, 2.0]) / 3
D = su2_from_rotation(rotation_between(a, b))
print(np.round(D @ spin_operator(a) @ D.conj().T - spin_operator(b), 14))

# %%
rep = run_spin_half(seed=1)
print(rep.passed, len(rep.checks), "checks")
for c in rep.checks[:6]:
    print(f"  {c.name}: {c.measured}")

# %% [markdown]
# # Time evolution and the translation generator

# %%
import numpy as np

from qfocus.dynamics import Hamiltonian, Lattice, evolve_state, heisenberg_operator, translation_generator
from qfocus.models import spin_operator, spin_states
from qfocus.serialize import evolution_trace, write_trace_csv

H = Hamiltonian(spin_operator([0, 0, 1]) / 2)
x = spin_states([1, 0, 0])
rows = evolution_trace(x[:, 1], H, np.linspace(0, np.pi, 5))
print(write_trace_csv(rows))
v = evolve_state(x[:, 1], H, np.pi)
print("overlap with x-down after t = pi:", abs(np.vdot(x[:, 0], v)) ** 2)

# %% [markdown]
# An eigenvector of `T` stays an eigenvector of `T(t)` with the same eigenvalue.

# %%
T = spin_operator([1, 0, 0])
Tt = heisenberg_operator(T, H, 0.8)
vt = evolve_state(x[:, 1], H, 0.8)
print(np.round(Tt @ vt - vt, 14))

# %% [markdown]
# On a ring of 64 sites, `exp(b D)` with the spectral derivative `D` shifts
# band-limited functions by `b`; at one spacing it equals the site shift.

# %%
lat = Lattice(64, 0.5)
gen = translation_generator(lat)
q = np.exp(2j * np.pi * 3 * lat.coordinates / lat.length) + 0.5 * np.exp(-2j * np.pi * 7 * lat.coordinates / lat.length)
print("max |exp(aD) q - S q| =", np.abs(gen.translate(lat.spacing) @ q - gen.shift @ q).max())

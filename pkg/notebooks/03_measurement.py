# %% [markdown]
# # Measurement calculus
#
# A prior over the answers of one question is a density operator; a noisy
# measurement is a POVM built from its likelihood table.

# %%
import numpy as np

from qfocus.measurement import (LikelihoodTable, build_povm, collapse, density_from_prior, predictive_distribution,
                                recover_from_density)
from qfocus.models import spin_states

z, x = spin_states([0, 0, 1]), spin_states([1, 0, 0])
sigma = density_from_prior(z, [0.3, 0.7])
print(np.round(sigma.matrix.real, 3))
vecs, probs = recover_from_density(sigma)
print("recovered probabilities", probs)

# %%
povm = build_povm(x, LikelihoodTable([[0.9, 0.1], [0.2, 0.8]]))
print("sum of effects\n", np.round(sum(e.matrix for e in povm).real, 12))
print("z-up through noisy x measurement:", predictive_distribution(density_from_prior(z, [0, 1]), povm))

# %% [markdown]
# Reading an x measurement on z-up, without looking, leaves the maximally mixed state.

# %%
print(np.round(collapse(z[:, 1], x).matrix.real, 12))

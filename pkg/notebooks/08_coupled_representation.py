# %% [markdown]
# # Extending a representation through several foci
#
# The cube rotations lifted to SU(2) act on the two-dimensional spin space. Building
# the operator of each group element from factors in the three permissible subgroups
# gives the same operator (up to phase) for every factorization. A random `W0`
# that does not intertwine breaks this, and the discrepancy shows it.

# %%
import numpy as np
from scipy.stats import unitary_group

from qfocus.scenarios import spin_coupled_representation

good = spin_coupled_representation()
print(good.to_dict())
bad = spin_coupled_representation(W0=unitary_group.rvs(2, random_state=np.random.default_rng(1)))
print(bad.to_dict())

# %% [markdown]
# The cube's permutation representation on its vertices splits as `A1 + A2 + T1 + T2`.

# %%
from qfocus.groups import invariant_measure
from qfocus.models import CUBE_IRREPS, cube_characters, cube_model
from qfocus.quantum_space import isotypic_projectors, regular_representation

cube = cube_model()
iso = isotypic_projectors(regular_representation(cube.action, invariant_measure(cube.action)), cube_characters(cube))
print(dict(zip(CUBE_IRREPS, iso.multiplicities)), iso.residuals())

# %% [markdown]
# # Best equivariant estimation on Z_5
#
# Location model `y = theta + e mod 5` with an asymmetric noise law, squared cyclic loss.
# The Bayes rule under the invariant prior is compared, in exact rationals, with
# every equivariant estimator.

# %%
from fractions import Fraction as F

from qfocus.inference import brute_force_best_equivariant, cyclic_squared_loss, location_model, pitman_estimator
from qfocus.serialize import risk_table_csv

model = location_model((F(1, 2), F(1, 5), F(1, 10), F(1, 10), F(1, 10)))
loss = cyclic_squared_loss(5)
print("Pitman estimator:", pitman_estimator(model, loss))
best = brute_force_best_equivariant(model, loss)
print(risk_table_csv(best))
print("Pitman risk", best.pitman_risk, "== best", best.risk, ":", best.pitman_is_best)

# %% [markdown]
# # A latent-variable analogue
#
# `Z = t a' + u b'`. Knowing `t` reveals `b` up to scale through `(I - P) Z`,
# while the component of `u` along `t` stays hidden.

# %%
from qfocus.scenarios import run_latent_epr

for noise in (0.0, 1e-6, 1e-3):
    rep = run_latent_epr(noise=noise)
    print(f"noise {noise:g}: passed={rep.passed}")
    for c in rep.checks:
        print(f"   {c.name:45s} {c.measured}")

"""Property-based checks of the invariants, over generated groups, states and models."""

import itertools
from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st
from scipy.stats import unitary_group

from qfocus.dynamics import Hamiltonian, evolve_state, heisenberg_operator
from qfocus.focusing import find_transition, focused_parameter
from qfocus.groups import (build_action, generated_subgroup, invariant_measure, is_permissible,
                           maximal_permissible_subgroup, orbits, verify_group)
from qfocus.inference import (brute_force_best_equivariant, cyclic_squared_loss, is_equivariant, location_model,
                              pitman_estimator, risk)
from qfocus.measurement import (LikelihoodTable, born_transition_matrix, build_povm, collapse, density_from_prior,
                                predictive_distribution)
from qfocus.models import cube_model, cyclic_group
from qfocus.quantum_space import build_parametric_space, inner

settings.register_profile("qfocus", max_examples=40, deadline=None)
settings.load_profile("qfocus")

seeds = st.integers(0, 2**32 - 1)


def direct_product(n, m):
    idx = list(itertools.product(range(n), range(m)))
    pos = {p: i for i, p in enumerate(idx)}
    return [[pos[((a + c) % n, (b + d) % m)] for (c, d) in idx] for (a, b) in idx]


@given(st.integers(1, 6), st.integers(1, 4))
def test_products_of_cyclic_groups_are_groups(n, m):
    g = verify_group(direct_product(n, m))
    t = np.asarray(g.table)
    e = g.identity
    for x in range(g.order):
        assert t[x, e] == x == t[e, x]
        assert t[x, g.inv(x)] == e
    for x, y, z in itertools.product(range(g.order), repeat=3):
        assert t[t[x, y], z] == t[x, t[y, z]]


@given(st.integers(2, 12), st.integers(1, 5))
def test_cyclic_action_on_cosets(n, k):
    # Z_n acting on Z_n x {0..k-1} by shifting the first coordinate
    g = cyclic_group(n)
    pts = list(itertools.product(range(n), range(k)))
    pos = {p: i for i, p in enumerate(pts)}
    act = build_action(g, [[pos[((a + h) % n, b)] for h in range(n)] for (a, b) in pts])
    part = orbits(act)
    assert len(part) == k
    assert sorted(p for b in part.blocks for p in b) == list(range(n * k))
    mu = invariant_measure(act)
    assert mu.total == 1
    for h in range(n):
        assert all(mu.weights[act.act(p, h)] == mu.weights[p] for p in range(n * k))


@given(st.lists(st.integers(0, 23), min_size=1, max_size=3))
def test_generated_subgroup_closed(gens):
    m = cube_model()
    sub = generated_subgroup(m.group, gens)
    elems = set(sub.embedding)
    assert all(m.group.mul(a, b) in elems for a in elems for b in elems)
    assert 24 % sub.order == 0


@given(st.lists(st.integers(-2, 2), min_size=8, max_size=8))
def test_maximal_permissible_is_permissible(vals):
    m = cube_model()
    lam = focused_parameter("f", range(8), lambda p: vals[p])
    sub = maximal_permissible_subgroup(lam, m.action)
    assert is_permissible(lam, m.action, sub)[0]
    # every excluded element breaks permissibility on its own
    for g in set(range(24)) - set(sub.embedding):
        single = generated_subgroup(m.group, [g])
        assert not is_permissible(lam, m.action, single)[0]


@given(st.lists(st.integers(-2, 2), min_size=8, max_size=8), st.integers(0, 23))
def test_transition_is_pointwise(vals, g):
    m = cube_model()
    a = focused_parameter("a", range(8), lambda p: vals[p])
    b = focused_parameter("b", range(8), lambda p: vals[m.action.act(p, g)])
    h = find_transition(a, b, m.action)
    assert h is not None
    assert all(b(p) == a(m.action.act(p, h)) for p in range(8))


@given(seeds)
def test_weighted_parseval(seed):
    rng = np.random.default_rng(seed)
    m = cube_model()
    rho = invariant_measure(m.action)
    lam = m.sign_parameter("z")
    sp = build_parametric_space(lam, rho)
    # complete the indicator basis to a rho-orthonormal basis of L2 by point deltas scaled to unit norm
    w = sp.weight
    f = rng.normal(size=8) + 1j * rng.normal(size=8)
    basis = [np.eye(8)[p] / np.sqrt(w[p]) for p in range(8)]
    total = sum(abs(inner(e, f, w)) ** 2 for e in basis)
    assert abs(total - inner(f, f, w).real) <= 1e-10


@given(seeds, st.integers(1, 6))
def test_born_doubly_stochastic(seed, d):
    rng = np.random.default_rng(seed)
    a = unitary_group.rvs(d, random_state=rng) if d > 1 else np.eye(1)
    b = unitary_group.rvs(d, random_state=rng) if d > 1 else np.eye(1)
    born = born_transition_matrix(a, b)
    assert np.abs(born.sum(axis=0) - 1).max() <= 1e-10
    assert np.abs(born.sum(axis=1) - 1).max() <= 1e-10
    assert born.min() >= 0


@given(seeds, st.integers(2, 5), st.integers(1, 5))
def test_povm_and_predictive(seed, d, n_out):
    rng = np.random.default_rng(seed)
    states = unitary_group.rvs(d, random_state=rng)
    lik = rng.random((d, n_out)) + 1e-3
    lik /= lik.sum(axis=1, keepdims=True)
    povm = build_povm(states, LikelihoodTable(lik))
    assert np.abs(sum(e.matrix for e in povm) - np.eye(d)).max() <= 1e-10
    sigma = density_from_prior(states, rng.dirichlet(np.ones(d)))
    pred = predictive_distribution(sigma, povm)
    assert abs(pred.sum() - 1) <= 1e-10 and pred.min() >= -1e-12
    post = collapse(states[:, 0], unitary_group.rvs(d, random_state=rng))
    assert abs(np.trace(post.matrix).real - 1) <= 1e-10


@given(seeds, st.integers(1, 8), st.floats(-10, 10))
def test_unitary_flow(seed, d, t):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    H = Hamiltonian((a + a.conj().T) / 2)
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    v /= np.linalg.norm(v)
    assert abs(np.linalg.norm(evolve_state(v, H, t)) - 1) <= 1e-10
    T = np.diag(rng.normal(size=d)).astype(complex)
    np.testing.assert_allclose(np.linalg.eigvalsh(heisenberg_operator(T, H, t)), np.sort(np.diag(T).real), atol=1e-9)


noise_st = st.lists(st.integers(0, 9), min_size=2, max_size=6).filter(lambda w: sum(w) > 0)


@given(noise_st)
def test_pitman_is_best_equivariant(weights):
    total = sum(weights)
    noise = [Fraction(w, total) for w in weights]
    model = location_model(noise)
    loss = cyclic_squared_loss(len(noise))
    est = pitman_estimator(model, loss)
    assert is_equivariant(est, model)[0]
    risks = {risk(est, model, loss, th) for th in range(len(noise))}
    assert len(risks) == 1
    best = brute_force_best_equivariant(model, loss)
    assert best.pitman_risk == best.risk == min(r[1][0] for r in best.risk_table)

from fractions import Fraction as F

import pytest

from qfocus.groups import build_action
from qfocus.inference import (FiniteModel, IncompatibleModel, NonInvariantLoss, ZeroEvidence,
                              brute_force_best_equivariant, cyclic_squared_loss, invariant_prior, is_equivariant,
                              location_model, pitman_estimate, pitman_estimator, posterior, risk, zero_one_loss,
                              LossFunction)
from qfocus.models import reflection_model, translation_action, trivial_group

Z3 = (F(6, 10), F(3, 10), F(1, 10))
Z5 = (F(1, 2), F(1, 5), F(1, 10), F(1, 10), F(1, 10))


def test_invariant_priors():
    assert invariant_prior(translation_action(5)).weights == (F(1, 5),) * 5
    act, _ = reflection_model()
    assert invariant_prior(act).weights == (F(1, 4), F(1, 2), F(1, 4))
    triv = build_action(trivial_group(), [[0], [1], [2]])
    assert not invariant_prior(triv).unique


def test_posterior_z3():
    m = location_model(Z3)
    post = posterior(m, invariant_prior(m.theta_action), 0)
    assert post == [F(6, 10), F(1, 10), F(3, 10)]
    assert sum(post) == 1


def test_posterior_perfect():
    m = location_model((1, 0, 0))
    assert posterior(m, [F(1, 3)] * 3, 2) == [0, 0, 1]


def test_zero_evidence():
    m = location_model((1, 0, 0))
    with pytest.raises(ZeroEvidence):
        posterior(m, [1, 0, 0], 1)


def test_pitman_zero_one():
    m = location_model(Z3)
    assert pitman_estimate(m, zero_one_loss(), 0) == 0


def test_pitman_symmetric_noise_oracle():
    # brute force over candidates: minimize sum_e p(e) loss(y - e, c)
    noise = (F(1, 2), F(1, 4), F(1, 4))
    m = location_model(noise)
    loss = cyclic_squared_loss(3)
    for y in range(3):
        costs = [sum(noise[e] * loss((y - e) % 3, c) for e in range(3)) for c in range(3)]
        assert pitman_estimate(m, loss, y) == costs.index(min(costs))


def test_pitman_degenerate_noise():
    m = location_model((1, 0, 0, 0))
    assert pitman_estimator(m, cyclic_squared_loss(4)) == (0, 1, 2, 3)


def test_pitman_requires_invariant_loss():
    m = location_model(Z3)
    with pytest.raises(NonInvariantLoss):
        pitman_estimate(m, LossFunction(lambda t, s: (t - s) ** 2), 0)


def test_equivariance():
    m = location_model(Z5)
    assert is_equivariant((0, 1, 2, 3, 4), m) == (True, None)
    ok, witness = is_equivariant((2,) * 5, m)
    assert not ok and witness is not None
    assert is_equivariant(pitman_estimator(location_model(Z3), cyclic_squared_loss(3)), location_model(Z3))[0]


def test_risk_values():
    perfect = location_model((1, 0, 0))
    loss = cyclic_squared_loss(3)
    assert all(risk((0, 1, 2), perfect, loss, t) == 0 for t in range(3))
    m = location_model(Z3)
    est = pitman_estimator(m, loss)
    assert len({risk(est, m, loss, t) for t in range(3)}) == 1
    const = [risk((0, 0, 0), m, loss, t) for t in range(3)]
    assert len(set(const)) > 1


def test_pitman_z5_frozen():
    # frozen by hand: risk of y -> y - c is sum_e p(e) d(e - c)^2 with cyclic distance d;
    # c = 0, 1, 2, 3, 4 give 11/10, 7/5, 27/10, 3, 9/5
    m = location_model(Z5)
    loss = cyclic_squared_loss(5)
    est = pitman_estimator(m, loss)
    assert est == (0, 1, 2, 3, 4)
    best = brute_force_best_equivariant(m, loss)
    assert best.pitman_risk == best.risk == F(11, 10)
    assert best.pitman_is_best
    assert len(best.risk_table) == 5
    assert sorted(r[1][0] for r in best.risk_table) == [F(11, 10), F(7, 5), F(9, 5), F(27, 10), F(3)]


def test_deterministic_best_zero():
    best = brute_force_best_equivariant(location_model((1, 0, 0, 0, 0)), cyclic_squared_loss(5))
    assert best.risk == 0


def test_two_point():
    m = location_model((F(3, 4), F(1, 4)))
    best = brute_force_best_equivariant(m, zero_one_loss())
    assert [r[1][0] for r in best.risk_table] == [F(1, 4), F(3, 4)]
    assert best.pitman_risk == F(1, 4)


def test_incompatible_model():
    act = translation_action(3)
    with pytest.raises(IncompatibleModel):
        FiniteModel([[1, 0, 0], [1, 0, 0], [1, 0, 0]], act, act)


def test_pitman_ties_stay_equivariant():
    # two equally likely shifts: every y has two Bayes actions; the rule must still commute with Z_2
    m = location_model((F(1, 2), F(1, 2)))
    est = pitman_estimator(m, cyclic_squared_loss(2))
    assert is_equivariant(est, m)[0]
    m4 = location_model((F(1, 2), 0, F(1, 2), 0))
    assert is_equivariant(pitman_estimator(m4, cyclic_squared_loss(4)), m4)[0]

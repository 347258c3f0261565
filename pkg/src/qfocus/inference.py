"""Invariant priors, exact posteriors and best equivariant estimators on finite models.

Probabilities may be :class:`fractions.Fraction` (exact) or floats; all
arithmetic here is plain Python so rational inputs stay rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .groups import GroupAction, Measure, invariant_measure, orbits

__all__ = [
    "ZeroEvidence",
    "NonInvariantLoss",
    "NonTransitive",
    "NotFreeTransitive",
    "IncompatibleModel",
    "FiniteModel",
    "Estimator",
    "LossFunction",
    "location_model",
    "zero_one_loss",
    "cyclic_squared_loss",
    "invariant_prior",
    "posterior",
    "bayes_risk_terms",
    "pitman_estimate",
    "pitman_estimator",
    "is_equivariant",
    "risk",
    "brute_force_best_equivariant",
]


class ZeroEvidence(ValueError):
    pass


class NonInvariantLoss(ValueError):
    pass


class NonTransitive(ValueError):
    pass


class NotFreeTransitive(ValueError):
    pass


class IncompatibleModel(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteModel:
    """Likelihood ``likelihood[theta][y]`` with one group acting on both parameter and sample space.

    The actions must satisfy ``p(y g | theta g) = p(y | theta)``, which is the
    pointwise form of ``P^{theta g}(A) = P^theta(A g^-1)``.
    """

    likelihood: tuple
    theta_action: GroupAction
    y_action: GroupAction

    def __post_init__(self):
        lik = tuple(tuple(row) for row in self.likelihood)
        object.__setattr__(self, "likelihood", lik)
        if self.theta_action.group is not self.y_action.group:
            if self.theta_action.group.order != self.y_action.group.order:
                raise IncompatibleModel("parameter and sample actions use different groups")
        if len(lik) != self.theta_action.n_points or any(len(r) != self.y_action.n_points for r in lik):
            raise IncompatibleModel("likelihood shape does not match the two point sets")
        for t, row in enumerate(lik):
            if any(p < 0 for p in row):
                raise IncompatibleModel(f"negative probability in row {t}")
            if abs(sum(row) - 1) > 1e-12:
                raise IncompatibleModel(f"row {t} does not sum to one")
        bad = self.compatibility_witness()
        if bad is not None:
            raise IncompatibleModel(f"p(yg | theta g) != p(y | theta) at (theta, y, g) = {bad}")

    @property
    def n_theta(self) -> int:
        return self.theta_action.n_points

    @property
    def n_y(self) -> int:
        return self.y_action.n_points

    @property
    def group(self):
        return self.theta_action.group

    def p(self, y: int, theta: int):
        return self.likelihood[theta][y]

    def compatibility_witness(self):
        ta, ya = self.theta_action, self.y_action
        for g in range(self.group.order):
            for t in range(self.n_theta):
                tg = ta.act(t, g)
                for y in range(self.n_y):
                    if self.likelihood[tg][ya.act(y, g)] != self.likelihood[t][y]:
                        return (t, y, g)
        return None


Estimator = tuple
"""An estimator is a tuple mapping each sample index ``y`` to a parameter index."""


@dataclass(frozen=True)
class LossFunction:
    loss: Callable
    name: str = ""

    def __call__(self, theta: int, estimate: int):
        return self.loss(theta, estimate)

    def invariance_witness(self, action: GroupAction):
        for g in range(action.group.order):
            for t in range(action.n_points):
                for s in range(action.n_points):
                    if self.loss(action.act(t, g), action.act(s, g)) != self.loss(t, s):
                        return (t, s, g)
        return None

    def is_invariant(self, action: GroupAction) -> bool:
        return self.invariance_witness(action) is None


def zero_one_loss() -> LossFunction:
    return LossFunction(lambda t, s: 0 if t == s else 1, "0-1")


def cyclic_squared_loss(n: int) -> LossFunction:
    """Squared cyclic distance on ``Z_n``: ``min(|t - s|, n - |t - s|)^2``."""
    def loss(t, s):
        d = abs(t - s) % n
        return min(d, n - d) ** 2
    return LossFunction(loss, f"cyclic-squared-{n}")


def location_model(noise: Sequence) -> FiniteModel:
    """``y = theta + e mod n`` with ``P(e = k) = noise[k]``, the group ``Z_n`` translating both."""
    from .models import translation_action

    n = len(noise)
    action = translation_action(n)
    lik = [[noise[(y - t) % n] for y in range(n)] for t in range(n)]
    return FiniteModel(lik, action, action)


def invariant_prior(action: GroupAction) -> Measure:
    """The right-invariant measure of the parameter action, used as a noninformative prior."""
    return invariant_measure(action)


def _weights(prior):
    if isinstance(prior, Measure):
        return list(prior.weights)
    return list(prior)


def posterior(model: FiniteModel, prior, y: int) -> list:
    """Exact posterior over parameter indices given outcome index ``y``."""
    w = _weights(prior)
    joint = [w[t] * model.p(y, t) for t in range(model.n_theta)]
    evidence = sum(joint)
    if evidence == 0:
        raise ZeroEvidence(f"outcome {y} has zero marginal probability under the prior")
    return [j / evidence for j in joint]


def bayes_risk_terms(post: Sequence, loss: LossFunction, n_theta: int) -> list:
    """Posterior expected loss of every candidate estimate."""
    return [sum(post[t] * loss(t, c) for t in range(n_theta)) for c in range(n_theta)]


def _require_invariant_transitive(model: FiniteModel, loss: LossFunction):
    w = loss.invariance_witness(model.theta_action)
    if w is not None:
        raise NonInvariantLoss(f"loss changes under the group at (theta, estimate, g) = {w}")
    if not orbits(model.theta_action).is_transitive:
        raise NonTransitive("the group does not act transitively on the parameters")


def _bayes_action(model: FiniteModel, loss: LossFunction, y: int, stabilizer=()) -> int:
    post = posterior(model, invariant_prior(model.theta_action), y)
    terms = bayes_risk_terms(post, loss, model.n_theta)
    best = min(terms)
    ties = [c for c, r in enumerate(terms) if r == best]
    # prefer a minimizer fixed by the stabilizer of y, so the transported rule is well defined
    fixed = [c for c in ties if all(model.theta_action.act(c, g) == c for g in stabilizer)]
    return (fixed or ties)[0]


def pitman_estimate(model: FiniteModel, loss: LossFunction, y: int) -> int:
    """Bayes estimate under the invariant prior at outcome ``y``.

    Ties are broken at the least point ``y0`` of the orbit of ``y`` (smallest
    parameter index, preferring values fixed by the stabilizer of ``y0``) and
    carried to ``y = y0 g`` as ``est(y0) g``. Transporting keeps the value a
    Bayes action, and the resulting rule is equivariant.
    """
    _require_invariant_transitive(model, loss)
    ya, ta = model.y_action, model.theta_action
    order = model.group.order
    row = ya.map[y]
    y0 = int(min(row))
    g = next(h for h in range(order) if ya.act(y0, h) == y)
    stab = [h for h in range(order) if ya.act(y0, h) == y0]
    return ta.act(_bayes_action(model, loss, y0, stab), g)


def pitman_estimator(model: FiniteModel, loss: LossFunction) -> Estimator:
    return tuple(pitman_estimate(model, loss, y) for y in range(model.n_y))


def is_equivariant(est: Sequence[int], model: FiniteModel):
    """Exhaustive check of ``est(y g) == est(y) g``; returns ``(ok, witness)``."""
    ta, ya = model.theta_action, model.y_action
    for y in range(model.n_y):
        for g in range(model.group.order):
            if est[ya.act(y, g)] != ta.act(est[y], g):
                return False, (y, g)
    return True, None


def risk(est: Sequence[int], model: FiniteModel, loss: LossFunction, theta: int):
    """Expected loss ``sum_y p(y | theta) loss(theta, est(y))``."""
    return sum(model.p(y, theta) * loss(theta, est[y]) for y in range(model.n_y))


@dataclass(frozen=True)
class BestEquivariant:
    estimator: Estimator
    risk: object
    risk_table: tuple          # (value at the reference sample, risk at every theta)
    pitman: Estimator
    pitman_risk: object

    @property
    def pitman_is_best(self) -> bool:
        return self.pitman_risk == self.risk


def brute_force_best_equivariant(model: FiniteModel, loss: LossFunction, reference: int = 0) -> BestEquivariant:
    """Enumerate every equivariant estimator and return the one with least risk.

    Requires the group to act freely and transitively on the sample space, so
    an equivariant estimator is fixed by its value ``c`` at ``reference``:
    ``est(reference g) = c g``.
    """
    ya, ta = model.y_action, model.theta_action
    order = model.group.order
    reach = {}
    for g in range(order):
        y = ya.act(reference, g)
        if y in reach:
            raise NotFreeTransitive(f"two group elements move {reference} to {y}")
        reach[y] = g
    if len(reach) != model.n_y:
        raise NotFreeTransitive("the group is not transitive on the sample space")

    rows = []
    best = None
    for c in range(model.n_theta):
        est = tuple(ta.act(c, reach[y]) for y in range(model.n_y))
        ok, witness = is_equivariant(est, model)
        if not ok:
            # c is not fixed by the stabilizer; cannot occur for a free action
            raise AssertionError(f"candidate {c} is not equivariant at {witness}")
        risks = [risk(est, model, loss, t) for t in range(model.n_theta)]
        r = risks[0]
        rows.append((c, tuple(risks)))
        if best is None or r < best[1]:
            best = (est, r)
    pit = pitman_estimator(model, loss)
    pit_risk = risk(pit, model, loss, 0)
    return BestEquivariant(best[0], best[1], tuple(rows), pit, pit_risk)

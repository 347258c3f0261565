"""Born-rule probability calculus on a finite-dimensional Hilbert space.

State families are passed as matrices whose columns are the states
``v_1, ..., v_d`` of one focused question.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "NotABasis",
    "BadPrior",
    "BadLikelihood",
    "AmbiguousDecomposition",
    "DimensionMismatch",
    "DensityOperator",
    "EffectOperator",
    "LikelihoodTable",
    "born_transition_matrix",
    "expectation",
    "density_from_prior",
    "recover_from_density",
    "effect_from_likelihood",
    "build_povm",
    "predictive_distribution",
    "collapse",
    "dephase",
]

TOL = 1e-10


class NotABasis(ValueError):
    pass


class BadPrior(ValueError):
    pass


class BadLikelihood(ValueError):
    pass


class AmbiguousDecomposition(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def _hermitian(m, tol):
    return np.allclose(m, m.conj().T, atol=tol, rtol=0)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density operator must be square")
        if not _hermitian(m, TOL):
            raise ValueError("density operator is not hermitian")
        ev = np.linalg.eigvalsh(m)
        if ev.min() < -TOL:
            raise ValueError(f"density operator has negative eigenvalue {ev.min():.3g}")
        if abs(np.trace(m).real - 1) > TOL:
            raise ValueError(f"density operator has trace {np.trace(m).real!r}")
        object.__setattr__(self, "matrix", m)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


@dataclass(frozen=True, eq=False)
class EffectOperator:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if not _hermitian(m, TOL):
            raise ValueError("effect is not hermitian")
        ev = np.linalg.eigvalsh(m)
        if ev.min() < -TOL or ev.max() > 1 + TOL:
            raise ValueError("effect eigenvalues leave [0, 1]")
        object.__setattr__(self, "matrix", m)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


@dataclass(frozen=True)
class LikelihoodTable:
    """``p[j][y]``: probability of outcome ``y`` when the parameter has value index ``j``."""

    p: np.ndarray
    outcomes: tuple = None

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.ndim != 2:
            raise BadLikelihood("likelihood must be a 2-d table (values x outcomes)")
        if np.any(p < 0):
            raise BadLikelihood("negative probability")
        if not np.allclose(p.sum(axis=1), 1.0, atol=1e-12, rtol=0):
            raise BadLikelihood("rows do not sum to one")
        object.__setattr__(self, "p", p)
        outcomes = tuple(range(p.shape[1])) if self.outcomes is None else tuple(self.outcomes)
        if len(outcomes) != p.shape[1]:
            raise BadLikelihood("outcome labels do not match the table")
        object.__setattr__(self, "outcomes", outcomes)

    @property
    def n_values(self) -> int:
        return self.p.shape[0]


def _check_basis(states, name="states"):
    s = np.asarray(states, dtype=complex)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise NotABasis(f"{name} must be a square matrix of column states")
    if not np.allclose(s.conj().T @ s, np.eye(s.shape[1]), atol=TOL, rtol=0):
        raise NotABasis(f"{name} are not orthonormal and complete")
    return s


def born_transition_matrix(states_a, states_b) -> np.ndarray:
    """``B[j, k] = |<v_j^b, v_k^a>|^2``; columns index the prepared state."""
    a = _check_basis(states_a, "states_a")
    b = _check_basis(states_b, "states_b")
    if a.shape != b.shape:
        raise NotABasis("state families have different dimensions")
    return np.abs(b.conj().T @ a) ** 2


def expectation(v, T) -> float:
    """``v^dagger T v`` for a unit vector and a hermitian operator."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    T = np.asarray(T, dtype=complex)
    if T.shape != (v.size, v.size):
        raise DimensionMismatch("operator and state dimensions differ")
    val = np.vdot(v, T @ v)
    if abs(val.imag) > 1e-12 * max(1.0, abs(val.real)):
        raise ValueError("operator is not hermitian (complex expectation)")
    return float(val.real)


def density_from_prior(states, prior) -> DensityOperator:
    """``sigma = sum_k pi_k v_k v_k^dagger``."""
    s = np.asarray(states, dtype=complex)
    pi = np.asarray(prior, dtype=float)
    if pi.ndim != 1 or pi.size != s.shape[1]:
        raise BadPrior("one prior weight per state is required")
    if np.any(pi < 0) or abs(pi.sum() - 1) > 1e-12:
        raise BadPrior("prior must be nonnegative and sum to one")
    return DensityOperator((s * pi[None, :]) @ s.conj().T)


def recover_from_density(sigma: DensityOperator, gap: float = 1e-8):
    """Eigen-decompose ``sigma`` into ``(states, probabilities)``, probabilities descending.

    Raises
    ------
    AmbiguousDecomposition
        When two eigenvalues are closer than ``gap``: the eigenbasis, and with
        it the focused question, is then not determined by ``sigma``.
    """
    m = sigma.matrix if isinstance(sigma, DensityOperator) else DensityOperator(sigma).matrix
    ev, vecs = np.linalg.eigh(m)
    order = np.argsort(ev)[::-1]
    ev, vecs = ev[order], vecs[:, order]
    if ev.size > 1 and np.min(np.abs(np.diff(ev))) < gap:
        raise AmbiguousDecomposition(f"eigenvalue gap below {gap}: {ev}")
    residual = np.abs((vecs * ev[None, :]) @ vecs.conj().T - m).max()
    if residual > TOL:
        raise ArithmeticError(f"reconstruction residual {residual:.3g}")
    return vecs, np.clip(ev, 0.0, None)


def effect_from_likelihood(states, likelihood: LikelihoodTable, y) -> EffectOperator:
    """``E = sum_j p_j(y) v_j v_j^dagger`` for outcome ``y`` (label or position)."""
    lik = likelihood if isinstance(likelihood, LikelihoodTable) else LikelihoodTable(likelihood)
    s = np.asarray(states, dtype=complex)
    if lik.n_values != s.shape[1]:
        raise BadLikelihood("likelihood rows do not match the number of states")
    col = lik.outcomes.index(y) if y in lik.outcomes else y
    p = lik.p[:, col]
    return EffectOperator((s * p[None, :]) @ s.conj().T)


def build_povm(states, likelihood: LikelihoodTable) -> list[EffectOperator]:
    """One effect per outcome; they sum to the identity for orthonormal complete states."""
    lik = likelihood if isinstance(likelihood, LikelihoodTable) else LikelihoodTable(likelihood)
    return [effect_from_likelihood(states, lik, y) for y in lik.outcomes]


def predictive_distribution(sigma, povm: Sequence) -> np.ndarray:
    """``P(y) = tr(sigma M(y))``."""
    m = sigma.matrix if isinstance(sigma, DensityOperator) else np.asarray(sigma, dtype=complex)
    out = []
    for e in povm:
        e = e.matrix if isinstance(e, EffectOperator) else np.asarray(e)
        if e.shape != m.shape:
            raise DimensionMismatch("effect and density operator dimensions differ")
        out.append(np.trace(m @ e).real)
    return np.array(out)


def collapse(state, states_b, selected: int = None):
    """State after a perfect measurement in the basis ``states_b``.

    Without ``selected`` the outcome is unread and the result is the mixture
    ``sum_j |<v, v_j^b>|^2 v_j^b v_j^b^dagger``. With ``selected = j`` it is the
    pair ``(v_j^b, |<v, v_j^b>|^2)``.
    """
    b = _check_basis(states_b, "states_b")
    v = np.asarray(state, dtype=complex).reshape(-1)
    if v.size != b.shape[0]:
        raise DimensionMismatch("state and basis dimensions differ")
    weights = np.abs(b.conj().T @ v) ** 2
    if selected is None:
        return DensityOperator((b * weights[None, :]) @ b.conj().T)
    return b[:, selected], float(weights[selected])


def dephase(sigma, states_b) -> DensityOperator:
    """Unread perfect measurement applied to a mixed state: ``sum_j P_j sigma P_j``."""
    b = _check_basis(states_b, "states_b")
    m = sigma.matrix if isinstance(sigma, DensityOperator) else np.asarray(sigma, dtype=complex)
    diag = np.einsum("ij,ik,kj->j", b.conj(), m, b).real
    return DensityOperator((b * diag[None, :]) @ b.conj().T)

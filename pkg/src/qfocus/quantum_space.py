"""Hilbert-space constructions over a finite c-variable space.

Functions on the points are stored by their values, ``f[phi]``, and paired
with the weighted inner product ``<f, g> = sum_phi rho(phi) conj(f(phi)) g(phi)``.
Whenever a Euclidean-unitary picture is needed the coordinates are rescaled by
``sqrt(rho)`` ("orthonormal coordinates").
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .focusing import FocusedParameter
from .groups import FiniteGroup, GroupAction, Measure, generated_subgroup

__all__ = [
    "DegenerateMeasure",
    "NonInvariantMeasure",
    "BadCharacterTable",
    "NotGenerating",
    "NonUnitaryW",
    "NoMatch",
    "inner",
    "norm",
    "projector",
    "phase_distance",
    "ParametricSpace",
    "UnitaryFamily",
    "TransportReport",
    "IsotypicDecomposition",
    "CoupledRepresentation",
    "QuantumSpace",
    "build_parametric_space",
    "regular_representation",
    "transport_check",
    "isotypic_projectors",
    "build_coupled_representation",
    "build_quantum_space",
    "interpret_state",
    "operator_for_subparameter",
]


class DegenerateMeasure(ValueError):
    pass


class NonInvariantMeasure(ValueError):
    pass


class BadCharacterTable(ValueError):
    pass


class NotGenerating(ValueError):
    pass


class NonUnitaryW(ValueError):
    pass


class NoMatch(LookupError):
    pass


def inner(f, g, weight=None) -> complex:
    f = np.asarray(f)
    g = np.asarray(g)
    if weight is None:
        return complex(np.vdot(f, g))
    return complex(np.sum(np.asarray(weight) * np.conj(f) * g))


def norm(f, weight=None) -> float:
    return float(np.sqrt(abs(inner(f, f, weight))))


def projector(v) -> np.ndarray:
    """Rank-one projector ``v v^dagger``; insensitive to the phase of ``v``."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def phase_distance(a, b) -> float:
    """Frobenius distance between ``a`` and ``b`` after the best global phase on ``b``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    c = np.vdot(b, a)
    phase = c / abs(c) if abs(c) > 1e-300 else 1.0
    return float(np.linalg.norm(a - phase * b))


def _is_unitary(m, tol) -> bool:
    m = np.asarray(m)
    return np.allclose(m.conj().T @ m, np.eye(m.shape[1]), atol=tol, rtol=0)


@dataclass(frozen=True, eq=False)
class ParametricSpace:
    """The span of the level-set indicators of one focused parameter.

    ``indicators[:, k]`` is the indicator of ``{phi : lambda(phi) = values[k]}``
    scaled to unit weighted norm; ``multiplication`` is the operator ``S``
    multiplying a function by ``lambda(phi)`` (zero off the parameter's domain).
    """

    param: FocusedParameter
    weight: np.ndarray
    indicators: np.ndarray
    multiplication: np.ndarray

    @property
    def label(self) -> str:
        return self.param.label

    @property
    def values(self) -> tuple:
        return self.param.values

    @property
    def dimension(self) -> int:
        return self.indicators.shape[1]

    @property
    def orthonormal_basis(self) -> np.ndarray:
        """Indicators in orthonormal coordinates; columns are Euclidean-orthonormal."""
        return np.sqrt(self.weight)[:, None] * self.indicators

    def coordinates(self, f) -> np.ndarray:
        """Coefficients of ``f`` along the normalized indicators."""
        return np.array([inner(self.indicators[:, k], f, self.weight) for k in range(self.dimension)])


def build_parametric_space(param: FocusedParameter, measure) -> ParametricSpace:
    """Indicator basis and multiplication operator for ``param`` in L2(points, measure)."""
    w = measure.as_array() if isinstance(measure, Measure) else np.asarray(measure, dtype=float)
    if w.shape != (param.n_points,):
        raise ValueError("measure and parameter live on different point sets")
    if np.any(w <= 0):
        raise DegenerateMeasure("measure must be strictly positive on every point")
    idx = np.asarray(param.index)
    d = len(param.values)
    f = np.zeros((param.n_points, d))
    for k in range(d):
        mask = idx == k
        mass = w[mask].sum()
        if mass <= 0:
            raise DegenerateMeasure(f"level set {k} of {param.label!r} has zero mass")
        f[mask, k] = 1.0 / np.sqrt(mass)
    lam = np.array([float(param.values[k]) if k >= 0 else 0.0 for k in idx])
    return ParametricSpace(param, w, f, np.diag(lam))


@dataclass(frozen=True, eq=False)
class UnitaryFamily:
    """One matrix per group element.

    ``weight`` is the measure making the matrices unitary (None means the
    ordinary Euclidean inner product).
    """

    group: FiniteGroup
    matrices: np.ndarray
    weight: np.ndarray = None

    def __getitem__(self, g: int) -> np.ndarray:
        return self.matrices[g]

    def __len__(self):
        return len(self.matrices)

    @property
    def dimension(self) -> int:
        return self.matrices.shape[1]

    def orthonormal(self) -> np.ndarray:
        """Matrices in orthonormal coordinates."""
        if self.weight is None:
            return self.matrices
        s = np.sqrt(self.weight)
        return s[None, :, None] * self.matrices / s[None, None, :]

    def unitarity_defect(self) -> float:
        m = self.orthonormal()
        eye = np.eye(self.dimension)
        return float(max(np.abs(u.conj().T @ u - eye).max() for u in m))

    def homomorphism_defect(self, projective: bool = False) -> float:
        """Largest deviation of ``V(g)V(h)`` from ``V(gh)`` over all pairs."""
        t = self.group.table
        m = self.matrices
        worst = 0.0
        for g in range(len(m)):
            prods = m[g] @ m            # prods[h] = V(g) V(h)
            target = m[t[g]]
            if projective:
                d = max(phase_distance(p, q) for p, q in zip(prods, target))
            else:
                d = float(np.abs(prods - target).max())
            worst = max(worst, d)
        return worst

    def character(self) -> np.ndarray:
        return np.trace(self.matrices, axis1=1, axis2=2)


def regular_representation(action: GroupAction, measure) -> UnitaryFamily:
    """Right regular representation ``U(g) f (phi) = f(phi g)`` as permutation matrices.

    Raises
    ------
    NonInvariantMeasure
        If some ``U(g)`` fails to be unitary for the weighted inner product.
    """
    w = measure.as_array() if isinstance(measure, Measure) else np.asarray(measure, dtype=float)
    n, order = action.n_points, action.group.order
    mats = np.zeros((order, n, n))
    rows = np.arange(n)
    for g in range(order):
        mats[g, rows, action.map[:, g]] = 1.0
    for g in range(order):
        # unitary for <.,.>_rho iff U^T diag(rho) U == diag(rho), i.e. rho(phi g) == rho(phi)
        if not np.allclose(w[action.map[:, g]], w, atol=1e-14, rtol=0):
            raise NonInvariantMeasure(f"U({g}) is not unitary: measure is not invariant")
    # integer-exact homomorphism check: (phi g) h == phi (gh) is the action law
    return UnitaryFamily(action.group, mats, w)


@dataclass(frozen=True)
class TransportReport:
    g_ab: int
    alignment: tuple
    max_deviation: float
    subspace_deviation: float

    @property
    def exact(self) -> bool:
        return self.max_deviation == 0.0


def transport_check(space_a: ParametricSpace, space_b: ParametricSpace, U: UnitaryFamily,
                    g_ab: int, alignment: Sequence[int] = None) -> TransportReport:
    """Compare ``f_k^b`` with ``U(g_ab) f_k^a`` (after value alignment) and the two subspaces."""
    if alignment is None:
        where = {repr(v): i for i, v in enumerate(space_a.values)}
        alignment = tuple(where.get(repr(v), -1) for v in space_b.values)
    pos = {g: i for i, g in enumerate(U.group.embedding)}
    u = U[pos[g_ab]]
    dev = 0.0
    for k, j in enumerate(alignment):
        if j < 0:
            dev = max(dev, float(np.abs(space_b.indicators[:, k]).max()))
            continue
        dev = max(dev, float(np.abs(space_b.indicators[:, k] - u @ space_a.indicators[:, j]).max()))
    ba = space_a.orthonormal_basis
    bb = space_b.orthonormal_basis
    uo = U.orthonormal()[pos[g_ab]]
    pa = uo @ ba @ ba.conj().T @ uo.conj().T
    pb = bb @ bb.conj().T
    return TransportReport(g_ab, tuple(alignment), dev, float(np.abs(pa - pb).max()))


@dataclass(frozen=True)
class IsotypicDecomposition:
    projectors: tuple
    dimensions: tuple
    multiplicities: tuple

    def residuals(self) -> dict:
        """Idempotency, mutual orthogonality and completeness errors."""
        ps = self.projectors
        n = ps[0].shape[0]
        idem = max(float(np.abs(p @ p - p).max()) for p in ps)
        orth = 0.0
        for i, p in enumerate(ps):
            for q in ps[i + 1:]:
                orth = max(orth, float(np.abs(p @ q).max()))
        comp = float(np.abs(sum(ps) - np.eye(n)).max())
        return {"idempotency": idem, "orthogonality": orth, "completeness": comp}


def isotypic_projectors(U: UnitaryFamily, characters, tol: float = 1e-10) -> IsotypicDecomposition:
    """Character projectors ``P = (dim/|G|) sum_g conj(chi(g)) U(g)``.

    ``characters`` has one row per irreducible character and one column per
    group element. The rows must be orthonormal class functions.
    """
    chars = np.asarray(characters, dtype=complex)
    order = U.group.order
    if chars.ndim != 2 or chars.shape[1] != order:
        raise BadCharacterTable(f"expected shape (irreps, {order})")
    gram = chars.conj() @ chars.T / order
    if not np.allclose(gram, np.eye(len(chars)), atol=tol, rtol=0):
        raise BadCharacterTable("rows are not orthonormal")
    for cls in U.group.conjugacy_classes():
        if not np.allclose(chars[:, cls], chars[:, [cls[0]]], atol=tol, rtol=0):
            raise BadCharacterTable("a row is not constant on conjugacy classes")
    if not np.allclose(chars[:, U.group.identity].imag, 0) or np.any(chars[:, U.group.identity].real < 0.5):
        raise BadCharacterTable("character at the identity must be a positive integer")

    rep_char = U.character()
    projectors, dims, mults = [], [], []
    for chi in chars:
        d = chi[U.group.identity].real
        p = (d / order) * np.tensordot(chi.conj(), U.matrices, axes=1)
        mult = np.vdot(chi, rep_char) / order
        projectors.append(p)
        dims.append(int(round(np.trace(p).real)))
        mults.append(int(round(mult.real)))
    return IsotypicDecomposition(tuple(projectors), tuple(dims), tuple(mults))


@dataclass(frozen=True, eq=False)
class CoupledRepresentation:
    family: UnitaryFamily
    discrepancy: float
    leakage: float
    samples_per_element: tuple
    threshold: float

    @property
    def consistent(self) -> bool:
        return self.discrepancy <= self.threshold and self.leakage <= self.threshold

    def to_dict(self) -> dict:
        return {
            "discrepancy": self.discrepancy,
            "leakage": self.leakage,
            "threshold": self.threshold,
            "consistent": self.consistent,
            "min_samples": int(min(self.samples_per_element)),
        }


def _sample_factorizations(group: FiniteGroup, pieces, n_samples, rng, max_factors, budget):
    """Words ``[(i, h), ...]`` with ``h`` in subgroup ``i``, bucketed by their product.

    The first word of every bucket is a shortest one (breadth-first); the rest
    are random words of length up to ``max_factors``.
    """
    words = {group.identity: [[]]}
    frontier = [(group.identity, [])]
    while frontier and len(words) < group.order:
        nxt = []
        for g, w in frontier:
            for i, members in enumerate(pieces):
                for h in members:
                    gh = group.mul(g, h)
                    if gh not in words:
                        words[gh] = [w + [(i, h)]]
                        nxt.append((gh, w + [(i, h)]))
        frontier = nxt
    if len(words) < group.order:
        missing = sorted(set(range(group.order)) - set(words))
        raise NotGenerating(f"subgroup products miss elements {missing[:8]}")

    for _ in range(budget):
        if all(len(v) >= n_samples for v in words.values()):
            break
        length = int(rng.integers(1, max_factors + 1))
        word = []
        g = group.identity
        for _ in range(length):
            i = int(rng.integers(len(pieces)))
            h = int(pieces[i][int(rng.integers(len(pieces[i])))])
            word.append((i, h))
            g = group.mul(g, h)
        if len(words[g]) < n_samples:
            words[g].append(word)
    return words


def build_coupled_representation(spaces, subgroups: Sequence[FiniteGroup], U: UnitaryFamily, W0,
                                 transitions: Sequence[int], n_samples: int = 32, seed: int = 0,
                                 max_factors: int = 4, threshold: float = 1e-8,
                                 projective: bool = True) -> CoupledRepresentation:
    """Extend the action on the fixed simple space to the whole group through the other foci.

    ``subgroups[i]`` is the permissible subgroup of focus ``i`` and
    ``transitions[i]`` the element carrying focus 0 to focus ``i``
    (``transitions[0]`` is the identity). A factor ``h`` from subgroup ``i``
    acts as ``V0(t) U(t^-1 h t) V0(t)^dagger`` with ``t = transitions[i]`` and
    ``V0(g) = W0 U(g) W0^dagger``; a group element acts as the product over one
    of its factorizations. Because an element factors in many ways, up to
    ``n_samples`` factorizations per element are drawn from a seeded stream and
    the largest operator disagreement among them is the ``discrepancy``
    (modulo a global phase when ``projective``). ``leakage`` is the largest
    component of ``V(g) H`` outside ``H = W0 span(spaces[0])``.

    ``spaces[0]`` may be a :class:`ParametricSpace` or an explicit matrix whose
    columns span the fixed space in orthonormal coordinates.
    """
    group = U.group
    pos = {g: i for i, g in enumerate(group.embedding)}
    pieces = [[pos[g] for g in sg.embedding] for sg in subgroups]
    span = generated_subgroup(group, sorted({h for p in pieces for h in p}))
    if span.order != group.order:
        raise NotGenerating(f"subgroups generate only {span.order} of {group.order} elements")

    u = U.orthonormal()
    w0 = np.asarray(W0, dtype=complex)
    if not _is_unitary(w0, 1e-10):
        raise NonUnitaryW("W0 is not unitary")
    w0h = w0.conj().T

    def v0(g):
        return w0 @ u[g] @ w0h

    local = []
    for i, members in enumerate(pieces):
        t = pos[transitions[i]]
        tinv = group.inv(t)
        vt = v0(t)
        ops = {}
        for h in members:
            inner_el = group.mul(group.mul(tinv, h), t)
            ops[h] = vt @ u[inner_el] @ vt.conj().T
        local.append(ops)

    rng = np.random.default_rng(seed)
    words = _sample_factorizations(group, pieces, n_samples, rng, max_factors,
                                   budget=200 * n_samples * group.order)
    dim = u.shape[1]
    mats = np.empty((group.order, dim, dim), dtype=complex)
    discrepancy = 0.0
    counts = []
    for g in range(group.order):
        ops = []
        for word in words[g]:
            m = np.eye(dim, dtype=complex)
            for i, h in word:
                m = m @ local[i][h]
            ops.append(m)
        ref = ops[0]
        mats[g] = ref
        counts.append(len(ops))
        for m in ops[1:]:
            d = phase_distance(m, ref) if projective else float(np.linalg.norm(m - ref))
            discrepancy = max(discrepancy, d)

    first = spaces[0]
    basis = first.orthonormal_basis if isinstance(first, ParametricSpace) else np.asarray(first)
    q, _ = np.linalg.qr(w0 @ basis)
    p = q @ q.conj().T
    comp = np.eye(dim) - p
    leakage = max(float(np.linalg.norm(comp @ m @ q, 2)) for m in mats)
    return CoupledRepresentation(UnitaryFamily(group, mats), discrepancy, leakage,
                                 tuple(counts), threshold)


@dataclass(frozen=True, eq=False)
class QuantumSpace:
    """States ``v_k = W f_k`` (columns of ``states``) and the operator ``T = W S W^dagger``."""

    label: str
    values: tuple
    states: np.ndarray
    operator: np.ndarray
    W: np.ndarray

    def state(self, k: int) -> np.ndarray:
        return self.states[:, k]

    def eigen_residual(self) -> float:
        lam = np.asarray(self.values, dtype=float)
        return float(np.abs(self.operator @ self.states - self.states * lam[None, :]).max())

    def catalog(self) -> dict:
        return {(self.label, v): self.states[:, k] for k, v in enumerate(self.values)}


def build_quantum_space(space: ParametricSpace, W) -> QuantumSpace:
    """Carry a parametric space into ``H`` with a unitary ``W``.

    ``W`` either acts on the coordinates along the normalized indicators
    (shape ``(d, d)``), or on the whole L2 space in orthonormal coordinates
    (shape ``(n, n)``).
    """
    w = np.asarray(W, dtype=complex)
    if w.ndim != 2 or not _is_unitary(w, 1e-10) or w.shape[0] != w.shape[1]:
        raise NonUnitaryW("W must be a square unitary matrix")
    lam = np.asarray(space.values, dtype=float)
    if w.shape[0] == space.dimension:
        states = w.copy()
        op = w @ np.diag(lam) @ w.conj().T
    elif w.shape[0] == space.param.n_points:
        states = w @ space.orthonormal_basis
        op = w @ space.multiplication @ w.conj().T
    else:
        raise NonUnitaryW(f"W has shape {w.shape}; expected {space.dimension} or {space.param.n_points}")
    return QuantumSpace(space.label, space.values, states, op, w)


def interpret_state(v, catalog: Mapping, tol: float = 1e-8, level_sets: Mapping = None):
    """Question-and-answer pairs whose state equals ``v`` up to phase.

    Returns ``(matches, consistent)``. When ``level_sets`` maps catalog keys to
    point sets, ``consistent`` says whether every pair of matching entries has
    the same level set; otherwise it is None.

    Raises
    ------
    NoMatch
        If no catalog state matches.
    """
    pv = projector(v)
    matches = [key for key, s in catalog.items() if np.abs(pv - projector(s)).max() <= tol]
    if not matches:
        raise NoMatch("no catalog state matches the vector")
    consistent = None
    if level_sets is not None:
        sets = {frozenset(level_sets[k]) for k in matches}
        consistent = len(sets) == 1
    return matches, consistent


def operator_for_subparameter(h, space: QuantumSpace) -> np.ndarray:
    """``sum_k mu_k v_k v_k^dagger`` with ``mu_k = h(lambda_k)``.

    ``h`` is a callable on values, a mapping from values, or a sequence of
    ``mu`` aligned with ``space.values``.
    """
    if callable(h):
        mu = [h(v) for v in space.values]
    elif isinstance(h, Mapping):
        mu = [h[v] for v in space.values]
    else:
        mu = list(h)
    mu = np.asarray(mu, dtype=float)
    s = space.states
    return (s * mu[None, :]) @ s.conj().T

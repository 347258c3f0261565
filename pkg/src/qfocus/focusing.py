"""Focused parameters on a c-variable space and the coupling between foci."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .groups import (
    FiniteGroup,
    GroupAction,
    induced_value_permutation,
    maximal_permissible_subgroup,
)

__all__ = [
    "FocusedParameter",
    "CouplingReport",
    "EmptyReduction",
    "InvalidTransition",
    "focused_parameter",
    "value_orbits",
    "reduce_to_orbit",
    "find_transition",
    "verify_coupling",
    "is_function_of",
    "is_maximal_accessible",
]


class EmptyReduction(ValueError):
    pass


class InvalidTransition(ValueError):
    pass


@dataclass(frozen=True)
class FocusedParameter:
    """A map from points onto a finite ordered value list.

    ``index[phi]`` is the position of ``lambda(phi)`` in ``values``; ``-1``
    marks a point removed from the domain by model reduction.
    """

    label: str
    values: tuple
    index: tuple
    scale: float = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "index", tuple(int(i) for i in self.index))
        used = {i for i in self.index if i >= 0}
        if any(i >= len(self.values) for i in used):
            raise ValueError("index refers past the value list")
        if used != set(range(len(self.values))):
            raise ValueError(f"parameter {self.label!r} is not onto its value list")

    @property
    def n_points(self) -> int:
        return len(self.index)

    @property
    def domain(self) -> tuple:
        return tuple(p for p, k in enumerate(self.index) if k >= 0)

    def __call__(self, phi: int):
        k = self.index[phi]
        if k < 0:
            raise KeyError(f"point {phi} is outside the domain of {self.label!r}")
        return self.values[k]

    def level_set(self, k: int) -> frozenset:
        return frozenset(p for p, j in enumerate(self.index) if j == k)

    def level_sets(self) -> list[frozenset]:
        return [self.level_set(k) for k in range(len(self.values))]

    def partition(self) -> frozenset:
        return frozenset(self.level_sets())


def focused_parameter(label: str, points: Sequence, func: Callable, values: Sequence = None) -> FocusedParameter:
    """Tabulate ``func`` over ``points``. Values are sorted unless given explicitly."""
    raw = [func(p) for p in points]
    vals = sorted(set(raw)) if values is None else list(values)
    pos = {v: i for i, v in enumerate(vals)}
    return FocusedParameter(label, tuple(vals), tuple(pos[v] for v in raw))


def value_orbits(param: FocusedParameter, action: GroupAction, subgroup: FiniteGroup = None) -> list[tuple]:
    """Orbits of the value indices under the action induced by the permissible subgroup."""
    if subgroup is None:
        subgroup = maximal_permissible_subgroup(param, action)
    pos = {g: i for i, g in enumerate(action.group.embedding)}
    n = len(param.values)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in subgroup.embedding:
        perm = induced_value_permutation(param, action, pos[g])
        if perm is None:
            raise ValueError(f"element {g} does not preserve the level sets of {param.label!r}")
        for k, j in enumerate(perm):
            a, b = find(k), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    blocks = {}
    for k in range(n):
        blocks.setdefault(find(k), []).append(k)
    return [tuple(b) for b in sorted(blocks.values())]


def reduce_to_orbit(param: FocusedParameter, action: GroupAction, orbit, rescale: bool = True) -> FocusedParameter:
    """Restrict a parameter to one orbit of its values under the permissible subgroup.

    ``orbit`` is either an integer block id into :func:`value_orbits` or an
    explicit collection of values. Points whose value falls outside the orbit
    leave the domain. A two-point orbit ``{-k, +k}`` is rescaled to ``(-1, +1)``
    and ``k`` is kept in ``scale``.
    """
    blocks = value_orbits(param, action)
    if isinstance(orbit, (int, np.integer)):
        keep = blocks[orbit]
    else:
        wanted = set(orbit)
        keep = tuple(k for k, v in enumerate(param.values) if v in wanted)
        if keep not in blocks:
            raise ValueError(f"{sorted(wanted)} is not an orbit of the induced action; orbits are "
                             f"{[[param.values[k] for k in b] for b in blocks]}")
    remap = {k: i for i, k in enumerate(keep)}
    index = tuple(remap.get(k, -1) if k >= 0 else -1 for k in param.index)
    if all(i < 0 for i in index):
        raise EmptyReduction(f"no point of {param.label!r} maps into the chosen orbit")
    values = tuple(param.values[k] for k in keep)
    scale = param.scale
    if rescale and len(values) == 2 and values[0] == -values[1] and values[1] != 0:
        kappa = abs(values[1])
        values = tuple(int(np.sign(v)) for v in values)
        scale = kappa
    return FocusedParameter(param.label, values, index, scale)


def find_transition(param_a: FocusedParameter, param_b: FocusedParameter, action: GroupAction):
    """Least element ``g`` with ``lambda_b(phi) == lambda_a(phi g)`` for every point, or None."""
    vb = np.array([param_b.values[k] if k >= 0 else None for k in param_b.index], dtype=object)
    idx_a = np.asarray(param_a.index)
    vals_a = list(param_a.values)
    for g in range(action.group.order):
        img = idx_a[action.map[:, g]]
        ok = True
        for phi in range(action.n_points):
            k = img[phi]
            va = vals_a[k] if k >= 0 else None
            if va != vb[phi]:
                ok = False
                break
        if ok:
            return action.group.embedding[g]
    return None


@dataclass(frozen=True)
class CouplingReport:
    pair: tuple
    g_ab: int = None
    conjugation_ok: bool = False
    alignment_pair: tuple = None
    subgroup_a: tuple = ()
    subgroup_b: tuple = ()

    def to_dict(self) -> dict:
        return {
            "pair": list(self.pair),
            "g_ab": self.g_ab,
            "conjugation_ok": self.conjugation_ok,
            "alignment_pair": None if self.alignment_pair is None else list(self.alignment_pair),
            "order_a": len(self.subgroup_a),
            "order_b": len(self.subgroup_b),
        }


def verify_coupling(param_a: FocusedParameter, param_b: FocusedParameter, action: GroupAction,
                    g_ab: int) -> CouplingReport:
    """Check the conjugation relation between the permissible subgroups and align the value lists.

    With ``lambda_b(phi) = lambda_a(phi g_ab)`` for a right action, the
    permissible subgroups satisfy ``G_b = g_ab G_a g_ab^-1`` as element sets.
    """
    group = action.group
    pos = {g: i for i, g in enumerate(group.embedding)}
    g = pos[g_ab]
    img = np.asarray(param_a.index)[action.map[:, g]]
    for phi, (k, kb) in enumerate(zip(img, param_b.index)):
        va = param_a.values[k] if k >= 0 else None
        vb = param_b.values[kb] if kb >= 0 else None
        if va != vb:
            raise InvalidTransition(f"lambda_b({phi}) = {vb} but lambda_a({phi} g) = {va} for g = {g_ab}")

    ga = maximal_permissible_subgroup(param_a, action)
    gb = maximal_permissible_subgroup(param_b, action)
    conj = {group.embedding[group.conjugate(g, pos[h])] for h in ga.embedding}
    conj_ok = conj == set(gb.embedding)

    alignment = None
    if sorted(map(repr, param_a.values)) == sorted(map(repr, param_b.values)):
        where = {repr(v): i for i, v in enumerate(param_a.values)}
        alignment = tuple(where[repr(v)] for v in param_b.values)
    return CouplingReport((param_a.label, param_b.label), g_ab, conj_ok, alignment,
                          tuple(ga.embedding), tuple(gb.embedding))


def _refines(fine: FocusedParameter, coarse: FocusedParameter) -> bool:
    """True iff every level set of ``fine`` lies inside one level set of ``coarse``."""
    if fine.n_points != coarse.n_points:
        raise ValueError("parameters live on different point sets")
    seen = {}
    for kf, kc in zip(fine.index, coarse.index):
        if kf < 0 or kc < 0:
            if kf != kc and kc >= 0:
                return False
            continue
        if seen.setdefault(kf, kc) != kc:
            return False
    return True


def is_function_of(lam: FocusedParameter, theta: FocusedParameter) -> bool:
    """``lam << theta``: there is ``h`` with ``lam = h(theta)`` on the common domain."""
    return _refines(theta, lam)


def is_maximal_accessible(lam: FocusedParameter, accessible: Iterable[FocusedParameter]) -> bool:
    """No accessible parameter strictly refines ``lam``."""
    for theta in accessible:
        if is_function_of(lam, theta) and not is_function_of(theta, lam):
            return False
    return True

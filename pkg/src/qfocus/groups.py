"""Finite groups given by composition tables, and their right actions on finite point sets.

Everything here is exact: elements and points are dense 0-based integer
indices, and measures use :class:`fractions.Fraction`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "NotAGroup",
    "NotAnAction",
    "FiniteGroup",
    "GroupAction",
    "Partition",
    "Measure",
    "verify_group",
    "build_action",
    "orbits",
    "invariant_measure",
    "generated_subgroup",
    "is_permissible",
    "maximal_permissible_subgroup",
    "induced_value_permutation",
]


class NotAGroup(ValueError):
    """Raised when a composition table fails one of the group axioms."""

    def __init__(self, reason, witness=()):
        self.reason = reason
        self.witness = tuple(witness)
        super().__init__(f"{reason} (witness {self.witness})" if witness else reason)


class NotAnAction(ValueError):
    """Raised when a point map is not a right action; carries a witness triple."""

    def __init__(self, reason, witness=()):
        self.reason = reason
        self.witness = tuple(witness)
        super().__init__(f"{reason} (witness {self.witness})" if witness else reason)


def _frozen(a):
    a = np.array(a, dtype=np.int64, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A validated finite group.

    ``table[g, h]`` is the index of ``gh``. For a subgroup, indices are local
    and ``embedding[i]`` is the index of local element ``i`` in the parent group.
    Build instances through :func:`verify_group` or :func:`generated_subgroup`.
    """

    table: np.ndarray
    identity: int
    inverse: np.ndarray
    embedding: tuple = None
    name: str = ""

    def __post_init__(self):
        if self.embedding is None:
            object.__setattr__(self, "embedding", tuple(range(self.order)))

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    @property
    def elements(self) -> tuple:
        """Element indices in the parent group."""
        return self.embedding

    def mul(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    def inv(self, g: int) -> int:
        return int(self.inverse[g])

    def conjugate(self, g: int, h: int) -> int:
        """Return ``g h g^-1``."""
        return self.mul(self.mul(g, h), self.inv(g))

    def product(self, word: Iterable[int]) -> int:
        out = self.identity
        for g in word:
            out = int(self.table[out, g])
        return out

    def conjugacy_classes(self) -> list[tuple[int, ...]]:
        seen = set()
        classes = []
        for h in range(self.order):
            if h in seen:
                continue
            cls = sorted({self.conjugate(g, h) for g in range(self.order)})
            seen.update(cls)
            classes.append(tuple(cls))
        return classes

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<FiniteGroup{label} order={self.order}>"


def verify_group(table, name: str = "") -> FiniteGroup:
    """Validate a composition table and return a :class:`FiniteGroup`.

    Checks, in order: squareness and index range, the Latin-square property,
    associativity over all triples, a two-sided identity, two-sided inverses.

    Raises
    ------
    NotAGroup
        With ``reason`` naming the failed axiom and a witness tuple.
    """
    try:
        t = np.asarray(table)
    except ValueError as exc:
        raise NotAGroup("table is not a nonempty square array (ragged rows)") from exc
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise NotAGroup("table is not a nonempty square array")
    if not np.issubdtype(t.dtype, np.integer):
        if not np.all(np.equal(np.mod(t, 1), 0)):
            raise NotAGroup("table entries are not integers")
        t = t.astype(np.int64)
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        raise NotAGroup("table entry out of range")

    full = np.arange(n)
    for g in range(n):
        if not np.array_equal(np.sort(t[g]), full):
            raise NotAGroup("latin-square: row is not a permutation", (g,))
        if not np.array_equal(np.sort(t[:, g]), full):
            raise NotAGroup("latin-square: column is not a permutation", (g,))

    # (gh)k == g(hk) for all g, h, k, vectorized over h and k
    for g in range(n):
        left = t[t[g]]              # left[h, k] = (gh)k
        right = t[g][t]             # right[h, k] = g(hk)
        bad = np.argwhere(left != right)
        if bad.size:
            h, k = bad[0]
            raise NotAGroup("associativity", (g, int(h), int(k)))

    ids = [e for e in range(n) if np.array_equal(t[e], full) and np.array_equal(t[:, e], full)]
    if not ids:
        raise NotAGroup("identity: no two-sided identity")
    e = ids[0]

    inverse = np.empty(n, dtype=np.int64)
    for g in range(n):
        cand = np.flatnonzero(t[g] == e)
        if cand.size != 1 or t[cand[0], g] != e:
            raise NotAGroup("inverse: no two-sided inverse", (g,))
        inverse[g] = cand[0]

    return FiniteGroup(_frozen(t), int(e), _frozen(inverse), name=name)


@dataclass(frozen=True, eq=False)
class GroupAction:
    """Right action ``phi -> phi g`` of ``group`` on points ``0..n_points-1``.

    ``map[phi, g]`` is the index of ``phi g``. Build through :func:`build_action`.
    """

    group: FiniteGroup
    map: np.ndarray
    labels: tuple = None

    @property
    def n_points(self) -> int:
        return int(self.map.shape[0])

    def act(self, phi: int, g: int) -> int:
        return int(self.map[phi, g])

    def permutation(self, g: int) -> np.ndarray:
        """Image array ``p`` with ``p[phi] = phi g``."""
        return self.map[:, g]

    def restrict(self, subgroup: FiniteGroup) -> "GroupAction":
        """The action of a subgroup, reindexed to its local element indices."""
        return GroupAction(subgroup, _frozen(self.map[:, list(subgroup.embedding)]), self.labels)


def build_action(group: FiniteGroup, map, labels=None) -> GroupAction:
    """Validate a point map as a right action of ``group``.

    ``map`` has shape ``(n_points, group.order)``.

    Raises
    ------
    NotAnAction
        On a range error, identity failure (witness ``(phi, e)``) or a
        compatibility failure ``(phi g) h != phi (gh)`` (witness ``(phi, g, h)``).
    """
    m = np.asarray(map, dtype=np.int64)
    if m.ndim != 2 or m.shape[1] != group.order:
        raise NotAnAction(f"map must have shape (points, {group.order})")
    n = m.shape[0]
    if n == 0 or m.min() < 0 or m.max() >= n:
        raise NotAnAction("map entry out of range")
    e = group.identity
    bad = np.flatnonzero(m[:, e] != np.arange(n))
    if bad.size:
        raise NotAnAction("identity: phi e != phi", (int(bad[0]), e))
    t = group.table
    for phi in range(n):
        # lhs[g, h] = (phi g) h ; rhs[g, h] = phi (gh)
        lhs = m[m[phi]]
        rhs = m[phi][t]
        diff = np.argwhere(lhs != rhs)
        if diff.size:
            g, h = diff[0]
            raise NotAnAction("compatibility: (phi g) h != phi (gh)", (phi, int(g), int(h)))
    if labels is not None and len(labels) != n:
        raise NotAnAction("labels length does not match number of points")
    return GroupAction(group, _frozen(m), tuple(labels) if labels is not None else None)


@dataclass(frozen=True)
class Partition:
    blocks: tuple

    @property
    def is_transitive(self) -> bool:
        return len(self.blocks) == 1

    def block_of(self, phi: int) -> int:
        for i, b in enumerate(self.blocks):
            if phi in b:
                return i
        raise KeyError(phi)

    def __len__(self):
        return len(self.blocks)


def orbits(action: GroupAction) -> Partition:
    """Orbits of the action, each block sorted, blocks ordered by least point."""
    n = action.n_points
    seen = np.zeros(n, dtype=bool)
    blocks = []
    for phi in range(n):
        if seen[phi]:
            continue
        block = np.unique(action.map[phi])
        seen[block] = True
        blocks.append(tuple(int(x) for x in block))
    return Partition(tuple(blocks))


@dataclass(frozen=True)
class Measure:
    """Exact point weights; ``unique`` records whether the invariant probability is unique."""

    weights: tuple
    unique: bool = True

    @property
    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def mass(self, points: Iterable[int]) -> Fraction:
        return sum((self.weights[p] for p in points), Fraction(0))

    def as_array(self) -> np.ndarray:
        return np.array([float(w) for w in self.weights])


def invariant_measure(action: GroupAction) -> Measure:
    """Right-invariant probability measure on the points.

    Uniform within each orbit, equal mass per orbit. The result is the unique
    invariant probability exactly when the action is transitive; otherwise it
    is flagged ``unique=False``.
    """
    part = orbits(action)
    per_orbit = Fraction(1, len(part))
    w = [Fraction(0)] * action.n_points
    for block in part.blocks:
        for phi in block:
            w[phi] = per_orbit / len(block)
    return Measure(tuple(w), unique=part.is_transitive)


def generated_subgroup(group: FiniteGroup, generators: Iterable[int], name: str = "") -> FiniteGroup:
    """Closure of ``generators`` under composition, as a subgroup of ``group``.

    Elements are listed in breadth-first order from the identity, so the
    embedding is deterministic for a given generator order.
    """
    gens = [int(g) for g in generators]
    for g in gens:
        if not 0 <= g < group.order:
            raise ValueError(f"generator {g} is not an element of the group")
    order = [group.identity]
    seen = {group.identity}
    queue = deque(order)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = group.mul(x, g)
            if y not in seen:
                seen.add(y)
                order.append(y)
                queue.append(y)
    local = {g: i for i, g in enumerate(order)}
    k = len(order)
    table = np.empty((k, k), dtype=np.int64)
    for i, g in enumerate(order):
        for j, h in enumerate(order):
            table[i, j] = local[group.mul(g, h)]
    inverse = np.array([local[group.inv(g)] for g in order], dtype=np.int64)
    parent_embed = tuple(group.embedding[g] for g in order)
    return FiniteGroup(_frozen(table), 0, _frozen(inverse), parent_embed, name)


def _level_index(param) -> np.ndarray:
    return np.asarray(param.index, dtype=np.int64)


def induced_value_permutation(param, action: GroupAction, g: int):
    """Permutation of value indices induced by ``g``, or None if ``g`` breaks the level sets.

    Returns ``perm`` with ``lambda(phi g) = values[perm[k]]`` whenever
    ``lambda(phi) = values[k]``. Points outside the parameter's domain must be
    mapped outside it as well.
    """
    idx = _level_index(param)
    img = idx[action.map[:, g]]
    perm = {}
    for k, j in zip(idx.tolist(), img.tolist()):
        if (k < 0) != (j < 0):
            return None
        if k < 0:
            continue
        if perm.setdefault(k, j) != j:
            return None
    if len(set(perm.values())) != len(perm):
        return None
    return tuple(perm[k] for k in range(len(perm)))


def is_permissible(param, action: GroupAction, subgroup: FiniteGroup = None):
    """Whether ``param`` is permissible under ``subgroup`` (default: the whole group).

    Returns ``(ok, witness)`` where ``witness`` is ``(phi1, phi2, g)`` with
    ``lambda(phi1) == lambda(phi2)`` but ``lambda(phi1 g) != lambda(phi2 g)``,
    ``g`` given as a parent-group index; ``witness`` is None when ``ok``.
    """
    elements = action.group.embedding if subgroup is None else subgroup.embedding
    pos = {g: i for i, g in enumerate(action.group.embedding)}
    idx = _level_index(param)
    for g_parent in elements:
        g = pos[g_parent]
        img = idx[action.map[:, g]]
        first = {}
        for phi in range(action.n_points):
            k = idx[phi]
            if k < 0:
                continue
            if k in first:
                phi1 = first[k]
                if img[phi1] != img[phi]:
                    return False, (phi1, phi, g_parent)
            else:
                first[k] = phi
    return True, None


def maximal_permissible_subgroup(param, action: GroupAction, name: str = "") -> FiniteGroup:
    """The largest subgroup under which ``param`` is permissible.

    An element belongs iff its point map sends level sets onto level sets
    (swaps between levels allowed). The collected set is checked to be closed
    under composition before it is returned.
    """
    group = action.group
    members = [g for g in range(group.order)
               if induced_value_permutation(param, action, g) is not None]
    sub = generated_subgroup(group, members, name=name)
    local = set(sub.embedding)
    if local != {group.embedding[g] for g in members}:
        raise AssertionError("level-set preserving elements are not closed under composition")
    return sub


def subgroup_indices(group: FiniteGroup, subgroup: FiniteGroup) -> list[int]:
    """Local indices in ``group`` of the elements of ``subgroup``."""
    pos = {g: i for i, g in enumerate(group.embedding)}
    return [pos[g] for g in subgroup.embedding]


def is_subgroup_of(sub_elements: Sequence[int], group: FiniteGroup) -> bool:
    s = set(sub_elements)
    return group.identity in s and all(group.mul(a, b) in s for a in s for b in s)

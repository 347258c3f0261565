"""Built-in groups, actions and parameters used by the scenarios and tests."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .focusing import FocusedParameter, focused_parameter
from .groups import FiniteGroup, GroupAction, build_action, verify_group

__all__ = [
    "cyclic_group",
    "trivial_group",
    "translation_action",
    "reflection_model",
    "rotation_x",
    "rotation_y",
    "rotation_z",
    "CubeModel",
    "cube_model",
    "cube_characters",
    "PAULI",
    "spin_operator",
    "su2_from_rotation",
    "spin_states",
]


def cyclic_group(n: int) -> FiniteGroup:
    i = np.arange(n)
    return verify_group((i[:, None] + i[None, :]) % n, name=f"C{n}")


def trivial_group() -> FiniteGroup:
    return verify_group([[0]], name="trivial")


def translation_action(n: int) -> GroupAction:
    """Z_n acting on itself by ``theta g = theta + g mod n``."""
    group = cyclic_group(n)
    i = np.arange(n)
    return build_action(group, (i[:, None] + i[None, :]) % n, labels=tuple(range(n)))


def reflection_model():
    """C2 acting on {-1, 0, +1} by ``x -> -x``; returns ``(action, points)``."""
    points = (-1, 0, 1)
    group = cyclic_group(2)
    m = [[p, points.index(-x)] for p, x in enumerate(points)]
    return build_action(group, m, labels=points), points


def rotation_x(deg: float) -> np.ndarray:
    c, s = np.cos(np.radians(deg)), np.sin(np.radians(deg))
    return np.array([[1, 0, 0], [0, c, -s], [0, s, c]])


def rotation_y(deg: float) -> np.ndarray:
    c, s = np.cos(np.radians(deg)), np.sin(np.radians(deg))
    return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])


def rotation_z(deg: float) -> np.ndarray:
    c, s = np.cos(np.radians(deg)), np.sin(np.radians(deg))
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])


def _close_matrices(generators):
    """Breadth-first closure of integer matrices under right multiplication."""
    gens = [np.rint(g).astype(np.int64) for g in generators]
    ident = np.eye(gens[0].shape[0], dtype=np.int64)
    elems = [ident]
    keys = {ident.tobytes(): 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = a @ g
                k = c.tobytes()
                if k not in keys:
                    keys[k] = len(elems)
                    elems.append(c)
                    nxt.append(c)
        frontier = nxt
    return elems, keys


@dataclass(frozen=True)
class CubeModel:
    """Rotation group of the cube acting on the 8 vertex directions.

    ``matrices[g]`` is the rotation ``R_g``; composition ``gh`` corresponds to
    ``R_g R_h`` and the right action is ``phi g = R_g^T phi``, so the sign of
    the ``a``-component of ``phi g`` equals the sign of ``phi . (R_g a)``.
    Vertices are unnormalized ``(+-1, +-1, +-1)``; the unit directions are these
    divided by sqrt(3).
    """

    group: FiniteGroup
    matrices: tuple
    vertices: np.ndarray
    action: GroupAction
    generators: dict

    def sign_parameter(self, axis) -> FocusedParameter:
        """``sign(phi . axis)`` on the vertices, values ``(-1, +1)``."""
        vec = _axis_vector(axis)
        label = axis if isinstance(axis, str) else "axis"
        return focused_parameter(label, range(len(self.vertices)),
                                 lambda p: int(np.sign(self.vertices[p] @ vec)), values=(-1, 1))

    def identity_parameter(self) -> FocusedParameter:
        n = len(self.vertices)
        return FocusedParameter("phi", tuple(range(n)), tuple(range(n)))

    def element_of(self, matrix) -> int:
        m = np.rint(matrix).astype(np.int64)
        for g, r in enumerate(self.matrices):
            if np.array_equal(r, m):
                return g
        raise KeyError("matrix is not a cube rotation")


def _axis_vector(axis):
    if isinstance(axis, str):
        return {"x": np.array([1, 0, 0]), "y": np.array([0, 1, 0]), "z": np.array([0, 0, 1])}[axis]
    return np.asarray(axis)


@lru_cache(maxsize=None)
def cube_model() -> CubeModel:
    """The 24-element rotation group of the cube, generated by 90 degree turns about x, y, z."""
    gens = {"x90": rotation_x(90), "y90": rotation_y(90), "z90": rotation_z(90)}
    elems, keys = _close_matrices(list(gens.values()))
    n = len(elems)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            table[i, j] = keys[(a @ b).tobytes()]
    group = verify_group(table, name="cube rotations")

    verts = np.array(list(itertools.product((-1, 1), repeat=3)), dtype=np.int64)
    vkeys = {v.tobytes(): p for p, v in enumerate(verts)}
    act = np.empty((len(verts), n), dtype=np.int64)
    for p, v in enumerate(verts):
        for g, r in enumerate(elems):
            act[p, g] = vkeys[(r.T @ v).tobytes()]
    labels = tuple(tuple(int(c) for c in v) for v in verts)
    action = build_action(group, act, labels=labels)
    for m in elems:
        m.setflags(write=False)
    verts.setflags(write=False)
    gen_idx = {name: keys[np.rint(m).astype(np.int64).tobytes()] for name, m in gens.items()}
    return CubeModel(group, tuple(elems), verts, action, gen_idx)


# classes of the rotation group of the cube (isomorphic to S4), with
# characters of the irreducible representations A1, A2, E, T1, T2
_CUBE_CLASSES = ("e", "C3", "C2_face", "C4", "C2_edge")
_CUBE_CHARACTERS = np.array([
    [1, 1, 1, 1, 1],
    [1, 1, 1, -1, -1],
    [2, -1, 2, 0, 0],
    [3, 0, -1, 1, -1],
    [3, 0, -1, -1, 1],
], dtype=np.int64)
CUBE_IRREPS = ("A1", "A2", "E", "T1", "T2")


def _cube_class(r: np.ndarray) -> str:
    tr = int(np.trace(r))
    if tr == 3:
        return "e"
    if tr == 0:
        return "C3"
    if tr == 1:
        return "C4"
    # trace -1: half turn about a face axis is diagonal, about an edge axis it is not
    return "C2_face" if np.count_nonzero(np.diag(r)) == 3 else "C2_edge"


def cube_characters(model: CubeModel = None) -> np.ndarray:
    """Integer character table, one row per irrep and one column per group element."""
    model = model or cube_model()
    cols = [_CUBE_CLASSES.index(_cube_class(r)) for r in model.matrices]
    return _CUBE_CHARACTERS[:, cols]


PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def spin_operator(direction) -> np.ndarray:
    """``a . sigma`` for a unit 3-vector ``a``."""
    a = np.asarray(direction, dtype=float)
    return a[0] * PAULI[0] + a[1] * PAULI[1] + a[2] * PAULI[2]


def spin_states(direction) -> np.ndarray:
    """Eigenvectors of ``a . sigma`` as columns, ordered by eigenvalue ``(-1, +1)``.

    Closed form from the polar angles of ``a``: the +1 state is
    ``(cos(t/2), e^{i p} sin(t/2))`` and the -1 state is orthogonal to it.
    """
    a = np.asarray(direction, dtype=float)
    a = a / np.linalg.norm(a)
    theta = np.arccos(np.clip(a[2], -1.0, 1.0))
    phi = np.arctan2(a[1], a[0])
    up = np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])
    down = np.array([-np.exp(-1j * phi) * np.sin(theta / 2), np.cos(theta / 2)])
    return np.column_stack([down, up])


def su2_from_rotation(r: np.ndarray) -> np.ndarray:
    """One of the two SU(2) lifts of a rotation matrix.

    Uses ``D = cos(t/2) I - i sin(t/2) n . sigma`` with axis ``n`` and angle
    ``t`` recovered from ``r``; the sign is fixed by taking ``t`` in [0, pi].
    """
    r = np.asarray(r, dtype=float)
    cos_t = np.clip((np.trace(r) - 1) / 2, -1.0, 1.0)
    t = np.arccos(cos_t)
    if t < 1e-12:
        return np.eye(2, dtype=complex)
    if np.pi - t < 1e-9:
        # half turn: axis from the symmetric part r = 2 n n^T - I
        m = (r + np.eye(3)) / 2
        col = int(np.argmax(np.diag(m)))
        n = m[:, col] / np.sqrt(m[col, col])
    else:
        n = np.array([r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]]) / (2 * np.sin(t))
    return np.cos(t / 2) * np.eye(2) - 1j * np.sin(t / 2) * spin_operator(n)

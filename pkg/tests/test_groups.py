import itertools
from fractions import Fraction

import numpy as np
import pytest

from qfocus.focusing import focused_parameter
from qfocus.groups import (NotAGroup, NotAnAction, build_action, generated_subgroup, invariant_measure,
                           is_permissible, maximal_permissible_subgroup, orbits, verify_group)
from qfocus.models import cyclic_group, reflection_model, rotation_z, translation_action, trivial_group


def _perm_closure(gens):
    """Independent oracle: close a set of permutation tuples under composition."""
    n = len(gens[0])
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[i] for i in p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return seen


def test_c2_table_is_a_group():
    g = verify_group([[0, 1], [1, 0]])
    assert g.order == 2
    assert g.identity == 0
    assert list(g.inverse) == [0, 1]


def test_cube_group_valid(cube):
    assert cube.group.order == 24
    verify_group(np.asarray(cube.group.table))
    assert cube.generators == {"x90": 1, "y90": 2, "z90": 3}


def test_cube_order_matches_permutation_closure(cube):
    # oracle: the vertex permutations of the two generators close to 24 elements
    gens = [tuple(int(x) for x in cube.action.map[:, g]) for g in (1, 3)]
    assert len(_perm_closure(gens)) == 24


def test_nonassociative_table_rejected():
    # a Latin square of order 5 that is not a group table
    t = [[0, 1, 2, 3, 4],
         [1, 0, 3, 4, 2],
         [2, 4, 0, 1, 3],
         [3, 2, 4, 0, 1],
         [4, 3, 1, 2, 0]]
    with pytest.raises(NotAGroup) as exc:
        verify_group(t)
    assert exc.value.reason == "associativity"
    g, h, k = exc.value.witness
    t = np.array(t)
    assert t[t[g, h], k] != t[g, t[h, k]]


@pytest.mark.parametrize("table, reason", [
    ([[0, 1], [1, 1]], "latin-square"),
    ([[0, 1, 2], [1, 2]], "square"),
    ([[0, 5], [5, 0]], "range"),
])
def test_malformed_tables(table, reason):
    with pytest.raises(NotAGroup, match=reason):
        verify_group(table)


def test_reflection_action_valid():
    act, points = reflection_model()
    assert points == (-1, 0, 1)
    assert list(act.map[:, 1]) == [2, 1, 0]


def test_broken_action_rejected():
    g = cyclic_group(3)
    with pytest.raises(NotAnAction) as exc:
        build_action(g, [[0, 1, 2], [1, 0, 2], [2, 2, 1]])
    assert exc.value.reason.startswith(("identity", "compatibility", "map"))


def test_action_compatibility_witness():
    g = cyclic_group(2)
    # a fixed-point-free map that is not a homomorphism: point 0 never returns
    with pytest.raises(NotAnAction) as exc:
        build_action(g, [[0, 1], [1, 2], [2, 2]])
    phi, a, b = exc.value.witness
    assert exc.value.reason.startswith("compatibility")


def test_orbits_reflection():
    act, _ = reflection_model()
    assert orbits(act).blocks == ((0, 2), (1,))


def test_orbits_cube_transitive(cube):
    part = orbits(cube.action)
    assert part.is_transitive
    assert part.blocks == (tuple(range(8)),)


def test_orbits_trivial_group():
    act = build_action(trivial_group(), [[p] for p in range(5)])
    assert orbits(act).blocks == tuple((p,) for p in range(5))


def test_measure_c3():
    mu = invariant_measure(translation_action(3))
    assert mu.weights == (Fraction(1, 3),) * 3
    assert mu.unique


def test_measure_reflection():
    act, _ = reflection_model()
    mu = invariant_measure(act)
    assert mu.weights == (Fraction(1, 4), Fraction(1, 2), Fraction(1, 4))
    assert not mu.unique


def test_measure_trivial():
    act = build_action(trivial_group(), [[p] for p in range(4)])
    mu = invariant_measure(act)
    assert mu.weights == (Fraction(1, 4),) * 4
    assert not mu.unique


def test_measure_cube_subsets(cube):
    mu = invariant_measure(cube.action)
    for mask in range(256):
        pts = [p for p in range(8) if mask >> p & 1]
        for g in range(24):
            assert mu.mass(cube.action.map[pts, g].tolist()) == mu.mass(pts)


def test_generated_z_rotation(cube):
    z90 = cube.element_of(rotation_z(90))
    sub = generated_subgroup(cube.group, [z90])
    assert sub.order == 4


def test_generated_identity(cube):
    assert generated_subgroup(cube.group, [cube.group.identity]).order == 1


def test_generated_two_axes(cube):
    sub = generated_subgroup(cube.group, [cube.generators["x90"], cube.generators["z90"]])
    assert sub.order == 24
    verify_group(np.asarray(sub.table))


def test_subgroup_table_consistent(cube):
    sub = generated_subgroup(cube.group, [cube.generators["y90"]])
    emb = sub.embedding
    for i, j in itertools.product(range(sub.order), repeat=2):
        assert emb[sub.table[i, j]] == cube.group.table[emb[i], emb[j]]


def test_permissible_square():
    act, pts = reflection_model()
    lam = focused_parameter("sq", range(3), lambda p: pts[p] ** 2)
    ok, witness = is_permissible(lam, act)
    assert ok and witness is None


def test_indicator_not_permissible():
    act, pts = reflection_model()
    lam = focused_parameter("ind", range(3), lambda p: int(pts[p] == 1))
    ok, witness = is_permissible(lam, act)
    assert not ok
    phi1, phi2, g = witness
    # lam(phi1) == lam(phi2) but the images disagree
    assert {pts[phi1], pts[phi2]} == {0, -1}
    assert g == 1


def test_any_parameter_permissible_under_trivial():
    act, pts = reflection_model()
    lam = focused_parameter("ind", range(3), lambda p: int(pts[p] == 1))
    triv = generated_subgroup(act.group, [act.group.identity])
    assert is_permissible(lam, act, triv)[0]


def test_maximal_subgroup_cube_sign_z(cube):
    sub = maximal_permissible_subgroup(cube.sign_parameter("z"), cube.action)
    assert sub.order == 8
    # brute force oracle over the rotation matrices: R e_z = +-e_z
    ez = np.array([0, 0, 1])
    expected = {g for g, r in enumerate(cube.matrices) if abs(r @ ez @ ez) == 1}
    assert set(sub.embedding) == expected
    swaps = [g for g in sub.embedding if (cube.matrices[g] @ ez)[2] == -1]
    assert len(swaps) == 4


def test_maximal_subgroup_constant(cube):
    lam = focused_parameter("c", range(8), lambda p: 0)
    assert maximal_permissible_subgroup(lam, cube.action).order == 24


def test_maximal_subgroup_injective(cube):
    # every point its own level set: any permutation of level sets preserves the partition
    assert maximal_permissible_subgroup(cube.identity_parameter(), cube.action).order == 24

import numpy as np
import pytest
from scipy.stats import unitary_group

from qfocus.focusing import find_transition, focused_parameter
from qfocus.groups import build_action, invariant_measure, maximal_permissible_subgroup
from qfocus.models import cube_characters, cyclic_group, reflection_model, spin_operator, spin_states
from qfocus.quantum_space import (BadCharacterTable, DegenerateMeasure, NoMatch, NonUnitaryW, NotGenerating,
                                  build_coupled_representation, build_parametric_space,
                                  build_quantum_space, inner, interpret_state, isotypic_projectors,
                                  operator_for_subparameter, phase_distance, regular_representation,
                                  transport_check)
from qfocus.scenarios import spin_coupled_representation


@pytest.fixture(scope="module")
def cube_space(cube):
    rho = invariant_measure(cube.action)
    return {a: build_parametric_space(cube.sign_parameter(a), rho) for a in "xyz"}, rho


def test_sign_space_amplitudes(cube_space):
    spaces, rho = cube_space
    f = spaces["z"].indicators
    assert f.shape == (8, 2)
    for k in range(2):
        support = np.flatnonzero(f[:, k])
        assert len(support) == 4
        np.testing.assert_allclose(f[support, k], np.sqrt(2), rtol=0, atol=1e-15)
    gram = np.array([[inner(f[:, i], f[:, j], spaces["z"].weight) for j in range(2)] for i in range(2)])
    np.testing.assert_allclose(gram, np.eye(2), atol=1e-15)


def test_constant_space(cube):
    rho = invariant_measure(cube.action)
    sp = build_parametric_space(focused_parameter("c", range(8), lambda p: 3), rho)
    assert sp.dimension == 1
    np.testing.assert_allclose(sp.indicators[:, 0], 1.0)


def test_multiplication_eigen(cube_space):
    sp = cube_space[0]["z"]
    plus = sp.indicators[:, sp.values.index(1)]
    np.testing.assert_array_equal(sp.multiplication @ plus, plus)


def test_zero_weight_rejected(cube):
    with pytest.raises(DegenerateMeasure):
        build_parametric_space(cube.sign_parameter("z"), np.r_[0.0, np.full(7, 1 / 7)])


def test_reflection_regular_rep():
    act, _ = reflection_model()
    U = regular_representation(act, invariant_measure(act))
    np.testing.assert_array_equal(U[1], [[0, 0, 1], [0, 1, 0], [1, 0, 0]])


def test_cube_regular_rep_exact(cube):
    U = regular_representation(cube.action, invariant_measure(cube.action))
    assert U.matrices.shape == (24, 8, 8)
    assert U.unitarity_defect() == 0.0
    assert U.homomorphism_defect() == 0.0


def test_transport_exact(cube, cube_space):
    spaces, rho = cube_space
    U = regular_representation(cube.action, rho)
    g = find_transition(cube.sign_parameter("z"), cube.sign_parameter("x"), cube.action)
    rep = transport_check(spaces["z"], spaces["x"], U, g)
    assert rep.exact and rep.subspace_deviation == 0.0
    same = transport_check(spaces["z"], spaces["z"], U, cube.group.identity)
    assert same.exact
    wrong = transport_check(spaces["z"], spaces["x"], U, cube.group.identity)
    assert wrong.max_deviation > 0


def test_isotypic_c2():
    g = cyclic_group(2)
    act = build_action(g, np.asarray(g.table))
    U = regular_representation(act, invariant_measure(act))
    iso = isotypic_projectors(U, [[1, 1], [1, -1]])
    np.testing.assert_allclose(iso.projectors[0], [[0.5, 0.5], [0.5, 0.5]])
    np.testing.assert_allclose(iso.projectors[1], [[0.5, -0.5], [-0.5, 0.5]])
    assert iso.dimensions == (1, 1)


def test_isotypic_cube(cube):
    U = regular_representation(cube.action, invariant_measure(cube.action))
    iso = isotypic_projectors(U, cube_characters(cube))
    # frozen: permutation character (8, 2 on 3-fold axes, 0 elsewhere) against the S4 table
    assert iso.multiplicities == (1, 1, 0, 1, 1)
    assert iso.dimensions == (1, 1, 0, 3, 3)
    assert max(iso.residuals().values()) <= 1e-10


def test_bad_character_table(cube):
    U = regular_representation(cube.action, invariant_measure(cube.action))
    chars = cube_characters(cube).astype(float)
    chars[3, 5] += 1
    with pytest.raises(BadCharacterTable):
        isotypic_projectors(U, chars)


def test_coupled_spin_consistent():
    good = spin_coupled_representation()
    assert good.discrepancy <= 1e-9 and good.leakage <= 1e-9
    assert good.consistent


def test_coupled_spin_negative_control():
    w = unitary_group.rvs(2, random_state=np.random.default_rng(7))
    bad = spin_coupled_representation(W0=w)
    assert bad.discrepancy > 1e-3
    assert not bad.consistent


def test_coupled_single_focus(cube):
    rho = invariant_measure(cube.action)
    const = focused_parameter("c", range(8), lambda p: 0)
    G = maximal_permissible_subgroup(const, cube.action)
    assert G.order == 24
    U = regular_representation(cube.action, rho)
    res = build_coupled_representation([build_parametric_space(const, rho)], [G], U, np.eye(8), [0])
    assert res.discrepancy == 0.0
    assert res.leakage <= 1e-15
    np.testing.assert_allclose(res.family.matrices, U.orthonormal(), atol=1e-15)


def test_coupled_not_generating(cube):
    rho = invariant_measure(cube.action)
    z = cube.sign_parameter("z")
    U = regular_representation(cube.action, rho)
    Gz = maximal_permissible_subgroup(z, cube.action)
    with pytest.raises(NotGenerating):
        build_coupled_representation([build_parametric_space(z, rho)], [Gz], U, np.eye(8), [0])


def test_quantum_space_identity_w(cube_space):
    sp = cube_space[0]["z"]
    qs = build_quantum_space(sp, np.eye(2))
    np.testing.assert_array_equal(qs.states, np.eye(2))
    np.testing.assert_array_equal(qs.operator, np.diag([-1, 1]))
    qs8 = build_quantum_space(sp, np.eye(8))
    np.testing.assert_allclose(qs8.states, sp.orthonormal_basis)
    np.testing.assert_allclose(qs8.operator, sp.multiplication)


def test_quantum_space_random_w(cube_space, rng):
    sp = cube_space[0]["x"]
    w = unitary_group.rvs(8, random_state=rng)
    qs = build_quantum_space(sp, w)
    assert qs.eigen_residual() <= 1e-12
    np.testing.assert_allclose(qs.states.conj().T @ qs.states, np.eye(2), atol=1e-12)


def test_quantum_space_non_unitary(cube_space):
    with pytest.raises(NonUnitaryW):
        build_quantum_space(cube_space[0]["z"], 2 * np.eye(2))


def test_spin_operator_matches(cube_space):
    a = np.array([1.0, 2.0, 2.0]) / 3
    qs = build_quantum_space(cube_space[0]["z"], spin_states(a))
    np.testing.assert_allclose(qs.operator, spin_operator(a), atol=1e-14)


def _spin_catalog():
    cat = {}
    for lab, a in zip("xyz", np.eye(3)):
        st = spin_states(a)
        cat[(lab, -1)] = st[:, 0]
        cat[(lab, 1)] = st[:, 1]
    return cat


def test_interpret_unique_match():
    cat = _spin_catalog()
    up = np.array([1, 0], dtype=complex)
    assert interpret_state(up, cat)[0] == [("z", 1)]
    assert interpret_state(np.exp(1j * np.pi / 7) * up, cat)[0] == [("z", 1)]


def test_interpret_no_match(cube_space, rng):
    qs = build_quantum_space(cube_space[0]["z"], unitary_group.rvs(8, random_state=rng))
    v = rng.normal(size=8) + 1j * rng.normal(size=8)
    with pytest.raises(NoMatch):
        interpret_state(v / np.linalg.norm(v), qs.catalog())


def test_subparameter_operators():
    act, pts = reflection_model()
    sp = build_parametric_space(focused_parameter("id", range(3), lambda p: pts[p]), invariant_measure(act))
    qs = build_quantum_space(sp, np.eye(3))
    np.testing.assert_allclose(operator_for_subparameter(lambda v: v, qs), qs.operator)
    np.testing.assert_allclose(operator_for_subparameter(lambda v: 4.0, qs), 4 * np.eye(3))
    sq = operator_for_subparameter(lambda v: v ** 2, qs)
    ev = np.linalg.eigvalsh(sq)
    np.testing.assert_allclose(ev, [0, 1, 1], atol=1e-15)


def test_phase_distance():
    a = unitary_group.rvs(3, random_state=np.random.default_rng(1))
    assert phase_distance(a, np.exp(0.3j) * a) <= 1e-14
    assert phase_distance(a, np.eye(3)) > 0.1

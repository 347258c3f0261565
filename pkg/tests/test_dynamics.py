import numpy as np
import pytest
from scipy.linalg import expm

from qfocus.dynamics import (Hamiltonian, Lattice, evolve_state, heisenberg_operator, propagator,
                             schrodinger_residual, translation_generator)
from qfocus.measurement import DimensionMismatch
from qfocus.models import spin_operator, spin_states


def random_hermitian(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (a + a.conj().T) / 2


def proj(v):
    return np.outer(v, np.conj(v))


def test_propagator_matches_expm(rng):
    for d in (2, 5, 8):
        h = random_hermitian(rng, d)
        H = Hamiltonian(h, hbar=0.7)
        np.testing.assert_allclose(propagator(H, 1.3), expm(-1j * h * 1.3 / 0.7), atol=1e-12)


def test_time_zero(rng):
    v = rng.normal(size=3) + 0j
    np.testing.assert_allclose(evolve_state(v, Hamiltonian(random_hermitian(rng, 3)), 0.0), v, atol=1e-15)


def test_stationary_state():
    H = Hamiltonian(np.diag([1.5, -0.4]))
    v = evolve_state([1, 0], H, 2.0)
    np.testing.assert_allclose(v, [np.exp(-1.5j * 2.0), 0], atol=1e-15)


def test_spin_precession_half_period():
    # eigenvalues +-1/2: a half turn about z after t = pi carries x-up to x-down
    x = spin_states([1, 0, 0])
    v = evolve_state(x[:, 1], Hamiltonian(spin_operator([0, 0, 1]) / 2), np.pi)
    np.testing.assert_allclose(proj(v), proj(x[:, 0]), atol=1e-14)


def test_spin_precession_unit_eigenvalues():
    # eigenvalues +-1 rotate twice as fast: x-down at t = pi/2, x-up again at t = pi
    x = spin_states([1, 0, 0])
    H = Hamiltonian(spin_operator([0, 0, 1]))
    np.testing.assert_allclose(proj(evolve_state(x[:, 1], H, np.pi / 2)), proj(x[:, 0]), atol=1e-14)
    np.testing.assert_allclose(proj(evolve_state(x[:, 1], H, np.pi)), proj(x[:, 1]), atol=1e-14)


def test_heisenberg_commuting(rng):
    h = np.diag([1.0, 2.0, 3.0])
    T = np.diag([5.0, -1.0, 0.5])
    np.testing.assert_allclose(heisenberg_operator(T, Hamiltonian(h), 4.2), T, atol=1e-14)
    np.testing.assert_allclose(heisenberg_operator(T, Hamiltonian(random_hermitian(rng, 3)), 0.0), T, atol=1e-14)


@pytest.mark.parametrize("t", [0.1, 0.7, 2.0])
def test_heisenberg_spin_rotation(t):
    Tt = heisenberg_operator(spin_operator([1, 0, 0]), Hamiltonian(spin_operator([0, 0, 1])), t)
    axis = [np.cos(2 * t), np.sin(2 * t), 0]
    np.testing.assert_allclose(Tt, spin_operator(axis), atol=1e-14)


def test_eigen_tracking(rng):
    H = Hamiltonian(random_hermitian(rng, 6))
    T = random_hermitian(rng, 6)
    ev, vecs = np.linalg.eigh(T)
    Tt = heisenberg_operator(T, H, 3.3)
    for k in range(6):
        vt = evolve_state(vecs[:, k], H, 3.3)
        np.testing.assert_allclose(Tt @ vt, ev[k] * vt, atol=1e-10)


def test_schrodinger_equation(rng):
    H = Hamiltonian(random_hermitian(rng, 4))
    v = np.ones(4) / 2
    assert schrodinger_residual(v, H, 0.9) < 1e-6


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        evolve_state([1, 0, 0], Hamiltonian(np.eye(2)), 1.0)


def test_non_hermitian():
    with pytest.raises(ValueError):
        Hamiltonian([[0, 1], [0, 0]])


def test_translation_constant():
    gen = translation_generator(Lattice(16, 0.25))
    q = np.ones(16)
    np.testing.assert_allclose(gen.shift @ q, q)
    np.testing.assert_allclose(gen.translate(0.25) @ q, q, atol=1e-12)


@pytest.mark.parametrize("m", [1, 5, -12, 31])
def test_translation_fourier_mode(m):
    lat = Lattice(64, 0.5)
    gen = translation_generator(lat)
    q = np.exp(2j * np.pi * m * lat.coordinates / lat.length)
    assert np.abs(gen.translate(lat.spacing) @ q - gen.shift @ q).max() <= 1e-8
    # (S q)(x) = q(x + spacing)
    np.testing.assert_allclose(gen.shift @ q, np.exp(2j * np.pi * m * (lat.coordinates + lat.spacing) / lat.length),
                               atol=1e-12)


def test_translation_full_period():
    lat = Lattice(64, 0.5)
    gen = translation_generator(lat)
    assert np.abs(gen.translate(lat.length) - np.eye(64)).max() <= 1e-8


def test_momentum_hermitian():
    gen = translation_generator(Lattice(10))
    np.testing.assert_allclose(gen.momentum, gen.momentum.conj().T, atol=1e-14)
    np.testing.assert_allclose(gen.derivative @ np.ones(10), 0, atol=1e-12)


def test_small_lattice_rejected():
    with pytest.raises(ValueError):
        translation_generator(Lattice(3))

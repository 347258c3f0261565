"""Unitary time evolution and the lattice translation generator."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measurement import DimensionMismatch

__all__ = [
    "Hamiltonian",
    "Lattice",
    "propagator",
    "evolve_state",
    "heisenberg_operator",
    "schrodinger_residual",
    "translation_generator",
    "hermitian_exp",
]


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    matrix: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        h = np.asarray(self.matrix, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError("Hamiltonian must be square")
        if not np.allclose(h, h.conj().T, atol=1e-12, rtol=0):
            raise ValueError("Hamiltonian is not hermitian")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")
        object.__setattr__(self, "matrix", h)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def hermitian_exp(h: np.ndarray, coeff: complex) -> np.ndarray:
    """``exp(coeff * h)`` for hermitian ``h`` through its eigendecomposition."""
    ev, vecs = np.linalg.eigh(h)
    return (vecs * np.exp(coeff * ev)[None, :]) @ vecs.conj().T


def propagator(H: Hamiltonian, t: float) -> np.ndarray:
    """``exp(-i H t / hbar)``."""
    return hermitian_exp(H.matrix, -1j * t / H.hbar)


def evolve_state(v0, H: Hamiltonian, t: float) -> np.ndarray:
    v0 = np.asarray(v0, dtype=complex).reshape(-1)
    if v0.size != H.dimension:
        raise DimensionMismatch("state and Hamiltonian dimensions differ")
    return propagator(H, t) @ v0


def heisenberg_operator(T, H: Hamiltonian, t: float) -> np.ndarray:
    """``T(t) = exp(-iHt/hbar) T exp(iHt/hbar)``.

    With this ordering an eigenvector ``v0`` of ``T`` evolves into an
    eigenvector ``v_t`` of ``T(t)`` with the same eigenvalue.
    """
    T = np.asarray(T, dtype=complex)
    if T.shape != H.matrix.shape:
        raise DimensionMismatch("operator and Hamiltonian dimensions differ")
    u = propagator(H, t)
    return u @ T @ u.conj().T


def schrodinger_residual(v0, H: Hamiltonian, t: float, dt: float = 1e-4) -> float:
    """``max |i hbar (v(t+dt) - v(t-dt)) / 2dt - H v(t)|``; O(dt^2) for the exact flow."""
    plus = evolve_state(v0, H, t + dt)
    minus = evolve_state(v0, H, t - dt)
    now = evolve_state(v0, H, t)
    lhs = 1j * H.hbar * (plus - minus) / (2 * dt)
    return float(np.abs(lhs - H.matrix @ now).max())


@dataclass(frozen=True)
class Lattice:
    """``n`` equally spaced sites on a ring of circumference ``n * spacing``."""

    n: int
    spacing: float = 1.0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("a lattice needs at least two sites")
        if self.spacing <= 0:
            raise ValueError("spacing must be positive")

    @property
    def length(self) -> float:
        return self.n * self.spacing

    @property
    def coordinates(self) -> np.ndarray:
        return np.arange(self.n) * self.spacing

    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers of the retained Fourier modes; the Nyquist mode gets 0."""
        m = np.fft.fftfreq(self.n, d=1.0 / self.n)
        if self.n % 2 == 0:
            m[self.n // 2] = 0.0
        return 2 * np.pi * m / self.length


@dataclass(frozen=True, eq=False)
class TranslationGenerator:
    derivative: np.ndarray
    shift: np.ndarray
    momentum: np.ndarray
    lattice: Lattice
    hbar: float = 1.0

    def translate(self, b: float) -> np.ndarray:
        """``exp(b D) = exp(i b P / hbar)``."""
        return hermitian_exp(self.momentum, 1j * b / self.hbar)


def translation_generator(lattice: Lattice, hbar: float = 1.0) -> TranslationGenerator:
    """Spectral derivative ``D``, the one-site shift ``(Sq)(x) = q(x + spacing)``, and ``P = (hbar/i) D``.

    ``exp(b D)`` translates band-limited functions (no Nyquist component) by
    ``b`` exactly, and equals the shift when ``b`` is one spacing.
    """
    if lattice.n < 4:
        raise ValueError("translation generator needs n >= 4")
    n = lattice.n
    f = np.fft.fft(np.eye(n), axis=0) / np.sqrt(n)     # unitary DFT matrix
    k = lattice.wavenumbers()
    d = f.conj().T @ np.diag(1j * k) @ f
    d = d.real if np.abs(d.imag).max() < 1e-12 else d
    shift = np.roll(np.eye(n), 1, axis=1)
    p = (hbar / 1j) * d
    p = (p + p.conj().T) / 2
    return TranslationGenerator(d, shift, p, lattice, hbar)

"""Slater determinant states and single-particle (mode-matrix) evolution.

A state with orbital matrix W (n_modes x n_particles) is the creation
product of the columns acting on the vacuum; its amplitude on the canonical
ket for an ascending configuration n is det(W[n, :]).  Quadratic evolution
acts as W -> m @ W, so an R-step trajectory costs R small matrix products
regardless of the many-body dimension.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateStateError, ShapeError
from .lattice import BipartiteLattice

RANK_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ModeMatrix:
    """A single-particle matrix with a declared unitarity flag.

    When unitary=True the matrix must satisfy ||m^dag m - I||_max <= 1e-10;
    non-unitary matrices trigger rank checks on application.
    """

    matrix: np.ndarray
    unitary: bool

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeError(f"mode matrix must be square, got {m.shape}")
        if self.unitary:
            defect = np.abs(m.conj().T @ m - np.eye(m.shape[0])).max(initial=0.0)
            if defect > 1e-10:
                raise ShapeError(f"matrix declared unitary but ||m^dag m - I|| = {defect:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True, eq=False)
class SlaterState:
    orbitals: np.ndarray

    def __post_init__(self):
        W = np.array(self.orbitals, dtype=complex)
        if W.ndim != 2:
            raise ShapeError(f"orbitals must be 2-d, got shape {W.shape}")
        if W.shape[1] > W.shape[0]:
            raise ShapeError(f"more particles than modes: {W.shape}")
        W.setflags(write=False)
        object.__setattr__(self, "orbitals", W)

    @property
    def n_modes(self) -> int:
        return self.orbitals.shape[0]

    @property
    def n_particles(self) -> int:
        return self.orbitals.shape[1]


def init_slater(n_modes: int, occupied) -> SlaterState:
    """Selection-column state for an occupied-site list (canonicalized ascending)."""
    occ = [int(s) for s in occupied]
    if len(set(occ)) != len(occ):
        raise ConfigError(f"repeated sites in occupation list {occupied}")
    if occ and not (0 <= min(occ) and max(occ) < n_modes):
        raise ConfigError(f"occupation list {occupied} out of range for {n_modes} modes")
    W = np.zeros((n_modes, len(occ)), dtype=complex)
    for col, site in enumerate(sorted(occ)):
        W[site, col] = 1.0
    return SlaterState(W)


def apply_mode_matrix(state: SlaterState, m: ModeMatrix) -> SlaterState:
    """Evolve orbitals by a quadratic generator's single-particle matrix."""
    if m.matrix.shape[0] != state.n_modes:
        raise ShapeError(
            f"mode matrix dim {m.matrix.shape[0]} does not match {state.n_modes} modes"
        )
    W = m.matrix @ state.orbitals
    if not m.unitary and state.n_particles:
        smallest = np.linalg.svd(W, compute_uv=False)[-1]
        if smallest <= RANK_TOL:
            raise DegenerateStateError(
                f"orbital rank collapsed: smallest singular value {smallest:.3e}"
            )
    return SlaterState(W)


def hopping_step(lattice: BipartiteLattice, J: complex, tau: float) -> ModeMatrix:
    """e^{-i J tau h} through the eigendecomposition of the real symmetric h.

    Unitary exactly when Im(J) = 0; tau = 0 returns the exact identity.
    """
    if tau == 0:
        return ModeMatrix(np.eye(lattice.n_sites, dtype=complex), True)
    eps, V = np.linalg.eigh(lattice.hopping)
    m = (V * np.exp(-1j * J * tau * eps)) @ V.T
    return ModeMatrix(m, unitary=(np.imag(J) == 0.0))


def dephase_step(signs, theta: float) -> ModeMatrix:
    """diag(e^{i s_j theta}) for a +-1 sign vector and a real angle."""
    s = np.asarray(signs)
    if not np.all(np.abs(s) == 1):
        raise ConfigError("signs must be +-1")
    if np.imag(theta) != 0:
        raise ConfigError("dephase_step takes a real angle; complex angles belong "
                          "to the landscape module")
    return ModeMatrix(np.diag(np.exp(1j * float(theta) * s)), True)


def _canonical_config(config, n_particles: int, n_modes: int, label: str):
    sites = [int(s) for s in config]
    if len(sites) != n_particles:
        raise ConfigError(
            f"{label} configuration {config} has {len(sites)} sites, state holds "
            f"{n_particles} particles"
        )
    if len(set(sites)) != len(sites):
        raise ConfigError(f"repeated sites in {label} configuration {config}")
    if sites and not (0 <= min(sites) and max(sites) < n_modes):
        raise ConfigError(f"{label} configuration {config} out of range")
    return sorted(sites)


def _row_det(orbitals: np.ndarray, rows) -> complex:
    """Determinant of the chosen rows in the given order (order-sensitive)."""
    if len(rows) == 0:
        return 1.0 + 0.0j
    return complex(np.linalg.det(orbitals[list(rows), :].copy()))


def pair_amplitude(ket: SlaterState, bra: SlaterState, n_config, m_config) -> complex:
    """Entry (n, m) of the outer product: det(ket[n]) * conj(det(bra[m])).

    Configurations are canonicalized to ascending order at this boundary, so
    all fermionic signs stay internal to the determinant convention.
    """
    n = _canonical_config(n_config, ket.n_particles, ket.n_modes, "ket")
    m = _canonical_config(m_config, bra.n_particles, bra.n_modes, "bra")
    return _row_det(ket.orbitals, n) * np.conj(_row_det(bra.orbitals, m))


def overlap(a: SlaterState, b: SlaterState) -> complex:
    """<a|b> = det(a^dag b) for equal particle numbers."""
    if a.n_modes != b.n_modes or a.n_particles != b.n_particles:
        raise ShapeError(
            f"overlap needs matching shapes, got {a.orbitals.shape} and {b.orbitals.shape}"
        )
    if a.n_particles == 0:
        return 1.0 + 0.0j
    return complex(np.linalg.det(a.orbitals.conj().T @ b.orbitals))

"""Dense many-body oracle: Fock bases, Hamiltonians, Lindbladians, exact evolution.

Conventions used throughout the package:

* Modes are Jordan-Wigner ordered with every spin-up mode before every
  spin-down mode, site-major within each spin: mode i is (site i, up) and
  mode n_sites + i is (site i, down).
* A basis ket for occupations (u, d) is the creation product written in
  ascending mode order acting on the vacuum, which carries a plus sign in
  the occupation representation.
* Occupation masks are integers with bit i set when site i is occupied.
* Density matrices are vectorized row-major (numpy C-order flatten), so
  left multiplication is H (x) I, right multiplication is I (x) H^T and the
  coherent part of the Lindbladian reads -i(H (x) I - I (x) H^T).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.linalg

from .errors import SectorError, ShapeError, SizeError
from .lattice import BipartiteLattice

DIMENSION_CAP = 4096
_NORMALITY_TOL = 1e-12


def _between_mask(i: int, j: int) -> int:
    lo, hi = (i, j) if i < j else (j, i)
    return ((1 << hi) - 1) ^ ((1 << (lo + 1)) - 1)


def _parity_sign(mask: int) -> int:
    return -1 if mask.bit_count() & 1 else 1


def config_to_mask(config) -> int:
    mask = 0
    for site in config:
        mask |= 1 << int(site)
    return mask


def mask_to_config(mask: int) -> tuple[int, ...]:
    sites = []
    i = 0
    while mask:
        if mask & 1:
            sites.append(i)
        mask >>= 1
        i += 1
    return tuple(sites)


@dataclass(frozen=True, eq=False)
class SpinfulBasis:
    """Ordered basis of spinful occupation states (up_mask, down_mask).

    States are sorted ascending by (up_mask, down_mask).  A fixed sector
    (n_up, n_down) restricts to those particle numbers; sector=None is the
    full 4^n_sites space.
    """

    n_sites: int
    sector: tuple[int, int] | None
    states: tuple[tuple[int, int], ...]
    index: dict = field(repr=False)

    @classmethod
    def build(cls, n_sites: int, sector: tuple[int, int] | None = None) -> "SpinfulBasis":
        if sector is None:
            masks = range(1 << n_sites)
            states = tuple((u, d) for u in masks for d in range(1 << n_sites))
        else:
            n_up, n_down = sector
            if not (0 <= n_up <= n_sites and 0 <= n_down <= n_sites):
                raise SectorError(f"sector {sector} impossible on {n_sites} sites")
            ups = [config_to_mask(c) for c in combinations(range(n_sites), n_up)]
            downs = [config_to_mask(c) for c in combinations(range(n_sites), n_down)]
            states = tuple((u, d) for u in sorted(ups) for d in sorted(downs))
        if len(states) > DIMENSION_CAP:
            raise SizeError(
                f"basis dimension {len(states)} exceeds the dense cap {DIMENSION_CAP}"
            )
        return cls(n_sites, sector, states, {s: k for k, s in enumerate(states)})

    @property
    def dim(self) -> int:
        return len(self.states)


@dataclass(frozen=True, eq=False)
class VectorizedBasis:
    """Row-major flattening of 2^n x 2^n density matrices over spinless masks."""

    n_sites: int

    @property
    def fock_dim(self) -> int:
        return 1 << self.n_sites

    @property
    def dim(self) -> int:
        return self.fock_dim**2

    def index(self, ket_mask: int, bra_mask: int) -> int:
        return ket_mask * self.fock_dim + bra_mask


@dataclass(frozen=True, eq=False)
class DenseOperator:
    matrix: np.ndarray
    basis: object
    meta: dict | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeError(f"operator matrix must be square, got {m.shape}")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True, eq=False)
class DenseState:
    amplitudes: np.ndarray
    basis: object

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex)
        if a.ndim != 1:
            raise ShapeError(f"state must be a vector, got shape {a.shape}")
        object.__setattr__(self, "amplitudes", a)


def basis_state(basis: SpinfulBasis, up_config, down_config) -> DenseState:
    """Unit vector on the canonical ket for the given site configurations."""
    key = (config_to_mask(up_config), config_to_mask(down_config))
    if key not in basis.index:
        raise SectorError(f"configuration {up_config}/{down_config} not in basis sector")
    amps = np.zeros(basis.dim, dtype=complex)
    amps[basis.index[key]] = 1.0
    return DenseState(amps, basis)


def _hop_terms(hopping: np.ndarray):
    """Nonzero (i, j, h_ij) pairs of the single-particle matrix, i != j."""
    terms = []
    n = hopping.shape[0]
    for i in range(n):
        for j in range(n):
            if i != j and hopping[i, j] != 0.0:
                terms.append((i, j, float(hopping[i, j])))
    return terms


def _kinetic_action(mask: int, terms):
    """Yield (new_mask, amplitude) for sum_ij h_ij c^dag_i c_j on one mask."""
    for i, j, w in terms:
        if (mask >> j) & 1 and not (mask >> i) & 1:
            sign = _parity_sign(mask & _between_mask(i, j))
            yield (mask ^ (1 << j)) | (1 << i), sign * w


def build_generalized_hubbard(
    lattice: BipartiteLattice,
    J: complex,
    U: complex,
    mu: complex,
    sector: tuple[int, int] | None = None,
) -> DenseOperator:
    """Assemble J * sum h_ij a^dag_is a_js + U * sum n_up n_down + mu * sum n_is.

    The dephasing-dual Hamiltonian is J real, U = i*gamma, mu = -i*gamma/2.
    Same-spin quadratic terms never cross the opposite spin's Jordan-Wigner
    string, so each spin's hop sign depends only on its own occupations.
    """
    basis = SpinfulBasis.build(lattice.n_sites, sector)
    terms = _hop_terms(lattice.hopping)
    H = np.zeros((basis.dim, basis.dim), dtype=complex)
    for col, (u, d) in enumerate(basis.states):
        H[col, col] += U * (u & d).bit_count() + mu * (u.bit_count() + d.bit_count())
        if J != 0:
            for u2, amp in _kinetic_action(u, terms):
                H[basis.index[(u2, d)], col] += J * amp
            for d2, amp in _kinetic_action(d, terms):
                H[basis.index[(u, d2)], col] += J * amp
    return DenseOperator(H, basis, meta={"kind": "hubbard", "J": J, "U": U, "mu": mu,
                                         "lattice": lattice})


def spinless_hopping_matrix(lattice: BipartiteLattice) -> np.ndarray:
    """Fock-space matrix of sum_ij h_ij c^dag_i c_j over all 2^n masks (real)."""
    n = lattice.n_sites
    dim = 1 << n
    if dim > DIMENSION_CAP:
        raise SizeError(f"Fock dimension {dim} exceeds the dense cap {DIMENSION_CAP}")
    terms = _hop_terms(lattice.hopping)
    H = np.zeros((dim, dim))
    for mask in range(dim):
        for mask2, amp in _kinetic_action(mask, terms):
            H[mask2, mask] += amp
    return H


def occupation_diagonals(n_sites: int) -> np.ndarray:
    """occ[i, mask] = occupation of site i in each spinless Fock state."""
    masks = np.arange(1 << n_sites)
    return np.array([(masks >> i) & 1 for i in range(n_sites)], dtype=float)


def build_lindbladian_superop(lattice: BipartiteLattice, J: complex, U: complex) -> DenseOperator:
    """Matrix of L(rho) = -iJ[H0, rho] + U sum_i (n_i rho n_i - {n_i, rho}/2).

    Row-major vectorization: L = -iJ(H0 (x) I - I (x) H0^T) plus the diagonal
    dissipator.  The physical dephasing Lindbladian is J = 1, U = gamma >= 0.
    """
    basis = VectorizedBasis(lattice.n_sites)
    if basis.dim > DIMENSION_CAP:
        raise SizeError(f"superoperator dimension {basis.dim} exceeds {DIMENSION_CAP}")
    H0 = spinless_hopping_matrix(lattice)
    dim = basis.fock_dim
    eye = np.eye(dim)
    L = -1j * J * (np.kron(H0, eye) - np.kron(eye, H0.T)).astype(complex)
    occ = occupation_diagonals(lattice.n_sites)
    for i in range(lattice.n_sites):
        ni = occ[i]
        # n_i rho n_i -> n (x) n; {n_i, rho}/2 -> (n (x) I + I (x) n)/2, all diagonal
        diag = np.kron(ni, ni) - 0.5 * (np.kron(ni, np.ones(dim)) + np.kron(np.ones(dim), ni))
        L[np.arange(basis.dim), np.arange(basis.dim)] += U * diag
    return DenseOperator(L, basis, meta={"kind": "lindbladian", "J": J, "U": U,
                                         "lattice": lattice})


def _is_normal(A: np.ndarray) -> bool:
    scale = max(1.0, np.abs(A).max(initial=0.0) ** 2)
    return np.abs(A @ A.conj().T - A.conj().T @ A).max(initial=0.0) <= _NORMALITY_TOL * scale


def propagator(op: DenseOperator, t: float) -> np.ndarray:
    """Matrix exponential e^{-i t H}.

    Hermitian operators go through eigh, other normal operators through a
    Schur form (diagonal for normal input), and the general case falls back
    to scipy's Pade scaling-and-squaring.
    """
    A = op.matrix
    if t == 0:
        return np.eye(A.shape[0], dtype=complex)
    if np.abs(A - A.conj().T).max(initial=0.0) <= _NORMALITY_TOL * max(1.0, np.abs(A).max()):
        w, V = np.linalg.eigh(A)
        return (V * np.exp(-1j * t * w)) @ V.conj().T
    if _is_normal(A):
        T, Z = scipy.linalg.schur(A.astype(complex), output="complex")
        return (Z * np.exp(-1j * t * np.diag(T))) @ Z.conj().T
    return scipy.linalg.expm(-1j * t * A)


def evolve_dense(state: DenseState, op: DenseOperator, t: float) -> DenseState:
    """Apply e^{-i t H} to a dense state vector."""
    if op.matrix.shape[0] != state.amplitudes.shape[0]:
        raise ShapeError(
            f"operator dim {op.matrix.shape[0]} does not match state dim "
            f"{state.amplitudes.shape[0]}"
        )
    if op.matrix.shape[0] > DIMENSION_CAP:
        raise SizeError(f"dimension {op.matrix.shape[0]} exceeds {DIMENSION_CAP}")
    return DenseState(propagator(op, t) @ state.amplitudes, state.basis)


def evolve_superop(superop: DenseOperator, rho0: np.ndarray, t: float) -> np.ndarray:
    """Apply e^{t L} to a density matrix, returned in matrix form."""
    dim = superop.basis.fock_dim
    if rho0.shape != (dim, dim):
        raise ShapeError(f"density matrix shape {rho0.shape}, expected {(dim, dim)}")
    vec = scipy.linalg.expm(t * superop.matrix) @ rho0.astype(complex).ravel()
    return vec.reshape(dim, dim)


def amplitude_from_state(state: DenseState, up_config, down_config) -> complex:
    """Coefficient of the canonical ket for the given (ascending) configurations.

    For rho = |psi><phi| the induced matrix convention is
    Psi_nm = psi_n * conj(phi_m); the equivalent trace extraction applies the
    creation factors written in ascending order and the annihilation factors
    written in descending order (fixed once against brute force on 2 sites).
    """
    basis = state.basis
    if not isinstance(basis, SpinfulBasis):
        raise ShapeError("amplitude_from_state expects a state over a SpinfulBasis")
    up = tuple(sorted(int(s) for s in up_config))
    down = tuple(sorted(int(s) for s in down_config))
    if len(set(up)) != len(up) or len(set(down)) != len(down):
        raise SectorError(f"repeated sites in configuration {up_config}/{down_config}")
    key = (config_to_mask(up), config_to_mask(down))
    if key not in basis.index:
        raise SectorError(f"configuration {up}/{down} not in basis sector {basis.sector}")
    return complex(state.amplitudes[basis.index[key]])


# -- symmetry generators on the full spinful space ---------------------------


def _full_space_operator(op: DenseOperator) -> DenseOperator:
    basis = op.basis
    if isinstance(basis, SpinfulBasis) and basis.sector is None:
        return op
    meta = op.meta or {}
    if meta.get("kind") != "hubbard":
        raise ShapeError(
            "symmetry_report needs a full-space operator or one built by "
            "build_generalized_hubbard (whose parameters allow rebuilding)"
        )
    return build_generalized_hubbard(meta["lattice"], meta["J"], meta["U"], meta["mu"],
                                     sector=None)


def _pair_op(basis: SpinfulBasis, site_sign) -> np.ndarray:
    """sum_j site_sign(j) c^dag_{j,up} c^dag_{j,down} on the full space."""
    dim = basis.dim
    M = np.zeros((dim, dim), dtype=complex)
    for col, (u, d) in enumerate(basis.states):
        for j in range(basis.n_sites):
            bit = 1 << j
            if u & bit or d & bit:
                continue
            # apply c^dag_{j,down} first: modes below N+j are all up modes and
            # the down modes at sites < j
            sign = _parity_sign(u) * _parity_sign(d & (bit - 1))
            # then c^dag_{j,up}: up modes at sites < j
            sign *= _parity_sign(u & (bit - 1))
            M[basis.index[(u | bit, d | bit)], col] += site_sign(j) * sign
    return M


def _spin_raise_op(basis: SpinfulBasis) -> np.ndarray:
    """S+ = sum_i a^dag_{i,up} a_{i,down} on the full space."""
    dim = basis.dim
    M = np.zeros((dim, dim), dtype=complex)
    for col, (u, d) in enumerate(basis.states):
        for i in range(basis.n_sites):
            bit = 1 << i
            if not d & bit or u & bit:
                continue
            sign = _parity_sign(u) * _parity_sign(d & (bit - 1))  # a_{i,down}
            sign *= _parity_sign(u & (bit - 1))  # a^dag_{i,up}
            M[basis.index[(u | bit, d ^ bit)], col] += sign
    return M


def symmetry_generators(lattice: BipartiteLattice) -> dict[str, np.ndarray]:
    """Charge, spin, and staggered pairing generators on the full spinful space."""
    basis = SpinfulBasis.build(lattice.n_sites, sector=None)
    n_up = np.array([u.bit_count() for u, _ in basis.states], dtype=float)
    n_down = np.array([d.bit_count() for _, d in basis.states], dtype=float)
    Q = np.diag(n_up + n_down).astype(complex)
    Sz = np.diag(0.5 * (n_up - n_down)).astype(complex)
    Sp = _spin_raise_op(basis)
    Sm = Sp.conj().T
    a_set = set(lattice.a_sites())
    eta_p = _pair_op(basis, lambda j: 1.0 if j in a_set else -1.0)
    return {
        "Q": Q,
        "S_x": 0.5 * (Sp + Sm),
        "S_y": -0.5j * (Sp - Sm),
        "S_z": Sz,
        "eta_plus": eta_p,
        "eta_minus": eta_p.conj().T,
        "eta_z": 0.5 * (Q - lattice.n_sites * np.eye(basis.dim)),
    }


def symmetry_report(op: DenseOperator, lattice: BipartiteLattice) -> dict[str, float]:
    """Max-abs-entry commutator norm of H with each symmetry generator."""
    full = _full_space_operator(op)
    H = full.matrix
    gens = symmetry_generators(lattice)
    report = {}
    for name, X in gens.items():
        C = H @ X - X @ H
        report[name] = float(np.abs(C).max(initial=0.0))
    return report


@dataclass(frozen=True)
class SpectrumPairing:
    ok: bool
    real: tuple[complex, ...]
    pairs: tuple[tuple[complex, complex], ...]
    unpaired: tuple[complex, ...]


def pt_spectrum_check(superop, tol: float = 1e-9) -> SpectrumPairing:
    """Verify each eigenvalue is real (within tol) or conjugate-paired (within tol).

    Accepts a DenseOperator or a bare square matrix.
    """
    matrix = superop.matrix if hasattr(superop, "matrix") else np.asarray(superop)
    eigs = np.linalg.eigvals(matrix)
    real = [complex(e) for e in eigs if abs(e.imag) <= tol]
    rest = sorted((complex(e) for e in eigs if abs(e.imag) > tol),
                  key=lambda z: (z.real, z.imag))
    unmatched = list(rest)
    pairs = []
    unpaired = []
    while unmatched:
        z = unmatched.pop(0)
        best_k, best_d = -1, np.inf
        for k, w in enumerate(unmatched):
            d = abs(w - z.conjugate())
            if d < best_d:
                best_k, best_d = k, d
        if best_k >= 0 and best_d <= tol:
            pairs.append((z, unmatched.pop(best_k)))
        else:
            unpaired.append(z)
    return SpectrumPairing(not unpaired, tuple(real), tuple(pairs), tuple(unpaired))


# -- debug serialization ------------------------------------------------------


def dump_complex_array(path, array: np.ndarray) -> None:
    """Text dump: dimension header line, then row-major 're im' pairs.

    Debug aid only; the format carries no stability guarantee.
    """
    a = np.atleast_2d(np.asarray(array, dtype=complex))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{a.shape[0]} {a.shape[1]}\n")
        for row in a:
            fh.write(" ".join(f"{z.real:.17g} {z.imag:.17g}" for z in row) + "\n")


def load_complex_array(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        rows, cols = (int(x) for x in fh.readline().split())
        out = np.empty((rows, cols), dtype=complex)
        for r in range(rows):
            vals = [float(x) for x in fh.readline().split()]
            out[r] = [complex(vals[2 * c], vals[2 * c + 1]) for c in range(cols)]
    return out

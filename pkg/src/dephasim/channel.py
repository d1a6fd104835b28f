"""Stochastic mixed-unitary channel for dephasing dynamics.

Each time step applies the random phase unitary prod_j e^{i s_j theta n_j}
(theta = sqrt(gamma * tau), s_j = +-1 uniform) followed by the hopping
propagator e^{-i tau h}; both sides of the density matrix get the same
unitary, so each trajectory is an exact channel realization.  The sample
mean over sign strings reproduces e^{t L} with O(t^2/R) bias.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, ShapeError, SizeError
from .fock import VectorizedBasis, DenseOperator, occupation_diagonals, spinless_hopping_matrix
from .lattice import BipartiteLattice
from .slater import SlaterState, apply_mode_matrix, dephase_step, hopping_step

# Trajectories are processed in fixed-size chunks so the work split, and with
# it every float, is independent of the worker-thread count.
CHUNK = 64

AVERAGED_SITE_CAP = 6


@dataclass(frozen=True)
class ChannelPlan:
    """Discretization of a dephasing evolution: R steps of length tau = t/R."""

    lattice: BipartiteLattice
    gamma: float
    t: float
    R: int

    def __post_init__(self):
        if self.gamma < 0:
            raise DomainError(f"gamma must be >= 0, got {self.gamma}")
        if self.t < 0:
            raise DomainError(f"t must be >= 0, got {self.t}")
        if self.R < 1:
            raise DomainError(f"R must be >= 1, got {self.R}")

    @property
    def tau(self) -> float:
        return self.t / self.R

    @property
    def theta(self) -> float:
        return math.sqrt(self.gamma * self.tau)


@dataclass(frozen=True, eq=False)
class SignString:
    """An R x n_sites array of +-1 step signs for one trajectory."""

    signs: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.signs)
        if s.ndim != 2:
            raise ShapeError(f"signs must be R x n_sites, got shape {s.shape}")
        if s.size and not np.all(np.abs(s) == 1):
            raise ConfigError("sign entries must be +-1")
        s = s.astype(np.int8)
        s.setflags(write=False)
        object.__setattr__(self, "signs", s)


@dataclass(frozen=True)
class AmplitudeEstimate:
    """Monte Carlo estimate of one wavefunction entry.

    stderr is max(se(Re), se(Im)) with ddof=1; it is 0 when n_samples = 1.
    """

    n_config: tuple[int, ...]
    m_config: tuple[int, ...]
    mean: complex
    stderr: float
    n_samples: int


def trajectory_rng(master_seed: int, index: int) -> np.random.Generator:
    """Counter-based per-trajectory stream: Philox keyed by (seed, index)."""
    key = np.array([master_seed & 0xFFFFFFFFFFFFFFFF, index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_signs(plan: ChannelPlan, rng: np.random.Generator) -> SignString:
    draws = rng.integers(0, 2, size=(plan.R, plan.lattice.n_sites), dtype=np.int8)
    return SignString(2 * draws - 1)


def evolve_trajectory(
    ket: SlaterState, bra: SlaterState, plan: ChannelPlan, signs
) -> tuple[SlaterState, SlaterState]:
    """Run one sign string: per step dephase first, then hop, on both states.

    Ket and bra receive identical matrices; the conjugation of the bra side
    happens inside pair_amplitude, so rho_s = U_s rho0 U_s^dag exactly.
    signs may be a SignString or a raw R x n_sites array of +-1.
    """
    if not isinstance(signs, SignString):
        signs = SignString(signs)
    if signs.signs.shape != (plan.R, plan.lattice.n_sites):
        raise ShapeError(
            f"sign string shape {signs.signs.shape} does not match plan "
            f"{(plan.R, plan.lattice.n_sites)}"
        )
    hop = hopping_step(plan.lattice, 1.0, plan.tau)
    theta = plan.theta
    for r in range(plan.R):
        step = dephase_step(signs.signs[r], theta)
        ket = apply_mode_matrix(apply_mode_matrix(ket, step), hop)
        bra = apply_mode_matrix(apply_mode_matrix(bra, step), hop)
    return ket, bra


def _batch_trajectories(kets, bras, hop, theta, signs):
    """Vectorized trajectory evolution over a batch.

    kets (B, n, k_up), bras (B, n, k_dn), signs (B, R, n); same math as
    evolve_trajectory, asserted equal in the tests.
    """
    R = signs.shape[1]
    for r in range(R):
        phases = np.exp(1j * theta * signs[:, r, :])[:, :, None]
        kets = hop @ (kets * phases)
        bras = hop @ (bras * phases)
    return kets, bras


def _batch_amplitudes(kets, bras, configs):
    out = np.empty((kets.shape[0], len(configs)), dtype=complex)
    for c, (n_rows, m_rows) in enumerate(configs):
        dk = np.linalg.det(kets[:, n_rows, :]) if n_rows else np.ones(kets.shape[0])
        db = np.linalg.det(bras[:, m_rows, :]) if m_rows else np.ones(bras.shape[0])
        out[:, c] = dk * np.conj(db)
    return out


def monte_carlo_estimate(
    ket0: SlaterState,
    bra0: SlaterState,
    plan: ChannelPlan,
    configs,
    n_samples: int,
    seed: int,
    threads: int = 1,
) -> list[AmplitudeEstimate]:
    """Average trajectory amplitudes over n_samples sign strings.

    All configs share the same trajectories (common random numbers), each
    trajectory draws its signs from its own counter-based stream, results
    land in per-trajectory slots, and the reduction order is fixed, so the
    output is byte-identical for any thread count.
    """
    if n_samples < 1:
        raise DomainError(f"n_samples must be >= 1, got {n_samples}")
    pairs = []
    for n_config, m_config in configs:
        n = sorted(int(s) for s in n_config)
        m = sorted(int(s) for s in m_config)
        if len(set(n)) != len(n) or len(set(m)) != len(m):
            raise ConfigError(f"repeated sites in configuration {n_config}/{m_config}")
        pairs.append((n, m))
    live = [
        c
        for c, (n, m) in enumerate(pairs)
        if len(n) == ket0.n_particles and len(m) == bra0.n_particles
    ]
    hop = hopping_step(plan.lattice, 1.0, plan.tau).matrix
    theta = plan.theta
    n_sites = plan.lattice.n_sites
    slots = np.zeros((n_samples, len(pairs)), dtype=complex)
    live_pairs = [pairs[c] for c in live]

    def run_chunk(start: int) -> None:
        stop = min(start + CHUNK, n_samples)
        signs = np.stack(
            [sample_signs(plan, trajectory_rng(seed, i)).signs for i in range(start, stop)]
        ).astype(float)
        kets = np.broadcast_to(ket0.orbitals, (stop - start, *ket0.orbitals.shape)).copy()
        bras = np.broadcast_to(bra0.orbitals, (stop - start, *bra0.orbitals.shape)).copy()
        kets, bras = _batch_trajectories(kets, bras, hop, theta, signs)
        if live_pairs:
            slots[start:stop, live] = _batch_amplitudes(kets, bras, live_pairs)

    starts = range(0, n_samples, CHUNK)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run_chunk, starts))
    else:
        for s in starts:
            run_chunk(s)

    estimates = []
    for c, (n, m) in enumerate(pairs):
        col = slots[:, c]
        mean = complex(np.mean(col))
        if n_samples > 1:
            se_re = float(np.std(col.real, ddof=1) / math.sqrt(n_samples))
            se_im = float(np.std(col.imag, ddof=1) / math.sqrt(n_samples))
            stderr = max(se_re, se_im)
        else:
            stderr = 0.0
        estimates.append(AmplitudeEstimate(tuple(n), tuple(m), mean, stderr, n_samples))
    return estimates


def averaged_step_superop(lattice: BipartiteLattice, gamma: float, tau: float) -> DenseOperator:
    """Exact single-step channel average E(rho) = 2^-n sum_s U_s rho U_s^dag.

    The hopping factor separates from the sign average, which closes to
    cos(theta)^hamming(a, b) entrywise, so the enumeration over 2^n strings
    is done in closed form (the tests also enumerate literally and compare).
    """
    if gamma < 0:
        raise DomainError(f"gamma must be >= 0, got {gamma}")
    n = lattice.n_sites
    if n > AVERAGED_SITE_CAP:
        raise SizeError(f"averaged channel is dense-enumeration only; {n} sites > "
                        f"{AVERAGED_SITE_CAP}")
    basis = VectorizedBasis(n)
    dim = basis.fock_dim
    if tau == 0:
        return DenseOperator(np.eye(basis.dim, dtype=complex), basis,
                             meta={"kind": "averaged-step", "gamma": gamma, "tau": tau})
    H0 = spinless_hopping_matrix(lattice)
    eps, V = np.linalg.eigh(H0)
    P = (V * np.exp(-1j * tau * eps)) @ V.T
    theta = math.sqrt(gamma * tau)
    occ = occupation_diagonals(n)  # (n, dim)
    masks_a = np.repeat(np.arange(dim), dim)
    masks_b = np.tile(np.arange(dim), dim)
    hamming = np.array([(int(a) ^ int(b)).bit_count() for a, b in zip(masks_a, masks_b)])
    sign_average = np.cos(theta) ** hamming
    S = np.kron(P, P.conj()) * sign_average[None, :]
    return DenseOperator(S, basis, meta={"kind": "averaged-step", "gamma": gamma, "tau": tau})


def observable_range(norm: float) -> float:
    """Hoeffding range width 2*||A|| of Re/Im of a trajectory estimate."""
    if norm < 0:
        raise DomainError(f"operator norm must be >= 0, got {norm}")
    return 2.0 * norm


def hoeffding_samples(range_width: float, epsilon: float, delta: float) -> float:
    """Pre-ceiling sample count Delta^2/(2 eps^2) * ln(2/delta)."""
    if range_width <= 0 or epsilon <= 0 or delta <= 0:
        raise DomainError("range width, epsilon and delta must be positive")
    if delta >= 1:
        raise DomainError(f"delta must be < 1, got {delta}")
    return range_width**2 / (2 * epsilon**2) * math.log(2 / delta)


def hoeffding_bound(range_width: float, epsilon: float, delta: float) -> int:
    """Samples guaranteeing P(|mean - E| >= epsilon) <= delta for one component.

    Estimating Re and Im separately uses delta/2 each (union bound).
    """
    return math.ceil(hoeffding_samples(range_width, epsilon, delta))

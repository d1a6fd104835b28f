"""Complex-coupling probes: torus coordinates, similarity trajectories, bounds.

The coupling pair (J, U) parameterizes the generalized evolution
e^{-it(J H0 + U H1)} of the vectorized density matrix, where H1 is the
doubled on-site interaction.  In Lindblad form the same evolution reads
-iJ[H0, .] + U_L * sum_i (n_i . n_i - {n_i, .}/2) with U_L = -iU, so the
dephasing regime sits at arg(U) = pi/2 where U_L = |U| is a real rate and
the per-step similarity factor exp(i s_j sqrt(U_L tau) n_j) is an exact
phase.  Away from that slice the factor is non-unitary and per-trajectory
magnitudes can grow; the probes here measure that growth and compare it to
operator-norm bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, OverflowGuardError
from .fock import build_lindbladian_superop, config_to_mask, evolve_superop
from .lattice import BipartiteLattice
from .slater import ModeMatrix, SlaterState, apply_mode_matrix, pair_amplitude
from .channel import sample_signs, trajectory_rng, ChannelPlan

RESCALE_THRESHOLD = 1e100
DEFAULT_LOG_CAP = 1e4


@dataclass(frozen=True)
class ComplexCoupling:
    """Hopping and interaction scales of e^{-it(J H0 + U H1)}."""

    J: complex
    U: complex


@dataclass(frozen=True)
class TorusPoint:
    """(arg J, arg U, s = e^{-|U|/|J|}) on the solid-torus parameter space."""

    arg_j: float
    arg_u: float
    s: float


def torus_coords(coupling, U: complex | None = None) -> TorusPoint:
    """Map a coupling pair to angle-angle-radius coordinates.

    Accepts a ComplexCoupling or the pair (J, U).  U = 0 is canonicalized to
    arg_u = 0, s = 1 (the free-fermion surface).
    """
    if not isinstance(coupling, ComplexCoupling):
        coupling = ComplexCoupling(complex(coupling), 0j if U is None else complex(U))
    if coupling.J == 0:
        raise DomainError("torus coordinates need J != 0")
    arg_j = float(np.angle(coupling.J)) % (2 * math.pi)
    if coupling.U == 0:
        return TorusPoint(arg_j, 0.0, 1.0)
    arg_u = float(np.angle(coupling.U)) % (2 * math.pi)
    s = math.exp(-abs(coupling.U) / abs(coupling.J))
    return TorusPoint(arg_j, arg_u, s)


def coupling_from_torus(point: TorusPoint, j_scale: float = 1.0) -> ComplexCoupling:
    """Inverse of torus_coords at a chosen |J| (s = 1 maps back to U = 0)."""
    if j_scale <= 0:
        raise DomainError("j_scale must be positive")
    if not 0 < point.s <= 1:
        raise DomainError(f"s must lie in (0, 1], got {point.s}")
    J = j_scale * np.exp(1j * point.arg_j)
    ratio = -math.log(point.s)
    return ComplexCoupling(complex(J), complex(ratio * j_scale * np.exp(1j * point.arg_u)))


def interaction_angle(U: complex, tau: float) -> complex:
    """Principal sqrt(-iU tau): the per-step angle w with factors e^{i s_j w}."""
    return complex(np.sqrt(-1j * U * tau))


def _step_matrices(lattice: BipartiteLattice, coupling: ComplexCoupling, tau: float):
    """Per-step (ket, bra) hop matrices and dephase angles.

    The bra carries (A^dag)^{-1} of the ket step, which equals the ket step
    with conjugated couplings, so pair_amplitude reproduces the entries of
    S rho S^{-1}.
    """
    eps, V = np.linalg.eigh(lattice.hopping)
    hop_ket = (V * np.exp(-1j * coupling.J * tau * eps)) @ V.T
    hop_bra = (V * np.exp(-1j * np.conj(coupling.J) * tau * eps)) @ V.T
    w = interaction_angle(coupling.U, tau)
    return hop_ket, hop_bra, w, np.conj(w)


def _is_unitary_slice(coupling: ComplexCoupling, w: complex) -> bool:
    return coupling.J.imag == 0.0 and abs(w.imag) < 1e-15


@dataclass(frozen=True)
class ScaleLog:
    """Log-magnitude offsets accumulated by overflow rescaling.

    The true pair amplitude is pair_amplitude(ket, bra) * exp(ket_log + bra_log).
    """

    ket_log: float
    bra_log: float

    @property
    def total(self) -> float:
        return self.ket_log + self.bra_log


def _apply_scaled(state: SlaterState, matrix: np.ndarray, unitary: bool,
                  log_acc: float, log_cap: float) -> tuple[SlaterState, float]:
    state = apply_mode_matrix(state, ModeMatrix(matrix, unitary))
    peak = np.abs(state.orbitals).max(initial=0.0)
    if peak > RESCALE_THRESHOLD:
        state = SlaterState(state.orbitals / peak)
        log_acc += state.n_particles * math.log(peak)
    if abs(log_acc) > log_cap:
        raise OverflowGuardError(f"log-scale {log_acc:.3e} exceeded cap {log_cap:.3e}")
    return state, log_acc


def similarity_trajectory(
    ket: SlaterState,
    bra: SlaterState,
    lattice: BipartiteLattice,
    coupling: ComplexCoupling,
    t: float,
    R: int,
    signs: np.ndarray,
    log_cap: float = DEFAULT_LOG_CAP,
) -> tuple[SlaterState, SlaterState, ScaleLog]:
    """Run one similarity-transform trajectory S rho0 S^{-1}.

    Per step the ket gets diag(e^{i s_j w}) then e^{-iJ tau h}; the bra gets
    the conjugate-coupling step, realizing the inverse adjoint.  On the
    dephasing slice (J real, arg U = pi/2) both sides receive identical
    unitaries and the evolution matches the duality pipeline exactly.
    """
    if R < 1:
        raise DomainError(f"R must be >= 1, got {R}")
    signs = np.asarray(signs)
    if signs.shape != (R, lattice.n_sites):
        raise DomainError(f"signs shape {signs.shape}, expected {(R, lattice.n_sites)}")
    tau = t / R
    hop_ket, hop_bra, w_ket, w_bra = _step_matrices(lattice, coupling, tau)
    unitary = _is_unitary_slice(coupling, w_ket)
    klog = blog = 0.0
    for r in range(R):
        dk = np.diag(np.exp(1j * signs[r] * w_ket))
        db = np.diag(np.exp(1j * signs[r] * w_bra))
        ket, klog = _apply_scaled(ket, hop_ket @ dk, unitary, klog, log_cap)
        bra, blog = _apply_scaled(bra, hop_bra @ db, unitary, blog, log_cap)
    return ket, bra, ScaleLog(klog, blog)


def spectral_norm_bound(lattice: BipartiteLattice, J: complex, t: float,
                        inverse: bool = False) -> float:
    """exp(-t Im(J) E_min) with E_min the sum of negative hopping eigenvalues.

    This is the literal minimum-occupation formula; with the inverse flag the
    sign flips, giving the growth direction for Im(J) < 0 (for Im(J) > 0 the
    roles swap).  The Hoelder-chain tests use step_norm_bounds instead.
    """
    eps = np.linalg.eigvalsh(lattice.hopping)
    e_min = float(eps[eps < 0].sum())
    sign = 1.0 if inverse else -1.0
    return math.exp(sign * t * np.imag(J) * e_min)


def step_norm_bounds(lattice: BipartiteLattice, coupling: ComplexCoupling,
                     tau: float) -> tuple[float, float]:
    """Honest many-body operator-norm bounds for one (ket, bra) step.

    Hop factor: exp(tau * max over occupations of Im(J) * E); dephase factor:
    exp(n * |Im w|) covering every sign choice.
    """
    eps = np.linalg.eigvalsh(lattice.hopping)
    e_min = float(eps[eps < 0].sum())
    e_max = float(eps[eps > 0].sum())
    w = interaction_angle(coupling.U, tau)
    deph = math.exp(lattice.n_sites * abs(w.imag))

    def hop_norm(j: complex) -> float:
        return math.exp(tau * max(np.imag(j) * e_min, np.imag(j) * e_max, 0.0))

    return hop_norm(coupling.J) * deph, hop_norm(np.conj(coupling.J)) * deph


def holder_chain_bound(lattice: BipartiteLattice, coupling: ComplexCoupling,
                       t: float, R: int, observable_norm: float = 1.0) -> float:
    """|X(s)| <= ||O|| * prod_r ||ket step||_inf * ||bra step||_inf."""
    ket_step, bra_step = step_norm_bounds(lattice, coupling, t / R)
    return observable_norm * (ket_step * bra_step) ** R


@dataclass(frozen=True)
class ProbeRow:
    t: float
    max_abs: float
    var_re: float
    var_im: float
    bound: float


@dataclass(frozen=True)
class ProbeResult:
    coupling: ComplexCoupling
    torus: TorusPoint
    rows: tuple[ProbeRow, ...]
    slope: float

    def max_abs_over(self) -> float:
        return max(r.max_abs for r in self.rows)


def variance_probe(
    lattice: BipartiteLattice,
    coupling: ComplexCoupling,
    up_initial,
    down_initial,
    t_grid,
    tau: float,
    n_samples: int,
    seed: int = 0,
    log_cap: float = DEFAULT_LOG_CAP,
) -> ProbeResult:
    """Sample |X(s)| statistics on a time grid for one coupling pair.

    X is the raw trajectory estimate of the initial-configuration entry of
    S rho0 S^{-1} (no sublattice gauge; phases do not change magnitudes).
    The slope is the least-squares fit of log max|X| over the upper half of
    the grid, and bound is the Hoelder chain for each t.
    """
    n0 = sorted(int(s) for s in up_initial)
    m0 = sorted(int(s) for s in down_initial)
    ket0 = _selection_state(lattice.n_sites, n0)
    bra0 = _selection_state(lattice.n_sites, m0)
    rows = []
    for t in t_grid:
        R = max(1, round(t / tau)) if t > 0 else 1
        xs = np.empty(n_samples, dtype=complex)
        plan = ChannelPlan(lattice, 0.0, float(t), R)
        for i in range(n_samples):
            signs = sample_signs(plan, trajectory_rng(seed, i)).signs
            ket, bra, logs = similarity_trajectory(
                ket0, bra0, lattice, coupling, float(t), R, signs, log_cap
            )
            xs[i] = pair_amplitude(ket, bra, n0, m0) * math.exp(logs.total)
        rows.append(
            ProbeRow(
                t=float(t),
                max_abs=float(np.abs(xs).max()),
                var_re=float(np.var(xs.real, ddof=1)) if n_samples > 1 else 0.0,
                var_im=float(np.var(xs.imag, ddof=1)) if n_samples > 1 else 0.0,
                bound=holder_chain_bound(lattice, coupling, float(t), R),
            )
        )
    slope = _fit_upper_half_slope([r.t for r in rows], [r.max_abs for r in rows])
    return ProbeResult(coupling, torus_coords(coupling), tuple(rows), slope)


def _selection_state(n_modes: int, occupied) -> SlaterState:
    W = np.zeros((n_modes, len(occupied)), dtype=complex)
    for col, site in enumerate(occupied):
        W[site, col] = 1.0
    return SlaterState(W)


def _fit_upper_half_slope(ts, max_abs) -> float:
    pts = [(t, m) for t, m in zip(ts, max_abs) if m > 0]
    if len(pts) < 2:
        return 0.0
    pts = pts[len(pts) // 2 :] if len(pts) > 3 else pts
    x = np.array([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def negate_hopping_gauge_check(
    lattice: BipartiteLattice, gamma: float, up_initial, down_initial, t: float,
    J: complex = 1.0,
) -> float:
    """Max deviation between |Psi(t, J)| and |Psi(t, -J)| entrywise.

    A sublattice gauge (pi/2 on A, -pi/2 on B) flips the hopping sign while
    preserving every amplitude magnitude; this checks the dense evolutions
    directly.
    """
    dim = 1 << lattice.n_sites
    u0 = config_to_mask(up_initial)
    d0 = config_to_mask(down_initial)
    rho0 = np.zeros((dim, dim), dtype=complex)
    rho0[u0, d0] = 1.0
    mags = []
    for j in (J, -J):
        L = build_lindbladian_superop(lattice, j, gamma)
        mags.append(np.abs(evolve_superop(L, rho0, t)))
    return float(np.abs(mags[0] - mags[1]).max(initial=0.0))

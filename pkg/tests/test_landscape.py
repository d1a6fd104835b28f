"""Complex-coupling diagnostics: torus chart, growth, norm bounds."""

import math

import numpy as np
import pytest

from dephasim import (
    ChannelPlan,
    ComplexCoupling,
    DomainError,
    OverflowGuardError,
    build_lattice,
    coupling_from_torus,
    evolve_trajectory,
    holder_chain_bound,
    init_slater,
    interaction_angle,
    pair_amplitude,
    sample_signs,
    similarity_trajectory,
    spectral_norm_bound,
    step_norm_bounds,
    torus_coords,
    trajectory_rng,
    variance_probe,
)
from dephasim.landscape import negate_hopping_gauge_check

CHAIN2 = build_lattice("chain", length=2)


def test_torus_coordinates_pinned_point():
    pt = torus_coords(1.0, 1j)
    assert abs(pt.arg_j - 0.0) < 1e-12
    assert abs(pt.arg_u - math.pi / 2) < 1e-12
    assert abs(pt.s - 0.36788) < 1e-5  # e^{-|U|/|J|}


def test_torus_round_trip():
    for J, U in ((1.0, 1j), (2.0 - 0.5j, 0.3 + 0.1j), (0.7j, -1.0)):
        pt = torus_coords(J, U)
        back = coupling_from_torus(pt, j_scale=abs(J))
        assert abs(back.J - J) < 1e-12
        assert abs(back.U - U) < 1e-12
    with pytest.raises(DomainError):
        torus_coords(0.0, 1.0)


def test_torus_u_zero_surface():
    pt = torus_coords(1.0, 0.0)
    assert pt.s == 1.0 and pt.arg_u == 0.0


def test_interaction_angle_reduces_to_dephasing():
    # U = i gamma: the similarity angle becomes the real dephasing angle
    gamma, tau = 1.3, 0.05
    w = interaction_angle(1j * gamma, tau)
    assert abs(w - math.sqrt(gamma * tau)) < 1e-14
    assert abs(w.imag) < 1e-15


def test_real_slice_reduces_to_channel_trajectories():
    # J = 1, U = i gamma: per-trajectory agreement with the sampling channel
    gamma, t, R = 1.0, 1.0, 20
    plan = ChannelPlan(CHAIN2, gamma, t, R)
    coupling = ComplexCoupling(1.0, 1j * gamma)
    ket0 = init_slater(2, (0,))
    bra0 = init_slater(2, (1,))
    for k in range(5):
        signs = sample_signs(plan, trajectory_rng(31, k))
        kc, bc = evolve_trajectory(ket0, bra0, plan, signs)
        kl, bl, logs = similarity_trajectory(
            ket0, bra0, CHAIN2, coupling, t, R, signs.signs
        )
        assert logs.total == 0.0
        assert np.max(np.abs(kc.orbitals - kl.orbitals)) < 1e-12
        assert np.max(np.abs(bc.orbitals - bl.orbitals)) < 1e-12


def test_unitary_regime_amplitudes_bounded_by_one():
    grid = np.linspace(0.25, 2.5, 10)
    res = variance_probe(
        CHAIN2, ComplexCoupling(1.0, 1j), (0,), (1,), grid, 0.05, 200, seed=3
    )
    assert res.max_abs_over() <= 1.0 + 1e-12
    assert abs(res.slope) < 0.05  # flat within noise


def test_growth_regime_positive_slope_and_bound_chain():
    grid = np.linspace(0.25, 2.5, 10)
    res = variance_probe(
        CHAIN2, ComplexCoupling(1.0 - 0.1j, 1.0), (0,), (1,), grid, 0.05, 200, seed=3
    )
    assert res.slope > 0.0
    for row in res.rows:
        assert row.max_abs <= row.bound * (1 + 1e-12)


def test_spectral_norm_bound_pinned_values():
    # 2-site chain, eigenvalues +-1, E_min = -1; t Im(J) = -1
    bound = spectral_norm_bound(CHAIN2, 1.0 - 1.0j, 1.0)
    assert abs(bound - math.exp(-1.0)) < 1e-12
    inv = spectral_norm_bound(CHAIN2, 1.0 - 1.0j, 1.0, inverse=True)
    assert abs(inv - math.exp(1.0)) < 1e-12


def test_single_mode_growth_law():
    # one particle on the 2-site chain: |amplitude| grows as e^{t Im(J) eps_min}
    J = 1.0 - 0.25j
    eps_min = -1.0
    single = init_slater(2, (0,))
    ground = np.array([[1.0], [1.0]], dtype=complex) / math.sqrt(2)
    from dephasim import SlaterState, ModeMatrix, apply_mode_matrix
    from dephasim.slater import hopping_step

    for t in (1.0, 2.5):
        m = hopping_step(CHAIN2, J, t)
        out = apply_mode_matrix(SlaterState(ground), m)
        amp = pair_amplitude(out, out, (0,), (0,))
        # ket and bra both grow; the 1/2 is the orbital weight on site 0
        expect = 0.5 * math.exp(2 * t * J.imag * eps_min)
        assert abs(abs(amp) - expect) < 1e-10


def test_step_norm_bounds_cover_trajectories():
    # every similarity trajectory amplitude obeys the per-step Hoelder chain
    coupling = ComplexCoupling(1.0 - 0.2j, 0.8)
    t, R = 1.0, 20
    ket0 = init_slater(2, (0,))
    bra0 = init_slater(2, (1,))
    ket_step, bra_step = step_norm_bounds(CHAIN2, coupling, t / R)
    bound = holder_chain_bound(CHAIN2, coupling, t, R)
    assert abs(bound - (ket_step * bra_step) ** R) < 1e-9 * bound
    rng_plan = ChannelPlan(CHAIN2, 1.0, t, R)
    for k in range(20):
        signs = sample_signs(rng_plan, trajectory_rng(77, k)).signs
        kl, bl, logs = similarity_trajectory(ket0, bra0, CHAIN2, coupling, t, R, signs)
        for config in (((0,), (0,)), ((0,), (1,)), ((1,), (1,))):
            amp = pair_amplitude(kl, bl, *config) * math.exp(logs.total)
            assert abs(amp) <= bound * (1 + 1e-12)


def test_negate_hopping_gauge_check():
    assert negate_hopping_gauge_check(CHAIN2, 1.0, (0,), (1,), 1.0) <= 1e-10
    chain3 = build_lattice("chain", length=3)
    assert negate_hopping_gauge_check(chain3, 0.7, (0, 2), (1,), 0.8) <= 1e-10


def test_overflow_guard_trips_on_extreme_growth():
    # single particle: growth cannot rank-collapse, so the scale log is what
    # gives out first
    coupling = ComplexCoupling(1.0 - 2.0j, 0.0)
    ket0 = init_slater(2, (0,))
    with pytest.raises(OverflowGuardError):
        similarity_trajectory(
            ket0, ket0, CHAIN2, coupling, 400.0, 4000,
            np.ones((4000, 2)), log_cap=500.0,
        )


def test_probe_rows_record_bounds_and_spread():
    grid = np.linspace(0.5, 1.5, 3)
    res = variance_probe(
        CHAIN2, ComplexCoupling(1.0, 1j), (0,), (1,), grid, 0.1, 16, seed=1
    )
    assert len(res.rows) == 3
    for row in res.rows:
        assert row.var_re >= 0.0 and row.var_im >= 0.0
        assert row.bound >= 1.0  # unitary slice: chain bound is exactly 1

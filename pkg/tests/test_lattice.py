"""Bipartite lattice construction and validation."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dephasim import (
    BipartiteLattice,
    BipartitenessError,
    InvalidHoppingError,
    build_lattice,
    validate_bipartite,
)
from dephasim.lattice import SUBLATTICE_A, SUBLATTICE_B


def test_chain_partition_alternates():
    lat = build_lattice("chain", length=5)
    assert lat.partition == ("A", "B", "A", "B", "A")
    assert lat.a_sites() == (0, 2, 4)
    assert lat.b_sites() == (1, 3)


def test_chain_hopping_structure():
    lat = build_lattice("chain", length=4, weight=-1.0)
    h = lat.hopping
    assert h.shape == (4, 4)
    assert np.allclose(h, h.T)
    for i in range(3):
        assert h[i, i + 1] == -1.0
    assert h[0, 3] == 0.0


def test_chain_periodic_even_wraps():
    lat = build_lattice("chain", length=4, periodic=True)
    assert lat.hopping[0, 3] == -1.0


def test_chain_periodic_odd_rejected():
    with pytest.raises(BipartitenessError):
        build_lattice("chain", length=3, periodic=True)


def test_two_site_periodic_does_not_double_edge():
    # periodic on 2 sites would duplicate the single edge; must stay -1
    lat = build_lattice("chain", length=2, periodic=True)
    assert lat.hopping[0, 1] == -1.0


def test_square_checkerboard():
    lat = build_lattice("square", dims=(2, 3))
    # row-major site r*3+c, color (r+c) % 2
    assert lat.partition == ("A", "B", "A", "B", "A", "B")
    assert lat.hopping[0, 1] == -1.0 and lat.hopping[0, 3] == -1.0
    assert lat.hopping[0, 4] == 0.0


def test_square_periodic_odd_side_rejected():
    with pytest.raises(BipartitenessError):
        build_lattice("square", dims=(3, 4), periodic=True)


def test_custom_edges_and_explicit_partition():
    lat = build_lattice(
        "custom",
        edges=[(0, 1, -2.0), (1, 2, 0.5)],
        partition=["A", "B", "A"],
    )
    assert lat.hopping[0, 1] == -2.0
    assert lat.hopping[2, 1] == 0.5


def test_custom_two_coloring_odd_cycle_rejected():
    with pytest.raises(BipartitenessError):
        build_lattice("custom", edges=[(0, 1, -1.0), (1, 2, -1.0), (2, 0, -1.0)])


def test_custom_conflicting_duplicate_edge_rejected():
    with pytest.raises(InvalidHoppingError):
        build_lattice("custom", edges=[(0, 1, -1.0), (1, 0, -2.0)])


def test_custom_disconnected_components_colored_deterministically():
    lat = build_lattice("custom", edges=[(0, 1, -1.0), (2, 3, -1.0)])
    assert lat.partition[0] == SUBLATTICE_A and lat.partition[2] == SUBLATTICE_A
    assert lat.partition[1] == SUBLATTICE_B and lat.partition[3] == SUBLATTICE_B


def test_same_sublattice_coupling_rejected():
    h = np.zeros((3, 3))
    h[0, 2] = h[2, 0] = -1.0  # both on A under alternating partition
    report = validate_bipartite(h, ("A", "B", "A"))
    assert not report.ok
    assert any(v.reason == "same-sublattice coupling" for v in report.violations)
    with pytest.raises(BipartitenessError):
        BipartiteLattice(3, ("A", "B", "A"), h)


def test_validate_catches_asymmetry_and_complex():
    h = np.zeros((2, 2))
    h[0, 1] = -1.0
    report = validate_bipartite(h, ("A", "B"))
    assert any(v.reason == "asymmetric weight" for v in report.violations)
    hc = np.array([[0, 1j], [-1j, 0]])
    report2 = validate_bipartite(hc, ("A", "B"))
    assert any(v.reason == "complex weight" for v in report2.violations)


def test_validate_catches_diagonal():
    h = np.array([[0.5, -1.0], [-1.0, 0.0]])
    report = validate_bipartite(h, ("A", "B"))
    assert any(v.reason == "nonzero diagonal" for v in report.violations)
    assert "nonzero diagonal" in report.describe()


def test_hopping_array_is_read_only():
    lat = build_lattice("chain", length=2)
    with pytest.raises(ValueError):
        lat.hopping[0, 1] = 7.0


@settings(max_examples=30, deadline=None)
@given(length=st.integers(min_value=2, max_value=8))
def test_chain_spectrum_matches_free_fermion_formula(length):
    # open chain with weight -1: eigenvalues -2 cos(pi k / (L+1))
    lat = build_lattice("chain", length=length)
    eps = np.sort(np.linalg.eigvalsh(lat.hopping))
    expect = np.sort([-2.0 * np.cos(np.pi * k / (length + 1)) for k in range(1, length + 1)])
    assert np.allclose(eps, expect, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(
    rows=st.integers(min_value=1, max_value=3),
    cols=st.integers(min_value=2, max_value=3),
)
def test_square_every_edge_crosses_partition(rows, cols):
    lat = build_lattice("square", dims=(rows, cols))
    n = lat.n_sites
    for i in range(n):
        for j in range(n):
            if lat.hopping[i, j] != 0.0:
                assert lat.partition[i] != lat.partition[j]

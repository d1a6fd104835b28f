"""Bipartite lattices and their real symmetric hopping matrices.

The single-particle hopping matrix h is real and symmetric, carries no
on-site terms, and couples only sites from opposite sublattices.  The
kinetic Hamiltonian is sum_ij h_ij c^dag_i c_j, so a chain built with
weight -J realizes the standard -J sum (c^dag_i c_j + h.c.).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import BipartitenessError, InvalidHoppingError

SUBLATTICE_A = "A"
SUBLATTICE_B = "B"

_SYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BipartiteLattice:
    """A site set with a two-coloring and a sublattice-offdiagonal hopping matrix."""

    n_sites: int
    partition: tuple[str, ...]
    hopping: np.ndarray

    def __post_init__(self):
        hop = np.asarray(self.hopping, dtype=float)
        object.__setattr__(self, "hopping", hop)
        object.__setattr__(self, "partition", tuple(self.partition))
        report = validate_bipartite(hop, self.partition)
        if self.n_sites != hop.shape[0] or len(self.partition) != self.n_sites:
            raise InvalidHoppingError(
                f"lattice size mismatch: n_sites={self.n_sites}, "
                f"hopping {hop.shape}, partition length {len(self.partition)}"
            )
        if not report.ok:
            first = report.violations[0]
            raise (
                BipartitenessError(report.describe())
                if first.reason == "same-sublattice coupling"
                else InvalidHoppingError(report.describe())
            )
        hop.setflags(write=False)

    def sublattice_mask(self, label: str) -> np.ndarray:
        return np.array([p == label for p in self.partition], dtype=bool)

    def a_sites(self) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.partition) if p == SUBLATTICE_A)

    def b_sites(self) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.partition) if p == SUBLATTICE_B)


@dataclass(frozen=True)
class Violation:
    i: int
    j: int
    reason: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    def describe(self) -> str:
        if self.ok:
            return "ok"
        items = ", ".join(f"({v.i},{v.j}): {v.reason}" for v in self.violations[:8])
        more = "" if len(self.violations) <= 8 else f" and {len(self.violations) - 8} more"
        return f"invalid hopping support: {items}{more}"


def validate_bipartite(hopping: np.ndarray, partition) -> ValidationReport:
    """Check symmetry, realness, zero diagonal, and A-B-only support of h.

    Returns a report rather than raising, so callers can display every
    offending index pair at once.
    """
    h = np.asarray(hopping)
    violations: list[Violation] = []
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        return ValidationReport(False, (Violation(-1, -1, f"not square: {h.shape}"),))
    n = h.shape[0]
    if len(tuple(partition)) != n:
        return ValidationReport(False, (Violation(-1, -1, "partition length mismatch"),))
    if np.iscomplexobj(h) and np.abs(h.imag).max(initial=0.0) > _SYMMETRY_TOL:
        idx = np.argwhere(np.abs(h.imag) > _SYMMETRY_TOL)
        violations.extend(Violation(int(i), int(j), "complex weight") for i, j in idx[:16])
    hr = h.real if np.iscomplexobj(h) else h
    asym = np.argwhere(np.abs(hr - hr.T) > _SYMMETRY_TOL)
    violations.extend(Violation(int(i), int(j), "asymmetric weight") for i, j in asym[:16])
    diag = np.argwhere(np.abs(np.diag(hr)) > _SYMMETRY_TOL).ravel()
    violations.extend(Violation(int(i), int(i), "nonzero diagonal") for i in diag)
    labels = tuple(partition)
    for i, j in np.argwhere(np.abs(hr) > _SYMMETRY_TOL):
        if i < j and labels[i] == labels[j]:
            violations.append(Violation(int(i), int(j), "same-sublattice coupling"))
    return ValidationReport(not violations, tuple(violations))


def build_lattice(
    kind: str,
    *,
    length: int | None = None,
    dims: tuple[int, int] | None = None,
    weight: float = -1.0,
    periodic: bool = False,
    edges=None,
    partition=None,
) -> BipartiteLattice:
    """Construct a chain, square, or custom bipartite lattice.

    chain: sites 0..length-1, parity partition, nearest-neighbour weight.
    square: dims = (rows, cols), row-major site index r*cols + c, checkerboard
        partition; periodic boundaries are allowed only when both dims are even
        (odd wraps close odd cycles and break bipartiteness).
    custom: edges is a list of (i, j, weight) triples; partition may be given
        explicitly, otherwise a deterministic BFS two-coloring is used (the
        lowest-index site of each connected component goes to sublattice A).
    """
    if kind == "chain":
        if length is None or length < 2:
            raise InvalidHoppingError("chain requires length >= 2")
        hop = np.zeros((length, length))
        for i in range(length - 1):
            hop[i, i + 1] = hop[i + 1, i] = weight
        if periodic:
            if length % 2:
                raise BipartitenessError("periodic chain of odd length is not bipartite")
            hop[0, length - 1] = hop[length - 1, 0] = weight
        part = tuple(SUBLATTICE_A if i % 2 == 0 else SUBLATTICE_B for i in range(length))
        return BipartiteLattice(length, part, hop)

    if kind == "square":
        if dims is None or dims[0] < 1 or dims[1] < 2:
            raise InvalidHoppingError("square requires dims = (rows >= 1, cols >= 2)")
        rows, cols = dims
        if periodic and (rows % 2 or cols % 2):
            raise BipartitenessError("periodic square lattice requires both dims even")
        n = rows * cols
        hop = np.zeros((n, n))

        def site(r, c):
            return r * cols + c

        for r in range(rows):
            for c in range(cols):
                if c + 1 < cols:
                    hop[site(r, c), site(r, c + 1)] = hop[site(r, c + 1), site(r, c)] = weight
                elif periodic and cols > 2:
                    hop[site(r, c), site(r, 0)] = hop[site(r, 0), site(r, c)] = weight
                if r + 1 < rows:
                    hop[site(r, c), site(r + 1, c)] = hop[site(r + 1, c), site(r, c)] = weight
                elif periodic and rows > 2:
                    hop[site(r, c), site(0, c)] = hop[site(0, c), site(r, c)] = weight
        part = tuple(
            SUBLATTICE_A if (r + c) % 2 == 0 else SUBLATTICE_B
            for r in range(rows)
            for c in range(cols)
        )
        return BipartiteLattice(n, part, hop)

    if kind == "custom":
        if edges is None and partition is None:
            raise InvalidHoppingError("custom lattice requires edges and/or partition")
        if partition is not None:
            n = len(partition)
        else:
            n = 1 + max(max(i, j) for i, j, _ in edges)
        hop = np.zeros((n, n))
        for i, j, w in edges or ():
            i, j = int(i), int(j)
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidHoppingError(f"edge ({i},{j}) out of range for {n} sites")
            if i == j:
                raise InvalidHoppingError(f"edge ({i},{i}) puts weight on the diagonal")
            if isinstance(w, complex) and w.imag != 0:
                raise InvalidHoppingError(f"edge ({i},{j}) has complex weight {w}")
            w = float(np.real(w))
            if hop[i, j] != 0.0 and hop[i, j] != w:
                raise InvalidHoppingError(
                    f"edge ({i},{j}) listed twice with conflicting weights"
                )
            hop[i, j] = hop[j, i] = w
        part = tuple(partition) if partition is not None else _two_color(hop)
        return BipartiteLattice(n, part, hop)

    raise InvalidHoppingError(f"unknown lattice kind {kind!r}")


def _two_color(hop: np.ndarray) -> tuple[str, ...]:
    """Deterministic BFS two-coloring; raises on odd cycles."""
    n = hop.shape[0]
    color = [None] * n
    for root in range(n):
        if color[root] is not None:
            continue
        color[root] = SUBLATTICE_A
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in np.nonzero(hop[i])[0]:
                j = int(j)
                if color[j] is None:
                    color[j] = SUBLATTICE_B if color[i] == SUBLATTICE_A else SUBLATTICE_A
                    queue.append(j)
                elif color[j] == color[i]:
                    raise BipartitenessError(
                        f"edge ({i},{j}) closes an odd cycle; graph is not bipartite"
                    )
    return tuple(color)

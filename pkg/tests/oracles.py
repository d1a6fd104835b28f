"""Independent dense references built only from numpy/scipy.

Everything here is constructed from explicit Kronecker chains so that it
shares no code with the package's bit-twiddling Fock builders.  Mode 0 is
the leftmost Kronecker factor, i.e. the most significant bit of a dense
state index.
"""

import numpy as np
import scipy.linalg as sla

I2 = np.eye(2)
PARITY = np.diag([1.0, -1.0])
CDAG = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)


def kron_chain(ops):
    m = ops[0]
    for o in ops[1:]:
        m = np.kron(m, o)
    return m


def creation_ops(n):
    """Jordan-Wigner c^dag_j with the parity string on modes k < j."""
    return [
        kron_chain([CDAG if k == j else (PARITY if k < j else I2) for k in range(n)])
        for j in range(n)
    ]


def dense_index(config, n):
    """Dense index of an occupation set (mode 0 = most significant bit)."""
    return sum(1 << (n - 1 - int(s)) for s in config)


def gaussian_lift(mode_matrix, ops):
    """Fock-space operator implementing a single-particle mode matrix.

    For m = e^g the lift is e^{sum_ij g_ij c^dag_i c_j}; any branch of the
    matrix log works because branch shifts exponentiate to e^{2 pi i n} = 1
    on integer number operators.
    """
    g = sla.logm(np.asarray(mode_matrix, dtype=complex))
    n = len(ops)
    G = sum(g[i, j] * ops[i] @ ops[j].conj().T for i in range(n) for j in range(n))
    return sla.expm(G)


def slater_dense_vector(orbitals, ops):
    """c^dag(w_0) ... c^dag(w_{k-1}) |vac> as a dense 2^n vector."""
    n = len(ops)
    v = np.zeros(1 << n, dtype=complex)
    v[0] = 1.0
    for j in reversed(range(orbitals.shape[1])):
        v = sum(orbitals[i, j] * ops[i] for i in range(n)) @ v
    return v


def spinful_ops(n_sites):
    """2n JW modes, all up modes (0..n-1) before all down modes (n..2n-1)."""
    return creation_ops(2 * n_sites)


def spinful_hubbard_dense(hopping, J, U, mu):
    """sum_ijs J h_ij c^dag_is c_js + U sum n_up n_dn + mu sum n, by krons."""
    n = hopping.shape[0]
    C = spinful_ops(n)
    num = [C[j] @ C[j].conj().T for j in range(2 * n)]
    H = np.zeros((1 << (2 * n), 1 << (2 * n)), dtype=complex)
    for i in range(n):
        for j in range(n):
            if hopping[i, j] != 0.0:
                H += J * hopping[i, j] * (
                    C[i] @ C[j].conj().T + C[n + i] @ C[n + j].conj().T
                )
    for i in range(n):
        H += U * num[i] @ num[n + i] + mu * (num[i] + num[n + i])
    return H


def dephasing_lindblad_dense(hopping, J, gamma):
    """Vectorized (row-major) -i[J H0, .] + gamma dephasing, by krons."""
    n = hopping.shape[0]
    C = creation_ops(n)
    H0 = np.zeros((1 << n, 1 << n), dtype=complex)
    for i in range(n):
        for j in range(n):
            if hopping[i, j] != 0.0:
                H0 += hopping[i, j] * C[i] @ C[j].conj().T
    dim = 1 << n
    eye = np.eye(dim)
    L = -1j * J * (np.kron(H0, eye) - np.kron(eye, H0.T))
    for i in range(n):
        ni = C[i] @ C[i].conj().T
        L += gamma * (
            np.kron(ni, ni.conj())
            - 0.5 * np.kron(ni, eye)
            - 0.5 * np.kron(eye, ni.T)
        )
    return L


def fock_index_map(n):
    """Permutation taking package bitmask indices to dense kron indices."""
    perm = np.zeros(1 << n, dtype=int)
    for mask in range(1 << n):
        config = [s for s in range(n) if mask >> s & 1]
        perm[mask] = dense_index(config, n)
    return perm

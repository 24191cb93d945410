"""Dense exact-diagonalization reference.

Everything here is brute force on purpose: the rest of the toolkit is
checked against these routines, so they stay as close to the textbook
definitions as possible.  Matrix construction walks the canonical term
order and sums Kronecker products; eigenvalues come from numpy's dense
Hermitian solver.
"""

from __future__ import annotations

import numpy as np

from .errors import ContractViolation, ResourceLimitError
from .paulis import PauliSum

DENSE_QUBIT_CAP = 14


def dense_matrix(h: PauliSum, cap: int = DENSE_QUBIT_CAP) -> np.ndarray:
    """Materialize the full 2^n x 2^n matrix of a Pauli sum.

    Raises ResourceLimitError beyond ``cap`` qubits (default 14).
    """
    if h.n > cap:
        raise ResourceLimitError(
            f"dense matrix on {h.n} qubits exceeds the {cap}-qubit cap"
        )
    dim = 1 << h.n
    m = np.zeros((dim, dim), dtype=complex)
    xs, zs, ny, cs = h.term_arrays_full()
    idx = np.arange(dim, dtype=np.uint64)
    for x, z, k, c in zip(xs, zs, ny, cs):
        # P|b> = phase(b) |b ^ x> with phase(b) = (+i)^{|y|} * (-1)^{<z, b>}
        cols = idx
        rows = idx ^ x
        signs = 1.0 - 2.0 * (np.bitwise_count(idx & z) & 1).astype(float)
        m[rows, cols] += c * ((1j) ** int(k)) * signs
    return m


def eigensolve_lowest(h: PauliSum, k: int = 1, cap: int = DENSE_QUBIT_CAP) -> np.ndarray:
    """The k lowest eigenvalues of a Hermitian Pauli sum, ascending."""
    if not h.is_hermitian():
        raise ContractViolation("eigensolve requires a Hermitian operator")
    if k < 1 or k > (1 << h.n):
        raise ContractViolation(f"requested {k} eigenvalues of a {1 << h.n}-dim operator")
    m = dense_matrix(h, cap=cap)
    vals = np.linalg.eigvalsh(m)
    return vals[:k]


def eigensolve_lowest_states(
    h: PauliSum, k: int = 1, cap: int = DENSE_QUBIT_CAP
) -> tuple[np.ndarray, np.ndarray]:
    """Lowest k eigenpairs (values ascending, vectors as columns)."""
    if not h.is_hermitian():
        raise ContractViolation("eigensolve requires a Hermitian operator")
    m = dense_matrix(h, cap=cap)
    vals, vecs = np.linalg.eigh(m)
    return vals[:k], vecs[:, :k]

"""Independent dense-matrix reference implementations for the test suite.

Everything here works from plain data (label strings, coefficient lists,
bit masks) and numpy/scipy only.  Nothing imports the package under test,
so agreement between the two codebases is meaningful evidence rather than
a tautology.

Conventions mirrored deliberately:
  * labels run qubit 0 leftmost,
  * basis index bit q is the state of qubit q (qubit 0 = least significant).
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


def dense_pauli(label: str) -> np.ndarray:
    """Dense matrix of a bare Pauli label, qubit 0 on the low bit."""
    m = np.array([[1.0 + 0.0j]])
    for letter in label:  # qubit 0 first -> it lands on the fast index
        m = np.kron(PAULI_1Q[letter], m)
    return m


def dense_sum(n: int, terms) -> np.ndarray:
    """Dense matrix of sum_k c_k P_k given [(label, coeff), ...]."""
    m = np.zeros((2**n, 2**n), dtype=complex)
    for label, coeff in terms:
        assert len(label) == n
        m += complex(coeff) * dense_pauli(label)
    return m


def label_product(a: str, b: str) -> tuple[str, complex]:
    """Product of two bare Pauli labels via per-qubit 2x2 matrix products.

    Returns (label, phase) with product = phase * dense_pauli(label).
    """
    assert len(a) == len(b)
    letters = []
    phase = 1.0 + 0.0j
    for la, lb in zip(a, b):
        m = PAULI_1Q[la] @ PAULI_1Q[lb]
        for letter, cand in PAULI_1Q.items():
            ratio = np.trace(cand.conj().T @ m) / 2.0
            if abs(ratio) > 0.5:
                letters.append(letter)
                phase *= ratio
                break
        else:  # pragma: no cover - all products are Pauli matrices
            raise AssertionError("2x2 product is not proportional to a Pauli")
    return "".join(letters), phase


def labels_commute(a: str, b: str) -> bool:
    ma, mb = dense_pauli(a), dense_pauli(b)
    return bool(np.allclose(ma @ mb - mb @ ma, 0.0, atol=1e-12))


def eigenvalues(n: int, terms) -> np.ndarray:
    """All eigenvalues of a Hermitian label sum, ascending."""
    m = dense_sum(n, terms)
    assert np.allclose(m, m.conj().T, atol=1e-9)
    return np.linalg.eigvalsh(m)


def lowest_eigenvalues(n: int, terms, k: int) -> np.ndarray:
    return eigenvalues(n, terms)[:k]


def pauli_exponential_matrix(label: str, angle: float) -> np.ndarray:
    """exp(-i * angle / 2 * P) as a dense matrix."""
    return scipy.linalg.expm(-0.5j * angle * dense_pauli(label))


def cnot_matrix(n: int, control: int, target: int) -> np.ndarray:
    """CNOT embedded in n qubits, built from Pauli projectors."""
    zc = "".join("Z" if q == control else "I" for q in range(n))
    xt = "".join("X" if q == target else "I" for q in range(n))
    zcxt, ph = label_product(zc, xt)
    ident = "I" * n
    return dense_sum(
        n,
        [(ident, 0.5), (zc, 0.5), (xt, 0.5), (zcxt, -0.5 * ph)],
    )


def heisenberg_block_matrix(tx: float, ty: float, tz: float) -> np.ndarray:
    """exp(i (tx XX + ty YY + tz ZZ)) on two qubits."""
    gen = dense_sum(2, [("XX", tx), ("YY", ty), ("ZZ", tz)])
    return scipy.linalg.expm(1j * gen)


# --------------------------------------------------------------------------
# GF(2) decomposition over a generating set, with explicit sign tracking
# --------------------------------------------------------------------------


def _label_mask(label: str) -> int:
    """Pack a label into an integer (x bits low, z bits high)."""
    n = len(label)
    x = z = 0
    for q, letter in enumerate(label):
        bx, bz = LETTER_BITS[letter]
        x |= bx << q
        z |= bz << q
    return x | (z << n)


def decompose_over_generators(label: str, generators: list[str]) -> list[int] | None:
    """Exponents e with label = prod g_i^e_i at the bit level, else None."""
    n = len(label)
    rows = [(_label_mask(g), 1 << i) for i, g in enumerate(generators)]
    # Gaussian elimination, tracking which generators were combined.
    basis: dict[int, tuple[int, int]] = {}
    for vec, tag in rows:
        v, t = vec, tag
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = (v, t)
                break
            bv, bt = basis[top]
            v ^= bv
            t ^= bt
    v, t = _label_mask(label), 0
    while v:
        top = v.bit_length() - 1
        if top not in basis:
            return None
        bv, bt = basis[top]
        v ^= bv
        t ^= bt
    return [(t >> i) & 1 for i in range(len(generators))]


def generator_product_sign(label: str, generators: list[str], exponents) -> float:
    """Real sign s with  prod_i g_i^e_i = s * dense_pauli(label).

    The generator product is taken left to right in list order.  Asserts
    the bit-level decomposition really lands on `label` with a +-1 phase.
    """
    n = len(label)
    acc_label, acc_phase = "I" * n, 1.0 + 0.0j
    for g, e in zip(generators, exponents):
        if e:
            acc_label, ph = label_product(acc_label, g)
            acc_phase *= ph
    assert acc_label == label, f"decomposition lands on {acc_label}, wanted {label}"
    assert abs(acc_phase.imag) < 1e-12 and abs(abs(acc_phase.real) - 1.0) < 1e-12
    return float(acc_phase.real)


# --------------------------------------------------------------------------
# brute-force noncontextual ground state (nu enumeration + r grid)
# --------------------------------------------------------------------------


def brute_force_noncontextual_minimum(
    generators: list[str],
    symmetry_terms: list[tuple[str, float]],
    cliques: list[list[tuple[str, float]]],
    representatives: list[str],
    n_phi: int = 40001,
) -> float:
    """Minimum of the classical objective over all nu in {-1,1}^g and unit r.

    Symmetry terms take value sign * prod nu^e; a term t in clique i takes
    sign * prod nu^e * r_i where t = (prod g^e) * C_i at the bit level.
    r runs over the unit circle on a dense grid (M == 2), over {-1, +1}
    (M == 1), or is absent (M == 0).
    """
    g = len(generators)
    assert g <= 16, "brute force capped at 16 generators"
    m_cliques = len(cliques)
    assert m_cliques <= 2, "r grid implemented for at most two cliques"

    def term_data(label, coeff, extra=None):
        target = label if extra is None else None
        if extra is not None:
            # strip the representative off the clique member at the bit level
            mask = _label_mask(label) ^ _label_mask(extra)
            n = len(label)
            letters = []
            for q in range(n):
                bx = (mask >> q) & 1
                bz = (mask >> (n + q)) & 1
                letters.append(
                    {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}[(bx, bz)]
                )
            target = "".join(letters)
        exps = decompose_over_generators(target, generators)
        assert exps is not None, f"{target} outside the generator group"
        sign = generator_product_sign(target, generators, exps)
        if extra is not None:
            # full member = (prod g^e) * C_i; fold the residual product phase
            lbl, ph2 = label_product(target, extra)
            assert lbl == label
            sign *= ph2.real
            assert abs(ph2.imag) < 1e-12
        mask = 0
        for i, e in enumerate(exps):
            mask |= e << i
        return mask, sign * float(coeff)

    sym = [term_data(lbl, c) for lbl, c in symmetry_terms]
    cli = [
        [term_data(lbl, c, extra=representatives[i]) for lbl, c in clique]
        for i, clique in enumerate(cliques)
    ]

    nus = np.arange(2**g, dtype=np.uint64)

    def signed_sums(data):
        total = np.zeros(2**g)
        for mask, val in data:
            par = np.bitwise_count(nus & np.uint64(mask)) & 1
            total += val * np.where(par, -1.0, 1.0)
        return total

    a = signed_sums(sym)
    if m_cliques == 0:
        return float(a.min())
    if m_cliques == 1:
        b = signed_sums(cli[0])
        return float((a - np.abs(b)).min())

    b1, b2 = signed_sums(cli[0]), signed_sums(cli[1])
    phi = np.linspace(0.0, 2.0 * np.pi, n_phi)
    cphi, sphi = np.cos(phi), np.sin(phi)
    best = np.inf
    for idx in range(2**g):
        lo = a[idx] + (b1[idx] * cphi + b2[idx] * sphi).min()
        if lo < best:
            best = lo
    return float(best)

"""Self-contained minimal-basis electronic structure engine.

STO-3G style basis from universal 3-Gaussian expansions of Slater orbitals
(1s/2sp constants reproduce the published tables; 3sp fitted by the same
overlap-maximization procedure).  Integrals via McMurchie-Davidson for s/p
shells, restricted Hartree-Fock with DIIS, frozen-core active spaces, and a
Jordan-Wigner qubit mapping with interleaved spins (alpha = even qubits).

Deliberately independent of the solver package: its own Pauli bookkeeping
and its own exact diagonalization, so generated reference energies can be
cross-checked against that package rather than inherited from it.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import hyp1f1

ANGSTROM_TO_BOHR = 1.0 / 0.529177210903

# --------------------------------------------------------------------------
# basis data
# --------------------------------------------------------------------------

# universal zeta=1 expansions: (exponents, coefficients) per channel
_EXP_1S = (2.227660584, 0.405771156, 0.109818)
_C_1S = (0.154328967, 0.535328142, 0.444634542)

_EXP_2SP = (0.994203460, 0.231031231, 0.0751386)
_C_2S = (-0.099967229, 0.399512826, 0.700115469)
_C_2P = (0.155916275, 0.607683719, 0.391957393)

# 3sp fitted with the same overlap-maximization used for the rows above
_EXP_3SP = (0.48285436, 0.13471513, 0.05272658)
_C_3S = (-0.21962036, 0.22559543, 0.90042331)
_C_3P = (0.01058761, 0.59517223, 0.46201519)

# element -> (Z, [shell descriptors]); zeta values are the standard
# molecular scale factors
ELEMENTS = {
    "H": (1, [("1s", 1.24)]),
    "He": (2, [("1s", 1.69)]),
    "Li": (3, [("1s", 2.69), ("2sp", 0.80)]),
    "Be": (4, [("1s", 3.68), ("2sp", 1.15)]),
    "B": (5, [("1s", 4.68), ("2sp", 1.50)]),
    "C": (6, [("1s", 5.67), ("2sp", 1.72)]),
    "N": (7, [("1s", 6.67), ("2sp", 1.95)]),
    "O": (8, [("1s", 7.66), ("2sp", 2.25)]),
    "F": (9, [("1s", 8.65), ("2sp", 2.55)]),
    "Cl": (17, [("1s", 16.43), ("2sp", 6.26), ("3sp", 2.225)]),
}

_SHELL_TABLE = {
    "1s": ((_EXP_1S, _C_1S), None),
    "2sp": ((_EXP_2SP, _C_2S), (_EXP_2SP, _C_2P)),
    "3sp": ((_EXP_3SP, _C_3S), (_EXP_3SP, _C_3P)),
}


@dataclass
class BasisFunction:
    center: np.ndarray
    powers: tuple[int, int, int]
    exponents: np.ndarray
    coefficients: np.ndarray  # includes primitive norms and contraction norm


def _primitive_norm(alpha: float, powers) -> float:
    i, j, k = powers
    dfact = lambda m: 1.0 if m < 2 else float(np.prod(np.arange(m, 0, -2)))
    num = (2 * alpha / math.pi) ** 0.75 * (4 * alpha) ** ((i + j + k) / 2.0)
    den = math.sqrt(dfact(2 * i - 1) * dfact(2 * j - 1) * dfact(2 * k - 1))
    return num / den


def build_basis(geometry: list[tuple[str, np.ndarray]]):
    """geometry: list of (element, xyz in bohr).  Returns basis + nuclei."""
    basis: list[BasisFunction] = []
    nuclei: list[tuple[float, np.ndarray]] = []
    for element, xyz in geometry:
        z, shells = ELEMENTS[element]
        nuclei.append((float(z), np.asarray(xyz, dtype=float)))
        for name, zeta in shells:
            (s_exp, s_coef), p_part = _SHELL_TABLE[name]
            scaled = np.array(s_exp) * zeta**2
            basis.append(_contracted(xyz, (0, 0, 0), scaled, np.array(s_coef)))
            if p_part is not None:
                p_exp, p_coef = p_part
                scaled_p = np.array(p_exp) * zeta**2
                for powers in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
                    basis.append(_contracted(xyz, powers, scaled_p, np.array(p_coef)))
    return basis, nuclei


def _contracted(center, powers, exponents, coefficients) -> BasisFunction:
    coefs = coefficients * np.array([_primitive_norm(a, powers) for a in exponents])
    bf = BasisFunction(np.asarray(center, dtype=float), tuple(powers), exponents, coefs)
    s = overlap(bf, bf)
    bf.coefficients = coefs / math.sqrt(s)
    return bf


# --------------------------------------------------------------------------
# McMurchie-Davidson integrals (sufficient for s and p shells)
# --------------------------------------------------------------------------


@functools.lru_cache(maxsize=500000)
def _hermite_e(i: int, j: int, t: int, Qx: float, a: float, b: float) -> float:
    p = a + b
    mu = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return math.exp(-mu * Qx * Qx)
    if j == 0:
        return (
            _hermite_e(i - 1, j, t - 1, Qx, a, b) / (2 * p)
            - (mu * Qx / a) * _hermite_e(i - 1, j, t, Qx, a, b)
            + (t + 1) * _hermite_e(i - 1, j, t + 1, Qx, a, b)
        )
    return (
        _hermite_e(i, j - 1, t - 1, Qx, a, b) / (2 * p)
        + (mu * Qx / b) * _hermite_e(i, j - 1, t, Qx, a, b)
        + (t + 1) * _hermite_e(i, j - 1, t + 1, Qx, a, b)
    )


def _overlap_prim(a, pa, apos, b, pb, bpos):
    p = a + b
    out = (math.pi / p) ** 1.5
    for d in range(3):
        out *= _hermite_e(pa[d], pb[d], 0, apos[d] - bpos[d], a, b)
    return out


def overlap(f1: BasisFunction, f2: BasisFunction) -> float:
    s = 0.0
    for a, ca in zip(f1.exponents, f1.coefficients):
        for b, cb in zip(f2.exponents, f2.coefficients):
            s += ca * cb * _overlap_prim(a, f1.powers, f1.center, b, f2.powers, f2.center)
    return s


def _kinetic_prim(a, pa, apos, b, pb, bpos):
    # T = sum over directions of 1D kinetic x other-direction overlaps
    def s1d(i, j, d):
        return _hermite_e(i, j, 0, apos[d] - bpos[d], a, b)

    p = a + b
    pref = (math.pi / p) ** 1.5
    total = 0.0
    for d in range(3):
        i, j = pa[d], pb[d]
        k1d = b * (2 * j + 1) * s1d(i, j, d) - 2 * b * b * s1d(i, j + 2, d)
        if j >= 2:
            k1d -= 0.5 * j * (j - 1) * s1d(i, j - 2, d)
        rest = 1.0
        for e in range(3):
            if e != d:
                rest *= s1d(pa[e], pb[e], e)
        total += k1d * rest
    return pref * total


def kinetic(f1: BasisFunction, f2: BasisFunction) -> float:
    s = 0.0
    for a, ca in zip(f1.exponents, f1.coefficients):
        for b, cb in zip(f2.exponents, f2.coefficients):
            s += ca * cb * _kinetic_prim(a, f1.powers, f1.center, b, f2.powers, f2.center)
    return s


def _boys(n_max: int, x: float) -> np.ndarray:
    ns = np.arange(n_max + 1)
    return hyp1f1(ns + 0.5, ns + 1.5, -x) / (2 * ns + 1)


def _hermite_coulomb_table(p: float, PC, boys_table):
    """Memoized R_{t,u,v} evaluator for one Gaussian product center."""
    memo: dict[tuple[int, int, int, int], float] = {}

    def rec(t, u, v, n):
        if t < 0 or u < 0 or v < 0:
            return 0.0
        key = (t, u, v, n)
        got = memo.get(key)
        if got is not None:
            return got
        if t == u == v == 0:
            val = (-2.0 * p) ** n * boys_table[n]
        elif t > 0:
            val = (t - 1) * rec(t - 2, u, v, n + 1) + PC[0] * rec(t - 1, u, v, n + 1)
        elif u > 0:
            val = (u - 1) * rec(t, u - 2, v, n + 1) + PC[1] * rec(t, u - 1, v, n + 1)
        else:
            val = (v - 1) * rec(t, u, v - 2, n + 1) + PC[2] * rec(t, u, v - 1, n + 1)
        memo[key] = val
        return val

    return rec


def nuclear(f1: BasisFunction, f2: BasisFunction, nuclei) -> float:
    total = 0.0
    for a, ca in zip(f1.exponents, f1.coefficients):
        for b, cb in zip(f2.exponents, f2.coefficients):
            p = a + b
            P = (a * f1.center + b * f2.center) / p
            pref = 2.0 * math.pi / p * ca * cb
            ex = [
                [
                    _hermite_e(f1.powers[d], f2.powers[d], t, f1.center[d] - f2.center[d], a, b)
                    for t in range(f1.powers[d] + f2.powers[d] + 1)
                ]
                for d in range(3)
            ]
            lmax = sum(f1.powers) + sum(f2.powers)
            for zq, cpos in nuclei:
                PC = P - cpos
                boys_table = _boys(lmax, p * float(PC @ PC))
                r_tuv = _hermite_coulomb_table(p, PC, boys_table)
                acc = 0.0
                for t in range(len(ex[0])):
                    for u in range(len(ex[1])):
                        for v in range(len(ex[2])):
                            acc += ex[0][t] * ex[1][u] * ex[2][v] * r_tuv(t, u, v, 0)
                total -= zq * pref * acc
    return total


def eri(f1, f2, f3, f4) -> float:
    """(f1 f2 | f3 f4) in chemists' notation."""
    total = 0.0
    l12 = sum(f1.powers) + sum(f2.powers)
    l34 = sum(f3.powers) + sum(f4.powers)
    for a, ca in zip(f1.exponents, f1.coefficients):
        for b, cb in zip(f2.exponents, f2.coefficients):
            p = a + b
            P = (a * f1.center + b * f2.center) / p
            e12 = [
                [
                    _hermite_e(f1.powers[d], f2.powers[d], t, f1.center[d] - f2.center[d], a, b)
                    for t in range(f1.powers[d] + f2.powers[d] + 1)
                ]
                for d in range(3)
            ]
            for c, cc in zip(f3.exponents, f3.coefficients):
                for dd, cd in zip(f4.exponents, f4.coefficients):
                    q = c + dd
                    Q = (c * f3.center + dd * f4.center) / q
                    alpha = p * q / (p + q)
                    PQ = P - Q
                    e34 = [
                        [
                            _hermite_e(
                                f3.powers[d], f4.powers[d], t, f3.center[d] - f4.center[d], c, dd
                            )
                            for t in range(f3.powers[d] + f4.powers[d] + 1)
                        ]
                        for d in range(3)
                    ]
                    boys_table = _boys(l12 + l34, alpha * float(PQ @ PQ))
                    r_tuv = _hermite_coulomb_table(alpha, PQ, boys_table)
                    pref = (
                        2.0
                        * math.pi**2.5
                        / (p * q * math.sqrt(p + q))
                        * ca
                        * cb
                        * cc
                        * cd
                    )
                    acc = 0.0
                    for t in range(len(e12[0])):
                        for u in range(len(e12[1])):
                            for v in range(len(e12[2])):
                                w1 = e12[0][t] * e12[1][u] * e12[2][v]
                                if w1 == 0.0:
                                    continue
                                for tt in range(len(e34[0])):
                                    for uu in range(len(e34[1])):
                                        for vv in range(len(e34[2])):
                                            w2 = e34[0][tt] * e34[1][uu] * e34[2][vv]
                                            if w2 == 0.0:
                                                continue
                                            acc += (
                                                w1
                                                * w2
                                                * (-1.0) ** (tt + uu + vv)
                                                * r_tuv(t + tt, u + uu, v + vv, 0)
                                            )
                    total += pref * acc
    return total


# --------------------------------------------------------------------------
# restricted Hartree-Fock
# --------------------------------------------------------------------------


@dataclass
class SCFResult:
    energy: float
    mo_energies: np.ndarray
    mo_coefficients: np.ndarray
    h_core: np.ndarray
    eri_ao: np.ndarray
    nuclear_repulsion: float
    n_electrons: int


def integral_tables(basis, nuclei):
    n = len(basis)
    S = np.zeros((n, n))
    T = np.zeros((n, n))
    V = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            S[i, j] = S[j, i] = overlap(basis[i], basis[j])
            T[i, j] = T[j, i] = kinetic(basis[i], basis[j])
            V[i, j] = V[j, i] = nuclear(basis[i], basis[j], nuclei)
    g = np.zeros((n, n, n, n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1)]
    for a, (i, j) in enumerate(pairs):
        for k, l in pairs[: a + 1]:
            val = eri(basis[i], basis[j], basis[k], basis[l])
            for (p, q), (r, s) in (((i, j), (k, l)), ((k, l), (i, j))):
                g[p, q, r, s] = g[q, p, r, s] = g[p, q, s, r] = g[q, p, s, r] = val
    return S, T, V, g


def nuclear_repulsion(nuclei) -> float:
    e = 0.0
    for i in range(len(nuclei)):
        for j in range(i):
            zi, ri = nuclei[i]
            zj, rj = nuclei[j]
            e += zi * zj / float(np.linalg.norm(ri - rj))
    return e


def run_rhf(basis, nuclei, n_electrons, max_iter=200, tol=1e-11) -> SCFResult:
    if n_electrons % 2:
        raise ValueError("restricted HF needs an even electron count")
    S, T, V, g = integral_tables(basis, nuclei)
    h = T + V
    e_nuc = nuclear_repulsion(nuclei)
    evals, evecs = np.linalg.eigh(S)
    X = evecs @ np.diag(evals**-0.5) @ evecs.T
    nocc = n_electrons // 2

    D = np.zeros_like(S)
    fock_hist: list[np.ndarray] = []
    err_hist: list[np.ndarray] = []
    e_old = 0.0
    mo_e = None
    C = None
    for it in range(max_iter):
        J = np.einsum("pqrs,rs->pq", g, D)
        K = np.einsum("prqs,rs->pq", g, D)
        F = h + 2.0 * J - K
        # DIIS
        err = F @ D @ S - S @ D @ F
        fock_hist.append(F)
        err_hist.append(err)
        if len(fock_hist) > 8:
            fock_hist.pop(0)
            err_hist.pop(0)
        if len(fock_hist) > 1:
            m = len(fock_hist)
            B = -np.ones((m + 1, m + 1))
            B[m, m] = 0.0
            for i in range(m):
                for j in range(m):
                    B[i, j] = np.sum(err_hist[i] * err_hist[j])
            rhs = np.zeros(m + 1)
            rhs[m] = -1.0
            try:
                w = np.linalg.solve(B, rhs)[:m]
                F = sum(wi * fi for wi, fi in zip(w, fock_hist))
            except np.linalg.LinAlgError:
                pass
        Fp = X.T @ F @ X
        mo_e, Cp = np.linalg.eigh(Fp)
        C = X @ Cp
        D = C[:, :nocc] @ C[:, :nocc].T
        e_elec = float(np.sum(D * (h + h + 2.0 * J - K)))
        # recompute with the un-DIIS F for the energy expression
        J = np.einsum("pqrs,rs->pq", g, D)
        K = np.einsum("prqs,rs->pq", g, D)
        e_elec = float(np.sum(D * (2.0 * h + 2.0 * J - K)))
        if abs(e_elec - e_old) < tol and it > 1:
            e_old = e_elec
            break
        e_old = e_elec
    return SCFResult(
        energy=e_old + e_nuc,
        mo_energies=mo_e,
        mo_coefficients=C,
        h_core=h,
        eri_ao=g,
        nuclear_repulsion=e_nuc,
        n_electrons=n_electrons,
    )


# --------------------------------------------------------------------------
# active-space second quantization + Jordan-Wigner
# --------------------------------------------------------------------------


def mo_integrals(scf: SCFResult):
    C = scf.mo_coefficients
    h_mo = C.T @ scf.h_core @ C
    g_mo = np.einsum("pqrs,pa,qb,rc,sd->abcd", scf.eri_ao, C, C, C, C, optimize=True)
    return h_mo, g_mo


def active_space(h_mo, g_mo, e_nuc, n_electrons, frozen: list[int], active: list[int]):
    """Effective (h, g, constant, n_active_electrons) for the chosen window."""
    e_core = e_nuc
    for c in frozen:
        e_core += 2.0 * h_mo[c, c]
        for d in frozen:
            e_core += 2.0 * g_mo[c, c, d, d] - g_mo[c, d, d, c]
    na = len(active)
    h_eff = np.zeros((na, na))
    for ip, p in enumerate(active):
        for iq, q in enumerate(active):
            val = h_mo[p, q]
            for c in frozen:
                val += 2.0 * g_mo[p, q, c, c] - g_mo[p, c, c, q]
            h_eff[ip, iq] = val
    g_act = g_mo[np.ix_(active, active, active, active)]
    n_act_elec = n_electrons - 2 * len(frozen)
    if n_act_elec < 0:
        raise ValueError("more frozen orbitals than electron pairs")
    return h_eff, g_act, e_core, n_act_elec


# -- independent Pauli bookkeeping (labels as tuples of letters) -----------

_MULT = {
    ("I", "I"): (1.0, "I"), ("I", "X"): (1.0, "X"), ("I", "Y"): (1.0, "Y"), ("I", "Z"): (1.0, "Z"),
    ("X", "I"): (1.0, "X"), ("X", "X"): (1.0, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1.0, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1.0, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1.0, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1.0, "I"),
}


def _term_mul(t1, t2):
    c1, l1 = t1
    c2, l2 = t2
    coeff = c1 * c2
    letters = []
    for a, b in zip(l1, l2):
        ph, c = _MULT[(a, b)]
        coeff *= ph
        letters.append(c)
    return coeff, "".join(letters)


def _ladder(p: int, dagger: bool, n: int):
    """Jordan-Wigner image of a_p or a_p^dagger as a list of (coeff, label)."""
    zs = "Z" * p
    rest = "I" * (n - p - 1)
    sign = -0.5j if dagger else 0.5j
    return [(0.5, zs + "X" + rest), (sign, zs + "Y" + rest)]


def _op_product(ops, n):
    """Product of ladder operators given as (index, dagger) pairs."""
    terms = {("I" * n): 1.0}
    for p, dg in ops:
        new = {}
        for lbl, c in terms.items():
            for c2, lbl2 in _ladder(p, dg, n):
                coeff, lab = _term_mul((c, lbl), (c2, lbl2))
                new[lab] = new.get(lab, 0.0) + coeff
        terms = {k: v for k, v in new.items() if abs(v) > 1e-14}
    return terms


def qubit_hamiltonian(h_eff, g_act, constant, prune=1e-10):
    """Interleaved-spin Jordan-Wigner mapping; returns {label: real coeff}."""
    na = h_eff.shape[0]
    n = 2 * na
    acc: dict[str, complex] = {"I" * n: complex(constant)}

    def add(ops, scale):
        if abs(scale) < 1e-14:
            return
        for lbl, c in _op_product(ops, n).items():
            acc[lbl] = acc.get(lbl, 0.0) + scale * c

    for p in range(na):
        for q in range(na):
            for s in (0, 1):
                add([(2 * p + s, True), (2 * q + s, False)], h_eff[p, q])
    for p in range(na):
        for q in range(na):
            for r in range(na):
                for s in range(na):
                    gval = g_act[p, q, r, s]
                    if abs(gval) < 1e-14:
                        continue
                    for s1 in (0, 1):
                        for s2 in (0, 1):
                            add(
                                [
                                    (2 * p + s1, True),
                                    (2 * r + s2, True),
                                    (2 * s + s2, False),
                                    (2 * q + s1, False),
                                ],
                                0.5 * gval,
                            )
    out = {}
    for lbl, c in acc.items():
        if abs(c.imag) > 1e-9:
            raise RuntimeError(f"non-Hermitian JW output at {lbl}: {c}")
        if abs(c.real) > prune:
            out[lbl] = float(c.real)
    return out


# -- dense reference (independent of the main package) ---------------------

_P1 = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1.0, -1.0]).astype(complex),
}


def dense_from_terms(terms: dict[str, float]) -> np.ndarray:
    n = len(next(iter(terms)))
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=complex)
    for lbl, c in terms.items():
        m = np.array([[1.0 + 0j]])
        for ch in lbl:  # qubit 0 leftmost -> least significant: kron new factor on the left
            m = np.kron(_P1[ch], m)
        out += c * m
    return out


def lowest_eigenvalues(terms, k=6):
    m = dense_from_terms(terms)
    vals = np.linalg.eigvalsh(m)
    return vals[:k]


def _sector_block(terms, keep):
    """Particle-number block of the Hamiltonian, built without the full matrix.

    Each Pauli string maps a basis state to one basis state with a phase
    (X flips, Y flips with i*(-1)^bit, Z signs), so the block assembles in
    O(terms * dim) and never touches the 2^n space. Matrix elements leading
    out of the sector belong to other blocks of a number-conserving
    Hamiltonian and are dropped.
    """
    pos = {int(s): i for i, s in enumerate(keep)}
    m = np.zeros((len(keep), len(keep)), dtype=complex)
    for lbl, c in terms.items():
        xmask = zmask = 0
        n_y = 0
        for q, ch in enumerate(lbl):
            bit = 1 << q
            if ch == "X":
                xmask |= bit
            elif ch == "Y":
                xmask |= bit
                zmask |= bit
                n_y += 1
            elif ch == "Z":
                zmask |= bit
        phase = 1j**n_y
        for col, s in enumerate(keep):
            row = pos.get(int(s) ^ xmask)
            if row is None:
                continue
            sign = -1.0 if (int(s) & zmask).bit_count() % 2 else 1.0
            m[row, col] += c * phase * sign
    return m


_DENSE_SECTOR_CAP = 14


def sector_eigenvalues(terms, n_electrons, k=6):
    """Lowest k eigenvalues restricted to basis states with n_electrons set bits.

    Qubit q maps to bit q of the basis index (qubit 0 least significant).
    Up to 14 qubits the block is cut out of the dense matrix; above that it
    is assembled directly in the sector basis (exactly the same entries).
    """
    n = len(next(iter(terms)))
    idx = np.arange(1 << n)
    keep = np.flatnonzero(np.bitwise_count(idx) == n_electrons)
    if n <= _DENSE_SECTOR_CAP:
        m = dense_from_terms(terms)[np.ix_(keep, keep)]
    else:
        m = _sector_block(terms, keep)
    vals = np.linalg.eigvalsh(m)
    return vals[:k]


# --------------------------------------------------------------------------
# convenience drivers
# --------------------------------------------------------------------------


def diatomic(el1: str, el2: str, r_angstrom: float):
    r = r_angstrom * ANGSTROM_TO_BOHR
    return [
        (el1, np.array([0.0, 0.0, 0.0])),
        (el2, np.array([0.0, 0.0, r])),
    ]


def molecule_to_qubits(
    geometry, charge=0, frozen=None, active=None, prune=1e-10
):
    zs = sum(ELEMENTS[el][0] for el, _ in geometry)
    n_electrons = int(zs - charge)
    basis, nuclei = build_basis(geometry)
    scf = run_rhf(basis, nuclei, n_electrons)
    h_mo, g_mo = mo_integrals(scf)
    n_orb = h_mo.shape[0]
    frozen = list(frozen or [])
    if active is None:
        active = [i for i in range(n_orb) if i not in frozen]
    h_eff, g_act, e_core, n_act_elec = active_space(
        h_mo, g_mo, scf.nuclear_repulsion, n_electrons, frozen, list(active)
    )
    terms = qubit_hamiltonian(h_eff, g_act, e_core, prune=prune)
    return {
        "scf": scf,
        "terms": terms,
        "n_qubits": 2 * len(active),
        "n_act_elec": n_act_elec,
        "active": list(active),
        "frozen": frozen,
    }

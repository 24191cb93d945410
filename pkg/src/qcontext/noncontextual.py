"""Noncontextual/contextual splitting of Pauli-sum Hamiltonians.

A term set is noncontextual when, after removing the terms that commute with
every other term (the symmetry part), the commutation relation on what is
left is transitive.  The remainder then falls apart into cliques: commuting
within a clique, anticommuting across cliques.

Such a Hamiltonian carries a classical objective

    eta(nu, r) = sum_B h_B eps_B(nu) + sum_i [ sum_P h_P eps_P(nu) ] r_i

where nu assigns +-1 to an independent generating set of the symmetry group,
eps are the induced values of composite products, and r is a unit vector over
cliques.  Minimizing eta over (nu, r) yields the noncontextual ground energy;
for fixed nu the optimal r is -b/|b| in closed form, so only nu needs search.

Optionally the assignment of diagonal generators can be locked to a reference
occupation (the mean-field determinant).  Without the lock, the minimum over
nu may drift into a different particle-number sector than the chemistry of
interest; charged species are particularly prone to this because attaching an
electron can lower the classical energy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, DimensionError
from .paulis import PauliString, PauliSum, _term_sort_key, multiply

_ANNEAL_CUTOFF = 20  # exhaustive nu enumeration up to this many free generators


def _canon_key(op: PauliString):
    return _term_sort_key(op.n)((op.x, op.z))


# --------------------------------------------------------------------------
# structure detection
# --------------------------------------------------------------------------


def _commutation_rows(ops: list[PauliString]) -> list[int]:
    """Bitmask per element: bit j set when ops[i] commutes with ops[j].

    Self-bits are always set.
    """
    k = len(ops)
    rows = [0] * k
    for i in range(k):
        r = 1 << i
        oi = ops[i]
        for j in range(i):
            if oi.commutes(ops[j]):
                r |= 1 << j
                rows[j] |= 1 << i
        rows[i] |= r
    return rows


def _structure_from_rows(rows: list[int]):
    """Return (symmetry mask, [clique member masks]) or None if contextual."""
    k = len(rows)
    full = (1 << k) - 1
    zmask = 0
    for i in range(k):
        if rows[i] == full:
            zmask |= 1 << i
    groups: dict[int, int] = {}
    for i in range(k):
        if zmask >> i & 1:
            continue
        groups.setdefault(rows[i] & ~zmask, 0)
        groups[rows[i] & ~zmask] |= 1 << i
    for key, members in groups.items():
        if key != members:
            return None
    cliques = sorted(groups.values(), key=lambda m: (m & -m).bit_length())
    return zmask, cliques


def is_noncontextual(terms) -> bool:
    """Transitivity test for the commutation relation on the non-symmetry part."""
    ops = list(terms)
    if not ops:
        return True
    n = ops[0].n
    for op in ops:
        if op.n != n:
            raise DimensionError(f"mixed qubit counts: {op.n} != {n}")
    return _structure_from_rows(_commutation_rows(ops)) is not None


# --------------------------------------------------------------------------
# partition container
# --------------------------------------------------------------------------


@dataclass
class NoncontextualPartition:
    """Split of a Hamiltonian into a noncontextual part plus remainder.

    ``generators`` is an independent, mutually commuting, phase-(+1) set
    generating the symmetry group of the noncontextual terms together with
    the clique-composite products.  ``symmetry_images`` holds one
    (coefficient, generator bitmask, sign) triple per symmetry term, and
    ``clique_images[i]`` the analogous triples for clique i after factoring
    out its representative.
    """

    n_qubits: int
    symmetry_terms: list[PauliString]
    cliques: list[list[PauliString]]
    representatives: list[PauliString]
    noncontextual: PauliSum
    contextual: PauliSum
    generators: list[PauliString]
    symmetry_images: list[tuple[float, int, float]]
    clique_images: list[list[tuple[float, int, float]]]

    @property
    def n_cliques(self) -> int:
        return len(self.cliques)


@dataclass
class NoncontextualState:
    """Classical minimizer: generator assignments nu and clique vector r."""

    nu: np.ndarray
    r: np.ndarray

    def __post_init__(self):
        self.nu = np.asarray(self.nu, dtype=float)
        self.r = np.asarray(self.r, dtype=float)
        if self.nu.size and not np.all(np.abs(self.nu) == 1.0):
            raise ContractViolation("nu entries must be +-1")
        if self.r.size and abs(np.linalg.norm(self.r) - 1.0) > 1e-10:
            raise ContractViolation("r must be a unit vector")


# --------------------------------------------------------------------------
# generator extraction (binary Gaussian elimination carrying exact phases)
# --------------------------------------------------------------------------


class _GeneratorBasis:
    """Row-reduced binary basis whose rows remember their generator combos.

    Generator operators are fixed once appended; reduction happens on plain
    bit vectors, and the exact sign of a decomposition is recovered at the
    end by actually multiplying the Pauli strings.
    """

    def __init__(self, n: int):
        self.n = n
        self.gens: list[PauliString] = []
        self._rows: list[tuple[int, int]] = []  # (bit vector, generator combo)
        self._pivots: list[int] = []

    def _reduce_vector(self, v: int) -> tuple[int, int]:
        combo = 0
        for (row, c), piv in zip(self._rows, self._pivots):
            if v >> piv & 1:
                v ^= row
                combo ^= c
        return v, combo

    def reduce(self, p: PauliString) -> tuple[int, float]:
        """Express p over the basis, extending it when independent.

        Returns (bitmask over generators, sign) with p = sign * product.
        """
        v = p.x | (p.z << self.n)
        residual, bits = self._reduce_vector(v)
        if residual:
            prod = p
            for j in range(len(self.gens)):
                if bits >> j & 1:
                    prod = multiply(prod, self.gens[j])
            idx = len(self.gens)
            self.gens.append(prod.bare())
            piv = (residual & -residual).bit_length() - 1
            # keep earlier rows clear of the new pivot
            for i, (row, c) in enumerate(self._rows):
                if row >> piv & 1:
                    self._rows[i] = (row ^ residual, c ^ (1 << idx))
            self._rows.append((residual, 1 << idx))
            self._pivots.append(piv)
            bits |= 1 << idx
        check = p
        for j in range(len(self.gens)):
            if bits >> j & 1:
                check = multiply(check, self.gens[j])
        if check.x or check.z:
            raise ContractViolation("generator decomposition failed to close")
        sign = check.phase
        if abs(sign.imag) > 1e-12 or abs(abs(sign.real) - 1.0) > 1e-12:
            raise ContractViolation(f"non-real decomposition sign {sign}")
        return bits, float(sign.real)


# --------------------------------------------------------------------------
# partitioning strategies
# --------------------------------------------------------------------------


def _greedy_magnitude_order(entries):
    diagonal = [e for e in entries if e[0].x == 0]
    rest = [e for e in entries if e[0].x != 0]
    rest.sort(key=lambda e: (-abs(e[1]), _canon_key(e[0])))
    return diagonal, rest


def partition(h: PauliSum, strategy: str = "greedy_magnitude") -> NoncontextualPartition:
    """Split h into noncontextual + contextual term sets.

    ``greedy_magnitude`` seeds with every diagonal term (diagonal sets are
    always noncontextual) and then admits remaining terms in descending
    coefficient magnitude whenever the set stays noncontextual.
    ``diagonal`` stops after the seed.
    """
    if strategy not in ("greedy_magnitude", "diagonal"):
        raise ContractViolation(f"unknown partition strategy: {strategy!r}")
    if not h.is_hermitian():
        raise ContractViolation("partition requires a Hermitian input")

    entries = [(op, coeff.real) for op, coeff in h.terms()]
    seed, candidates = _greedy_magnitude_order(entries)
    if strategy == "diagonal":
        candidates = []

    accepted: list[tuple[PauliString, float]] = list(seed)
    rows = _commutation_rows([op for op, _ in accepted])
    rejected: list[tuple[PauliString, float]] = []
    for op, coeff in candidates:
        k = len(accepted)
        new_row = 1 << k
        touched = []
        for j, (other, _) in enumerate(accepted):
            if op.commutes(other):
                new_row |= 1 << j
                touched.append(j)
        for j in touched:
            rows[j] |= 1 << k
        rows.append(new_row)
        if _structure_from_rows(rows) is None:
            rows.pop()
            for j in touched:
                rows[j] &= ~(1 << k)
            rejected.append((op, coeff))
        else:
            accepted.append((op, coeff))

    # canonical order for everything downstream
    accepted.sort(key=lambda e: _canon_key(e[0]))
    ops = [op for op, _ in accepted]
    struct = _structure_from_rows(_commutation_rows(ops))
    assert struct is not None
    zmask, clique_masks = struct

    by_op = {(op.x, op.z): coeff for op, coeff in accepted}
    symmetry_terms = [ops[i] for i in range(len(ops)) if zmask >> i & 1]
    cliques = [
        [ops[i] for i in range(len(ops)) if members >> i & 1]
        for members in clique_masks
    ]
    representatives = [
        max(cl, key=lambda t: (abs(by_op[(t.x, t.z)]), _canon_key(t)))
        for cl in cliques
    ]

    basis = _GeneratorBasis(h.n)
    symmetry_images = []
    for t in symmetry_terms:
        bits, sign = basis.reduce(t)
        symmetry_images.append((by_op[(t.x, t.z)], bits, sign))
    clique_images: list[list[tuple[float, int, float]]] = []
    for rep, cl in zip(representatives, cliques):
        images = []
        for t in cl:
            bits, sign = basis.reduce(multiply(t, rep))
            images.append((by_op[(t.x, t.z)], bits, sign))
        clique_images.append(images)

    nc = PauliSum.from_terms(h.n, [(op, coeff) for op, coeff in accepted])
    c = PauliSum.from_terms(h.n, rejected)
    return NoncontextualPartition(
        n_qubits=h.n,
        symmetry_terms=symmetry_terms,
        cliques=cliques,
        representatives=representatives,
        noncontextual=nc,
        contextual=c,
        generators=basis.gens,
        symmetry_images=symmetry_images,
        clique_images=clique_images,
    )


# --------------------------------------------------------------------------
# classical objective
# --------------------------------------------------------------------------


def _image_arrays(images, n_gen):
    coeffs = np.array([c for c, _, _ in images], dtype=float)
    signs = np.array([s for _, _, s in images], dtype=float)
    bits = np.zeros((len(images), n_gen), dtype=np.uint8)
    for row, (_, b, _) in enumerate(images):
        for j in range(n_gen):
            bits[row, j] = b >> j & 1
    return coeffs * signs, bits


def eta(p: NoncontextualPartition, nu, r) -> float:
    """Evaluate the classical objective at a concrete assignment."""
    nu = np.asarray(nu, dtype=float)
    r = np.asarray(r, dtype=float)
    x = (1.0 - nu) / 2.0
    total = 0.0
    for coeff, bits, sign in p.symmetry_images:
        par = sum(x[j] for j in range(len(nu)) if bits >> j & 1) % 2
        total += coeff * sign * (1.0 - 2.0 * par)
    for i, images in enumerate(p.clique_images):
        b = 0.0
        for coeff, bits, sign in images:
            par = sum(x[j] for j in range(len(nu)) if bits >> j & 1) % 2
            b += coeff * sign * (1.0 - 2.0 * par)
        total += b * r[i]
    return float(total)


def _objective_tables(p: NoncontextualPartition):
    g = len(p.generators)
    a_vals, a_bits = _image_arrays(p.symmetry_images, g)
    clique_tables = [_image_arrays(images, g) for images in p.clique_images]
    return a_vals, a_bits, clique_tables


def _eta_min_for_x(x_rows: np.ndarray, tables):
    """Closed-form eta minimum (over r) for each 0/1 generator row."""
    a_vals, a_bits, clique_tables = tables
    par = (x_rows @ a_bits.T) % 2
    a = (a_vals * (1.0 - 2.0 * par)).sum(axis=1)
    if clique_tables:
        b2 = np.zeros(len(x_rows))
        for vals, bits in clique_tables:
            par = (x_rows @ bits.T) % 2
            b = (vals * (1.0 - 2.0 * par)).sum(axis=1)
            b2 += b * b
        return a - np.sqrt(b2)
    return a


def _clique_vector(p, tables, x_row):
    _, _, clique_tables = tables
    b = np.empty(len(clique_tables))
    for i, (vals, bits) in enumerate(clique_tables):
        par = (x_row @ bits.T) % 2
        b[i] = (vals * (1.0 - 2.0 * par)).sum()
    norm = np.linalg.norm(b)
    if norm < 1e-15:
        r = np.zeros(len(clique_tables))
        if len(r):
            r[0] = 1.0
        return r
    return -b / norm


def reference_sector(p: NoncontextualPartition, occupation) -> dict[int, float]:
    """Assignments of the diagonal generators on an occupation bitstring.

    ``occupation`` is either an integer bitmask or a qubit-0-leftmost string
    of 0/1 characters.  Non-diagonal generators are left free.
    """
    if isinstance(occupation, str):
        occ = 0
        for q, ch in enumerate(occupation):
            if ch == "1":
                occ |= 1 << q
    else:
        occ = int(occupation)
    fixed = {}
    for j, gen in enumerate(p.generators):
        if gen.x == 0:
            fixed[j] = -1.0 if (gen.z & occ).bit_count() % 2 else 1.0
    return fixed


def solve_noncontextual(
    p: NoncontextualPartition,
    reference=None,
    seed: int = 0,
    anneal_steps: int = 4000,
    anneal_restarts: int = 8,
) -> tuple[float, NoncontextualState]:
    """Minimize eta(nu, r); r is eliminated in closed form per nu.

    With ``reference`` set (occupation bitmask or string) the diagonal
    generators are pinned to their eigenvalues on that determinant and only
    the remaining assignments are searched.  Free generator counts up to 20
    are enumerated exhaustively, larger ones fall back to seeded annealing.
    Ties between equal minima resolve to the lexicographically smallest nu.
    """
    g = len(p.generators)
    tables = _objective_tables(p)
    fixed = reference_sector(p, reference) if reference is not None else {}
    free = [j for j in range(g) if j not in fixed]

    base = np.zeros(g, dtype=np.uint8)
    for j, val in fixed.items():
        base[j] = val < 0

    if len(free) <= _ANNEAL_CUTOFF:
        m = len(free)
        x_rows = np.tile(base, (1 << m, 1))
        if m:
            span = np.arange(1 << m, dtype=np.uint32)
            for col, j in enumerate(free):
                x_rows[:, j] = (span >> col) & 1
        vals = _eta_min_for_x(x_rows, tables)
        tol = 1e-12 * max(1.0, float(np.abs(vals).max()))
        best = np.flatnonzero(vals <= vals.min() + tol)
        x_best = min((tuple(1.0 - 2.0 * x_rows[i]), i) for i in best)
        x_row = x_rows[x_best[1]]
        search_value = float(vals[x_best[1]])
    else:
        x_row, search_value = _anneal(
            base, free, tables, seed=seed, steps=anneal_steps, restarts=anneal_restarts
        )

    nu = 1.0 - 2.0 * x_row.astype(float)
    r = _clique_vector(p, tables, x_row)
    # the returned value is the plain scalar evaluation, so callers can hold
    # eta(nu, r) == E_nc to machine precision regardless of energy scale
    energy = eta(p, nu, r)
    if abs(search_value - energy) > 1e-9 * max(1.0, abs(energy)):
        raise ContractViolation(f"objective mismatch: {search_value} vs {energy}")
    return energy, NoncontextualState(nu=nu, r=r)


def _anneal(base, free, tables, seed, steps, restarts):
    rng = np.random.default_rng(seed)
    best_row = None
    best_val = np.inf
    for _ in range(restarts):
        x = base.copy()
        x[free] = rng.integers(0, 2, size=len(free))
        cur = float(_eta_min_for_x(x[None, :], tables)[0])
        t0, t1 = 1.0, 1e-4
        for step in range(steps):
            temp = t0 * (t1 / t0) ** (step / max(steps - 1, 1))
            j = free[rng.integers(len(free))]
            x[j] ^= 1
            trial = float(_eta_min_for_x(x[None, :], tables)[0])
            if trial <= cur or rng.random() < np.exp((cur - trial) / temp):
                cur = trial
            else:
                x[j] ^= 1
        if cur < best_val - 1e-14:
            best_val = cur
            best_row = x.copy()
        elif abs(cur - best_val) <= 1e-14 and best_row is not None:
            if tuple(1.0 - 2.0 * x) < tuple(1.0 - 2.0 * best_row):
                best_row = x.copy()
    return best_row, best_val


# --------------------------------------------------------------------------
# report serialization (CLI decompose)
# --------------------------------------------------------------------------


def partition_report(
    p: NoncontextualPartition, energy: float | None = None, state=None
) -> dict:
    def label_coeff(term):
        return {
            "pauli": term.label(),
            "coeff": p.noncontextual.coefficient(term).real,
        }

    doc = {
        "n_qubits": p.n_qubits,
        "n_noncontextual_terms": len(p.noncontextual),
        "n_contextual_terms": len(p.contextual),
        "symmetry_terms": [label_coeff(t) for t in p.symmetry_terms],
        "cliques": [[label_coeff(t) for t in cl] for cl in p.cliques],
        "representatives": [t.label() for t in p.representatives],
        "generators": [g.label() for g in p.generators],
    }
    if energy is not None:
        doc["noncontextual_energy"] = energy
    if state is not None:
        doc["nu"] = [int(v) for v in state.nu]
        doc["r"] = [float(v) for v in state.r]
    return doc

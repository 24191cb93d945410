"""Stabilizer-sector reduction of qubit Hamiltonians.

Two reductions share the machinery in this module.  Plain tapering finds
the binary symmetries of a Hamiltonian (Pauli strings that commute with
every term), rotates each onto a single-qubit Z, and replaces that qubit
by its eigenvalue.  The contextual-subspace route applies the same moves
to the symmetry generators of a noncontextual partition, optionally
together with the normalized clique combination sum_i r_i C_i, whose
collapse onto a single representative needs non-Clifford angles.

The rotation bookkeeping is symbolic: Clifford steps (angle +-pi/2) map
each Pauli string to exactly one Pauli string with an exact sign, so
sector signs come out of integer arithmetic, not floating point.  Only
the clique-collapse angles are irrational, and their numerical dust is
pruned before any sign is read off.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product as _iproduct

import numpy as np

from .errors import ContractViolation, DimensionError
from .noncontextual import NoncontextualPartition, NoncontextualState
from .paulis import PauliString, PauliSum, _term_sort_key

_SIGN_ATOL = 1e-12
_DEGENERATE_WEIGHT = 1e-12

_AXIS_BITS = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


# ---------------------------------------------------------------------------
# symmetry discovery
# ---------------------------------------------------------------------------


def _gf2_rref(rows: list[int]) -> list[int]:
    """Reduced row echelon form of integer bit-rows over GF(2).

    Pivots are taken on the highest set bit, and every pivot bit is
    cleared from all other rows, so the result is canonical for a given
    row span.
    """
    basis: list[int] = []
    for row in rows:
        for b in basis:
            if row & (1 << (b.bit_length() - 1)):
                row ^= b
        if row:
            for i, b in enumerate(basis):
                if b & (1 << (row.bit_length() - 1)):
                    basis[i] = b ^ row
            basis.append(row)
    basis.sort(reverse=True)
    return basis


def find_z2_symmetries(h: PauliSum) -> list[PauliString]:
    """Independent Pauli strings commuting with every term of ``h``.

    Works over the binary symplectic form: a candidate (x_G, z_G)
    commutes with all terms exactly when it is in the kernel of the
    matrix whose rows are the terms' (z_t | x_t) bit vectors.  The
    identity is excluded.  Returns a canonically ordered, canonically
    reduced basis, with purely diagonal generators appearing whenever
    the kernel admits them.
    """
    if not h.is_hermitian():
        raise ContractViolation("symmetry search expects a Hermitian sum")
    n = h.n
    rows = []
    for (x, z) in h._terms:
        if x or z:
            rows.append(z | (x << n))
    # RREF of the constraint matrix, recording pivot columns.
    constraints = _gf2_rref(rows)
    pivots = [c.bit_length() - 1 for c in constraints]
    pivot_set = set(pivots)
    free_cols = [j for j in range(2 * n) if j not in pivot_set]
    kernel: list[int] = []
    for f in free_cols:
        v = 1 << f
        for c, p in zip(constraints, pivots):
            if (c >> f) & 1:
                v |= 1 << p
        kernel.append(v)
    # Re-encode with x bits high so the RREF concentrates X content into
    # as few basis vectors as possible, leaving the rest diagonal.
    enc = [((v & ((1 << n) - 1)) << n) | (v >> n) for v in kernel]
    out = []
    for e in _gf2_rref(enc):
        x = e >> n
        z = e & ((1 << n) - 1)
        out.append(PauliString(n, x, z, (x & z).bit_count() & 3))
    key = _term_sort_key(n)
    out.sort(key=lambda p: key((p.x, p.z)))
    return out


# ---------------------------------------------------------------------------
# rotation sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RotationSequence:
    """An ordered product of Pauli-exponential conjugations.

    Each step (g, theta) stands for exp(-i*theta/2 * g).  ``apply``
    conjugates a sum by the whole product, first step innermost, so the
    sequence reads left to right as successive frame changes.  Steps
    with index below ``clifford_prefix_len`` are guaranteed to have
    angle +-pi/2; later steps may have any angle.
    """

    steps: tuple[tuple[PauliString, float], ...]
    clifford_prefix_len: int

    def __post_init__(self):
        if not 0 <= self.clifford_prefix_len <= len(self.steps):
            raise ContractViolation("clifford prefix length out of range")
        for i, (g, theta) in enumerate(self.steps):
            if not g.is_hermitian:
                raise ContractViolation("rotation generators must be Hermitian")
            if i < self.clifford_prefix_len:
                if abs(abs(theta) - math.pi / 2) > 1e-9:
                    raise ContractViolation(
                        "step inside the Clifford prefix has a non-Clifford angle"
                    )

    def __len__(self) -> int:
        return len(self.steps)

    def apply(self, h: PauliSum) -> PauliSum:
        for g, theta in self.steps:
            h = h.conjugate_by_rotation(g, theta)
        return h

    def unapply(self, h: PauliSum) -> PauliSum:
        for g, theta in reversed(self.steps):
            h = h.conjugate_by_rotation(g, -theta)
        return h

    def conjugate_string(self, p: PauliString) -> PauliSum:
        """Image of a single Pauli string under the sequence."""
        return self.apply(PauliSum.from_string(p.bare(), p.phase))

    def extended(self, more: "RotationSequence") -> "RotationSequence":
        prefix = self.clifford_prefix_len
        if prefix == len(self.steps):
            prefix += more.clifford_prefix_len
        return RotationSequence(self.steps + more.steps, prefix)


@dataclass(frozen=True)
class CliqueCombination:
    """A unit-norm real combination of pairwise anticommuting strings."""

    operators: tuple[PauliString, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if len(self.operators) != len(self.weights) or not self.operators:
            raise ContractViolation("operators and weights must align and be nonempty")
        norm = math.sqrt(sum(w * w for w in self.weights))
        if abs(norm - 1.0) > 1e-8:
            raise ContractViolation("combination weights must have unit norm")
        for i, a in enumerate(self.operators):
            if not a.is_hermitian:
                raise ContractViolation("combination operators must be Hermitian")
            for b in self.operators[i + 1 :]:
                if a.commutes(b):
                    raise ContractViolation(
                        "combination operators must pairwise anticommute"
                    )

    def as_sum(self) -> PauliSum:
        return PauliSum.from_terms(
            self.operators[0].n, zip(self.operators, self.weights)
        )


def _pi_half_step(a: PauliString, b: PauliString) -> tuple[PauliString, float]:
    """Clifford step whose conjugation sends the string b to the string a.

    Requires a and b to anticommute.  The generator is i*a*b, which is
    then Hermitian; any -1 in its phase is folded into the angle sign.
    """
    prod = a.multiply(b)
    gen = PauliString(prod.n, prod.x, prod.z, (prod.s + 1) & 3)
    ph = gen.phase
    if abs(ph.imag) > 0 or ph.real not in (1.0, -1.0):
        raise ContractViolation("step endpoints must anticommute")
    angle = math.pi / 2 if ph.real > 0 else -math.pi / 2
    return gen.bare(), angle


def _single(n: int, q: int, axis: str) -> PauliString:
    xb, zb = _AXIS_BITS[axis]
    return PauliString(n, xb << q, zb << q, (xb & zb) & 3)


def _steps_to_axis(
    p: PauliString, q: int, axis: str, avoid: set[int]
) -> list[tuple[PauliString, float]]:
    """Clifford steps taking the string p to the single-qubit ``axis`` at q.

    At most three steps.  Intermediate strings never touch positions in
    ``avoid`` with anything that fails to commute with Z there, so
    already-fixed stabilizers pass through untouched.
    """
    n = p.n
    target = _single(n, q, axis)
    p = p.bare()
    if p == target:
        return []
    if not p.commutes(target):
        return [_pi_half_step(target, p)]
    letter = p.letter_at(q)
    if letter == axis:
        # Same letter at q: swap it for an anticommuting one, then finish.
        alt = "X" if axis != "X" else "Z"
        xb, zb = _AXIS_BITS[alt]
        ab, bb = _AXIS_BITS[axis]
        x = (p.x & ~(1 << q)) | (xb << q)
        z = (p.z & ~(1 << q)) | (zb << q)
        mid = PauliString(n, x, z, (x & z).bit_count() & 3)
        return [_pi_half_step(mid, p), _pi_half_step(target, mid)]
    # p does not act at q.  Hop through a string that anticommutes with
    # both p and the target: flip one supported letter of p and plant a
    # letter at q that anticommutes with the requested axis.
    support = [j for j in p.support() if j not in avoid and j != q]
    if not support:
        raise ContractViolation(
            "target has no free support; it is a product of earlier targets"
        )
    j = support[0]
    pj = p.letter_at(j)
    alt_j = "X" if pj != "X" else "Y"
    off_axis = "X" if axis != "X" else "Z"
    xb, zb = _AXIS_BITS[alt_j]
    qb_x, qb_z = _AXIS_BITS[off_axis]
    x = (p.x & ~(1 << j)) | (xb << j) | (qb_x << q)
    z = (p.z & ~(1 << j)) | (zb << j) | (qb_z << q)
    mid = PauliString(n, x, z, (x & z).bit_count() & 3)
    return [_pi_half_step(mid, p), _pi_half_step(target, mid)]


def _image_of(
    steps: list[tuple[PauliString, float]], p: PauliString
) -> tuple[PauliString, float]:
    """Conjugate a string through Clifford-and-rotation steps.

    Returns (bare string, real coefficient).  Raises if the image is not
    a single string within tight tolerance, which would mean the caller
    tried to track a string through a rotation that genuinely splits it.
    """
    s = PauliSum.from_string(p.bare(), 1.0)
    for g, theta in steps:
        s = s.conjugate_by_rotation(g, theta)
    terms = [(op, c) for op, c in s.terms() if abs(c) > 1e-10]
    if len(terms) != 1:
        raise ContractViolation("string image is not a single Pauli string")
    op, c = terms[0]
    if abs(c.imag) > _SIGN_ATOL or abs(abs(c.real) - 1.0) > 1e-10:
        raise ContractViolation("string image has non-unit coefficient")
    return op.bare(), float(np.sign(c.real))


def _collapse_steps(
    images: list[PauliString], weights: list[float]
) -> tuple[list[tuple[PauliString, float]], int]:
    """Non-Clifford steps folding sum_k w_k P_k onto its largest component.

    The strings must pairwise anticommute.  Components below the
    degeneracy threshold are skipped.  Returns (steps, index of the
    surviving component).
    """
    sel = max(range(len(weights)), key=lambda k: (abs(weights[k]), -k))
    steps: list[tuple[PauliString, float]] = []
    rho = weights[sel]
    for k in range(len(weights)):
        if k == sel or abs(weights[k]) < _DEGENERATE_WEIGHT:
            continue
        gen, half_pi = _pi_half_step(images[sel], images[k])
        ph = 1.0 if half_pi > 0 else -1.0
        theta = math.atan2(ph * weights[k], rho)
        steps.append((gen, theta))
        rho = math.hypot(rho, weights[k])
    return steps, sel


def build_rotations(targets: list[tuple]) -> RotationSequence:
    """Rotation sequence mapping each target onto a single-qubit Pauli.

    Each entry is (operator, position) or (operator, position, axis)
    with axis defaulting to Z.  Operators are PauliStrings, or at most
    one CliqueCombination whose weighted sum is folded onto its largest
    component with non-Clifford angles before the final Clifford
    reduction.  Plain operators must pairwise commute and commute with
    every member of the combination; they must also be algebraically
    independent.  Positions must be distinct.
    """
    parsed = []
    for entry in targets:
        if len(entry) == 2:
            op, pos = entry
            axis = "Z"
        else:
            op, pos, axis = entry
        if axis not in _AXIS_BITS:
            raise ContractViolation(f"unknown axis {axis!r}")
        parsed.append((op, int(pos), axis))
    if not parsed:
        return RotationSequence((), 0)

    plain = [(op, p, a) for op, p, a in parsed if isinstance(op, PauliString)]
    combos = [(op, p, a) for op, p, a in parsed if isinstance(op, CliqueCombination)]
    if len(plain) + len(combos) != len(parsed):
        raise ContractViolation("targets must be PauliStrings or a CliqueCombination")
    if len(combos) > 1:
        raise ContractViolation("at most one clique combination may be reduced")

    ns = {op.n for op, _, _ in plain} | {
        c.operators[0].n for c, _, _ in combos
    }
    if len(ns) != 1:
        raise DimensionError("targets act on different qubit counts")
    n = ns.pop()
    positions = [p for _, p, _ in parsed]
    if len(set(positions)) != len(positions):
        raise ContractViolation("target positions must be distinct")
    for p in positions:
        if not 0 <= p < n:
            raise DimensionError("target position out of range")

    for op, _, _ in plain:
        if not op.is_hermitian:
            raise ContractViolation("targets must be Hermitian")
    for i, (a, _, _) in enumerate(plain):
        for b, _, _ in plain[i + 1 :]:
            if not a.commutes(b):
                raise ContractViolation("plain targets must pairwise commute")
        for c, _, _ in combos:
            for member in c.operators:
                if not a.commutes(member):
                    raise ContractViolation(
                        "plain targets must commute with the clique combination"
                    )
    basis = _gf2_rref([op.x | (op.z << n) for op, _, _ in plain])
    if len(basis) != len(plain):
        raise ContractViolation("targets are not independent")

    seq = _assemble(n, [(op, p, a) for op, p, a in parsed])

    # Contract check: every target must land exactly on its single-qubit
    # Pauli with unit-magnitude coefficient.
    for op, pos, axis in parsed:
        want = _single(n, pos, axis)
        if isinstance(op, PauliString):
            image = seq.apply(PauliSum.from_string(op.bare(), 1.0))
        else:
            image = seq.apply(op.as_sum())
        resolved = [(t, c) for t, c in image.terms() if abs(c) > 1e-10]
        ok = (
            len(resolved) == 1
            and resolved[0][0] == want
            and abs(abs(resolved[0][1]) - 1.0) <= 1e-10
        )
        if not ok:
            raise ContractViolation("rotation failed to isolate a target")
    return seq


def _assemble(n: int, ordered: list[tuple]) -> RotationSequence:
    """Incremental construction shared by build_rotations and the pipelines."""
    steps: list[tuple[PauliString, float]] = []
    clifford_prefix = None
    fixed_positions: set[int] = set()
    for op, pos, axis in ordered:
        if isinstance(op, PauliString):
            image, _ = _image_of(steps, op)
            steps.extend(_steps_to_axis(image, pos, axis, fixed_positions))
        else:
            images = []
            for member in op.operators:
                img, sign = _image_of(steps, member)
                images.append((img, sign))
            weights = [w * s for w, (_, s) in zip(op.weights, images)]
            strings = [img for img, _ in images]
            collapse, sel = _collapse_steps(strings, weights)
            if clifford_prefix is None:
                clifford_prefix = len(steps)
            steps.extend(collapse)
            surviving = strings[sel]
            steps.extend(_steps_to_axis(surviving, pos, axis, fixed_positions))
        fixed_positions.add(pos)
    if clifford_prefix is None:
        clifford_prefix = len(steps)
    return RotationSequence(tuple(steps), clifford_prefix)


# ---------------------------------------------------------------------------
# projection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectedHamiltonian:
    """A Hamiltonian restricted to a stabilizer sector.

    ``reduced`` acts on the surviving qubits and carries no identity
    term; all constant energy sits in ``offset``.  ``fixed_positions``
    records, in the rotated frame, which qubit was fixed to which
    single-qubit Pauli eigenvalue.
    """

    reduced: PauliSum
    offset: float
    fixed_positions: tuple[tuple[int, str, int], ...]
    source_qubits: int
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.reduced.n != self.source_qubits - len(self.fixed_positions):
            raise ContractViolation(
                "reduced qubit count must equal source minus fixed positions"
            )
        if not self.reduced.is_hermitian(1e-9):
            raise ContractViolation("projected Hamiltonian must be Hermitian")

    @property
    def remaining_qubits(self) -> int:
        return self.reduced.n

    def total(self) -> PauliSum:
        """The reduced operator with its offset restored as an identity term."""
        return self.reduced.add_scaled_identity(self.offset)


def _validate_fixed(fixed, n: int) -> list[tuple[int, str, int]]:
    seen = set()
    out = []
    for pos, axis, sign in fixed:
        pos = int(pos)
        if not 0 <= pos < n:
            raise DimensionError(f"fixed position {pos} out of range")
        if pos in seen:
            raise ContractViolation(f"position {pos} fixed twice")
        if axis not in _AXIS_BITS:
            raise ContractViolation(f"unknown axis {axis!r}")
        if sign not in (1, -1, 1.0, -1.0):
            raise ContractViolation("sector signs must be +1 or -1")
        seen.add(pos)
        out.append((pos, axis, int(sign)))
    return out


def project(
    h: PauliSum,
    rotations: RotationSequence,
    fixed,
    offset: float = 0.0,
) -> ProjectedHamiltonian:
    """Rotate ``h`` and restrict it to the sector of the fixed qubits.

    Rotated terms that anticommute with any fixed single-qubit Pauli
    connect the sector to its complement and are dropped.  Terms that
    commute have each fixed qubit's letter replaced by the sector sign
    and the qubit removed.  Identity content accumulates into the
    offset together with the caller's ``offset``.
    """
    fixed = _validate_fixed(fixed, h.n)
    rotated = rotations.apply(h)
    keep = [q for q in range(h.n) if q not in {p for p, _, _ in fixed}]
    new_index = {q: i for i, q in enumerate(keep)}
    k = len(keep)
    reduced = PauliSum.zero(k)
    shift = complex(offset)
    for (x, z), c in rotated._terms.items():
        coeff = c
        dead = False
        for pos, axis, sign in fixed:
            xb = (x >> pos) & 1
            zb = (z >> pos) & 1
            if (xb, zb) == (0, 0):
                continue
            if (xb, zb) == _AXIS_BITS[axis]:
                coeff *= sign
            else:
                dead = True
                break
        if dead:
            continue
        nx = nz = 0
        for q in keep:
            nx |= ((x >> q) & 1) << new_index[q]
            nz |= ((z >> q) & 1) << new_index[q]
        if nx == 0 and nz == 0:
            shift += coeff
            continue
        op = PauliString(k, nx, nz, (nx & nz).bit_count() & 3)
        reduced._add_string(op, coeff / op.phase)
    reduced._prune()
    if abs(shift.imag) > 1e-9:
        raise ContractViolation("projection produced a complex energy offset")
    return ProjectedHamiltonian(
        reduced=reduced,
        offset=float(shift.real),
        fixed_positions=tuple(fixed),
        source_qubits=h.n,
    )


def project_operator_pool(
    pool: list[PauliSum], rotations: RotationSequence, fixed
) -> list[PauliSum]:
    """Apply the sector restriction to each pool element, dropping constants.

    Elements whose every term either anticommutes with a fixed Pauli or
    collapses to the identity vanish and are removed from the pool.
    """
    out = []
    for element in pool:
        projected = project(element, rotations, fixed, 0.0)
        survivor = projected.reduced
        if len(survivor):
            out.append(survivor)
    return out


# ---------------------------------------------------------------------------
# stabilizer selection and the contextual-subspace pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnforcedStabilizer:
    """One stabilizer chosen for sector enforcement.

    kind is "symmetry_product" for an element of the group generated by
    the partition's symmetry generators (``operator`` holds the bare
    string, ``members`` the generator indices whose product it is) or
    "clique_combination" for the normalized representative sum, in
    which case ``operator`` is None.  ``sign`` is the eigenvalue the
    sector enforces.  ``deletion_cost`` is the coefficient weight of
    contextual terms that anticommute with the stabilizer: enforcing it
    deletes at least those terms from the reduced Hamiltonian.
    """

    kind: str
    operator: PauliString | None
    members: tuple[int, ...]
    sign: int
    deletion_cost: float


def _deletion_cost(candidate: PauliString, contextual: PauliSum) -> float:
    cost = 0.0
    for op, coeff in contextual.terms():
        if not candidate.commutes(op):
            cost += abs(coeff)
    return cost


# Group enumeration is exponential in the generator count; above this
# rank only the plain generator basis is ranked.
_GROUP_ENUMERATION_CAP = 14


def choose_stabilizers(
    h: PauliSum,
    partition: NoncontextualPartition,
    state: NoncontextualState,
    n_target: int,
) -> list[EnforcedStabilizer]:
    """Pick which stabilizers to enforce so ``n_target`` qubits remain.

    Candidates are the full group generated by the partition's symmetry
    generators (any independent set of group elements is enforceable,
    with eigenvalues multiplying accordingly) plus, when there are
    cliques, the representative combination.  Candidates are ranked by
    how much contextual coefficient weight their enforcement would
    delete, cheapest first, and assembled greedily under an
    independence constraint.  True symmetries of the full Hamiltonian
    cost exactly zero, so they are always enforced before anything that
    bites into the contextual part and the reduction subsumes plain
    tapering whenever enough of them exist.
    """
    n = h.n
    if not 0 <= n_target <= n:
        raise DimensionError("n_target out of range")
    g = len(partition.generators)
    has_combo = partition.n_cliques >= 2
    capacity = g + (1 if has_combo else 0)
    need = n - n_target
    if need > capacity:
        raise DimensionError(
            f"cannot reach {n_target} qubits: only {capacity} stabilizers available"
        )
    if need == 0:
        return []

    key = _term_sort_key(n)
    candidates: list[tuple[float, tuple, int, EnforcedStabilizer]] = []
    if g <= _GROUP_ENUMERATION_CAP:
        masks = range(1, 1 << g)
    else:
        masks = (1 << i for i in range(g))
    for mask in masks:
        op = PauliString.identity(n)
        sign = 1
        members = []
        for i in range(g):
            if (mask >> i) & 1:
                op = op.multiply(partition.generators[i])
                sign *= int(state.nu[i])
                members.append(i)
        ph = op.phase
        sign *= int(ph.real)
        bare = op.bare()
        cand = EnforcedStabilizer(
            kind="symmetry_product",
            operator=bare,
            members=tuple(members),
            sign=sign,
            deletion_cost=_deletion_cost(bare, partition.contextual),
        )
        candidates.append((cand.deletion_cost, key((bare.x, bare.z)), 0, cand))
    if has_combo:
        sel = int(np.argmax(np.abs(state.r)))
        rep = partition.representatives[sel]
        cand = EnforcedStabilizer(
            kind="clique_combination",
            operator=None,
            members=(),
            sign=1,
            deletion_cost=_deletion_cost(rep, partition.contextual),
        )
        candidates.append((cand.deletion_cost, key((rep.x, rep.z)), 1, cand))
    candidates.sort(key=lambda entry: entry[:3])

    chosen: list[EnforcedStabilizer] = []
    basis: dict[int, int] = {}
    combo_used = False
    for _, _, _, cand in candidates:
        if len(chosen) == need:
            break
        if cand.kind == "clique_combination":
            if combo_used:
                continue
            combo_used = True
            chosen.append(cand)
            continue
        vec = cand.operator.x | (cand.operator.z << n)
        while vec:
            top = vec.bit_length() - 1
            if top not in basis:
                basis[top] = vec
                chosen.append(cand)
                break
            vec ^= basis[top]
    if len(chosen) < need:
        raise DimensionError(
            f"cannot reach {n_target} qubits: stabilizer group rank too small"
        )
    return chosen


@dataclass(frozen=True)
class SubspaceReduction:
    """Everything produced by one contextual-subspace reduction."""

    projected: ProjectedHamiltonian
    rotations: RotationSequence
    fixed: tuple[tuple[int, str, int], ...]
    enforced: tuple[EnforcedStabilizer, ...]

    @property
    def n_qubits(self) -> int:
        return self.projected.remaining_qubits


def _auto_positions(
    n: int, ops: list
) -> list[tuple]:
    """Assign distinct qubit positions to a list of reduction targets.

    Positions are chosen greedily along the incremental construction:
    each operator is conjugated through the steps built so far and gets
    the lowest supported qubit not already taken.
    """
    steps: list[tuple[PauliString, float]] = []
    used: set[int] = set()
    ordered = []
    for op in ops:
        if isinstance(op, PauliString):
            image, _ = _image_of(steps, op)
            free = [q for q in image.support() if q not in used]
            if not free:
                raise ContractViolation(
                    "stabilizer is a product of earlier stabilizers"
                )
            pos = free[0]
            more = _steps_to_axis(image, pos, "Z", used)
            steps.extend(more)
        else:
            images, weights = [], []
            for member, w in zip(op.operators, op.weights):
                img, sign = _image_of(steps, member)
                images.append(img)
                weights.append(w * sign)
            collapse, sel = _collapse_steps(images, weights)
            steps.extend(collapse)
            free = [q for q in images[sel].support() if q not in used]
            if not free:
                raise ContractViolation(
                    "clique representative is a product of earlier stabilizers"
                )
            pos = free[0]
            steps.extend(_steps_to_axis(images[sel], pos, "Z", used))
        used.add(pos)
        ordered.append((op, pos, "Z"))
    return ordered


def stabilizers_from_indices(
    partition: NoncontextualPartition,
    state: NoncontextualState,
    selection,
) -> list[EnforcedStabilizer]:
    """Explicit stabilizer selection by generator index.

    ``selection`` holds integer indices into ``partition.generators``
    (each enforcing that single generator at its noncontextual sign) and
    optionally the string "combo" for the clique-representative
    combination.  Bypasses the deletion-cost ranking entirely.
    """
    chosen: list[EnforcedStabilizer] = []
    for item in selection:
        if item == "combo":
            if partition.n_cliques < 2:
                raise ContractViolation(
                    "clique combination requested but the partition has "
                    "fewer than two cliques"
                )
            chosen.append(
                EnforcedStabilizer(
                    kind="clique_combination",
                    operator=None,
                    members=(),
                    sign=1,
                    deletion_cost=0.0,
                )
            )
            continue
        i = int(item)
        if not 0 <= i < len(partition.generators):
            raise DimensionError(f"generator index {i} out of range")
        gen = partition.generators[i]
        chosen.append(
            EnforcedStabilizer(
                kind="symmetry_product",
                operator=gen.bare(),
                members=(i,),
                sign=int(state.nu[i]),
                deletion_cost=0.0,
            )
        )
    return chosen


def reduce_to_subspace(
    h: PauliSum,
    partition: NoncontextualPartition,
    state: NoncontextualState,
    n_target: int,
    enforced: list[EnforcedStabilizer] | None = None,
) -> SubspaceReduction:
    """Project ``h`` into the sector of the selected noncontextual stabilizers.

    Builds the rotation taking every enforced stabilizer to a distinct
    single-qubit Z, reads each stabilizer's exact sign in the rotated
    frame, fixes those qubits to the eigenvalues the noncontextual
    state assigns, and projects the full Hamiltonian.  With every
    stabilizer enforced the projection reproduces the noncontextual
    energy as a constant; enforcing fewer leaves contextual corrections
    in the reduced operator.

    ``enforced`` overrides the automatic ranking with an explicit list
    (see :func:`stabilizers_from_indices`); its length must agree with
    the requested reduction.
    """
    if enforced is None:
        enforced = choose_stabilizers(h, partition, state, n_target)
    elif len(enforced) != h.n - n_target:
        raise DimensionError(
            f"{len(enforced)} stabilizers cannot leave {n_target} of {h.n} qubits"
        )
    ops = []
    for e in enforced:
        if e.kind == "symmetry_product":
            ops.append(e.operator)
        else:
            ops.append(
                CliqueCombination(
                    operators=tuple(partition.representatives),
                    weights=tuple(float(w) for w in state.r),
                )
            )
    ordered = _auto_positions(h.n, ops)
    seq = _assemble(h.n, ordered)
    fixed = []
    for e, (op, pos, _axis) in zip(enforced, ordered):
        if isinstance(op, PauliString):
            image = seq.apply(PauliSum.from_string(op.bare(), 1.0))
        else:
            image = seq.apply(op.as_sum())
        terms = [(t, c) for t, c in image.terms() if abs(c) > _SIGN_ATOL]
        want = _single(h.n, pos, "Z")
        if (
            len(terms) != 1
            or terms[0][0] != want
            or abs(abs(terms[0][1]) - 1.0) > _SIGN_ATOL
            or abs(terms[0][1].imag) > _SIGN_ATOL
        ):
            raise ContractViolation(
                "enforced stabilizer did not rotate to a clean single-qubit Z"
            )
        conj_sign = 1 if terms[0][1].real > 0 else -1
        fixed.append((pos, "Z", e.sign * conj_sign))
    fixed.sort()
    projected = project(h, seq, fixed, offset=0.0)
    return SubspaceReduction(
        projected=projected,
        rotations=seq,
        fixed=tuple(fixed),
        enforced=tuple(enforced),
    )


# ---------------------------------------------------------------------------
# plain tapering
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TaperingFrame:
    """Reusable rotation data for tapering one Hamiltonian."""

    generators: tuple[PauliString, ...]
    rotations: RotationSequence
    positions: tuple[int, ...]
    conjugation_signs: tuple[int, ...]

    def fixed_for(self, sector) -> list[tuple[int, str, int]]:
        if len(sector) != len(self.generators):
            raise DimensionError("sector length must match generator count")
        out = []
        for pos, cs, s in zip(self.positions, self.conjugation_signs, sector):
            if s not in (1, -1):
                raise ContractViolation("sector entries must be +1 or -1")
            out.append((pos, "Z", cs * s))
        return sorted(out)


def tapering_frame(h: PauliSum, generators=None) -> TaperingFrame:
    """Build the shared rotation used for every sector of a tapering."""
    if generators is None:
        generators = find_z2_symmetries(h)
    generators = list(generators)
    ordered = _auto_positions(h.n, generators)
    seq = _assemble(h.n, ordered)
    signs = []
    for op, pos, _ in ordered:
        op_img, sign = _image_of(list(seq.steps), op)
        if op_img != _single(h.n, pos, "Z"):
            raise ContractViolation("tapering rotation failed to isolate a generator")
        signs.append(int(sign))
    return TaperingFrame(
        generators=tuple(generators),
        rotations=seq,
        positions=tuple(pos for _, pos, _ in ordered),
        conjugation_signs=tuple(signs),
    )


def taper(h: PauliSum, sector, generators=None) -> ProjectedHamiltonian:
    """Remove one qubit per symmetry generator at the given sector signs."""
    frame = tapering_frame(h, generators)
    return project(h, frame.rotations, frame.fixed_for(list(sector)))


def best_sector_taper(
    h: PauliSum, generators=None
) -> tuple[ProjectedHamiltonian, tuple[int, ...], float]:
    """Scan every sector and keep the one with the lowest ground energy.

    Returns (projection, sector, ground energy).  The scan is exact and
    deterministic: sectors are enumerated in lexicographic order with
    +1 before -1, and ties keep the first minimum.
    """
    from . import oracle

    frame = tapering_frame(h, generators)
    g = len(frame.generators)
    best = None
    for bits in _iproduct((1, -1), repeat=g):
        proj = project(h, frame.rotations, frame.fixed_for(list(bits)))
        if len(proj.reduced):
            energy = float(oracle.eigensolve_lowest(proj.reduced, k=1)[0])
        else:
            energy = 0.0
        energy += proj.offset
        if best is None or energy < best[2] - 1e-15:
            best = (proj, bits, energy)
    if best is None:
        raise ContractViolation("no sectors to scan")
    return best


# ---------------------------------------------------------------------------
# reference-state transport
# ---------------------------------------------------------------------------


def reduce_reference_state(
    state, rotations: RotationSequence, fixed, n: int | None = None
) -> np.ndarray:
    """Carry a full-register state into the projected register.

    ``state`` is either a basis-state bit string (qubit 0 leftmost), an
    integer basis index, or a complex amplitude vector.  The state is
    rotated, the fixed qubits are collapsed onto their sector
    eigenstates, and the result is renormalized on the remaining
    qubits.  A state with negligible weight in the sector cannot serve
    as a reference and raises ContractViolation.
    """
    from .statevector import apply_pauli_exponential, basis_index

    if isinstance(state, str):
        if n is None:
            n = len(state)
        idx = basis_index(state)
        psi = np.zeros(1 << n, dtype=complex)
        psi[idx] = 1.0
    elif isinstance(state, (int, np.integer)):
        if n is None:
            raise DimensionError("qubit count required with an integer basis index")
        psi = np.zeros(1 << n, dtype=complex)
        psi[int(state)] = 1.0
    else:
        psi = np.asarray(state, dtype=complex)
        n = int(round(math.log2(psi.size)))
    fixed = _validate_fixed(fixed, n)
    for g, theta in rotations.steps:
        psi = apply_pauli_exponential(psi, g, theta)
    idx = np.arange(1 << n)
    mask = np.ones(1 << n, dtype=bool)
    for pos, axis, sign in fixed:
        if axis != "Z":
            raise ContractViolation("reference collapse supports Z sectors only")
        want_bit = 0 if sign > 0 else 1
        mask &= ((idx >> pos) & 1) == want_bit
    kept = psi[mask]
    norm = float(np.linalg.norm(kept))
    if norm < 1e-8:
        raise ContractViolation(
            "reference state has no weight in the requested sector"
        )
    return kept / norm

"""Parameterized circuit builders.

Three families are provided:

* ``build_uccsd`` -- coupled-cluster singles and doubles, exponentiated as
  one first-order product of Pauli rotations with one amplitude per
  excitation.  Optionally rebuilt inside a reduced subspace.
* ``build_ryrz`` -- hardware-efficient layers of Ry+Rz rotations with a
  CNOT entangling pattern.
* ``build_nblock`` -- brick-wall layers of the three-angle two-qubit block
  exp(i(tx XX + ty YY + tz ZZ)), which conserves parity for all angles and
  particle number when tx == ty.

Spin-orbital convention: spatial orbital p with spin s sits on qubit
2p + s, so even qubits are alpha and odd qubits beta.  Ladder operators
use the standard Z-string construction on lower qubit indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, DimensionError
from .fixture_io import MoleculeFixture
from .paulis import PauliString, PauliSum
from .statevector import CNot, Circuit, NBlock, PauliExponential, Rotation, Statevector
from .subspace import SubspaceReduction, project, reduce_reference_state

_HALF_PI = math.pi / 2.0


# ---------------------------------------------------------------------------
# fermionic ladder algebra
# ---------------------------------------------------------------------------


def _ladder(n: int, q: int, dagger: bool) -> PauliSum:
    """Annihilation (or creation) operator on qubit q as a two-term sum."""
    if not 0 <= q < n:
        raise DimensionError(f"mode {q} outside 0..{n - 1}")
    zmask = (1 << q) - 1
    x_part = PauliString(n, 1 << q, zmask, 0)
    y_op = PauliString(n, 1 << q, zmask | (1 << q), 0)
    coeff = -0.5j if dagger else 0.5j
    out = PauliSum.from_string(x_part, 0.5 / x_part.phase)
    # i^s bookkeeping: divide by the stored sigma-phase so the term is the
    # bare X/Y string times the intended coefficient.
    out = out + PauliSum.from_string(y_op, coeff / y_op.phase)
    return out


def _ladder_product(n: int, ops: list[tuple[int, bool]]) -> PauliSum:
    total = None
    for q, dagger in ops:
        factor = _ladder(n, q, dagger)
        total = factor if total is None else total @ factor
    if total is None:
        raise ContractViolation("empty ladder-operator product")
    return total


def excitation_generator(n: int, ops: list[tuple[int, bool]]) -> PauliSum:
    """Hermitian generator (T - T^dag)/i for T given as ladder factors.

    ``ops`` lists (mode, dagger) pairs of T in application order from the
    left, e.g. a^dag_i a_alpha is [(i, True), (alpha, False)].
    """
    t = _ladder_product(n, ops)
    tdag = _ladder_product(n, [(q, not d) for q, d in reversed(ops)])
    g = (t - tdag) * (-1j)
    if not g.is_hermitian(1e-10):
        raise ContractViolation("excitation generator failed to be Hermitian")
    return g.real_part()


def spin_conserving_excitations(
    occupation: str,
) -> tuple[list[tuple[int, int]], list[tuple[int, int, int, int]]]:
    """All Sz-preserving single and double excitations of a determinant.

    Singles are (virtual, occupied) with matching spin; doubles are
    (i, j, alpha, beta) with i < j virtual, alpha < beta occupied, and the
    spin multiset preserved.  Both lists come back lexicographically
    sorted, which fixes the circuit's parameter order.
    """
    occupied = [q for q, ch in enumerate(occupation) if ch == "1"]
    virtual = [q for q, ch in enumerate(occupation) if ch == "0"]
    singles = [
        (i, a)
        for i in virtual
        for a in occupied
        if i % 2 == a % 2
    ]
    doubles = []
    for ii, i in enumerate(virtual):
        for j in virtual[ii + 1:]:
            for ai, a in enumerate(occupied):
                for b in occupied[ai + 1:]:
                    if sorted((i % 2, j % 2)) == sorted((a % 2, b % 2)):
                        doubles.append((i, j, a, b))
    singles.sort()
    doubles.sort()
    return singles, doubles


def all_excitations(
    occupation: str,
) -> tuple[list[tuple[int, int]], list[tuple[int, int, int, int]]]:
    """Every occupied-to-virtual single and double excitation.

    Unlike :func:`spin_conserving_excitations` no Sz filter is applied, so
    spin-flip substitutions are included.  Inside a projected subspace most
    of those vanish, but the truncated survivors couple determinant pairs
    that the conserving set cannot reach, which is what makes open-shell
    levels accessible to the deflation solver.
    """
    occupied = [q for q, ch in enumerate(occupation) if ch == "1"]
    virtual = [q for q, ch in enumerate(occupation) if ch == "0"]
    singles = [(i, a) for i in virtual for a in occupied]
    doubles = []
    for ii, i in enumerate(virtual):
        for j in virtual[ii + 1:]:
            for ai, a in enumerate(occupied):
                for b in occupied[ai + 1:]:
                    doubles.append((i, j, a, b))
    singles.sort()
    doubles.sort()
    return singles, doubles


@dataclass(frozen=True)
class ExcitationPool:
    """The excitation set behind a coupled-cluster circuit.

    Index tuples reference the full molecular register (the fixture's
    occupation pattern) even when the mapped generators have been
    projected into a smaller subspace.
    """

    singles: tuple[tuple[int, int], ...]
    doubles: tuple[tuple[int, int, int, int], ...]
    mapped_generators: tuple[PauliSum, ...]

    def __post_init__(self):
        if len(self.mapped_generators) != len(self.singles) + len(self.doubles):
            raise ContractViolation(
                "one mapped generator per excitation is required"
            )
        for g in self.mapped_generators:
            if not g.is_hermitian(1e-10):
                raise ContractViolation("mapped generators must be Hermitian")

    def __len__(self) -> int:
        return len(self.mapped_generators)


def _reference_vector(reference, n: int) -> np.ndarray:
    if reference is None:
        return Statevector.zero_state(n).amplitudes
    if isinstance(reference, str):
        if len(reference) != n:
            raise DimensionError(
                f"reference bitstring has {len(reference)} qubits, circuit has {n}"
            )
        return Statevector.from_bitstring(reference).amplitudes
    v = np.asarray(reference, dtype=complex)
    if v.shape != (1 << n,):
        raise DimensionError(
            f"reference vector has {v.size} amplitudes, expected {1 << n}"
        )
    return v


def _subspace_reference(occupation: str, context: SubspaceReduction) -> np.ndarray:
    """Carry the HF determinant into the reduced register.

    If the determinant has no weight in the enforced sector the fallback
    is the reduced basis state with maximal overlap against the raw
    (unnormalized) sector restriction of the determinant.
    """
    try:
        return reduce_reference_state(
            occupation, context.rotations, context.fixed
        )
    except ContractViolation:
        pass
    psi = Statevector.from_bitstring(occupation).amplitudes
    from .statevector import apply_pauli_exponential

    for g, theta in context.rotations.steps:
        psi = apply_pauli_exponential(psi, g, theta)
    n = len(occupation)
    idx = np.arange(1 << n)
    mask = np.ones(1 << n, dtype=bool)
    for pos, axis, sign in context.fixed:
        want = 0 if sign > 0 else 1
        mask &= ((idx >> pos) & 1) == want
    kept = psi[mask]
    best = int(np.argmax(np.abs(kept)))
    if abs(kept[best]) == 0.0:
        raise ContractViolation(
            "reference determinant vanishes in this sector; rerun the "
            "reduction with more qubits"
        )
    out = np.zeros(kept.size, dtype=complex)
    out[best] = 1.0
    return out


def build_uccsd(
    fixture: MoleculeFixture,
    subspace: SubspaceReduction | None = None,
    spin_filter: bool = True,
) -> tuple[Circuit, ExcitationPool]:
    """Coupled-cluster singles/doubles circuit for a molecular fixture.

    Returns the circuit and the surviving excitation pool.  With a
    ``subspace`` the generators are projected into the reduced register
    first and excitations whose generator vanishes are dropped; the
    reference preparation becomes the reduced HF state.

    ``spin_filter`` keeps only Sz-preserving excitations (the default).
    Passing False enumerates every occupied-to-virtual substitution;
    see :func:`all_excitations` for why that matters in small subspaces.
    """
    n = fixture.n_qubits
    occupation = fixture.hf_occupation
    if spin_filter:
        singles, doubles = spin_conserving_excitations(occupation)
    else:
        singles, doubles = all_excitations(occupation)
    raw: list[tuple[tuple, PauliSum]] = []
    for i, a in singles:
        raw.append(((i, a), excitation_generator(n, [(i, True), (a, False)])))
    for i, j, a, b in doubles:
        ops = [(i, True), (j, True), (b, False), (a, False)]
        raw.append(((i, j, a, b), excitation_generator(n, ops)))

    if subspace is None:
        reference = _reference_vector(occupation, n)
        kept = [(key, g) for key, g in raw if len(g)]
        n_circ = n
    else:
        reference = _subspace_reference(occupation, subspace)
        kept = []
        for key, g in raw:
            reduced = project(g, subspace.rotations, subspace.fixed).reduced
            if len(reduced):
                kept.append((key, reduced))
        n_circ = n - len(subspace.fixed)

    if not kept:
        raise ContractViolation(
            "no coupled-cluster excitations survive in this subspace; "
            "increase the retained qubit count"
        )

    kept_singles = tuple(key for key, _ in kept if len(key) == 2)
    kept_doubles = tuple(key for key, _ in kept if len(key) == 4)
    generators = tuple(g for _, g in kept)
    pool = ExcitationPool(kept_singles, kept_doubles, generators)

    # The unitary is the operator product exp(t_0 G_0) exp(t_1 G_1) ...
    # in lexicographic excitation order; matrix products act right-to-left,
    # so the highest slot is emitted (applied) first.  Slot numbering stays
    # lexicographic either way.
    gates: list = []
    for slot in range(len(generators) - 1, -1, -1):
        g = generators[slot]
        terms = list(g.terms())
        for a_idx in range(len(terms)):
            for b_idx in range(a_idx + 1, len(terms)):
                if not terms[a_idx][0].commutes(terms[b_idx][0]):
                    raise ContractViolation(
                        "excitation generator terms must mutually commute"
                    )
        for op, coeff in terms:
            if abs(coeff.imag) > 1e-10:
                raise ContractViolation("generator coefficients must be real")
            # exp(i theta c P) == exp(-i (-2 theta c)/2 P)
            gates.append(
                PauliExponential(op.bare(), slot, -2.0 * (coeff / op.phase).real, 0.0)
            )
    circuit = Circuit(
        n_qubits=n_circ,
        gates=gates,
        n_parameters=len(generators),
        reference=reference,
        tags={
            "kind": "uccsd",
            "singles": len(kept_singles),
            "doubles": len(kept_doubles),
        },
    )
    circuit.validate()
    return circuit, pool


# ---------------------------------------------------------------------------
# hardware-efficient families
# ---------------------------------------------------------------------------


def build_ryrz(
    n_qubits: int,
    n_repeats: int,
    entangler: str = "full",
    reference=None,
) -> Circuit:
    """Ry+Rz rotation layers separated by CNOT entangling blocks.

    Every layer applies Ry then Rz to each qubit; a closing rotation
    layer follows the last entangling block, so the parameter count is
    2 * n_qubits * (n_repeats + 1).  ``entangler`` picks the CNOT
    pattern: "full" couples every ordered pair i < j, "chain" couples
    nearest neighbours only.
    """
    if n_qubits < 1:
        raise DimensionError("circuit needs at least one qubit")
    if n_repeats < 1:
        raise ContractViolation("n_repeats must be at least 1")
    if entangler not in ("full", "chain"):
        raise ContractViolation(f"unknown entangler pattern {entangler!r}")
    gates: list = []
    slot = 0

    def rotation_layer():
        nonlocal slot
        for q in range(n_qubits):
            gates.append(Rotation("y", q, slot))
            gates.append(Rotation("z", q, slot + 1))
            slot += 2

    for _ in range(n_repeats):
        rotation_layer()
        if entangler == "full":
            for i in range(n_qubits):
                for j in range(i + 1, n_qubits):
                    gates.append(CNot(i, j))
        else:
            for i in range(n_qubits - 1):
                gates.append(CNot(i, i + 1))
    rotation_layer()

    circuit = Circuit(
        n_qubits=n_qubits,
        gates=gates,
        n_parameters=slot,
        reference=None if reference is None else _reference_vector(reference, n_qubits),
        tags={"kind": "ryrz", "n_repeats": n_repeats, "entangler": entangler},
    )
    circuit.validate()
    return circuit


def nblock_unitary(tx: float, ty: float, tz: float) -> np.ndarray:
    """Dense exp(i(tx XX + ty YY + tz ZZ)) on two qubits.

    The three generators commute, so the product of the three
    single-generator exponentials is exact.
    """
    out = np.eye(4, dtype=complex)
    for label, t in (("XX", tx), ("YY", ty), ("ZZ", tz)):
        p = PauliString.from_label(label).to_matrix()
        out = (math.cos(t) * np.eye(4) + 1j * math.sin(t) * p) @ out
    return out


def nblock_decomposition(
    first: int,
    second: int,
    slot_x: int | None,
    slot_y: int | None,
    slot_z: int | None,
    offset_x: float = 0.0,
    offset_y: float = 0.0,
    offset_z: float = 0.0,
) -> list:
    """Three-CNOT realization of the exp(i(tx XX + ty YY + tz ZZ)) block.

    In the Bell basis the block is diagonal with phase generator
    tx Z(first) + tz Z(second) - ty Z(first)Z(second).  Conjugating by the
    Bell-basis circuit and folding one CNOT of the middle ZZ rotation
    through the basis change (CX * H = H * CZ, and CZ * CX equals a CNOT
    dressed with S gates) lands on exactly three CNOTs.  The emitted
    sequence equals the block times a fixed global phase, which drops out
    of every state-vector measurement.
    """
    if first == second:
        raise ContractViolation("block qubits must differ")
    h_first = [
        Rotation("z", first, None, 0.0, math.pi),
        Rotation("y", first, None, 0.0, _HALF_PI),
    ]
    gates: list = [
        Rotation("z", second, None, 0.0, -_HALF_PI),
        CNot(first, second),
        Rotation("z", second, None, 0.0, _HALF_PI),
        Rotation("z", first, None, 0.0, _HALF_PI),
        *h_first,
        Rotation("z", first, slot_y, 2.0, 2.0 * offset_y),
        CNot(second, first),
        Rotation("z", first, slot_x, -2.0, -2.0 * offset_x),
        Rotation("z", second, slot_z, -2.0, -2.0 * offset_z),
        *h_first,
        CNot(first, second),
    ]
    return gates


def build_nblock(
    n_qubits: int,
    n_repeats: int,
    reference=None,
    decompose: bool = False,
) -> Circuit:
    """Brick-wall layers of three-angle blocks.

    Each layer places blocks on the even pairs (0,1), (2,3), ... and then
    the odd pairs (1,2), (3,4), ..., three fresh parameters per block.
    With ``decompose`` the blocks are emitted as their 3-CNOT gate
    sequence instead of composite block gates; both forms produce the
    same state up to global phase.
    """
    if n_qubits < 2:
        raise DimensionError("block layers need at least two qubits")
    if n_repeats < 1:
        raise ContractViolation("n_repeats must be at least 1")
    gates: list = []
    slot = 0
    for _ in range(n_repeats):
        pairs = [(q, q + 1) for q in range(0, n_qubits - 1, 2)]
        pairs += [(q, q + 1) for q in range(1, n_qubits - 1, 2)]
        for a, b in pairs:
            if decompose:
                gates.extend(nblock_decomposition(a, b, slot, slot + 1, slot + 2))
            else:
                gates.append(NBlock(a, b, slot, slot + 1, slot + 2))
            slot += 3
    circuit = Circuit(
        n_qubits=n_qubits,
        gates=gates,
        n_parameters=slot,
        reference=None if reference is None else _reference_vector(reference, n_qubits),
        tags={"kind": "nblock", "n_repeats": n_repeats, "decomposed": decompose},
    )
    circuit.validate()
    return circuit

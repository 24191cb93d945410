"""Exact statevector simulator against dense-matrix gate products."""

import math

import numpy as np
import pytest
import scipy.linalg

import reference as ref
from qcontext.errors import ContractViolation, DimensionError
from qcontext.paulis import PauliString, PauliSum
from qcontext.statevector import (
    CNot,
    Circuit,
    NBlock,
    PauliExponential,
    Rotation,
    Statevector,
    apply,
    apply_pauli_exponential,
    basis_index,
    expectation,
    expectation_gradient,
    overlap,
    overlap_sq,
)


def pexp_dense(op: PauliString, angle: float) -> np.ndarray:
    return scipy.linalg.expm(-0.5j * angle * op.phase * ref.dense_pauli(op.label()))


def single_label(n: int, q: int, letter: str) -> str:
    return "".join(letter if i == q else "I" for i in range(n))


def pair_label(n: int, a: int, b: int, letter: str) -> str:
    return "".join(letter if i in (a, b) else "I" for i in range(n))


def circuit_unitary(circuit: Circuit, params) -> np.ndarray:
    """Gate-by-gate dense product, first gate applied first."""
    n = circuit.n_qubits
    u = np.eye(2**n, dtype=complex)
    for g in circuit.gates:
        if isinstance(g, Rotation):
            angle = g.offset if g.slot is None else g.scale * params[g.slot] + g.offset
            gu = ref.pauli_exponential_matrix(single_label(n, g.qubit, g.axis.upper()), angle)
        elif isinstance(g, CNot):
            gu = ref.cnot_matrix(n, g.control, g.target)
        elif isinstance(g, NBlock):
            def angle_of(slot, off):
                return off if slot is None else params[slot] + off
            gen = ref.dense_sum(
                n,
                [
                    (pair_label(n, g.first, g.second, "X"), angle_of(g.slot_x, g.offset_x)),
                    (pair_label(n, g.first, g.second, "Y"), angle_of(g.slot_y, g.offset_y)),
                    (pair_label(n, g.first, g.second, "Z"), angle_of(g.slot_z, g.offset_z)),
                ],
            )
            gu = scipy.linalg.expm(1j * gen)
        elif isinstance(g, PauliExponential):
            angle = g.offset if g.slot is None else g.scale * params[g.slot] + g.offset
            gu = pexp_dense(g.pauli, angle)
        else:  # pragma: no cover
            raise AssertionError(type(g))
        u = gu @ u
    return u


def build_random_circuit(rng, n, n_params, n_gates):
    gates = []
    for _ in range(n_gates):
        kind = rng.integers(4)
        if kind == 0:
            gates.append(
                Rotation(
                    axis=str(rng.choice(["x", "y", "z"])),
                    qubit=int(rng.integers(n)),
                    slot=int(rng.integers(n_params)),
                    scale=float(rng.choice([1.0, -1.0, 0.5])),
                    offset=float(rng.uniform(-1, 1)),
                )
            )
        elif kind == 1:
            c, t = rng.choice(n, size=2, replace=False)
            gates.append(CNot(control=int(c), target=int(t)))
        elif kind == 2:
            a, b = rng.choice(n, size=2, replace=False)
            gates.append(
                NBlock(
                    first=int(a),
                    second=int(b),
                    slot_x=int(rng.integers(n_params)),
                    slot_y=int(rng.integers(n_params)),
                    slot_z=None,
                    offset_z=float(rng.uniform(-1, 1)),
                )
            )
        else:
            label = "".join(rng.choice(list("IXYZ"), size=n))
            if label == "I" * n:
                label = "Z" + label[1:]
            gates.append(
                PauliExponential(
                    pauli=PauliString.from_label(label),
                    slot=int(rng.integers(n_params)),
                    scale=float(rng.choice([1.0, 2.0, -1.0])),
                )
            )
    return Circuit(n_qubits=n, gates=gates, n_parameters=n_params)


def test_basis_index_orientation():
    # qubit 0 is the leftmost character and the least significant bit
    assert basis_index("10") == 1
    assert basis_index("01") == 2
    assert basis_index("1100") == 3
    with pytest.raises(ContractViolation):
        basis_index("10a")


def test_statevector_constructors():
    z = Statevector.zero_state(3)
    assert z.amplitudes[0] == 1.0 and np.linalg.norm(z.amplitudes) == 1.0
    s = Statevector.from_bitstring("011")
    assert s.n_qubits == 3
    assert s.amplitudes[basis_index("011")] == 1.0
    with pytest.raises(DimensionError):
        Statevector(np.ones(3))


def test_apply_matches_dense_unitary(rng):
    for trial in range(6):
        n, n_params = 4, 5
        circuit = build_random_circuit(rng, n, n_params, n_gates=12)
        params = rng.uniform(-math.pi, math.pi, size=n_params)
        psi0 = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        psi0 /= np.linalg.norm(psi0)
        got = apply(circuit, params, psi0)
        want = circuit_unitary(circuit, params) @ psi0
        assert np.linalg.norm(got - want) < 1e-10


def test_apply_defaults_to_reference_then_zero():
    n = 2
    gate = Rotation(axis="x", qubit=0, slot=None, offset=math.pi)
    refstate = Statevector.from_bitstring("01").amplitudes
    c1 = Circuit(n_qubits=n, gates=[gate], reference=refstate)
    c2 = Circuit(n_qubits=n, gates=[gate])
    out1 = apply(c1, [])
    out2 = apply(c2, [])
    # X applied to qubit 0 (up to phase) in both cases, different start states
    assert abs(abs(out1[basis_index("11")]) - 1.0) < 1e-12
    assert abs(abs(out2[basis_index("10")]) - 1.0) < 1e-12


def test_pauli_exponential_matches_expm(rng):
    for _ in range(10):
        n = int(rng.integers(1, 4))
        label = "".join(rng.choice(list("IXYZ"), size=n))
        if label == "I" * n:
            continue
        phase = float(rng.choice([1.0, -1.0]))
        op = PauliString.from_label(label, phase=phase)
        theta = float(rng.uniform(-6, 6))
        psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        psi /= np.linalg.norm(psi)
        got = apply_pauli_exponential(psi, op, theta)
        want = pexp_dense(op, theta) @ psi
        assert np.linalg.norm(got - want) < 1e-10


def test_nblock_equals_heisenberg_exponential(rng):
    for _ in range(10):
        tx, ty, tz = rng.uniform(-2, 2, size=3)
        gate = NBlock(first=0, second=1, slot_x=0, slot_y=1, slot_z=2)
        circuit = Circuit(n_qubits=2, gates=[gate], n_parameters=3)
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        got = apply(circuit, [tx, ty, tz], psi)
        want = ref.heisenberg_block_matrix(tx, ty, tz) @ psi
        assert np.linalg.norm(got - want) < 1e-10


def test_expectation_matches_dense(rng):
    n = 3
    pairs = [
        ("".join(rng.choice(list("IXYZ"), size=n)), float(rng.normal()))
        for _ in range(10)
    ]
    h = PauliSum.from_terms(
        n, [(PauliString.from_label(lbl), c) for lbl, c in pairs]
    )
    psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    psi /= np.linalg.norm(psi)
    want = float(np.real(np.conj(psi) @ ref.dense_sum(n, pairs) @ psi))
    assert abs(expectation(h, psi) - want) < 1e-10


def test_expectation_rejects_non_hermitian():
    h = PauliSum.from_terms(1, [(PauliString.from_label("X"), 1j)])
    with pytest.raises(ContractViolation):
        expectation(h, Statevector.zero_state(1).amplitudes)


def test_overlap_and_overlap_sq(rng):
    a = rng.normal(size=8) + 1j * rng.normal(size=8)
    b = rng.normal(size=8) + 1j * rng.normal(size=8)
    assert abs(overlap(a, b) - np.vdot(a, b)) < 1e-12
    assert overlap_sq(a, b) == pytest.approx(abs(np.vdot(a, b)) ** 2, rel=1e-12)
    with pytest.raises(DimensionError):
        overlap(a, b[:4])


def test_gradient_matches_finite_differences(rng):
    n, n_params = 3, 4
    circuit = build_random_circuit(rng, n, n_params, n_gates=8)
    pairs = [
        ("".join(rng.choice(list("IXYZ"), size=n)), float(rng.normal()))
        for _ in range(6)
    ]
    h = PauliSum.from_terms(
        n, [(PauliString.from_label(lbl), c) for lbl, c in pairs]
    )
    params = rng.uniform(-1, 1, size=n_params)

    def energy(p):
        return expectation(h, apply(circuit, p))

    grad = expectation_gradient(circuit, h, params)
    step = 1e-5
    for j in range(n_params):
        up, down = params.copy(), params.copy()
        up[j] += step
        down[j] -= step
        fd = (energy(up) - energy(down)) / (2 * step)
        assert abs(grad[j] - fd) < 1e-6


def test_validate_rejects_bad_circuits():
    with pytest.raises(ContractViolation):
        Circuit(n_qubits=2, gates=[CNot(control=1, target=1)]).validate()
    with pytest.raises(DimensionError):
        Circuit(n_qubits=2, gates=[Rotation(axis="x", qubit=2, slot=None)]).validate()
    with pytest.raises(ContractViolation):
        Circuit(
            n_qubits=2,
            gates=[Rotation(axis="x", qubit=0, slot=3)],
            n_parameters=2,
        ).validate()
    with pytest.raises(ContractViolation):
        Circuit(
            n_qubits=2,
            gates=[NBlock(first=0, second=0, slot_x=None, slot_y=None, slot_z=None)],
        ).validate()


def test_structural_metrics():
    gates = [
        Rotation(axis="y", qubit=0, slot=0),
        CNot(control=0, target=1),
        NBlock(first=1, second=2, slot_x=1, slot_y=2, slot_z=None),
        PauliExponential(pauli=PauliString.from_label("XYZ"), slot=3),
    ]
    c = Circuit(n_qubits=3, gates=gates, n_parameters=4)
    # 1 explicit CNOT + 3 per N-block + 2*(weight-1) for the exponential
    assert c.cnot_count() == 1 + 3 + 4
    # layers: Ry(q0)=1; CNOT(q0,q1)=2; NBlock(q1,q2) spans 3..5; pexp all qubits 6
    assert c.depth() == 6


def test_angle_zero_gates_are_exact_identity():
    c = Circuit(
        n_qubits=1,
        gates=[Rotation(axis="z", qubit=0, slot=0, scale=1.0, offset=0.0)],
        n_parameters=1,
    )
    psi = Statevector.zero_state(1).amplitudes
    out = apply(c, [0.0], psi)
    assert np.array_equal(out, psi)

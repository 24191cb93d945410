"""Exact statevector simulation of parameterized circuits.

Conventions
-----------
* Basis-state index b encodes qubit q at bit q, so qubit 0 is the least
  significant bit and a bitstring "1100..." (qubit 0 leftmost, matching the
  Pauli label convention) maps to index 1*2^0 + 1*2^1.
* Rotation gates follow exp(-i*angle/2 * P): Rx(t) = exp(-i t X / 2), and a
  Pauli-exponential gate with generator P applies exp(-i*angle/2 * P).
* Parameterized gates bind an affine function of one parameter slot:
  angle = scale * params[slot] + offset.  A gate with slot None is fixed.

Every gate is internally lowered to either a CNOT or a Pauli exponential,
which keeps the simulator and the parameter-shift rule on a single code
path.  exp(i(tx XX + ty YY + tz ZZ)) blocks lower to three commuting
two-qubit exponentials, which is exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractViolation, DimensionError
from .paulis import PauliString, PauliSum

_I4 = (1.0 + 0j, 1j, -1.0 + 0j, -1j)


def basis_index(bits: str) -> int:
    """Index of the computational basis state written qubit-0-first."""
    idx = 0
    for q, ch in enumerate(bits):
        if ch == "1":
            idx |= 1 << q
        elif ch != "0":
            raise ContractViolation(f"occupation strings are binary, got {bits!r}")
    return idx


class Statevector:
    """Thin wrapper tying an amplitude vector to its qubit count."""

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, amplitudes: np.ndarray):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        n = int(round(math.log2(amplitudes.size)))
        if 1 << n != amplitudes.size:
            raise DimensionError("amplitude vector length must be a power of two")
        self.n_qubits = n
        self.amplitudes = amplitudes

    @classmethod
    def zero_state(cls, n: int) -> "Statevector":
        v = np.zeros(1 << n, dtype=complex)
        v[0] = 1.0
        return cls(v)

    @classmethod
    def from_bitstring(cls, bits: str) -> "Statevector":
        v = np.zeros(1 << len(bits), dtype=complex)
        v[basis_index(bits)] = 1.0
        return cls(v)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.amplitudes
        return self.amplitudes.astype(dtype)


def _as_array(state, n: int) -> np.ndarray:
    v = np.asarray(state, dtype=complex)
    if v.shape != (1 << n,):
        raise DimensionError(f"state has {v.size} amplitudes, expected {1 << n}")
    return v


# --------------------------------------------------------------------------
# gate descriptors
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Rotation:
    """Single-qubit rotation exp(-i*angle/2 * sigma_axis)."""

    axis: str  # 'x', 'y' or 'z'
    qubit: int
    slot: int | None = None
    scale: float = 1.0
    offset: float = 0.0


@dataclass(frozen=True)
class CNot:
    control: int
    target: int


@dataclass(frozen=True)
class NBlock:
    """Two-qubit block exp(i(tx XX + ty YY + tz ZZ)) on (first, second)."""

    first: int
    second: int
    slot_x: int | None
    slot_y: int | None
    slot_z: int | None
    offset_x: float = 0.0
    offset_y: float = 0.0
    offset_z: float = 0.0


@dataclass(frozen=True)
class PauliExponential:
    """exp(-i*angle/2 * P) for a Hermitian Pauli string P."""

    pauli: PauliString
    slot: int | None = None
    scale: float = 1.0
    offset: float = 0.0


Gate = Rotation | CNot | NBlock | PauliExponential

_AXIS_BITS = {"x": (1, 0), "y": (1, 1), "z": (0, 1)}


def _single_qubit_pauli(n: int, q: int, axis: str) -> PauliString:
    xb, zb = _AXIS_BITS[axis]
    x = xb << q
    z = zb << q
    return PauliString(n, x, z, (xb & zb) & 3)


def _pair_pauli(n: int, a: int, b: int, axis: str) -> PauliString:
    xb, zb = _AXIS_BITS[axis]
    x = (xb << a) | (xb << b)
    z = (zb << a) | (zb << b)
    return PauliString(n, x, z, (2 * (xb & zb)) & 3)


# internal lowered representation, with the gate action precomputed as
# index/prefactor arrays so the apply loop is pure vector work:
#   ("cnot", c, t, sigma)                      out = psi[sigma]
#   ("pexp", pauli, slot, scale, offset, perm, pref)
#       P|psi> = pref * psi[perm], so the exponential needs one gather
#       and two axpy-style passes per application.


def _lower(circuit: "Circuit") -> list[tuple]:
    ops: list[tuple] = []
    n = circuit.n_qubits
    idx = np.arange(1 << n, dtype=np.uint64)

    def pexp(pauli: PauliString, slot, scale: float, offset: float) -> tuple:
        perm = (idx ^ np.uint64(pauli.x)).astype(np.intp)
        signs = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(pauli.z)) & np.uint64(1)).astype(float)
        pref = (_I4[pauli.s] * signs)[perm]
        return ("pexp", pauli, slot, scale, offset, perm, pref)

    for g in circuit.gates:
        if isinstance(g, Rotation):
            if g.axis not in _AXIS_BITS:
                raise ContractViolation(f"unknown rotation axis {g.axis!r}")
            ops.append(pexp(_single_qubit_pauli(n, g.qubit, g.axis), g.slot, g.scale, g.offset))
        elif isinstance(g, CNot):
            flip = ((idx >> np.uint64(g.control)) & np.uint64(1)) << np.uint64(g.target)
            ops.append(("cnot", g.control, g.target, (idx ^ flip).astype(np.intp)))
        elif isinstance(g, NBlock):
            # exp(i t P) = exp(-i (-2t)/2 P); the three generators commute.
            for axis, slot, off in (
                ("x", g.slot_x, g.offset_x),
                ("y", g.slot_y, g.offset_y),
                ("z", g.slot_z, g.offset_z),
            ):
                ops.append(pexp(_pair_pauli(n, g.first, g.second, axis), slot, -2.0, -2.0 * off))
        elif isinstance(g, PauliExponential):
            if g.pauli.n != n:
                raise DimensionError("gate generator qubit count does not match circuit")
            if not g.pauli.is_hermitian:
                raise ContractViolation("Pauli-exponential generator must be Hermitian")
            ops.append(pexp(g.pauli, g.slot, g.scale, g.offset))
        else:
            raise ContractViolation(f"unknown gate type {type(g).__name__}")
    return ops


@dataclass
class Circuit:
    """An ordered gate list over a fixed number of parameter slots.

    ``reference`` holds the state the circuit is applied to when the caller
    does not supply one; None means |0...0>.
    """

    n_qubits: int
    gates: list[Gate] = field(default_factory=list)
    n_parameters: int = 0
    reference: np.ndarray | None = None
    tags: dict = field(default_factory=dict)

    def __post_init__(self):
        self._lowered = None

    def lowered(self) -> list[tuple]:
        if self._lowered is None:
            self.validate()
            self._lowered = _lower(self)
        return self._lowered

    def validate(self) -> None:
        for g in self.gates:
            slots: Iterable[int | None]
            if isinstance(g, Rotation):
                slots = (g.slot,)
                qubits = (g.qubit,)
            elif isinstance(g, CNot):
                slots = ()
                qubits = (g.control, g.target)
                if g.control == g.target:
                    raise ContractViolation("CNOT control and target must differ")
            elif isinstance(g, NBlock):
                slots = (g.slot_x, g.slot_y, g.slot_z)
                qubits = (g.first, g.second)
                if g.first == g.second:
                    raise ContractViolation("N-block qubits must differ")
            elif isinstance(g, PauliExponential):
                slots = (g.slot,)
                qubits = tuple(g.pauli.support())
            else:
                raise ContractViolation(f"unknown gate type {type(g).__name__}")
            for q in qubits:
                if not 0 <= q < self.n_qubits:
                    raise DimensionError(f"gate qubit {q} outside 0..{self.n_qubits - 1}")
            for s in slots:
                if s is not None and not 0 <= s < self.n_parameters:
                    raise ContractViolation(f"parameter slot {s} out of range")
        if self.reference is not None:
            _as_array(self.reference, self.n_qubits)

    # -- structural metrics -------------------------------------------

    def cnot_count(self) -> int:
        """Entangling cost with each N-block counted at its 3-CNOT synthesis."""
        total = 0
        for g in self.gates:
            if isinstance(g, CNot):
                total += 1
            elif isinstance(g, NBlock):
                total += 3
            elif isinstance(g, PauliExponential) and g.pauli.weight() > 1:
                # ladder synthesis of a weight-w exponential
                total += 2 * (g.pauli.weight() - 1)
        return total

    def depth(self) -> int:
        """Greedy layering depth; N-blocks occupy 3 layers on their pair."""
        level = [0] * self.n_qubits
        for g in self.gates:
            if isinstance(g, Rotation):
                qs, cost = (g.qubit,), 1
            elif isinstance(g, CNot):
                qs, cost = (g.control, g.target), 1
            elif isinstance(g, NBlock):
                qs, cost = (g.first, g.second), 3
            else:
                qs, cost = tuple(g.pauli.support()), 1
                if not qs:
                    continue
            start = max(level[q] for q in qs)
            for q in qs:
                level[q] = start + cost
        return max(level, default=0)

    def to_json_dict(self) -> dict:
        gates = []
        for g in self.gates:
            if isinstance(g, Rotation):
                gates.append({"gate": f"r{g.axis}", "qubit": g.qubit, "slot": g.slot,
                              "scale": g.scale, "offset": g.offset})
            elif isinstance(g, CNot):
                gates.append({"gate": "cnot", "control": g.control, "target": g.target})
            elif isinstance(g, NBlock):
                gates.append({"gate": "nblock", "qubits": [g.first, g.second],
                              "slots": [g.slot_x, g.slot_y, g.slot_z]})
            else:
                gates.append({"gate": "pauli_exp", "pauli": g.pauli.label(),
                              "slot": g.slot, "scale": g.scale, "offset": g.offset})
        ref = None
        if self.reference is not None:
            v = np.asarray(self.reference)
            hits = np.flatnonzero(np.abs(v) > 1e-12)
            if hits.size == 1 and abs(v[hits[0]] - 1.0) < 1e-12:
                ref = {"kind": "basis", "index": int(hits[0])}
            else:
                ref = {"kind": "amplitudes"}
        return {
            "n_qubits": self.n_qubits,
            "n_parameters": self.n_parameters,
            "reference": ref,
            "gates": gates,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


# --------------------------------------------------------------------------
# state evolution
# --------------------------------------------------------------------------


def apply_pauli(pauli: PauliString, state) -> np.ndarray:
    """P|psi> computed from the bitmask representation."""
    psi = _as_array(state, pauli.n)
    idx = np.arange(psi.size, dtype=np.uint64)
    z = np.uint64(pauli.z)
    x = np.uint64(pauli.x)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & z) & np.uint64(1)).astype(float)
    out = np.empty_like(psi)
    out[idx ^ x] = _I4[pauli.s] * signs * psi
    return out


def apply_pauli_exponential(state, pauli: PauliString, angle: float) -> np.ndarray:
    """exp(-i*angle/2 * P)|psi> for Hermitian P, applied amplitude-pairwise."""
    if not pauli.is_hermitian:
        raise ContractViolation("exponential generator must be Hermitian")
    psi = _as_array(state, pauli.n)
    c = math.cos(angle / 2.0)
    s = math.sin(angle / 2.0)
    if s == 0.0:
        return psi * c  # c is exactly +-1 here
    return c * psi + (-1j * s) * apply_pauli(pauli, psi)


def _apply_cnot(psi: np.ndarray, control: int, target: int) -> np.ndarray:
    idx = np.arange(psi.size, dtype=np.uint64)
    sel = (idx >> np.uint64(control)) & np.uint64(1) == 1
    out = psi.copy()
    out[idx[sel]] = psi[idx[sel] ^ np.uint64(1 << target)]
    return out


def apply(circuit: Circuit, params: Sequence[float], state=None) -> np.ndarray:
    """Run the circuit on ``state`` (default: its reference, else |0...0>)."""
    params = np.asarray(params, dtype=float)
    if params.shape != (circuit.n_parameters,):
        raise ContractViolation(
            f"expected {circuit.n_parameters} parameters, got {params.shape}"
        )
    if state is None:
        state = circuit.reference
    if state is None:
        psi = Statevector.zero_state(circuit.n_qubits).amplitudes
    else:
        psi = _as_array(state, circuit.n_qubits).copy()
    for op in circuit.lowered():
        if op[0] == "cnot":
            psi = psi[op[3]]
        else:
            _, _, slot, scale, offset, perm, pref = op
            angle = offset if slot is None else scale * params[slot] + offset
            if angle != 0.0:
                c = math.cos(angle / 2.0)
                s = math.sin(angle / 2.0)
                if s == 0.0:
                    psi = psi * c  # c is exactly +-1 here
                else:
                    psi = c * psi + (-1j * s) * (pref * psi[perm])
    return psi


# --------------------------------------------------------------------------
# measurement-side helpers
# --------------------------------------------------------------------------


def expectation(h: PauliSum, state) -> float:
    """<psi|H|psi> for Hermitian H; raises if the residual imaginary part
    exceeds 1e-10."""
    if not h.is_hermitian():
        raise ContractViolation("expectation requires a Hermitian operator")
    psi = _as_array(state, h.n)
    idx = np.arange(psi.size, dtype=np.uint64)
    conj = np.conj(psi)
    total = 0.0 + 0j
    xs, zs, ny, cs = h.term_arrays_full()
    for x, z, k, c in zip(xs, zs, ny, cs):
        signs = 1.0 - 2.0 * (np.bitwise_count(idx & z) & np.uint64(1)).astype(float)
        total += c * _I4[int(k) & 3] * np.dot(conj[idx ^ x], signs * psi)
    if abs(total.imag) > 1e-10:
        raise ContractViolation(f"imaginary expectation residue {total.imag:.3e}")
    return float(total.real)


def overlap(a, b) -> complex:
    va = np.asarray(a, dtype=complex)
    vb = np.asarray(b, dtype=complex)
    if va.shape != vb.shape:
        raise DimensionError("overlap of states with different qubit counts")
    return complex(np.vdot(va, vb))


def overlap_sq(a, b) -> float:
    return abs(overlap(a, b)) ** 2


def expectation_gradient(
    circuit: Circuit, h: PauliSum, params: Sequence[float], state=None
) -> np.ndarray:
    """Analytic gradient of expectation(h, apply(circuit, params, state)).

    Uses the parameter-shift rule per lowered rotation: every parameterized
    gate is a Pauli exponential exp(-i*theta/2*P) with involutory P, so
    d<H>/dtheta is (E(+pi/2 shift) - E(-pi/2 shift)) / 2 per gate, scaled by
    the gate's affine slope.
    """
    params = np.asarray(params, dtype=float)
    base_ops = circuit.lowered()
    grads = np.zeros(circuit.n_parameters)

    def run_with_offset(gate_idx: int, delta: float) -> float:
        psi = state
        if psi is None:
            psi = circuit.reference
        psi = (
            Statevector.zero_state(circuit.n_qubits).amplitudes
            if psi is None
            else _as_array(psi, circuit.n_qubits).copy()
        )
        for j, op in enumerate(base_ops):
            if op[0] == "cnot":
                psi = _apply_cnot(psi, op[1], op[2])
            else:
                _, pauli, slot, scale, offset = op[:5]
                angle = offset if slot is None else scale * params[slot] + offset
                if j == gate_idx:
                    angle += delta
                if angle != 0.0:
                    psi = apply_pauli_exponential(psi, pauli, angle)
        return expectation(h, psi)

    for j, op in enumerate(base_ops):
        if op[0] != "pexp" or op[2] is None:
            continue
        slot, scale = op[2], op[3]
        plus = run_with_offset(j, math.pi / 2)
        minus = run_with_offset(j, -math.pi / 2)
        grads[slot] += scale * (plus - minus) / 2.0
    return grads

"""Symplectic representation of Pauli strings and real-coefficient Pauli sums.

A Pauli string on n qubits is stored as a pair of bitmasks (x, z) plus a
power of i.  Bit q of each mask refers to qubit q, and the operator is

    i**s * (X**x) * (Z**z)

in the "XZ product" convention, i.e. the X factors stand to the left of the
Z factors on every qubit.  The single-qubit letters then read off as

    (x_q, z_q) = (0,0) -> I,  (1,0) -> X,  (0,1) -> Z,  (1,1) -> XZ = -iY

so a string whose letters include k Ys carries an internal exponent shift of
k relative to the conventional tensor-of-sigmas reading (Y = i*X*Z).  The
user-facing ``phase`` property reports the conventional phase, which is what
tests and serialization use.

Text labels run qubit 0 leftmost: "XIZ" acts with X on qubit 0 and Z on
qubit 2.  Basis-state indices used by the dense helpers put qubit q at bit
q of the index (qubit 0 is the least significant bit).
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import ContractViolation, DimensionError

_HALF_PI = math.pi / 2.0
_CLIFFORD_ATOL = 1e-12

# Coefficients smaller than this are dropped when sums are normalized.
PRUNE_THRESHOLD = 1e-12

_LETTER_TO_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_TO_LETTER = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}

_SIGMA = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_PHASE_VALUES = (1.0 + 0j, 1j, -1.0 + 0j, -1j)


def _phase_to_exponent(phase: complex) -> int:
    for k, v in enumerate(_PHASE_VALUES):
        if abs(phase - v) < 1e-9:
            return k
    raise ContractViolation(f"phase must be one of +1, +i, -1, -i, got {phase!r}")


class PauliString:
    """An n-qubit Pauli operator with an exact phase in {1, i, -1, -i}."""

    __slots__ = ("n", "x", "z", "s")

    def __init__(self, n: int, x: int, z: int, s: int = 0):
        if n < 0:
            raise DimensionError("qubit count must be nonnegative")
        mask = (1 << n) - 1
        if x & ~mask or z & ~mask:
            raise DimensionError("bitmask exceeds qubit count")
        self.n = n
        self.x = x
        self.z = z
        self.s = s & 3

    # -- construction -------------------------------------------------

    @classmethod
    def from_label(cls, label: str, phase: complex = 1.0) -> "PauliString":
        """Build from a text label like "XIZY" (qubit 0 is the leftmost letter)."""
        x = z = 0
        for q, ch in enumerate(label):
            try:
                xb, zb = _LETTER_TO_BITS[ch]
            except KeyError:
                raise ContractViolation(f"invalid Pauli letter {ch!r} in {label!r}")
            x |= xb << q
            z |= zb << q
        n = len(label)
        ny = (x & z).bit_count()
        s = (_phase_to_exponent(phase) + ny) & 3
        return cls(n, x, z, s)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0, 0)

    # -- basic queries -------------------------------------------------

    @property
    def phase(self) -> complex:
        """Phase in the tensor-of-sigmas convention (Y counts as Y, not iXZ)."""
        ny = (self.x & self.z).bit_count()
        return _PHASE_VALUES[(self.s - ny) & 3]

    @property
    def is_hermitian(self) -> bool:
        ny = (self.x & self.z).bit_count()
        return (self.s - ny) % 2 == 0

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def label(self) -> str:
        return "".join(
            _BITS_TO_LETTER[((self.x >> q) & 1, (self.z >> q) & 1)]
            for q in range(self.n)
        )

    def weight(self) -> int:
        """Number of non-identity tensor factors."""
        return (self.x | self.z).bit_count()

    def support(self) -> list[int]:
        m = self.x | self.z
        return [q for q in range(self.n) if (m >> q) & 1]

    def letter_at(self, q: int) -> str:
        return _BITS_TO_LETTER[((self.x >> q) & 1, (self.z >> q) & 1)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PauliString)
            and self.n == other.n
            and self.x == other.x
            and self.z == other.z
            and self.s == other.s
        )

    def __hash__(self) -> int:
        return hash((self.n, self.x, self.z, self.s))

    def __repr__(self) -> str:
        ph = {1: "+", 1j: "+i", -1: "-", -1j: "-i"}[
            _PHASE_VALUES[(self.s - (self.x & self.z).bit_count()) & 3]
        ]
        return f"PauliString({ph}{self.label()})"

    # -- algebra -------------------------------------------------------

    def multiply(self, other: "PauliString") -> "PauliString":
        """Exact operator product self * other."""
        if self.n != other.n:
            raise DimensionError("cannot multiply strings on different qubit counts")
        # Moving other's X block left past self's Z block flips a sign per overlap.
        s = (self.s + other.s + 2 * (self.z & other.x).bit_count()) & 3
        return PauliString(self.n, self.x ^ other.x, self.z ^ other.z, s)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return self.multiply(other)

    def commutes(self, other: "PauliString") -> bool:
        if self.n != other.n:
            raise DimensionError("cannot compare strings on different qubit counts")
        anti = (self.x & other.z).bit_count() + (self.z & other.x).bit_count()
        return anti % 2 == 0

    def bare(self) -> "PauliString":
        """The same letters with phase +1."""
        ny = (self.x & self.z).bit_count()
        return PauliString(self.n, self.x, self.z, ny & 3)

    def to_matrix(self) -> np.ndarray:
        """Dense matrix; intended for small n only."""
        if self.n > 12:
            raise DimensionError("dense conversion capped at 12 qubits")
        m = np.array([[1.0 + 0j]])
        # qubit 0 must be the least significant index bit, hence reversed kron order
        for q in range(self.n):
            m = np.kron(_SIGMA[self.letter_at(q)], m)
        return self.phase * m


def commutes(a: PauliString, b: PauliString) -> bool:
    """Symplectic commutation test: True when a and b commute."""
    return a.commutes(b)


def multiply(a: PauliString, b: PauliString) -> PauliString:
    return a.multiply(b)


def _term_sort_key(n: int):
    def key(xz: tuple[int, int]):
        x, z = xz
        zk = "".join("1" if (z >> q) & 1 else "0" for q in range(n))
        xk = "".join("1" if (x >> q) & 1 else "0" for q in range(n))
        return (zk, xk)

    return key


class PauliSum:
    """A complex-linear combination of phase-free Pauli strings.

    Terms are keyed by their (x, z) bitmasks; any phase carried by a
    contributing PauliString is folded into its coefficient, so the stored
    strings are always the conventional I/X/Y/Z letters with coefficient
    out front.  Hermitian sums therefore have real coefficients.
    """

    __slots__ = ("n", "_terms", "_cache")

    def __init__(self, n: int, terms: Mapping[tuple[int, int], complex] | None = None):
        self.n = n
        self._terms: dict[tuple[int, int], complex] = dict(terms) if terms else {}
        self._cache: dict | None = None

    # -- construction -------------------------------------------------

    @classmethod
    def from_terms(
        cls, n: int, terms: Iterable[tuple[PauliString | str, complex]]
    ) -> "PauliSum":
        out = cls(n)
        for op, coeff in terms:
            if isinstance(op, str):
                op = PauliString.from_label(op)
            out._add_string(op, coeff)
        out._prune()
        return out

    @classmethod
    def zero(cls, n: int) -> "PauliSum":
        return cls(n)

    @classmethod
    def from_string(cls, op: PauliString, coeff: complex = 1.0) -> "PauliSum":
        out = cls(op.n)
        out._add_string(op, coeff)
        return out

    def _add_string(self, op: PauliString, coeff: complex) -> None:
        if op.n != self.n:
            raise DimensionError("term qubit count does not match the sum")
        key = (op.x, op.z)
        self._terms[key] = self._terms.get(key, 0.0) + coeff * op.phase
        self._cache = None

    def _prune(self, threshold: float = PRUNE_THRESHOLD) -> None:
        drop = [k for k, c in self._terms.items() if abs(c) <= threshold]
        for k in drop:
            del self._terms[k]
        self._cache = None

    # -- queries -------------------------------------------------------

    def __len__(self) -> int:
        return len(self._terms)

    def num_terms(self) -> int:
        return len(self._terms)

    def terms(self) -> Iterator[tuple[PauliString, complex]]:
        """Iterate (phase-free string, coefficient) in canonical order.

        Canonical order is lexicographic on the z bits then the x bits,
        both read from qubit 0 upward.
        """
        key = _term_sort_key(self.n)
        for x, z in sorted(self._terms, key=key):
            ny = (x & z).bit_count()
            yield PauliString(self.n, x, z, ny & 3), self._terms[(x, z)]

    def coefficient(self, op: PauliString | str) -> complex:
        if isinstance(op, str):
            op = PauliString.from_label(op)
        c = self._terms.get((op.x, op.z), 0.0)
        return c * np.conj(op.phase) if c else 0.0

    @property
    def identity_coefficient(self) -> complex:
        return self._terms.get((0, 0), 0.0)

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        return all(abs(c.imag) <= tol for c in self._terms.values())

    def coefficient_norm(self) -> float:
        """Sum of absolute coefficient values (identity excluded)."""
        return sum(abs(c) for k, c in self._terms.items() if k != (0, 0))

    def squared_coefficient_norm(self) -> float:
        """Sum of squared coefficient magnitudes (identity excluded)."""
        return sum(abs(c) ** 2 for k, c in self._terms.items() if k != (0, 0))

    # -- algebra -------------------------------------------------------

    def _check_n(self, other: "PauliSum") -> None:
        if self.n != other.n:
            raise DimensionError("sums act on different qubit counts")

    def __add__(self, other: "PauliSum") -> "PauliSum":
        self._check_n(other)
        terms = dict(self._terms)
        for k, c in other._terms.items():
            terms[k] = terms.get(k, 0.0) + c
        out = PauliSum(self.n, terms)
        out._prune()
        return out

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (other * -1.0)

    def __mul__(self, scalar: complex) -> "PauliSum":
        return PauliSum(self.n, {k: c * scalar for k, c in self._terms.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "PauliSum") -> "PauliSum":
        """Operator product, expanding all cross terms."""
        self._check_n(other)
        out = PauliSum(self.n)
        for (x1, z1), c1 in self._terms.items():
            a = PauliString(self.n, x1, z1, ((x1 & z1).bit_count()) & 3)
            for (x2, z2), c2 in other._terms.items():
                b = PauliString(self.n, x2, z2, ((x2 & z2).bit_count()) & 3)
                out._add_string(a.multiply(b), c1 * c2)
        out._prune()
        return out

    def add_scaled_identity(self, value: complex) -> "PauliSum":
        terms = dict(self._terms)
        terms[(0, 0)] = terms.get((0, 0), 0.0) + value
        return PauliSum(self.n, terms)

    def without_identity(self) -> "PauliSum":
        terms = {k: c for k, c in self._terms.items() if k != (0, 0)}
        return PauliSum(self.n, terms)

    def real_part(self) -> "PauliSum":
        out = PauliSum(self.n, {k: complex(c.real) for k, c in self._terms.items()})
        out._prune()
        return out

    # -- rotations -----------------------------------------------------

    def conjugate_by_rotation(self, generator: PauliString, angle: float) -> "PauliSum":
        """Return exp(-i*angle/2 * G) * self * exp(+i*angle/2 * G).

        Terms commuting with the generator pass through unchanged; a term P
        that anticommutes maps to cos(angle)*P - i*sin(angle)*(G*P).  At
        angle = +-pi/2 the branch is taken exactly, so Clifford rotations
        send each string to exactly one string.
        """
        if generator.n != self.n:
            raise DimensionError("generator qubit count does not match the sum")
        if not generator.is_hermitian:
            raise ContractViolation("rotation generator must be Hermitian")
        clifford = abs(abs(angle) - _HALF_PI) < _CLIFFORD_ATOL
        if clifford:
            cos_a = 0.0
            sin_a = 1.0 if angle > 0 else -1.0
        else:
            cos_a = math.cos(angle)
            sin_a = math.sin(angle)
        out = PauliSum(self.n)
        gx, gz = generator.x, generator.z
        for (x, z), c in self._terms.items():
            anti = ((gx & z).bit_count() + (gz & x).bit_count()) % 2
            if not anti:
                key = (x, z)
                out._terms[key] = out._terms.get(key, 0.0) + c
                continue
            if cos_a != 0.0:
                key = (x, z)
                out._terms[key] = out._terms.get(key, 0.0) + c * cos_a
            if sin_a != 0.0:
                p = PauliString(self.n, x, z, ((x & z).bit_count()) & 3)
                out._add_string(generator.multiply(p), -1j * sin_a * c)
        out._prune()
        return out

    # -- dense / serialization ------------------------------------------

    def to_matrix(self) -> np.ndarray:
        if self.n > 12:
            raise DimensionError("dense conversion capped at 12 qubits")
        dim = 1 << self.n
        m = np.zeros((dim, dim), dtype=complex)
        for op, coeff in self.terms():
            m += coeff * op.to_matrix()
        return m

    def to_term_list(self) -> list[tuple[str, complex]]:
        """Canonically ordered (label, coefficient) pairs."""
        return [(op.label(), coeff) for op, coeff in self.terms()]

    def __repr__(self) -> str:
        inner = " + ".join(f"({c:.6g})*{op.label()}" for op, c in list(self.terms())[:4])
        more = "" if len(self) <= 4 else f" + ... ({len(self)} terms)"
        return f"PauliSum[{inner}{more}]"

    # cached numpy views used by the statevector module ----------------

    def term_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(x_masks, z_masks, coefficients) as aligned numpy arrays."""
        if self._cache is None:
            keys = list(self._terms.keys())
            xs = np.array([k[0] for k in keys], dtype=np.uint64)
            zs = np.array([k[1] for k in keys], dtype=np.uint64)
            ny = np.array([(int(x) & int(z)).bit_count() for x, z in keys])
            cs = np.array([self._terms[k] for k in keys], dtype=complex)
            self._cache = {"x": xs, "z": zs, "ny": ny, "c": cs}
        c = self._cache
        return c["x"], c["z"], c["c"]

    def term_arrays_full(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        self.term_arrays()
        c = self._cache
        return c["x"], c["z"], c["ny"], c["c"]

"""Loading, validation and persistence of molecular Hamiltonian fixtures.

Fixture schema (JSON):

    {
      "name": "lih_sto3g_r1.60",
      "geometry": "Li 0 0 0; H 0 0 1.60",
      "n_qubits": 10,
      "n_electrons": 2,
      "hf_occupation": "1100000000",
      "terms": [{"pauli": "ZIIIIIIIII", "coeff": [-0.47, 0.0]}, ...],
      "reference_energies": [-7.88, ...],        # optional, hartree, ascending
      "metadata": {...}                          # optional, free-form
    }

Pauli labels run qubit 0 leftmost.  ``hf_occupation`` uses the same
orientation, so its q-th character is the occupation of qubit q.  Energies
are in hartree and geometries in angstrom throughout the toolkit.

Common metadata keys written by the fixture generator: ``mapping``
("jordan_wigner"), ``basis``, ``hf_energy``, ``bond_length_angstrom``,
``active_space``.  When a Jordan-Wigner mapping and an hf_energy are both
declared, loading cross-checks the recorded energy against the diagonal
matrix element of the Hamiltonian at the HF occupation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import FixtureError
from .paulis import PauliString, PauliSum
from .subspace import ProjectedHamiltonian

_HERMITICITY_TOL = 1e-10
_HF_CROSSCHECK_TOL = 1e-6


@dataclass
class MoleculeFixture:
    name: str
    geometry: str
    n_qubits: int
    n_electrons: int
    hf_occupation: str
    hamiltonian: PauliSum
    reference_energies: list[float] | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def hf_energy(self) -> float | None:
        e = self.metadata.get("hf_energy")
        return float(e) if e is not None else None

    @property
    def bond_length(self) -> float | None:
        r = self.metadata.get("bond_length_angstrom")
        return float(r) if r is not None else None

    def hf_diagonal_energy(self) -> float:
        """<occ|H|occ> for the recorded occupation bitstring.

        Only diagonal (I/Z) terms contribute, so no statevector is needed.
        """
        occ = 0
        for q, ch in enumerate(self.hf_occupation):
            if ch == "1":
                occ |= 1 << q
        total = 0.0
        for op, coeff in self.hamiltonian.terms():
            if op.x:
                continue
            sign = -1.0 if (op.z & occ).bit_count() % 2 else 1.0
            total += coeff.real * sign
        return total


def _validate_occupation(bits: str, n_qubits: int, n_electrons: int) -> None:
    if len(bits) != n_qubits:
        raise FixtureError(
            f"hf_occupation length {len(bits)} does not match n_qubits {n_qubits}"
        )
    if any(ch not in "01" for ch in bits):
        raise FixtureError("hf_occupation must be a binary string")
    if bits.count("1") != n_electrons:
        raise FixtureError(
            f"hf_occupation has {bits.count('1')} set bits, expected {n_electrons}"
        )


def _parse_terms(raw_terms, n_qubits: int) -> PauliSum:
    pairs = []
    for entry in raw_terms:
        label = entry.get("pauli")
        coeff = entry.get("coeff")
        if not isinstance(label, str) or len(label) != n_qubits:
            raise FixtureError(f"term label {label!r} does not match n_qubits {n_qubits}")
        if (
            not isinstance(coeff, (list, tuple))
            or len(coeff) != 2
            or not all(isinstance(v, (int, float)) for v in coeff)
        ):
            raise FixtureError(f"term coefficient must be [re, im], got {coeff!r}")
        re, im = float(coeff[0]), float(coeff[1])
        if abs(im) > _HERMITICITY_TOL:
            raise FixtureError(
                f"non-Hermitian term {label}: imaginary coefficient {im:.3e}"
            )
        try:
            op = PauliString.from_label(label)
        except Exception as exc:
            raise FixtureError(f"bad Pauli label {label!r}: {exc}") from exc
        pairs.append((op, re))
    return PauliSum.from_terms(n_qubits, pairs)


def load_fixture(path: str | Path) -> MoleculeFixture:
    """Parse and validate a fixture file; raises FixtureError on any problem."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FixtureError(f"{path}: not valid JSON ({exc})") from exc
    for key in ("name", "geometry", "n_qubits", "n_electrons", "hf_occupation", "terms"):
        if key not in raw:
            raise FixtureError(f"{path}: missing required key {key!r}")
    n_qubits = raw["n_qubits"]
    if not isinstance(n_qubits, int) or n_qubits < 1:
        raise FixtureError(f"{path}: n_qubits must be a positive integer")
    n_electrons = raw["n_electrons"]
    if not isinstance(n_electrons, int) or n_electrons < 0:
        raise FixtureError(f"{path}: n_electrons must be a nonnegative integer")
    _validate_occupation(raw["hf_occupation"], n_qubits, n_electrons)

    hamiltonian = _parse_terms(raw["terms"], n_qubits)

    refs = raw.get("reference_energies")
    if refs is not None:
        if not all(isinstance(v, (int, float)) for v in refs):
            raise FixtureError(f"{path}: reference energies must be numbers")
        refs = [float(v) for v in refs]
        if any(b < a - 1e-12 for a, b in zip(refs, refs[1:])):
            raise FixtureError(f"{path}: reference energies must be ascending")

    fixture = MoleculeFixture(
        name=str(raw["name"]),
        geometry=str(raw["geometry"]),
        n_qubits=n_qubits,
        n_electrons=n_electrons,
        hf_occupation=raw["hf_occupation"],
        hamiltonian=hamiltonian,
        reference_energies=refs,
        metadata=dict(raw.get("metadata") or {}),
    )

    if (
        fixture.metadata.get("mapping") == "jordan_wigner"
        and fixture.hf_energy is not None
    ):
        diag = fixture.hf_diagonal_energy()
        if abs(diag - fixture.hf_energy) > _HF_CROSSCHECK_TOL:
            raise FixtureError(
                f"{path}: recorded hf_energy {fixture.hf_energy:.10f} disagrees with "
                f"<HF|H|HF> = {diag:.10f}"
            )
    return fixture


def fixture_to_dict(fx: MoleculeFixture) -> dict:
    doc = {
        "name": fx.name,
        "geometry": fx.geometry,
        "n_qubits": fx.n_qubits,
        "n_electrons": fx.n_electrons,
        "hf_occupation": fx.hf_occupation,
        "terms": [
            {"pauli": label, "coeff": [coeff.real, coeff.imag]}
            for label, coeff in fx.hamiltonian.to_term_list()
        ],
    }
    if fx.reference_energies is not None:
        doc["reference_energies"] = list(fx.reference_energies)
    if fx.metadata:
        doc["metadata"] = fx.metadata
    return doc


def save_fixture(fx: MoleculeFixture, path: str | Path) -> None:
    Path(path).write_text(json.dumps(fixture_to_dict(fx), indent=1) + "\n")


# --------------------------------------------------------------------------
# projected Hamiltonians
# --------------------------------------------------------------------------


def save_projected(ph: ProjectedHamiltonian, path: str | Path) -> None:
    doc = {
        "kind": "projected_hamiltonian",
        "source_qubits": ph.source_qubits,
        "n_qubits": ph.reduced.n,
        "offset": ph.offset,
        "fixed_positions": [
            {"qubit": q, "pauli": axis, "sign": sign} for q, axis, sign in ph.fixed_positions
        ],
        "terms": [
            {"pauli": label, "coeff": [coeff.real, coeff.imag]}
            for label, coeff in ph.reduced.to_term_list()
        ],
    }
    if ph.metadata:
        doc["metadata"] = ph.metadata
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def load_projected(path: str | Path) -> ProjectedHamiltonian:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FixtureError(f"{path}: not valid JSON ({exc})") from exc
    if raw.get("kind") != "projected_hamiltonian":
        raise FixtureError(f"{path}: not a projected-Hamiltonian file")
    n = raw["n_qubits"]
    reduced = _parse_terms(raw["terms"], n)
    fixed = tuple(
        (int(e["qubit"]), str(e["pauli"]), int(e["sign"]))
        for e in raw.get("fixed_positions", [])
    )
    for _, axis, sign in fixed:
        if axis not in "XYZ" or sign not in (-1, 1):
            raise FixtureError(f"{path}: bad fixed position entry")
    try:
        return ProjectedHamiltonian(
            reduced=reduced,
            offset=float(raw["offset"]),
            fixed_positions=fixed,
            source_qubits=int(raw["source_qubits"]),
            metadata=dict(raw.get("metadata") or {}),
        )
    except Exception as exc:
        raise FixtureError(f"{path}: inconsistent projected Hamiltonian ({exc})") from exc

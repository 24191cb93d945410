"""Recipe-driven fixture generation.

A recipe names a molecule, its geometry in angstrom, the basis, charge,
multiplicity, the fermion-to-qubit mapping, and the active-space window;
``generate`` runs the electronic-structure engine and writes one fixture
JSON. Term order is lexicographic on the Pauli label and the document
layout is fixed, so a rerun with the same recipe and pinned library
versions reproduces the file byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import engine


class GenerationError(RuntimeError):
    """A recipe is unsupported or the generated document fails its checks."""


N_REFERENCE_LEVELS = 5


@dataclass(frozen=True)
class GenerationRecipe:
    """Everything needed to build one fixture file."""

    name: str
    atoms: tuple[tuple[str, tuple[float, float, float]], ...]  # element, xyz in angstrom
    basis: str = "sto-3g"
    charge: int = 0
    multiplicity: int = 1
    mapping: str = "jordan_wigner"
    frozen_orbitals: tuple[int, ...] = ()
    active_orbitals: tuple[int, ...] | None = None
    bond_length_angstrom: float | None = None
    output: str | None = None  # filename; defaults to <name>.json
    notes: str | None = None

    def __post_init__(self):
        if self.basis.lower() != "sto-3g":
            raise GenerationError(f"unsupported basis {self.basis!r}")
        if self.mapping != "jordan_wigner":
            raise GenerationError(f"unsupported mapping {self.mapping!r}")
        if self.multiplicity != 1:
            raise GenerationError(
                "the restricted mean-field engine handles singlets only"
            )
        if not self.atoms:
            raise GenerationError("recipe has no atoms")
        for element, _ in self.atoms:
            if element not in engine.ELEMENTS:
                raise GenerationError(f"no basis data for element {element!r}")

    @property
    def filename(self) -> str:
        return self.output or f"{self.name}.json"


def _geometry_bohr(recipe: GenerationRecipe):
    return [
        (element, np.asarray(xyz, dtype=float) * engine.ANGSTROM_TO_BOHR)
        for element, xyz in recipe.atoms
    ]


def _geometry_string(recipe: GenerationRecipe) -> str:
    parts = []
    for element, xyz in recipe.atoms:
        parts.append(f"{element} {xyz[0]:.6g} {xyz[1]:.6g} {xyz[2]:.6g}")
    return "; ".join(parts)


def build_document(recipe: GenerationRecipe) -> dict:
    """Run the engine for one recipe and return the fixture document."""
    out = engine.molecule_to_qubits(
        _geometry_bohr(recipe),
        charge=recipe.charge,
        frozen=list(recipe.frozen_orbitals),
        active=list(recipe.active_orbitals) if recipe.active_orbitals else None,
    )
    scf = out["scf"]
    terms = out["terms"]
    n = out["n_qubits"]
    ne = out["n_act_elec"]

    occ = "1" * ne + "0" * (n - ne)
    refs = engine.sector_eigenvalues(terms, ne, k=N_REFERENCE_LEVELS)

    # the diagonal element at the mean-field occupation must reproduce the
    # SCF total energy, and the exact ground level must sit at or below it
    occ_mask = sum(1 << q for q, ch in enumerate(occ) if ch == "1")
    diag = 0.0
    for lbl, c in terms.items():
        if set(lbl) <= {"I", "Z"}:
            zmask = sum(1 << q for q, ch in enumerate(lbl) if ch == "Z")
            sign = -1.0 if bin(zmask & occ_mask).count("1") % 2 else 1.0
            diag += c * sign
    if abs(diag - scf.energy) > 1e-8:
        raise GenerationError(
            f"{recipe.name}: diagonal energy {diag} != SCF energy {scf.energy}"
        )
    if refs[0] > scf.energy + 1e-12:
        raise GenerationError(
            f"{recipe.name}: lowest reference {refs[0]} above SCF {scf.energy}"
        )

    return {
        "name": recipe.name,
        "geometry": _geometry_string(recipe),
        "n_qubits": n,
        "n_electrons": ne,
        "hf_occupation": occ,
        "terms": [
            {"pauli": lbl, "coeff": [c, 0.0]} for lbl, c in sorted(terms.items())
        ],
        "reference_energies": [float(v) for v in refs],
        "metadata": {
            "mapping": "jordan_wigner",
            "spin_layout": "interleaved",
            "basis": "sto-3g",
            "charge": recipe.charge,
            "hf_energy": scf.energy,
            "bond_length_angstrom": recipe.bond_length_angstrom,
            "active_space": {
                "frozen_orbitals": list(out["frozen"]),
                "active_orbitals": list(out["active"]),
                "n_active_electrons": ne,
            },
            "reference_space": "fixed_particle_number",
        },
    }


def generate(recipe: GenerationRecipe, out_dir: str | Path = ".") -> Path:
    """Build the fixture for one recipe and write it under ``out_dir``."""
    doc = build_document(recipe)
    path = Path(out_dir) / recipe.filename
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1) + "\n")
    return path


# ---------------------------------------------------------------------------
# recipes file
# ---------------------------------------------------------------------------


def load_recipes(path: str | Path) -> list[GenerationRecipe]:
    """Parse a recipes JSON file into validated recipe objects."""
    raw = json.loads(Path(path).read_text())
    if not isinstance(raw, dict) or "recipes" not in raw:
        raise GenerationError(f"{path}: expected an object with a 'recipes' list")
    recipes = []
    for entry in raw["recipes"]:
        try:
            recipes.append(
                GenerationRecipe(
                    name=entry["name"],
                    atoms=tuple(
                        (element, tuple(float(v) for v in xyz))
                        for element, xyz in entry["atoms"]
                    ),
                    basis=entry.get("basis", "sto-3g"),
                    charge=int(entry.get("charge", 0)),
                    multiplicity=int(entry.get("multiplicity", 1)),
                    mapping=entry.get("mapping", "jordan_wigner"),
                    frozen_orbitals=tuple(entry.get("frozen_orbitals", ())),
                    active_orbitals=(
                        tuple(entry["active_orbitals"])
                        if entry.get("active_orbitals") is not None
                        else None
                    ),
                    bond_length_angstrom=entry.get("bond_length_angstrom"),
                    output=entry.get("output"),
                    notes=entry.get("notes"),
                )
            )
        except KeyError as exc:
            raise GenerationError(f"{path}: recipe missing key {exc}") from exc
    names = [r.name for r in recipes]
    if len(set(names)) != len(names):
        raise GenerationError(f"{path}: duplicate recipe names")
    return recipes

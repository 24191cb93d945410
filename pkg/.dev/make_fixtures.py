"""Generate the committed molecular fixtures from the self-contained engine.

Reference energies are full-CI values inside the fixture's particle-number
sector (all spin projections), ascending.  Term order in the JSON is plain
lexicographic on the Pauli label, which keeps regeneration byte-stable.
"""

import json
import pathlib

import numpy as np

import chem

OUT = pathlib.Path("/root/pkg/fixtures")
OUT.mkdir(exist_ok=True)

N_REFS = 5


def geometry_string(geometry):
    parts = []
    for el, xyz_bohr in geometry:
        xyz = np.asarray(xyz_bohr) / chem.ANGSTROM_TO_BOHR
        parts.append(f"{el} {xyz[0]:.6g} {xyz[1]:.6g} {xyz[2]:.6g}")
    return "; ".join(parts)


def build_fixture(name, el1, el2, r_angstrom, charge=0, frozen=None, active=None):
    geometry = chem.diatomic(el1, el2, r_angstrom)
    out = chem.molecule_to_qubits(geometry, charge=charge, frozen=frozen, active=active)
    scf = out["scf"]
    terms = out["terms"]
    n = out["n_qubits"]
    ne = out["n_act_elec"]

    occ = "1" * ne + "0" * (n - ne)
    refs = chem.sector_eigenvalues(terms, ne, k=N_REFS)

    # internal consistency: the diagonal element at the HF occupation must
    # reproduce the SCF total energy, and the sector ground must sit below it
    occ_mask = sum(1 << q for q, ch in enumerate(occ) if ch == "1")
    diag = 0.0
    for lbl, c in terms.items():
        if set(lbl) <= {"I", "Z"}:
            zmask = sum(1 << q for q, ch in enumerate(lbl) if ch == "Z")
            sign = -1.0 if bin(zmask & occ_mask).count("1") % 2 else 1.0
            diag += c * sign
    assert abs(diag - scf.energy) < 1e-8, (name, diag, scf.energy)
    assert refs[0] <= scf.energy + 1e-12, (name, refs[0], scf.energy)

    doc = {
        "name": name,
        "geometry": geometry_string(geometry),
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
            "charge": charge,
            "hf_energy": scf.energy,
            "bond_length_angstrom": r_angstrom,
            "active_space": {
                "frozen_orbitals": list(out["frozen"]),
                "active_orbitals": list(out["active"]),
                "n_active_electrons": ne,
            },
            "reference_space": "fixed_particle_number",
        },
    }
    path = OUT / f"{name}.json"
    path.write_text(json.dumps(doc, indent=1) + "\n")
    print(f"{name}: {n}q {len(terms)} terms  HF {scf.energy:.8f}  refs[0] {refs[0]:.8f}")
    return doc


def main():
    build_fixture("h2_sto3g_r0.7400", "H", "H", 0.74)

    lih_eq = 1.57473
    for r in [1.0, lih_eq, 2.2, 2.8, 3.4]:
        build_fixture(
            f"lih_sto3g_r{r:.4f}", "Li", "H", r, frozen=[0], active=[1, 2, 3, 4, 5]
        )

    beh_eq = 1.3447
    for r in [1.0, beh_eq, 1.8, 2.2, 2.6]:
        build_fixture(
            f"beh_cation_sto3g_r{r:.4f}",
            "Be",
            "H",
            r,
            charge=1,
            frozen=[0],
            active=[1, 2, 3, 4],
        )

    build_fixture(
        "hcl_sto3g_r1.3413",
        "H",
        "Cl",
        1.3413,
        frozen=[0, 1, 2, 3, 4, 5],
        active=[6, 7, 8, 9],
    )


if __name__ == "__main__":
    main()

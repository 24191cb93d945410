"""Fixture parsing, validation and persistence."""

import json

import numpy as np
import pytest

import reference as ref
from conftest import FIXTURE_DIR, H2
from qcontext.errors import FixtureError
from qcontext.fixture_io import (
    fixture_to_dict,
    load_fixture,
    load_projected,
    save_fixture,
    save_projected,
)
from qcontext.subspace import best_sector_taper


def h2_doc():
    return json.loads((FIXTURE_DIR / f"{H2}.json").read_text())


def write_doc(tmp_path, doc, name="fx.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return p


def test_all_committed_fixtures_load(fixtures):
    assert len(fixtures) == 12
    for name, fx in fixtures.items():
        assert fx.hamiltonian.n == fx.n_qubits
        assert fx.hamiltonian.is_hermitian()
        assert fx.reference_energies, name
        assert fx.hf_occupation.count("1") == fx.n_electrons


def test_hf_crosscheck_against_diagonal(fixtures):
    for name, fx in fixtures.items():
        assert fx.hf_energy is not None, name
        assert abs(fx.hf_diagonal_energy() - fx.hf_energy) < 1e-6, name


def test_reference_energies_sorted(fixtures):
    for fx in fixtures.values():
        refs = fx.reference_energies
        assert all(a <= b + 1e-12 for a, b in zip(refs, refs[1:]))


def test_hf_determinant_expectation_matches_dense(h2):
    # independent check of the diagonal shortcut on the smallest fixture
    occ = h2.hf_occupation
    idx = sum(1 << q for q, ch in enumerate(occ) if ch == "1")
    pairs = [(lbl, c.real) for lbl, c in h2.hamiltonian.to_term_list()]
    m = ref.dense_sum(h2.n_qubits, pairs)
    assert abs(m[idx, idx].real - h2.hf_diagonal_energy()) < 1e-12


def test_missing_key_rejected(tmp_path):
    doc = h2_doc()
    del doc["hf_occupation"]
    with pytest.raises(FixtureError, match="missing required key"):
        load_fixture(write_doc(tmp_path, doc))


def test_bad_label_length_rejected(tmp_path):
    doc = h2_doc()
    doc["terms"][0]["pauli"] = "ZZ"
    with pytest.raises(FixtureError, match="does not match n_qubits"):
        load_fixture(write_doc(tmp_path, doc))


def test_imaginary_coefficient_rejected(tmp_path):
    doc = h2_doc()
    doc["terms"][1]["coeff"] = [0.1, 0.2]
    with pytest.raises(FixtureError, match="non-Hermitian"):
        load_fixture(write_doc(tmp_path, doc))


def test_bad_occupation_rejected(tmp_path):
    doc = h2_doc()
    doc["hf_occupation"] = "1110"
    with pytest.raises(FixtureError):
        load_fixture(write_doc(tmp_path, doc))


def test_unsorted_references_rejected(tmp_path):
    doc = h2_doc()
    doc["reference_energies"] = [-1.0, -2.0]
    with pytest.raises(FixtureError, match="ascending"):
        load_fixture(write_doc(tmp_path, doc))


def test_wrong_hf_energy_rejected(tmp_path):
    doc = h2_doc()
    doc["metadata"]["hf_energy"] = doc["metadata"]["hf_energy"] + 0.01
    with pytest.raises(FixtureError, match="disagrees"):
        load_fixture(write_doc(tmp_path, doc))


def test_not_json_rejected(tmp_path):
    p = tmp_path / "junk.json"
    p.write_text("{not json")
    with pytest.raises(FixtureError, match="not valid JSON"):
        load_fixture(p)


def test_fixture_roundtrip(tmp_path, h2):
    p = tmp_path / "h2_copy.json"
    save_fixture(h2, p)
    back = load_fixture(p)
    assert back.name == h2.name
    assert back.hamiltonian.to_term_list() == h2.hamiltonian.to_term_list()
    assert back.reference_energies == h2.reference_energies
    assert back.metadata == h2.metadata


def test_fixture_to_dict_is_json_stable(h2):
    d1 = json.dumps(fixture_to_dict(h2), sort_keys=True)
    d2 = json.dumps(fixture_to_dict(load_fixture(FIXTURE_DIR / f"{H2}.json")), sort_keys=True)
    assert d1 == d2


def test_projected_roundtrip(tmp_path, h2):
    proj, _, _ = best_sector_taper(h2.hamiltonian)
    p = tmp_path / "h2_tapered.json"
    save_projected(proj, p)
    back = load_projected(p)
    assert back.source_qubits == proj.source_qubits
    assert back.offset == proj.offset
    assert back.fixed_positions == proj.fixed_positions
    assert back.reduced.to_term_list() == proj.reduced.to_term_list()


def test_projected_rejects_other_documents(tmp_path, h2):
    with pytest.raises(FixtureError, match="not a projected-Hamiltonian"):
        load_projected(FIXTURE_DIR / f"{H2}.json")


def test_projected_rejects_inconsistent_shape(tmp_path, h2):
    proj, _, _ = best_sector_taper(h2.hamiltonian)
    p = tmp_path / "bad.json"
    save_projected(proj, p)
    doc = json.loads(p.read_text())
    doc["source_qubits"] = doc["source_qubits"] + 1
    p.write_text(json.dumps(doc))
    with pytest.raises(FixtureError, match="inconsistent"):
        load_projected(p)

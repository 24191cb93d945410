"""Symmetry discovery, Clifford reduction, sector projection and tapering."""

import math

import numpy as np
import pytest
import scipy.linalg

import reference as ref
from conftest import BEH, H2, HCL, LIH
from qcontext.errors import ContractViolation, DimensionError
from qcontext.noncontextual import partition, solve_noncontextual
from qcontext.oracle import dense_matrix, eigensolve_lowest
from qcontext.paulis import PauliString, PauliSum, commutes
from qcontext.subspace import (
    CliqueCombination,
    RotationSequence,
    best_sector_taper,
    build_rotations,
    choose_stabilizers,
    find_z2_symmetries,
    project,
    project_operator_pool,
    reduce_reference_state,
    reduce_to_subspace,
    taper,
    tapering_frame,
)

TAPER_GENERATOR_COUNTS = {"h2": 3, "lih": 4, "beh": 4, "hcl": 4}


def lbl(s, phase=1.0):
    return PauliString.from_label(s, phase=phase)


def label_sum(n, pairs):
    return PauliSum.from_terms(n, [(lbl(l), c) for l, c in pairs])


def dense_of_steps(n, steps):
    u = np.eye(2**n, dtype=complex)
    for g, theta in steps:
        gu = scipy.linalg.expm(-0.5j * theta * g.phase * ref.dense_pauli(g.label()))
        u = gu @ u
    return u


# --------------------------------------------------------------------------
# symmetry discovery
# --------------------------------------------------------------------------


def test_z2_symmetries_of_xx_plus_zz():
    h = label_sum(2, [("XX", 1.0), ("ZZ", 0.5)])
    gens = find_z2_symmetries(h)
    assert sorted(g.label() for g in gens) == ["XX", "ZZ"]
    # their product YY lies in the group as well
    exps = ref.decompose_over_generators("YY", [g.label() for g in gens])
    assert exps == [1, 1]


def test_z2_symmetries_single_qubit():
    h = label_sum(1, [("X", 0.7)])
    gens = find_z2_symmetries(h)
    assert [g.label() for g in gens] == ["X"]


def test_z2_symmetries_h2_are_diagonal(h2):
    gens = find_z2_symmetries(h2.hamiltonian)
    assert sorted(g.label() for g in gens) == ["ZIIZ", "ZIZI", "ZZII"]
    for g in gens:
        assert g.x == 0


def test_z2_symmetries_commute_with_hamiltonian(fixtures):
    for name, fx in fixtures.items():
        gens = find_z2_symmetries(fx.hamiltonian)
        assert len(gens) == TAPER_GENERATOR_COUNTS[name.split("_")[0][:3]], name
        for g in gens:
            assert g.phase == 1.0
            for t, _ in fx.hamiltonian.terms():
                assert commutes(g, t), (name, g.label(), t.label())
        # independence: no generator decomposes over the others
        labels = [g.label() for g in gens]
        for i in range(len(labels)):
            others = labels[:i] + labels[i + 1 :]
            assert ref.decompose_over_generators(labels[i], others) is None


# --------------------------------------------------------------------------
# rotation construction
# --------------------------------------------------------------------------


def test_rotation_to_single_z_two_steps():
    seq = build_rotations([(lbl("ZZ"), 0)])
    assert [(g.label(), round(t / (math.pi / 2))) for g, t in seq.steps] == [
        ("YI", 1),
        ("YZ", -1),
    ]
    assert seq.clifford_prefix_len == 2
    image = seq.conjugate_string(lbl("ZZ"))
    assert image.to_term_list() == [("ZI", (1 + 0j))]


def test_rotation_noop_when_already_single():
    seq = build_rotations([(lbl("IZ"), 1)])
    assert len(seq) == 0


def test_rotation_single_letter_swap():
    seq = build_rotations([(lbl("X"), 0)])
    assert len(seq) == 1
    image = seq.conjugate_string(lbl("X"))
    assert image.to_term_list() == [("Z", (1 + 0j))]


def test_rotation_images_are_clean_for_h2_generators(h2):
    gens = find_z2_symmetries(h2.hamiltonian)
    seq = build_rotations([(g, q) for q, g in enumerate(gens)])
    for q, g in enumerate(gens):
        image = seq.conjugate_string(g)
        terms = image.to_term_list()
        assert len(terms) == 1
        label, coeff = terms[0]
        assert label == "".join("Z" if i == q else "I" for i in range(4))
        assert abs(abs(coeff) - 1.0) < 1e-12


def test_rotation_requires_commuting_independent_targets():
    with pytest.raises(ContractViolation):
        build_rotations([(lbl("XI"), 0), (lbl("ZI"), 1)])  # anticommute
    with pytest.raises(ContractViolation):
        build_rotations([(lbl("XX"), 0), (lbl("XX"), 1)])  # dependent


def test_rotation_sequence_validation():
    with pytest.raises(ContractViolation):
        RotationSequence(((lbl("XY", phase=1j), math.pi / 2),), 1)
    with pytest.raises(ContractViolation):
        RotationSequence(((lbl("X"), 0.3),), 1)  # generic angle inside prefix
    with pytest.raises(ContractViolation):
        RotationSequence((), 1)


def test_clique_combination_validation():
    with pytest.raises(ContractViolation):
        CliqueCombination(operators=(lbl("XI"), lbl("XX")), weights=(1.0, 0.0))
    with pytest.raises(ContractViolation):
        CliqueCombination(operators=(lbl("XI"), lbl("ZI")), weights=(0.9, 0.9))
    combo = CliqueCombination(operators=(lbl("XI"), lbl("ZI")), weights=(0.6, 0.8))
    assert combo.as_sum().coefficient(lbl("XI")) == 0.6


def test_clique_combination_collapses_to_single_qubit(rng):
    combo = CliqueCombination(
        operators=(lbl("XX"), lbl("YX")), weights=(math.cos(0.4), math.sin(0.4))
    )
    seq = build_rotations([(combo, 0)])
    image = seq.apply(combo.as_sum())
    terms = [(l, c) for l, c in image.to_term_list() if abs(c) > 1e-12]
    assert len(terms) == 1
    label, coeff = terms[0]
    assert label == "ZI"
    assert abs(abs(coeff) - 1.0) < 1e-10
    # unitarity: the full-system spectrum is untouched
    h = combo.as_sum() + label_sum(2, [("ZZ", 0.3)])
    before = np.linalg.eigvalsh(dense_matrix(h))
    after = np.linalg.eigvalsh(dense_matrix(seq.apply(h)))
    assert np.allclose(before, after, atol=1e-10)


def random_rotation_sequence(rng, n, n_clifford, n_generic):
    steps = []
    for i in range(n_clifford + n_generic):
        label = "".join(rng.choice(list("IXYZ"), size=n))
        if label == "I" * n:
            label = "Y" + label[1:]
        if i < n_clifford:
            theta = float(rng.choice([1.0, -1.0])) * math.pi / 2
        else:
            theta = float(rng.uniform(-math.pi, math.pi))
        steps.append((lbl(label), theta))
    return RotationSequence(tuple(steps), n_clifford)


def random_hermitian_sum(rng, n, n_terms):
    pairs = []
    for _ in range(n_terms):
        label = "".join(rng.choice(list("IXYZ"), size=n))
        pairs.append((label, float(rng.normal())))
    return label_sum(n, pairs), pairs


def test_rotation_preserves_spectrum_100_random(rng):
    for _ in range(100):
        n = int(rng.integers(2, 6))
        h, pairs = random_hermitian_sum(rng, n, 3 * n)
        seq = random_rotation_sequence(
            rng, n, int(rng.integers(0, 4)), int(rng.integers(0, 4))
        )
        rotated = seq.apply(h)
        before = ref.eigenvalues(n, pairs)
        after = np.linalg.eigvalsh(dense_matrix(rotated))
        assert np.allclose(before, after, atol=1e-8)


def test_rotation_matches_dense_conjugation(rng):
    for _ in range(20):
        n = int(rng.integers(2, 5))
        h, pairs = random_hermitian_sum(rng, n, 2 * n)
        seq = random_rotation_sequence(rng, n, 2, 2)
        u = dense_of_steps(n, seq.steps)
        want = u @ ref.dense_sum(n, pairs) @ u.conj().T
        assert np.allclose(dense_matrix(seq.apply(h)), want, atol=1e-10)
        # unapply inverts apply exactly at the coefficient level
        back = seq.unapply(seq.apply(h))
        diff = back - h
        assert diff.coefficient_norm() < 1e-10
        assert abs(diff.identity_coefficient) < 1e-10


# --------------------------------------------------------------------------
# sector projection
# --------------------------------------------------------------------------


def empty_rotation():
    return RotationSequence((), 0)


def test_project_example_two_terms():
    h = label_sum(2, [("ZZ", 1.0), ("XI", 0.5)])
    proj = project(h, empty_rotation(), [(1, "Z", 1)])
    assert proj.reduced.to_term_list() == [("X", (0.5 + 0j)), ("Z", (1 + 0j))]
    assert proj.offset == 0.0
    assert proj.remaining_qubits == 1
    flipped = project(h, empty_rotation(), [(1, "Z", -1)])
    assert flipped.reduced.coefficient(lbl("Z")) == -1.0


def test_project_x_sector_to_offset():
    h = label_sum(1, [("X", 0.5)])
    proj = project(h, empty_rotation(), [(0, "X", -1)])
    assert proj.remaining_qubits == 0
    assert proj.reduced.num_terms() == 0
    assert proj.offset == pytest.approx(-0.5, abs=1e-15)


def test_project_drops_sector_breaking_terms():
    h = label_sum(2, [("XI", 1.0), ("ZI", 2.0)])
    proj = project(h, empty_rotation(), [(0, "Z", 1)])
    # XI anticommutes with the fixed Z and must vanish
    assert proj.reduced.num_terms() == 0
    assert proj.offset == pytest.approx(2.0)


def test_project_validates_fixed_positions():
    h = label_sum(2, [("ZZ", 1.0)])
    with pytest.raises(ContractViolation):
        project(h, empty_rotation(), [(0, "Z", 1), (0, "Z", -1)])
    with pytest.raises(DimensionError):
        project(h, empty_rotation(), [(2, "Z", 1)])
    with pytest.raises(ContractViolation):
        project(h, empty_rotation(), [(0, "Q", 1)])
    with pytest.raises(ContractViolation):
        project(h, empty_rotation(), [(0, "Z", 2)])


def test_project_matches_dense_restriction(rng):
    for _ in range(30):
        n = int(rng.integers(2, 6))
        h, pairs = random_hermitian_sum(rng, n, 3 * n)
        seq = random_rotation_sequence(rng, n, int(rng.integers(0, 3)), int(rng.integers(0, 3)))
        n_fix = int(rng.integers(1, n))
        positions = rng.choice(n, size=n_fix, replace=False)
        fixed = [(int(q), "Z", int(rng.choice([1, -1]))) for q in positions]
        base_offset = float(rng.normal())
        proj = project(h, seq, fixed, offset=base_offset)

        u = dense_of_steps(n, seq.steps)
        rotated = u @ ref.dense_sum(n, pairs) @ u.conj().T
        idx = np.arange(2**n)
        mask = np.ones(2**n, dtype=bool)
        for q, _, sign in fixed:
            want_bit = 0 if sign > 0 else 1
            mask &= ((idx >> q) & 1) == want_bit
        sub = rotated[np.ix_(mask, mask)]
        got = dense_matrix(proj.reduced) + proj.offset * np.eye(2 ** proj.remaining_qubits)
        assert np.allclose(got, sub + base_offset * np.eye(sub.shape[0]), atol=1e-10)


def test_project_operator_pool_drops_vanishing_elements():
    pool = [
        label_sum(2, [("XI", 1.0)]),  # anticommutes with the fix: vanishes
        label_sum(2, [("ZI", 1.0)]),  # collapses to a constant: vanishes
        label_sum(2, [("ZX", 0.5)]),  # survives on the free qubit
    ]
    out = project_operator_pool(pool, empty_rotation(), [(0, "Z", 1)])
    assert len(out) == 1
    assert out[0].to_term_list() == [("X", (0.5 + 0j))]


# --------------------------------------------------------------------------
# plain tapering
# --------------------------------------------------------------------------


def test_tapering_preserves_ground_energy(fixtures):
    for name, fx in fixtures.items():
        proj, sector, energy = best_sector_taper(fx.hamiltonian)
        full = eigensolve_lowest(fx.hamiltonian, k=1)[0]
        assert abs(energy - full) < 1e-10, name
        g = TAPER_GENERATOR_COUNTS[name.split("_")[0][:3]]
        assert proj.remaining_qubits == fx.n_qubits - g, name


def test_taper_at_explicit_sector_matches_best(h2):
    proj, sector, energy = best_sector_taper(h2.hamiltonian)
    again = taper(h2.hamiltonian, sector)
    assert again.offset == proj.offset
    assert again.reduced.to_term_list() == proj.reduced.to_term_list()
    redo = eigensolve_lowest(again.reduced, k=1)[0] + again.offset
    assert redo == pytest.approx(energy, abs=1e-12)


def test_tapering_frame_reuse(lih):
    frame = tapering_frame(lih.hamiltonian)
    assert len(frame.generators) == 4
    # spot-check two sectors share the frame's rotation work
    a = project(lih.hamiltonian, frame.rotations, frame.fixed_for([1, 1, 1, 1]))
    b = project(lih.hamiltonian, frame.rotations, frame.fixed_for([-1, 1, 1, 1]))
    assert a.remaining_qubits == b.remaining_qubits == lih.n_qubits - 4


# --------------------------------------------------------------------------
# contextual-subspace reduction
# --------------------------------------------------------------------------


@pytest.fixture(scope="module")
def solved(fixtures):
    out = {}
    for name in (H2, BEH, LIH, HCL):
        fx = fixtures[name]
        p = partition(fx.hamiltonian)
        e, state = solve_noncontextual(p, reference=fx.hf_occupation)
        out[name] = (fx, p, e, state)
    return out


def retention_errors(fx, reduction, n_states):
    h = reduction.projected.reduced
    if len(h) == 0:
        eigs = np.zeros(1)
    else:
        eigs = np.linalg.eigvalsh(dense_matrix(h))
    eigs = eigs + reduction.projected.offset
    return [
        float(np.min(np.abs(eigs - e_ref)))
        for e_ref in fx.reference_energies[:n_states]
    ]


def test_full_enforcement_reproduces_noncontextual_energy(solved):
    fx, p, e_nc, state = solved[H2]
    red = reduce_to_subspace(fx.hamiltonian, p, state, 0)
    assert red.n_qubits == 0
    assert red.projected.reduced.num_terms() == 0
    assert red.projected.offset == pytest.approx(e_nc, abs=1e-9)
    # for H2 the noncontextual minimum is already the exact ground energy
    assert red.projected.offset == pytest.approx(fx.reference_energies[0], abs=1e-9)


def test_choose_stabilizers_ordering_and_costs(solved):
    fx, p, _, state = solved[BEH]
    chosen = choose_stabilizers(fx.hamiltonian, p, state, 0)
    assert len(chosen) == fx.n_qubits
    costs = [e.deletion_cost for e in chosen]
    assert all(c >= 0.0 for c in costs)
    n_free = sum(1 for c in costs if c < 1e-12)
    assert n_free == 4  # true symmetries of the full Hamiltonian
    # zero-cost stabilizers are enforced ahead of costly ones
    assert all(c < 1e-12 for c in costs[:n_free])
    assert all(c > 1e-12 for c in costs[n_free:])
    for e in chosen:
        assert e.kind in ("symmetry_product", "clique_combination")
        if e.kind == "symmetry_product":
            assert e.operator is not None and e.operator.phase == 1.0
        assert e.sign in (-1, 1)


def test_choose_stabilizers_bounds(solved):
    fx, p, _, state = solved[H2]
    assert choose_stabilizers(fx.hamiltonian, p, state, fx.n_qubits) == []
    with pytest.raises(DimensionError):
        choose_stabilizers(fx.hamiltonian, p, state, fx.n_qubits + 1)
    with pytest.raises(DimensionError):
        choose_stabilizers(fx.hamiltonian, p, state, -1)


def test_beh_six_qubit_reduction_hits_reference(solved):
    fx, p, _, state = solved[BEH]
    red = reduce_to_subspace(fx.hamiltonian, p, state, 6)
    assert red.n_qubits == 6
    errs = retention_errors(fx, red, 2)
    # measured at machine precision; the experiment threshold is 1.6e-3
    assert errs[0] < 1e-8
    assert errs[1] < 1e-8


def test_lih_four_qubit_reduction_reaches_chemical_accuracy(solved):
    fx, p, _, state = solved[LIH]
    red = reduce_to_subspace(fx.hamiltonian, p, state, 4)
    assert red.n_qubits == 4
    errs = retention_errors(fx, red, 3)
    assert errs[0] < 1.6e-3  # ground state keeps a small contextual residual
    assert errs[1] < 1e-8
    assert errs[2] < 1e-8


def test_coverage_error_bounds(solved):
    # with only the true symmetries enforced the reduction is lossless,
    # and throwing everything away can never beat keeping everything
    for name, (fx, p, _, state) in solved.items():
        full = reduce_to_subspace(fx.hamiltonian, p, state, fx.n_qubits)
        err_full = retention_errors(fx, full, 1)[0]
        nothing = reduce_to_subspace(fx.hamiltonian, p, state, 0)
        err_nothing = abs(nothing.projected.offset - fx.reference_energies[0])
        assert err_full <= err_nothing + 1e-12, name

        chosen = choose_stabilizers(fx.hamiltonian, p, state, 0)
        n_free = sum(1 for e in chosen if e.deletion_cost < 1e-12)
        lossless = reduce_to_subspace(fx.hamiltonian, p, state, fx.n_qubits - n_free)
        assert retention_errors(fx, lossless, 1)[0] < 1e-8, name


def test_reduction_spectrum_is_subset_of_full(solved):
    fx, p, _, state = solved[BEH]
    red = reduce_to_subspace(fx.hamiltonian, p, state, 5)
    sub = np.linalg.eigvalsh(dense_matrix(red.projected.reduced)) + red.projected.offset
    full = np.linalg.eigvalsh(dense_matrix(fx.hamiltonian))
    for e in sub:
        assert np.min(np.abs(full - e)) < 1e-8


# --------------------------------------------------------------------------
# reference-state transport
# --------------------------------------------------------------------------


def test_reduce_reference_state_preserves_hf_energy(solved):
    from qcontext.statevector import expectation

    for name, n_target in ((BEH, 6), (LIH, 4)):
        fx, p, _, state = solved[name]
        red = reduce_to_subspace(fx.hamiltonian, p, state, n_target)
        psi = reduce_reference_state(fx.hf_occupation, red.rotations, red.fixed)
        assert psi.shape == (2**n_target,)
        assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)
        e_hf = expectation(red.projected.reduced, psi) + red.projected.offset
        assert e_hf == pytest.approx(fx.hf_energy, abs=1e-8), name


def test_reduce_reference_state_accepts_amplitudes(h2):
    frame = tapering_frame(h2.hamiltonian)
    occ = h2.hf_occupation
    idx = sum(1 << q for q, ch in enumerate(occ) if ch == "1")
    amps = np.zeros(2**h2.n_qubits, dtype=complex)
    amps[idx] = 1.0
    sector = [
        -1.0 if (g.z & idx).bit_count() % 2 else 1.0 for g in frame.generators
    ]
    fixed = frame.fixed_for(sector)
    a = reduce_reference_state(occ, frame.rotations, fixed)
    b = reduce_reference_state(amps, frame.rotations, fixed)
    assert np.allclose(a, b, atol=1e-12)


def test_reduce_reference_state_rejects_wrong_sector(h2):
    frame = tapering_frame(h2.hamiltonian)
    occ = h2.hf_occupation
    idx = sum(1 << q for q, ch in enumerate(occ) if ch == "1")
    sector = [
        -1.0 if (g.z & idx).bit_count() % 2 else 1.0 for g in frame.generators
    ]
    wrong = [-sector[0]] + sector[1:]
    with pytest.raises(ContractViolation, match="no weight"):
        reduce_reference_state(occ, frame.rotations, frame.fixed_for(wrong))

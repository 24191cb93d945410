"""Property-based checks of the algebraic contracts."""

import math

import numpy as np
from hypothesis import given, settings, strategies as st

import reference as ref
from qcontext.noncontextual import is_noncontextual, partition
from qcontext.oracle import dense_matrix, eigensolve_lowest
from qcontext.paulis import PauliString, PauliSum, commutes, multiply
from qcontext.statevector import apply_pauli_exponential, expectation
from qcontext.subspace import RotationSequence, project


def labels(n):
    return st.lists(st.sampled_from("IXYZ"), min_size=n, max_size=n).map("".join)


def label_sets(n, max_terms=6):
    return st.lists(labels(n), min_size=1, max_size=max_terms, unique=True)


def coeffs(n_min=1, n_max=6):
    return st.lists(
        st.floats(-3.0, 3.0, allow_nan=False).filter(lambda v: abs(v) > 1e-3),
        min_size=n_min,
        max_size=n_max,
    )


def hermitian_sums(n, max_terms=6):
    @st.composite
    def build(draw):
        lbls = draw(label_sets(n, max_terms))
        cs = draw(coeffs(len(lbls), len(lbls)))
        return PauliSum.from_terms(
            n,
            [(PauliString.from_label(l), c) for l, c in zip(lbls, cs)],
        ), list(zip(lbls, cs))

    return build()


phases = st.sampled_from([1.0, 1j, -1.0, -1j])


@settings(max_examples=120, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(labels(n), labels(n), phases, phases)))
def test_multiply_matches_dense(args):
    la, lb, pa, pb = args
    a = PauliString.from_label(la, phase=pa)
    b = PauliString.from_label(lb, phase=pb)
    got = multiply(a, b)
    want = (pa * ref.dense_pauli(la)) @ (pb * ref.dense_pauli(lb))
    assert np.allclose(got.phase * ref.dense_pauli(got.label()), want, atol=1e-14)
    assert commutes(a, b) == ref.labels_commute(la, lb)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(2, 4).flatmap(lambda n: st.tuples(hermitian_sums(n), labels(n))),
    st.floats(-math.pi, math.pi, allow_nan=False),
)
def test_conjugation_preserves_weight_and_hermiticity(args, theta):
    (h, _), glabel = args
    if glabel == "I" * h.n:
        return
    g = PauliString.from_label(glabel)
    rotated = h.conjugate_by_rotation(g, theta)
    assert rotated.is_hermitian()
    assert abs(rotated.squared_coefficient_norm() - h.squared_coefficient_norm()) < 1e-12
    assert abs(rotated.identity_coefficient - h.identity_coefficient) < 1e-12


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 4).flatmap(lambda n: st.tuples(labels(n), labels(n))),
    st.sampled_from([math.pi / 2, -math.pi / 2]),
)
def test_clifford_angles_map_string_to_string(args, theta):
    pl, gl = args
    if gl == "I" * len(gl):
        return
    h = PauliSum.from_string(PauliString.from_label(pl))
    rotated = h.conjugate_by_rotation(PauliString.from_label(gl), theta)
    assert rotated.num_terms() == 1
    _, coeff = rotated.to_term_list()[0]
    assert abs(abs(coeff) - 1.0) < 1e-15


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 4).flatmap(label_sets), st.data())
def test_noncontextual_monotone_under_subset_removal(lbls, data):
    ops = [PauliString.from_label(l) for l in lbls]
    if not is_noncontextual(ops):
        return
    subset = data.draw(st.lists(st.sampled_from(lbls), max_size=len(lbls), unique=True))
    assert is_noncontextual([PauliString.from_label(l) for l in subset])


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4).flatmap(hermitian_sums))
def test_partition_is_disjoint_and_conserving(hs):
    h, _ = hs
    p = partition(h)
    nc_labels = {t.label() for t, _ in p.noncontextual.terms()}
    cx_labels = {t.label() for t, _ in p.contextual.terms()}
    assert not (nc_labels & cx_labels)
    diff = (p.noncontextual + p.contextual) - h
    assert diff.coefficient_norm() < 1e-12
    assert abs(diff.identity_coefficient) < 1e-12
    declared = [t.label() for t in p.symmetry_terms] + [
        t.label() for c in p.cliques for t in c
    ]
    assert sorted(declared) == sorted(nc_labels)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(2, 4).flatmap(hermitian_sums),
    st.lists(st.tuples(st.sampled_from("XYZ"), st.floats(-3, 3, allow_nan=False)), max_size=3),
)
def test_apply_unapply_roundtrip(hs, raw_steps):
    h, _ = hs
    n = h.n
    steps = []
    for letter, theta in raw_steps:
        label = letter + "Z" * (n - 1)
        steps.append((PauliString.from_label(label), theta))
    seq = RotationSequence(tuple(steps), 0)
    back = seq.unapply(seq.apply(h))
    diff = back - h
    assert diff.coefficient_norm() < 1e-9
    assert abs(diff.identity_coefficient) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4).flatmap(hermitian_sums))
def test_project_without_fixes_is_rotation_only(hs):
    h, _ = hs
    seq = RotationSequence(((PauliString.from_label("Y" + "I" * (h.n - 1)), 0.7),), 0)
    proj = project(h, seq, [])
    want = seq.apply(h)
    diff = proj.reduced.add_scaled_identity(proj.offset) - want
    assert diff.coefficient_norm() < 1e-12
    assert abs(diff.identity_coefficient) < 1e-12


@settings(max_examples=50, deadline=None)
@given(
    st.integers(1, 4).flatmap(labels),
    st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False),
    st.integers(0, 2**31 - 1),
)
def test_pauli_exponential_preserves_norm(label, theta, seed):
    if label == "I" * len(label):
        return
    n = len(label)
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    psi /= np.linalg.norm(psi)
    out = apply_pauli_exponential(psi, PauliString.from_label(label), theta)
    assert abs(np.linalg.norm(out) - 1.0) < 1e-10


@settings(max_examples=40, deadline=None)
@given(
    st.integers(2, 3).flatmap(
        lambda n: st.tuples(hermitian_sums(n), hermitian_sums(n), st.integers(0, 2**31 - 1))
    ),
    st.floats(-2, 2, allow_nan=False),
    st.floats(-2, 2, allow_nan=False),
)
def test_expectation_is_linear(args, alpha, beta):
    (ha, _), (hb, _), seed = args
    rng = np.random.default_rng(seed)
    n = ha.n
    psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    psi /= np.linalg.norm(psi)
    combined = ha * alpha + hb * beta
    lhs = expectation(combined, psi)
    rhs = alpha * expectation(ha, psi) + beta * expectation(hb, psi)
    assert abs(lhs - rhs) < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3).flatmap(hermitian_sums), st.floats(-5, 5, allow_nan=False))
def test_eigensolve_shift_invariance(hs, c):
    h, _ = hs
    base = eigensolve_lowest(h, k=2**h.n)
    shifted = eigensolve_lowest(h.add_scaled_identity(c), k=2**h.n)
    assert np.allclose(shifted, base + c, atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4).flatmap(hermitian_sums))
def test_dense_matrix_is_hermitian_and_matches_eigensum(hs):
    h, pairs = hs
    m = dense_matrix(h)
    assert np.allclose(m, m.conj().T, atol=1e-12)
    assert np.allclose(np.linalg.eigvalsh(m), ref.eigenvalues(h.n, pairs), atol=1e-10)

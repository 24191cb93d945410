"""Variational eigensolvers over reduced Hamiltonians.

``vqe`` minimizes a single expectation value; ``vqd`` stacks deflation
penalties to walk up the spectrum state by state.  ``qubit_sweep`` and
``pes_scan`` drive the two experiment families: accuracy versus retained
qubit count, and bond-length scans with optional warm-started parameter
continuation.

The classical optimizer is the SciPy Nelder-Mead simplex (dimension-
adaptive variant) wrapped with a shared evaluation budget, a stall
detector (a trial ends when no improvement beyond ``energy_tol`` is seen
across ``patience`` consecutive cost evaluations) and a fixed number of
restart trials from fresh seeded draws.  Deflated landscapes grow spurious
shallow basins near the penalized states, so a single descent from one
start is not trustworthy; the best trial by cost wins.  Every iteration
figure reported by this module counts cost-function evaluations, nothing
else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .ansatz import build_nblock, build_ryrz, build_uccsd
from .errors import ContractViolation, DimensionError
from .fixture_io import MoleculeFixture
from .noncontextual import partition as nc_partition
from .noncontextual import solve_noncontextual
from .paulis import PauliSum
from .statevector import Circuit, apply, expectation, overlap_sq
from .subspace import ProjectedHamiltonian, SubspaceReduction, reduce_reference_state, reduce_to_subspace


@dataclass(frozen=True)
class SolverConfig:
    """Optimizer settings shared by every variational run."""

    energy_tol: float = 1e-9
    patience: int = 100
    max_evaluations: int = 5000
    n_restarts: int = 3
    restart_spread: float = 0.8
    init: str = "zero"  # "zero" or "random"
    seed: int = 0
    beta: float | None = None
    near_degenerate_gap: float = 1e-5
    near_degenerate_overlap: float = 1e-2

    def initial_parameters(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if self.init == "zero":
            return np.zeros(n)
        if self.init == "random":
            return rng.uniform(-math.pi, math.pi, n)
        raise ContractViolation(f"unknown initialization mode {self.init!r}")


@dataclass
class VQEOutcome:
    energy: float
    parameters: np.ndarray
    iterations: int
    converged: bool


@dataclass
class VQDResult:
    """Deflation results in optimization order (state 0 first)."""

    energies: list[float]
    parameter_sets: list[np.ndarray]
    iteration_counts: list[int]
    overlap_residuals: np.ndarray
    beta_used: list[float]
    converged: list[bool]
    near_degenerate_pairs: list[tuple[int, int]] = field(default_factory=list)
    states: list[np.ndarray] = field(default_factory=list)


class _StopSearch(Exception):
    pass


def _simplex_search(
    cost, x0: np.ndarray, config: SolverConfig, rng: np.random.Generator | None = None
) -> tuple[np.ndarray, float, int, bool]:
    """Budgeted multi-start Nelder-Mead.

    Each start (``x0`` first, then up to ``n_restarts`` fresh draws
    from ``[-restart_spread, restart_spread]^n``) is polished to
    quiescence: the simplex runs in bounded rounds and is rebuilt at
    the round's own endpoint for as long as a round still gains more
    than ``energy_tol``.  Plain descent stagnates once the simplex
    collapses, which in high dimension happens long before the
    minimum, so the rebuild is what buys convergence; the round cap and
    the patience window both scale with the parameter count because a
    single shrink step already costs one evaluation per dimension.
    The lowest cost seen anywhere wins the state.
    """
    x0 = np.asarray(x0, dtype=float).copy()
    evals = 0
    best_x = x0.copy()
    best_f = math.inf
    exhausted = False

    if x0.size == 0:
        return x0, cost(x0), 1, True

    window = max(config.patience, 30 * x0.size)
    chunk = max(200, 120 * x0.size)

    def run_round(start: np.ndarray) -> tuple[np.ndarray, float]:
        nonlocal evals, best_x, best_f, exhausted
        round_x = np.asarray(start, dtype=float).copy()
        round_f = math.inf
        since_improve = 0

        def wrapped(x):
            nonlocal evals, best_x, best_f, round_x, round_f, since_improve, exhausted
            if evals >= config.max_evaluations:
                exhausted = True
                raise _StopSearch
            f = cost(x)
            evals += 1
            if f < round_f - config.energy_tol:
                since_improve = 0
            else:
                since_improve += 1
            if f < round_f:
                round_f = f
                round_x = np.asarray(x, dtype=float).copy()
            if f < best_f:
                best_f = f
                best_x = round_x
            if since_improve >= window:
                raise _StopSearch
            return f

        try:
            scipy.optimize.minimize(
                wrapped,
                start,
                method="Nelder-Mead",
                options={
                    "maxfev": min(chunk, max(1, config.max_evaluations - evals)),
                    "xatol": 1e-10,
                    "fatol": 1e-13,
                    "adaptive": True,
                },
            )
        except _StopSearch:
            pass
        return round_x, round_f

    start = x0
    draws_used = 0
    while True:
        polish_x, polish_f = start, math.inf
        while not exhausted and evals < config.max_evaluations:
            rx, rf = run_round(polish_x)
            if rf < polish_f - config.energy_tol:
                polish_x, polish_f = rx, rf
            else:
                break
        if exhausted or evals >= config.max_evaluations:
            break
        if rng is None or draws_used >= max(0, config.n_restarts):
            break
        start = rng.uniform(-config.restart_spread, config.restart_spread, x0.size)
        draws_used += 1
    return best_x, best_f, evals, evals < config.max_evaluations


def _check_compatible(h: ProjectedHamiltonian, circuit: Circuit) -> None:
    if h.reduced.n != circuit.n_qubits:
        raise DimensionError(
            f"circuit spans {circuit.n_qubits} qubits, operator {h.reduced.n}"
        )


_DENSE_COST_CAP = 12


def _energy_fn(h: PauliSum):
    """Expectation evaluator for the optimizer's inner loop.

    Small operators are densified once so each cost call is a single
    matrix-vector product instead of a walk over the term list; the
    two paths agree to machine precision.
    """
    if h.n <= _DENSE_COST_CAP:
        from . import oracle

        m = oracle.dense_matrix(h)

        def dense(psi) -> float:
            return float(np.real(np.vdot(psi, m @ psi)))

        return dense
    return lambda psi: expectation(h, psi)


def vqe(
    h: ProjectedHamiltonian,
    circuit: Circuit,
    init=None,
    config: SolverConfig = SolverConfig(),
) -> VQEOutcome:
    """Minimize the expectation of ``h`` over the circuit parameters.

    ``init`` is an explicit starting vector; None falls back to the
    config's initialization mode.  The returned energy includes the
    projection offset and counts every cost evaluation performed.
    """
    _check_compatible(h, circuit)
    rng = np.random.default_rng(config.seed)
    if init is None:
        init = config.initial_parameters(circuit.n_parameters, rng)
    init = np.asarray(init, dtype=float)
    if init.shape != (circuit.n_parameters,):
        raise ContractViolation(
            f"initial vector has {init.size} entries, circuit takes "
            f"{circuit.n_parameters}"
        )
    if not len(h.reduced):
        return VQEOutcome(h.offset, init, 1, True)

    energy = _energy_fn(h.reduced)

    def cost(theta):
        return energy(apply(circuit, theta))

    x, f, evals, converged = _simplex_search(cost, init, config, rng)
    return VQEOutcome(f + h.offset, x, evals, converged)


def default_beta(h: ProjectedHamiltonian) -> float:
    """Deflation weight strictly exceeding any spectral gap of the operator.

    Twice the coefficient 1-norm bounds the spectral spread from above,
    but the bound is tight for a single Pauli term (spread of Z is
    exactly 2), and an equality leaves the deflated landscape flat
    between the penalized state and its replacement.  The extra unit
    keeps the inequality strict.
    """
    return 2.0 * h.reduced.coefficient_norm() + 1.0


def vqd(
    h: ProjectedHamiltonian,
    circuit: Circuit,
    n_states: int,
    config: SolverConfig = SolverConfig(),
    initial_parameter_sets=None,
) -> VQDResult:
    """Recover ``n_states`` eigenstates by deflated sequential minimization.

    State k minimizes <H> plus beta * |<psi_j|psi>|^2 summed over the
    frozen states j < k.  Reported energies exclude the penalty term.
    ``initial_parameter_sets`` optionally warm-starts each state.
    """
    if n_states < 1:
        raise ContractViolation("n_states must be at least 1")
    _check_compatible(h, circuit)
    rng = np.random.default_rng(config.seed)
    beta = config.beta if config.beta is not None else default_beta(h)
    energy = _energy_fn(h.reduced) if len(h.reduced) else None

    energies: list[float] = []
    params: list[np.ndarray] = []
    counts: list[int] = []
    converged: list[bool] = []
    states: list[np.ndarray] = []
    beta_used: list[float] = []

    for k in range(n_states):
        if initial_parameter_sets is not None and k < len(initial_parameter_sets) \
                and initial_parameter_sets[k] is not None:
            init = np.asarray(initial_parameter_sets[k], dtype=float)
        else:
            init = config.initial_parameters(circuit.n_parameters, rng)
        if init.shape != (circuit.n_parameters,):
            raise ContractViolation("warm-start vector length mismatch")
        if k:
            beta_used.append(beta)

        if not len(h.reduced):
            # constant operator: every state sees the same offset energy
            energies.append(h.offset)
            params.append(init)
            counts.append(1)
            converged.append(True)
            states.append(apply(circuit, init))
            continue

        frozen = list(states)

        def cost(theta):
            psi = apply(circuit, theta)
            value = energy(psi)
            for prev in frozen:
                value += beta * overlap_sq(prev, psi)
            return value

        # independent, reproducible restart stream per deflation level
        state_rng = np.random.default_rng([config.seed, k])
        x, _, evals, ok = _simplex_search(cost, init, config, state_rng)
        psi = apply(circuit, x)
        energies.append(energy(psi) + h.offset)
        params.append(x)
        counts.append(evals)
        converged.append(ok)
        states.append(psi)

    m = len(states)
    residuals = np.zeros((m, m))
    for i in range(m):
        for j in range(m):
            residuals[i, j] = overlap_sq(states[i], states[j])
    pairs = []
    for i in range(m):
        for j in range(i + 1, m):
            if (
                abs(energies[i] - energies[j]) < config.near_degenerate_gap
                and residuals[i, j] > config.near_degenerate_overlap
            ):
                pairs.append((i, j))
    return VQDResult(
        energies=energies,
        parameter_sets=params,
        iteration_counts=counts,
        overlap_residuals=residuals,
        beta_used=beta_used,
        converged=converged,
        near_degenerate_pairs=pairs,
        states=states,
    )


# ---------------------------------------------------------------------------
# experiment drivers
# ---------------------------------------------------------------------------


def distinct_levels(values, tol: float = 1e-9) -> list[float]:
    """Collapse exact multiplicities in an ascending energy list.

    Spin-projection copies of one level coincide to near machine
    precision, so a tight tolerance keeps physically separate levels
    apart while folding the copies.
    """
    out: list[float] = []
    for v in values:
        if not out or v - out[-1] > tol:
            out.append(float(v))
    return out


def reference_levels(fixture: MoleculeFixture, n_states: int) -> list[float]:
    """Distinct benchmark levels for a fixture, computed if not stored."""
    refs = fixture.reference_energies
    if refs is None:
        from . import oracle

        refs = list(oracle.eigensolve_lowest(fixture.hamiltonian, k=3 * n_states))
    levels = distinct_levels(refs)
    if len(levels) < n_states:
        raise ContractViolation(
            f"fixture stores {len(levels)} distinct levels, need {n_states}"
        )
    return levels[:n_states]


@dataclass(frozen=True)
class ExperimentConfig:
    """What to run: ansatz family, size, states, and optimizer settings."""

    ansatz: str = "uccsd"  # "uccsd" | "ryrz" | "nblock"
    n_repeats: int = 2
    n_states: int = 1
    warm_start: bool = True
    entangler: str = "full"
    spin_filter: bool = True
    solver: SolverConfig = field(default_factory=SolverConfig)


def build_ansatz(
    fixture: MoleculeFixture,
    reduction: SubspaceReduction,
    config: ExperimentConfig,
) -> Circuit:
    """Instantiate the configured circuit family inside the reduction."""
    if config.ansatz == "uccsd":
        circuit, _ = build_uccsd(fixture, reduction, spin_filter=config.spin_filter)
        return circuit
    reference = reduce_reference_state(
        fixture.hf_occupation, reduction.rotations, reduction.fixed
    )
    n = reduction.projected.remaining_qubits
    if config.ansatz == "ryrz":
        return build_ryrz(n, config.n_repeats, config.entangler, reference)
    if config.ansatz == "nblock":
        return build_nblock(n, config.n_repeats, reference)
    raise ContractViolation(f"unknown ansatz kind {config.ansatz!r}")


def reduce_fixture(fixture: MoleculeFixture, n_target: int) -> SubspaceReduction:
    """Standard reduction pipeline for one fixture at one qubit budget."""
    part = nc_partition(fixture.hamiltonian)
    _, state = solve_noncontextual(part, reference=fixture.hf_occupation)
    return reduce_to_subspace(fixture.hamiltonian, part, state, n_target)


@dataclass
class SweepRow:
    n_qubits: int
    state: int
    energy: float
    error: float
    iterations: int
    converged: bool


def qubit_sweep(
    fixture: MoleculeFixture,
    n_targets,
    config: ExperimentConfig,
) -> list[SweepRow]:
    """Accuracy of every requested state at each retained qubit count."""
    refs = reference_levels(fixture, config.n_states)
    rows: list[SweepRow] = []
    for n_target in n_targets:
        reduction = reduce_fixture(fixture, int(n_target))
        circuit = build_ansatz(fixture, reduction, config)
        result = vqd(
            reduction.projected, circuit, config.n_states, config.solver
        )
        for k in range(config.n_states):
            rows.append(
                SweepRow(
                    n_qubits=reduction.projected.remaining_qubits,
                    state=k,
                    energy=result.energies[k],
                    error=abs(result.energies[k] - refs[k]),
                    iterations=result.iteration_counts[k],
                    converged=result.converged[k],
                )
            )
    return rows


@dataclass
class ScanPoint:
    bond_length: float
    fixture_name: str
    energies: list[float]
    errors: list[float]
    iterations: list[int]
    converged: list[bool]
    near_degenerate_pairs: list[tuple[int, int]]


@dataclass
class ScanResult:
    points: list[ScanPoint]
    iteration_mean: list[float]
    iteration_std: list[float]

    def total_iterations(self) -> int:
        return int(sum(sum(p.iterations) for p in self.points))


def pes_scan(
    fixtures: list[MoleculeFixture],
    n_target: int,
    config: ExperimentConfig,
) -> ScanResult:
    """Bond-length scan at a fixed qubit budget.

    With ``config.warm_start`` each point's states start from the
    previous point's optima; the first point and cold scans use the
    config's initialization mode.  Iteration statistics (mean and
    standard deviation per state over the scan) summarize optimizer
    effort the way convergence studies usually report it.
    """
    points: list[ScanPoint] = []
    carry = None
    for fixture in fixtures:
        reduction = reduce_fixture(fixture, n_target)
        circuit = build_ansatz(fixture, reduction, config)
        init_sets = None
        if config.warm_start and carry is not None:
            if all(c.shape == (circuit.n_parameters,) for c in carry):
                init_sets = carry
        result = vqd(
            reduction.projected,
            circuit,
            config.n_states,
            config.solver,
            initial_parameter_sets=init_sets,
        )
        refs = reference_levels(fixture, config.n_states)
        points.append(
            ScanPoint(
                bond_length=fixture.bond_length if fixture.bond_length is not None else float("nan"),
                fixture_name=fixture.name,
                energies=result.energies,
                errors=[abs(e - r) for e, r in zip(result.energies, refs)],
                iterations=result.iteration_counts,
                converged=result.converged,
                near_degenerate_pairs=result.near_degenerate_pairs,
            )
        )
        if config.warm_start:
            carry = result.parameter_sets
    counts = np.array([p.iterations for p in points], dtype=float)
    return ScanResult(
        points=points,
        iteration_mean=[float(v) for v in counts.mean(axis=0)],
        iteration_std=[float(v) for v in counts.std(axis=0)],
    )

"""Command-line front end.

Six subcommands cover the pipeline: ``validate`` checks fixture files,
``decompose`` reports the classical term split, ``project`` writes a
reduced Hamiltonian, ``solve`` runs the deflation solver at one qubit
budget, ``sweep`` repeats it across budgets, and ``pes`` walks an ordered
list of fixtures as a bond-length scan.

Every output document embeds a run manifest (command line, input paths,
config snapshot, seed, version, timestamps) so a result can be traced
back to the exact invocation that produced it.  Rerunning with the same
manifest reproduces the same bytes apart from the timestamps themselves.

Exit codes: 0 success, 2 input or argument validation, 3 non-convergence
under --strict, 4 resource caps.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    ContractViolation,
    ConvergenceError,
    DimensionError,
    FixtureError,
    QContextError,
    ResourceLimitError,
)
from .fixture_io import load_fixture, save_projected
from .noncontextual import partition, partition_report, solve_noncontextual
from .solver import ExperimentConfig, SolverConfig, pes_scan, qubit_sweep
from .subspace import reduce_to_subspace, stabilizers_from_indices

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_CONVERGENCE = 3
EXIT_RESOURCE = 4


# ---------------------------------------------------------------------------
# manifest plumbing
# ---------------------------------------------------------------------------


def run_manifest(args: argparse.Namespace, paths: list[str]) -> dict:
    solver = solver_config(args)
    snapshot = dataclasses.asdict(solver)
    for key in ("ansatz", "repeats", "states", "entangler", "qubits", "warm_start"):
        if hasattr(args, key):
            snapshot[key] = getattr(args, key)
    return {
        "command": args.command,
        "fixtures": paths,
        "config": snapshot,
        "seed": getattr(args, "seed", 0),
        "version": __version__,
        "written_at": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }


def manifest_comment(manifest: dict) -> str:
    return "# manifest: " + json.dumps(manifest, sort_keys=True)


# ---------------------------------------------------------------------------
# argument -> config translation
# ---------------------------------------------------------------------------


def solver_config(args: argparse.Namespace) -> SolverConfig:
    kwargs = {}
    if getattr(args, "beta", None) is not None:
        kwargs["beta"] = args.beta
    if getattr(args, "max_evals", None) is not None:
        kwargs["max_evaluations"] = args.max_evals
    if getattr(args, "restarts", None) is not None:
        kwargs["n_restarts"] = args.restarts
    if getattr(args, "energy_tol", None) is not None:
        kwargs["energy_tol"] = args.energy_tol
    return SolverConfig(
        seed=getattr(args, "seed", 0),
        init=getattr(args, "init", "zero"),
        **kwargs,
    )


def experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    return ExperimentConfig(
        ansatz=args.ansatz,
        n_repeats=args.repeats,
        n_states=args.states,
        warm_start=getattr(args, "warm_start", True),
        entangler=args.entangler,
        spin_filter=not args.all_excitations,
        solver=solver_config(args),
    )


def load_all(paths) -> list:
    return [load_fixture(p) for p in paths]


# ---------------------------------------------------------------------------
# output writers
# ---------------------------------------------------------------------------


def write_lines(lines: list[str], out: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def fmt(x: float) -> str:
    return f"{x:.12g}"


def svg_line_chart(
    series: dict[str, list[tuple[float, float]]],
    x_label: str,
    y_label: str,
) -> str:
    """Minimal deterministic SVG polyline chart, one series per state."""
    width, height, pad = 640, 400, 56
    points = [pt for pts in series.values() for pt in pts]
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0

    def sx(x: float) -> float:
        return pad + (x - x_lo) / x_span * (width - 2 * pad)

    def sy(y: float) -> float:
        return height - pad - (y - y_lo) / y_span * (height - 2 * pad)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" '
        f'y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 12}" text-anchor="middle" '
        f'font-size="13">{x_label}</text>',
        f'<text x="16" y="{height / 2:.1f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 16 {height / 2:.1f})">{y_label}</text>',
        f'<text x="{pad}" y="{height - pad + 16}" font-size="11" '
        f'text-anchor="middle">{fmt(x_lo)}</text>',
        f'<text x="{width - pad}" y="{height - pad + 16}" font-size="11" '
        f'text-anchor="middle">{fmt(x_hi)}</text>',
        f'<text x="{pad - 6}" y="{height - pad}" font-size="11" '
        f'text-anchor="end">{fmt(y_lo)}</text>',
        f'<text x="{pad - 6}" y="{pad + 4}" font-size="11" '
        f'text-anchor="end">{fmt(y_hi)}</text>',
    ]
    for i, (name, pts) in enumerate(sorted(series.items())):
        color = colors[i % len(colors)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in sorted(pts))
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{width - pad + 4}" y="{pad + 14 * i + 4}" font-size="11" '
            f'fill="{color}">{name}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> int:
    for path in args.fixtures:
        fx = load_fixture(path)
        print(f"{path}: OK ({fx.name}, {fx.n_qubits} qubits, "
              f"{len(fx.hamiltonian)} terms)")
    return EXIT_OK


def cmd_decompose(args: argparse.Namespace) -> int:
    fx = load_fixture(args.fixture)
    p = partition(fx.hamiltonian, strategy=args.strategy)
    reference = fx.hf_occupation if args.pin_reference else None
    energy, state = solve_noncontextual(p, reference=reference, seed=args.seed)
    doc = partition_report(p, energy=energy, state=state)
    doc["reference_pinned"] = bool(args.pin_reference)
    if fx.hf_energy is not None:
        doc["hf_energy"] = fx.hf_energy
        doc["distance_to_hf"] = abs(energy - fx.hf_energy)
    doc["manifest"] = run_manifest(args, [args.fixture])
    write_lines([json.dumps(doc, indent=1)], args.out)
    return EXIT_OK


def cmd_project(args: argparse.Namespace) -> int:
    fx = load_fixture(args.fixture)
    p = partition(fx.hamiltonian)
    _, state = solve_noncontextual(p, reference=fx.hf_occupation, seed=args.seed)
    enforced = None
    if args.stabilizers:
        items = [s if s == "combo" else int(s) for s in args.stabilizers.split(",")]
        enforced = stabilizers_from_indices(p, state, items)
        n_target = fx.n_qubits - len(enforced)
        if args.qubits is not None and args.qubits != n_target:
            raise ContractViolation(
                f"--qubits {args.qubits} contradicts {len(enforced)} "
                f"explicit stabilizers on {fx.n_qubits} qubits"
            )
    else:
        if args.qubits is None:
            raise ContractViolation("project needs --qubits or --stabilizers")
        n_target = args.qubits
    reduction = reduce_to_subspace(fx.hamiltonian, p, state, n_target, enforced)
    ph = reduction.projected
    ph.metadata.update(
        source_fixture=fx.name,
        enforced=[
            {"kind": e.kind, "members": list(e.members), "sign": e.sign}
            for e in reduction.enforced
        ],
        manifest=run_manifest(args, [args.fixture]),
    )
    out = args.out or f"{fx.name}_q{n_target}.projected.json"
    save_projected(ph, out)
    print(f"wrote {out}: {ph.remaining_qubits} qubits, "
          f"{len(ph.reduced)} terms, offset {fmt(ph.offset)} hartree")
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    fx = load_fixture(args.fixture)
    config = experiment_config(args)
    n_target = args.qubits if args.qubits is not None else fx.n_qubits
    rows = qubit_sweep(fx, [n_target], config)
    lines = [
        manifest_comment(run_manifest(args, [args.fixture])),
        "state,energy_hartree,error_hartree,evaluations,converged",
    ]
    for r in rows:
        lines.append(
            f"{r.state},{fmt(r.energy)},{fmt(r.error)},{r.iterations},"
            f"{str(r.converged).lower()}"
        )
    write_lines(lines, args.out)
    if args.strict and not all(r.converged for r in rows):
        raise ConvergenceError("a state failed to converge under --strict")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    fx = load_fixture(args.fixture)
    config = experiment_config(args)
    targets = [int(s) for s in args.qubits.split(",")]
    rows = qubit_sweep(fx, targets, config)
    lines = [
        manifest_comment(run_manifest(args, [args.fixture])),
        "n_qubits,state,energy_hartree,error_hartree,evaluations,converged",
    ]
    for r in rows:
        lines.append(
            f"{r.n_qubits},{r.state},{fmt(r.energy)},{fmt(r.error)},"
            f"{r.iterations},{str(r.converged).lower()}"
        )
    write_lines(lines, args.out)
    if args.svg:
        series = {
            f"state {r.state}": [] for r in rows
        }
        for r in rows:
            series[f"state {r.state}"].append((float(r.n_qubits), r.error))
        Path(args.svg).write_text(
            svg_line_chart(series, "retained qubits", "error (hartree)")
        )
    if args.strict and not all(r.converged for r in rows):
        raise ConvergenceError("a sweep row failed to converge under --strict")
    return EXIT_OK


def cmd_pes(args: argparse.Namespace) -> int:
    fixtures = load_all(args.fixtures)
    lengths = [fx.bond_length for fx in fixtures]
    if any(r is None for r in lengths):
        raise FixtureError("every scan fixture needs bond_length_angstrom metadata")
    order = np.argsort(lengths)
    fixtures = [fixtures[i] for i in order]
    config = experiment_config(args)
    scan = pes_scan(fixtures, args.qubits, config)
    lines = [
        manifest_comment(run_manifest(args, [str(p) for p in args.fixtures])),
        "bond_length_angstrom,state,energy_hartree,error_hartree,evaluations,converged",
    ]
    for point in scan.points:
        for k in range(config.n_states):
            lines.append(
                f"{fmt(point.bond_length)},{k},{fmt(point.energies[k])},"
                f"{fmt(point.errors[k])},{point.iterations[k]},"
                f"{str(point.converged[k]).lower()}"
            )
    lines.append("# per-state evaluation statistics over the scan")
    lines.append("state,mean_evaluations,std_evaluations")
    for k in range(config.n_states):
        lines.append(f"{k},{fmt(scan.iteration_mean[k])},{fmt(scan.iteration_std[k])}")
    write_lines(lines, args.out)
    if args.svg:
        series: dict[str, list[tuple[float, float]]] = {}
        for point in scan.points:
            for k in range(config.n_states):
                series.setdefault(f"state {k}", []).append(
                    (point.bond_length, point.energies[k])
                )
        Path(args.svg).write_text(
            svg_line_chart(series, "bond length (angstrom)", "energy (hartree)")
        )
    if args.strict and not all(all(p.converged) for p in scan.points):
        raise ConvergenceError("a scan point failed to converge under --strict")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def add_solver_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--states", type=int, default=1,
                     help="number of eigenstates, lowest first")
    sub.add_argument("--ansatz", choices=("uccsd", "ryrz", "nblock"),
                     default="uccsd")
    sub.add_argument("--repeats", type=int, default=2,
                     help="entangling-layer repeats for the hardware ansaetze")
    sub.add_argument("--entangler", choices=("full", "chain"), default="full")
    sub.add_argument("--all-excitations", action="store_true",
                     help="skip the spin filter when building the uccsd pool")
    sub.add_argument("--beta", type=float, default=None,
                     help="override the deflation weight")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--init", choices=("zero", "random"), default="zero")
    sub.add_argument("--max-evals", type=int, default=None,
                     help="cost-evaluation cap per state")
    sub.add_argument("--restarts", type=int, default=None,
                     help="random restarts after the first descent")
    sub.add_argument("--energy-tol", type=float, default=None)
    sub.add_argument("--strict", action="store_true",
                     help="exit 3 if any state fails to converge")
    sub.add_argument("--out", default=None, help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcontext",
        description="Reduce qubit Hamiltonians and solve for low-lying states.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)

    v = commands.add_parser("validate", help="schema-check fixture files")
    v.add_argument("fixtures", nargs="+")
    v.set_defaults(func=cmd_validate)

    d = commands.add_parser("decompose", help="report the classical term split")
    d.add_argument("fixture")
    d.add_argument("--strategy", choices=("greedy_magnitude", "diagonal"),
                   default="greedy_magnitude")
    d.add_argument("--pin-reference", action="store_true",
                   help="lock diagonal generators to the mean-field determinant")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--out", default=None)
    d.set_defaults(func=cmd_decompose)

    p = commands.add_parser("project", help="write a reduced Hamiltonian file")
    p.add_argument("fixture")
    p.add_argument("--qubits", type=int, default=None,
                   help="qubits to retain (automatic stabilizer ranking)")
    p.add_argument("--stabilizers", default=None,
                   help="explicit comma-separated generator indices, plus "
                        "'combo' for the clique combination")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_project)

    s = commands.add_parser("solve", help="deflation solve at one qubit budget")
    s.add_argument("fixture")
    s.add_argument("--qubits", type=int, default=None,
                   help="retained qubits (default: no reduction)")
    add_solver_flags(s)
    s.set_defaults(func=cmd_solve)

    w = commands.add_parser("sweep", help="accuracy versus retained qubits")
    w.add_argument("fixture")
    w.add_argument("--qubits", required=True,
                   help="comma-separated retained-qubit counts")
    w.add_argument("--svg", default=None, help="optional error-chart file")
    add_solver_flags(w)
    w.set_defaults(func=cmd_sweep)

    e = commands.add_parser("pes", help="bond-length scan over fixtures")
    e.add_argument("fixtures", nargs="+")
    e.add_argument("--qubits", type=int, required=True)
    e.add_argument("--svg", default=None, help="optional energy-chart file")
    warm = e.add_mutually_exclusive_group()
    warm.add_argument("--warm-start", dest="warm_start", action="store_true",
                      default=True,
                      help="seed each point from the previous optimum (default)")
    warm.add_argument("--cold-start", dest="warm_start", action="store_false")
    add_solver_flags(e)
    e.set_defaults(func=cmd_pes)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (FixtureError, ContractViolation, DimensionError, FileNotFoundError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except QContextError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())

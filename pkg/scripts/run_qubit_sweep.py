#!/usr/bin/env python3
"""Accuracy of ground and excited states versus retained qubit count.

Runs the reduction + deflation pipeline over a range of qubit budgets for
one molecule and prints a table of absolute errors against the stored
benchmark levels. Writes a CSV next to the table if --out is given.

Typical runs:

    python scripts/run_qubit_sweep.py fixtures/lih_sto3g_r1.5747.json \
        --qubits 2,3,4,5 --states 3
    python scripts/run_qubit_sweep.py fixtures/beh_cation_sto3g_r1.3447.json \
        --qubits 4,5,6 --states 2 --max-evals 20000 --restarts 5
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qcontext import (  # noqa: E402
    ExperimentConfig,
    SolverConfig,
    load_fixture,
    qubit_sweep,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("fixture")
    ap.add_argument("--qubits", default="3,4,5",
                    help="comma-separated retained-qubit budgets")
    ap.add_argument("--states", type=int, default=2)
    ap.add_argument("--max-evals", type=int, default=20000)
    ap.add_argument("--restarts", type=int, default=5)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--keep-spin-filter", action="store_true",
                    help="restrict the excitation pool to spin-preserving moves")
    ap.add_argument("--out", default=None, help="optional CSV path")
    args = ap.parse_args()

    fx = load_fixture(args.fixture)
    config = ExperimentConfig(
        ansatz="uccsd",
        n_states=args.states,
        spin_filter=args.keep_spin_filter,
        solver=SolverConfig(
            seed=args.seed,
            max_evaluations=args.max_evals,
            n_restarts=args.restarts,
        ),
    )
    budgets = [int(s) for s in args.qubits.split(",")]
    rows = qubit_sweep(fx, budgets, config)

    print(f"{fx.name}: {fx.n_qubits} qubits full, "
          f"{len(fx.hamiltonian)} terms")
    print(f"{'qubits':>6} {'state':>5} {'energy/Ha':>16} {'error/Ha':>12} "
          f"{'evals':>8} conv")
    for r in rows:
        print(f"{r.n_qubits:>6} {r.state:>5} {r.energy:>16.10f} "
              f"{r.error:>12.3e} {r.iterations:>8} {r.converged}")

    if args.out:
        lines = ["n_qubits,state,energy_hartree,error_hartree,evaluations,converged"]
        lines += [f"{r.n_qubits},{r.state},{r.energy!r},{r.error!r},"
                  f"{r.iterations},{r.converged}" for r in rows]
        Path(args.out).write_text("\n".join(lines) + "\n")
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

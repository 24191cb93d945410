#!/usr/bin/env python3
"""Bond-length scan with and without warm-started parameters.

Walks an ordered set of fixture files at a fixed qubit budget twice: once
seeding every point from the previous point's optima, once from scratch.
Reports per-point errors and the total optimizer effort of both runs, which
is the usual argument for continuation on a potential-energy curve.

Example (dissociation curve committed under fixtures/):

    python scripts/run_pes_warm_start.py fixtures/lih_sto3g_r*.json --qubits 4
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qcontext import ExperimentConfig, SolverConfig, load_fixture, pes_scan  # noqa: E402


def run_scan(fixtures, args, warm: bool):
    config = ExperimentConfig(
        ansatz="uccsd",
        n_states=args.states,
        spin_filter=False,
        warm_start=warm,
        solver=SolverConfig(
            seed=args.seed,
            max_evaluations=args.max_evals,
            n_restarts=args.restarts,
        ),
    )
    return pes_scan(fixtures, args.qubits, config)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("fixtures", nargs="+")
    ap.add_argument("--qubits", type=int, required=True)
    ap.add_argument("--states", type=int, default=3)
    ap.add_argument("--max-evals", type=int, default=30000)
    ap.add_argument("--restarts", type=int, default=5)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    fixtures = sorted((load_fixture(p) for p in args.fixtures),
                      key=lambda f: f.bond_length)

    warm = run_scan(fixtures, args, warm=True)
    cold = run_scan(fixtures, args, warm=False)

    print(f"{'r/A':>8} {'state':>5} {'energy/Ha':>16} {'error/Ha':>12} "
          f"{'warm evals':>10} {'cold evals':>10}")
    for wp, cp in zip(warm.points, cold.points):
        for k in range(args.states):
            print(f"{wp.bond_length:>8.4f} {k:>5} {wp.energies[k]:>16.10f} "
                  f"{wp.errors[k]:>12.3e} {wp.iterations[k]:>10} "
                  f"{cp.iterations[k]:>10}")

    tw, tc = warm.total_iterations(), cold.total_iterations()
    print(f"\ntotal cost evaluations: warm {tw}, cold {tc} "
          f"({100 * (tc - tw) / tc:.1f}% saved)" if tc else "")
    return 0


if __name__ == "__main__":
    sys.exit(main())

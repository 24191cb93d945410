#!/usr/bin/env python3
"""Optimizer effort of the two hardware-efficient circuit families.

Runs the same ground-state scan twice, once with rotation-ladder layers
(ryrz) and once with exchange-block layers (nblock), at repeat counts that
put the two circuits in the same depth regime. Prints per-point evaluation
counts plus the mean and standard deviation over the scan, the statistics
used to compare how reliably each family converges.

Defaults reproduce the committed BeH+ comparison at 6 retained qubits; a
chain entangler keeps the ladder depth comparable to the block ladder.
"""

import argparse
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qcontext import ExperimentConfig, SolverConfig, load_fixture, pes_scan  # noqa: E402

DEFAULT_SCAN = [
    "fixtures/beh_cation_sto3g_r1.0000.json",
    "fixtures/beh_cation_sto3g_r1.3447.json",
    "fixtures/beh_cation_sto3g_r1.8000.json",
    "fixtures/beh_cation_sto3g_r2.2000.json",
    "fixtures/beh_cation_sto3g_r2.6000.json",
]


def run_family(fixtures, ansatz, repeats, args):
    config = ExperimentConfig(
        ansatz=ansatz,
        n_repeats=repeats,
        n_states=1,
        warm_start=False,
        entangler="chain",
        solver=SolverConfig(
            seed=args.seed,
            init="random",
            max_evaluations=args.max_evals,
            n_restarts=0,
            restart_spread=math.pi,
            energy_tol=args.energy_tol,
        ),
    )
    return pes_scan(fixtures, args.qubits, config)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("fixtures", nargs="*", default=None)
    ap.add_argument("--qubits", type=int, default=6)
    ap.add_argument("--ryrz-repeats", type=int, default=8)
    ap.add_argument("--nblock-repeats", type=int, default=5)
    ap.add_argument("--max-evals", type=int, default=120000)
    ap.add_argument("--energy-tol", type=float, default=1e-3)
    ap.add_argument("--seed", type=int, default=11)
    args = ap.parse_args()

    root = Path(__file__).resolve().parent.parent
    paths = args.fixtures or [str(root / p) for p in DEFAULT_SCAN]
    fixtures = sorted((load_fixture(p) for p in paths),
                      key=lambda f: f.bond_length)

    results = {}
    for name, repeats in (("ryrz", args.ryrz_repeats),
                          ("nblock", args.nblock_repeats)):
        results[name] = run_family(fixtures, name, repeats, args)

    print(f"{'r/A':>8} {'ryrz evals':>11} {'nblock evals':>13} "
          f"{'ryrz err/Ha':>12} {'nblock err/Ha':>14}")
    for rp, np_ in zip(results["ryrz"].points, results["nblock"].points):
        print(f"{rp.bond_length:>8.4f} {rp.iterations[0]:>11} "
              f"{np_.iterations[0]:>13} {rp.errors[0]:>12.3e} "
              f"{np_.errors[0]:>14.3e}")

    for name in ("ryrz", "nblock"):
        scan = results[name]
        print(f"{name:>7}: mean {scan.iteration_mean[0]:.0f}, "
              f"std {scan.iteration_std[0]:.0f} evaluations")
    return 0


if __name__ == "__main__":
    sys.exit(main())

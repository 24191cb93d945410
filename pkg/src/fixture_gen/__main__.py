"""Batch entry point: python -m fixture_gen recipes.json --out-dir fixtures."""

import argparse
import sys

from .generate import GenerationError, generate, load_recipes


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="python -m fixture_gen",
        description="Build molecular fixture JSON files from a recipes file.",
    )
    ap.add_argument("recipes", help="recipes JSON file")
    ap.add_argument("--out-dir", default=".", help="directory for fixture files")
    ap.add_argument("--only", default=None,
                    help="generate only recipes whose name contains this substring")
    ap.add_argument("--list", action="store_true", dest="list_only",
                    help="list recipe names and exit")
    args = ap.parse_args(argv)

    try:
        recipes = load_recipes(args.recipes)
    except (GenerationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.only is not None:
        recipes = [r for r in recipes if args.only in r.name]
        if not recipes:
            print(f"error: no recipe name contains {args.only!r}", file=sys.stderr)
            return 2
    if args.list_only:
        for r in recipes:
            print(r.name)
        return 0

    for r in recipes:
        try:
            path = generate(r, args.out_dir)
        except GenerationError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(f"{r.name}: wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Console entry point."""

from __future__ import annotations

import sys

from .harness import parse_cli, run_experiment


def main(argv: list[str] | None = None) -> int:
    spec = parse_cli(sys.argv[1:] if argv is None else argv)
    manifest = run_experiment(spec)
    slopes = manifest["slopes"].get(spec.method, {})
    asymptotic = slopes.get("asymptotic")
    print(f"wrote {spec.out}/convergence.csv, observables.csv, manifest.json")
    if asymptotic is not None:
        print(f"{spec.method}: asymptotic slope {asymptotic:.3f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

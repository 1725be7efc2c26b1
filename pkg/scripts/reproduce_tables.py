"""Regenerate every table and curve into one directory.

Usage:
  python scripts/reproduce_tables.py --out-dir results --seed 7
"""

import argparse
import os
import sys
from pathlib import Path

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cli import main as cli_main  # noqa: E402


def runs(out_dir: Path, fmt: str, seed: int, samples: int):
    ext = fmt
    yield "gate table", ["table", "--d", "2-5", "--out", str(out_dir / f"gate_table.{ext}")]
    yield "spin curves", [
        "spin-scan",
        "--spins", "1/2,1,3/2,2",
        "--out", str(out_dir / f"spin_curves.{ext}"),
        "--maxima-out", str(out_dir / f"spin_maxima.{ext}"),
    ]
    yield "asymptotics", [
        "asymptotics",
        "--d-max", "64",
        "--mc-samples", str(samples),
        "--seed", str(seed),
        "--out", str(out_dir / f"asymptotics.{ext}"),
    ]
    for gate in ("sum", "dsum", "swap"):
        for d in ("2", "3"):
            for assisted in (False, True):
                name = f"power_{gate}_d{d}{'_anc' if assisted else ''}.{ext}"
                argv = [
                    "power",
                    "--gate", gate,
                    "--d", d,
                    "--method", "closed-form,schmidt,trace,mc",
                    "--samples", str(samples),
                    "--seed", str(seed),
                    "--out", str(out_dir / name),
                ]
                if assisted:
                    argv.append("--assisted")
                yield f"power {gate} d={d}{' assisted' if assisted else ''}", argv
    for suite, d, trials in (
        ("prop1", "2-4", 100),
        ("routes", "2,3", 50),
        ("identities", "2-5", 20),
        ("spin", "2-5", 1),
        ("bounds", "2,3", 1),
    ):
        yield f"verify {suite}", [
            "verify",
            "--suite", suite,
            "--d", d,
            "--trials", str(trials),
            "--samples", str(samples),
            "--seed", str(seed),
            "--out", str(out_dir / f"verify_{suite}.{ext}"),
        ]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out-dir", required=True, help="Directory for the generated files")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--samples", type=int, default=20000)
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    worst = 0
    for label, argv in runs(out_dir, args.format, args.seed, args.samples):
        print(f"{label}...")
        code = cli_main(argv + ["--format", args.format])
        if code:
            print(f"  exit code {code}")
        worst = max(worst, code)
    sys.exit(worst)


if __name__ == "__main__":
    main()

"""Run the finite-difference and Monte-Carlo oracles for each config with the oracle enabled.

    python scripts/run_validation.py [--no-mc] [config ...]

Prints one line per (config, time) and exits nonzero if any metric is out of tolerance.
"""
import argparse
import sys
from pathlib import Path

from fpsim.cli import run_validate
from fpsim.config import load_config

DEFAULT = ["fig1.yaml", "fig1_validate.yaml", "fig2.yaml", "fig6.yaml", "fig8.yaml"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("configs", nargs="*")
    ap.add_argument("--no-mc", action="store_true", help="skip Monte-Carlo sampling")
    args = ap.parse_args()
    root = Path(__file__).resolve().parents[1] / "configs"
    paths = [Path(p) for p in args.configs] or [root / name for name in DEFAULT]

    failed = False
    for path in paths:
        cfg = load_config(path)
        if args.no_mc:
            cfg.oracle.n_paths = 0
        report = run_validate(cfg)
        for rec in report["records"]:
            ks = f"  ks={rec['ks']:.4f}/{rec['ks_tolerance']:g}" if "ks" in rec else ""
            print(
                f"{path.stem:14s} t={rec['time']:<5g} l1={rec['l1']:.3e}/{rec['l1_tolerance']:g}"
                f"  drift={rec['mass_drift']:.1e}{ks}  {'ok' if rec['pass'] else 'FAIL'}"
            )
        failed |= not report["passed"]
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()

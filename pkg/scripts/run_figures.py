"""Emit x,W,J slices and summaries for every figure config.

    python scripts/run_figures.py [--configs configs] [--out out]
"""
import argparse
import json
from pathlib import Path

from fpsim.cli import run_figure
from fpsim.config import load_config


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--configs", default=Path(__file__).resolve().parents[1] / "configs", type=Path)
    ap.add_argument("--out", default=None, help="override each config's output directory root")
    args = ap.parse_args()

    for path in sorted(args.configs.glob("fig*.yaml")):
        if path.stem.endswith("_validate"):
            continue
        cfg = load_config(path)
        if args.out:
            cfg.output_path = str(Path(args.out) / cfg.name)
        report = run_figure(cfg)
        for rec in report["records"]:
            print(path.stem, json.dumps({k: rec[k] for k in ("time", "peak_location", "peak_value", "fwhm", "normalization")}))


if __name__ == "__main__":
    main()

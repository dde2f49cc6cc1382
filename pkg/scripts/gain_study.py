"""
Envelope radius as the feedback gains grow.

Re-certifies a scenario with every gamma_i scaled by each factor and prints
(or saves) the resulting radii. The radius should shrink as the gains grow.

    python scripts/gain_study.py scenarios/mismatch_1p1.toml --scales 0.5 1 2 4 --out radii.csv
"""

import argparse
from pathlib import Path

import pandas as pd

from s2track.certification import radius_versus_gain_scale
from s2track.data import load_config, write_csv


def gain_study(config_path: str, scales, out=None) -> pd.DataFrame:
    """Run the study for one scenario file and return the table."""
    config = load_config(config_path)
    print(f"Certifying '{config.name}' at {len(scales)} gain scales...")

    rows = radius_versus_gain_scale(
        config.model,
        config.gains,
        config.envelope,
        scales,
        samples=config.certification.samples,
        seed=config.certification.seed,
        safety_factor=config.certification.safety_factor,
        psi_points=config.certification.psi_grid,
        r_body=config.r_body,
    )
    table = pd.DataFrame(rows, columns=["scale", "radius", "certified"])

    for scale, radius, certified in rows:
        mark = "✓" if certified else "✗"
        print(f"{mark} scale {scale:g}: radius = {radius:.6g}")

    if out:
        path = write_csv(table, Path(out))
        print(f"✓ Table saved to: {path}")
    return table


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Envelope radius versus gain scale")
    parser.add_argument("config", help="Scenario file (.toml or .json)")
    parser.add_argument(
        "-s", "--scales", type=float, nargs="+", default=[0.5, 1.0, 2.0, 4.0, 8.0]
    )
    parser.add_argument("-o", "--out", help="Optional CSV output path")

    args = parser.parse_args()
    gain_study(args.config, args.scales, args.out)

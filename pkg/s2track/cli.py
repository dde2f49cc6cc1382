"""
Command-line interface.

    s2track certify --config scenario.toml [--out DIR] [--json]
    s2track run     --config scenario.toml [--out DIR] [--allow-uncertified] [--dt DT] [--duration T]
    s2track sweep   --config "scenarios/*.toml" [--parallelism N] [--out DIR]

Exit codes: 0 success, 1 error, 2 gains not certified, 3 scenario aborted.
``S2TRACK_SEED`` overrides the bound-sampling seed.
"""

import argparse
import glob
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from s2track.__version__ import __version__
from s2track.core.errors import NotCertifiableError, S2TrackError, ScenarioAborted
from s2track.data.config import ScenarioConfig, load_config
from s2track.data.writers import json_text, write_csv, write_json
from s2track.sim.scenario import EXIT_ABORTED, EXIT_OK, aborted_summary, certify_scenario, run_scenario

logger = logging.getLogger("s2track")

EXIT_ERROR = 1
EXIT_UNCERTIFIED = 2

SWEEP_COLUMNS = [
    "file",
    "name",
    "exit_status",
    "certified",
    "radius",
    "decay_rate",
    "fitted_rate",
    "max_zq_settled",
    "envelope_violations",
    "sandwich_failures",
    "decrease_violations",
    "steps",
    "abort_reason",
    "abort_time",
    "error",
]


def _emit(as_json: bool, payload: dict, lines: List[str]) -> None:
    if as_json:
        sys.stdout.write(json_text(payload))
    else:
        print("\n".join(lines))


def _load(args: argparse.Namespace) -> ScenarioConfig:
    config = load_config(args.config)
    return config.with_overrides(dt=args.dt, duration=args.duration)


def _out_dir(args: argparse.Namespace, config: ScenarioConfig) -> Path:
    return Path(args.out) if args.out else config.output.dir


def cmd_certify(args: argparse.Namespace) -> int:
    """Certify the gains of one scenario; 0 if certified, 2 otherwise."""
    config = _load(args)
    report = certify_scenario(config)
    code = EXIT_OK if report.certified else EXIT_UNCERTIFIED

    payload = {"name": config.name, "exit_status": code, "report": report.to_dict()}
    if args.out:
        path = write_json(report.to_dict(), Path(args.out) / f"{config.output.name}.certificate.json")
        logger.info("Certificate written to %s", path)

    lines = [f"Scenario: {config.name}"] + report.summary_lines()
    if not report.certified:
        lines.append(f"✗ Failing conditions: {', '.join(report.failures)}")
    _emit(args.json, payload, lines)
    return code


def cmd_run(args: argparse.Namespace) -> int:
    """Run one scenario and write its trajectory CSV and summary JSON."""
    config = _load(args)
    report = certify_scenario(config)
    out_dir = _out_dir(args, config)
    stem = config.output.name

    if not report.certified and not args.allow_uncertified:
        message = (
            f"Gains are not certified (failing: {', '.join(report.failures)}); "
            "pass --allow-uncertified to run anyway"
        )
        payload = {"name": config.name, "exit_status": EXIT_UNCERTIFIED, "error": message}
        _emit(args.json, payload, [f"✗ {message}"])
        return EXIT_UNCERTIFIED

    try:
        result = run_scenario(config, allow_uncertified=args.allow_uncertified, report=report)
    except ScenarioAborted as exc:
        summary = aborted_summary(config.name, report, exc)
        write_json(summary.to_dict(), out_dir / f"{stem}.summary.json")
        last = exc.last_state
        lines = [f"✗ {exc}"]
        if last is not None:
            lines.append(f"  last good Q = {np.array2string(last.Q, precision=6)}")
            lines.append(f"  last good w_b = {np.array2string(last.w_b, precision=6)}")
        _emit(args.json, {"summary": summary.to_dict(), "error": str(exc)}, lines)
        return EXIT_ABORTED

    csv_path = write_csv(result.trajectory, out_dir / f"{stem}.csv")
    json_path = write_json(result.summary.to_dict(), out_dir / f"{stem}.summary.json")

    s = result.summary
    lines = [
        f"✓ Scenario '{config.name}' completed ({s.steps} steps)",
        f"  envelope radius = {s.radius:.6g}, decay rate = {s.decay_rate:.6g} 1/s",
    ]
    if s.fitted_rate is not None:
        lines.append(f"  fitted rate of V = {s.fitted_rate:.6g} 1/s")
    lines += [
        f"  max |z_q| after settling = {s.max_zq_settled:.6g}",
        f"  envelope violations = {s.envelope_violations}, "
        f"sandwich failures = {s.sandwich_failures}",
        f"✓ Trajectory saved to: {csv_path}",
        f"✓ Summary saved to: {json_path}",
    ]
    _emit(args.json, {"summary": s.to_dict()}, lines)
    return EXIT_OK


def _sweep_row(
    path: str,
    dt: Optional[float],
    duration: Optional[float],
    allow_uncertified: bool,
) -> dict:
    """Run one sweep entry; every failure is captured in the row."""
    row = {column: None for column in SWEEP_COLUMNS}
    row["file"] = Path(path).name
    try:
        config = load_config(path).with_overrides(dt=dt, duration=duration)
        row["name"] = config.name
        report = certify_scenario(config)
        try:
            result = run_scenario(config, allow_uncertified=allow_uncertified, report=report)
            row.update(result.summary.to_dict())
        except ScenarioAborted as exc:
            row.update(aborted_summary(config.name, report, exc).to_dict())
            row["error"] = str(exc)
    except NotCertifiableError as exc:
        row.update(exit_status=EXIT_UNCERTIFIED, certified=False, error=str(exc))
    except (S2TrackError, OSError, ValueError) as exc:
        row.update(exit_status=EXIT_ERROR, error=str(exc))
    return row


def sweep_table(
    paths: Sequence[str],
    parallelism: int = 1,
    dt: Optional[float] = None,
    duration: Optional[float] = None,
    allow_uncertified: bool = False,
) -> pd.DataFrame:
    """
    Run every scenario in ``paths`` and collect one summary row each.

    Rows come back in the order of ``paths`` whatever the parallelism.
    """
    n = len(paths)
    args = ([dt] * n, [duration] * n, [allow_uncertified] * n)
    if parallelism <= 1 or n <= 1:
        rows = list(map(_sweep_row, paths, *args))
    else:
        with ProcessPoolExecutor(max_workers=min(parallelism, n)) as executor:
            rows = list(executor.map(_sweep_row, paths, *args))
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def cmd_sweep(args: argparse.Namespace) -> int:
    """Run every scenario matching a glob; exit code is the worst row's."""
    paths = sorted(glob.glob(args.config), key=lambda p: (Path(p).name, p))
    if not paths:
        message = f"No scenario files match '{args.config}'"
        _emit(args.json, {"error": message, "exit_status": EXIT_ERROR}, [f"✗ {message}"])
        return EXIT_ERROR

    table = sweep_table(
        paths,
        parallelism=args.parallelism,
        dt=args.dt,
        duration=args.duration,
        allow_uncertified=args.allow_uncertified,
    )
    code = int(table["exit_status"].max())

    if args.out:
        path = write_csv(table, Path(args.out) / "sweep.csv")
        logger.info("Sweep table written to %s", path)

    records = table.astype(object).where(table.notna(), None).to_dict(orient="records")
    lines = []
    for record in records:
        mark = "✓" if record["exit_status"] == EXIT_OK else "✗"
        detail = f" ({record['error']})" if record["error"] else ""
        lines.append(f"{mark} {record['file']}: exit {record['exit_status']}{detail}")
    _emit(args.json, {"exit_status": code, "rows": records}, lines)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="s2track",
        description="Certify and simulate S² pointing and angular-velocity tracking",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="Scenario file (.toml or .json)")
    common.add_argument("--out", help="Output directory")
    common.add_argument("--json", action="store_true", help="Print one JSON document on stdout")
    common.add_argument("--dt", type=float, help="Override integration.dt (s)")
    common.add_argument("--duration", type=float, help="Override integration.duration (s)")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("certify", parents=[common], help="Certify the gains of a scenario")

    run = sub.add_parser("run", parents=[common], help="Simulate one scenario")
    run.add_argument(
        "--allow-uncertified", action="store_true", help="Run even if certification fails"
    )

    sweep = sub.add_parser(
        "sweep", parents=[common], help="Run every scenario matching a glob pattern"
    )
    sweep.add_argument(
        "--allow-uncertified", action="store_true", help="Run even if certification fails"
    )
    sweep.add_argument("--parallelism", type=int, default=1, help="Worker processes (default: 1)")
    return parser


_COMMANDS = {"certify": cmd_certify, "run": cmd_run, "sweep": cmd_sweep}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        return _COMMANDS[args.command](args)
    except (S2TrackError, OSError, ValueError) as exc:
        _emit(args.json, {"error": str(exc), "exit_status": EXIT_ERROR}, [f"✗ Error: {exc}"])
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

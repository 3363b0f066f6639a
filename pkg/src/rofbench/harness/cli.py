"""Command-line entry point ``rof-bench``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from ..dimensioning import CSV_COLUMNS, dimension
from ..errors import ConfigError, DomainError, RofBenchError
from ..powermodel import LinkKind, link_power
from .link import run_link
from .results import run_directory, write_table
from .scenario import load_scenario
from .sweep import FIGURE3_COLUMNS, FIGURE4_COLUMNS, run_evm_sweep, run_figure3, run_figure4

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

EVM_COLUMNS = ("kind", "wdm", "laser_dbm", "channel", "evm_percent")
DYNRANGE_COLUMNS = ("kind", "wdm", "threshold", "dynamic_range_db")
FAILURE_COLUMNS = ("kind", "wdm", "laser_dbm", "error")
POWER_COLUMNS = ("kind", "cu_watts", "rrh_watts", "total_watts")

log = logging.getLogger("rofbench")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="scenario TOML file layered over the defaults")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override a dotted key, e.g. fiber.length_km=15 (repeatable)")
    common.add_argument("--output", choices=("csv", "json"), default="csv")
    common.add_argument("--out", type=Path, default=Path("results"), help="root directory for run folders")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    common.add_argument("--seed", type=int, help="payload seed (default from the scenario)")
    common.add_argument("--threshold", type=float, help="EVM threshold in percent for dynamic range")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="rof-bench", description="Analog vs digitized radio-over-fiber fronthaul bench.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("dimension", parents=[common], help="sampling rate and aggregate bandwidth of the scenario band")
    sub.add_parser("power", parents=[common], help="power breakdown of both link kinds")
    sub.add_parser("link", parents=[common], help="per-channel EVM of one scenario")
    sub.add_parser("sweep", parents=[common], help="EVM over laser power and WDM count, with dynamic range")
    sub.add_parser("figure3", parents=[common], help="aggregate bandwidth versus per-wavelength bandwidth")
    sub.add_parser("figure4", parents=[common], help="power consumption versus antenna count")
    return parser


def _scenario(args):
    sc = load_scenario(args.config, args.overrides)
    if args.seed is not None:
        sc = sc.with_(seeds=replace(sc.seeds, payload=args.seed))
    if args.threshold is not None:
        if not args.threshold > 0:
            raise ConfigError("--threshold must be positive")
        sc = sc.with_(sweep=replace(sc.sweep, threshold_percent=args.threshold))
    if args.jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    return sc


def _evm_rows(kind, wdm, laser_dbm, report):
    return [
        {"kind": kind, "wdm": wdm, "laser_dbm": laser_dbm, "channel": k, "evm_percent": e}
        for k, e in enumerate(report.evm_percent)
    ]


def cmd_dimension(sc, args, out):
    row = dimension(sc.band, sc.geom, sc.coding, sc.mod).as_row()
    print(", ".join(f"{k}={v:.6g}" for k, v in row.items()))
    return [("dimension", CSV_COLUMNS, [row])]


def cmd_power(sc, args, out):
    rows = []
    for kind in LinkKind:
        b = link_power(sc.power, sc.geom, kind)
        cu, rrh = b.cu_watts.total, b.rrh_watts.total
        rows.append({"kind": kind.value, "cu_watts": cu, "rrh_watts": rrh, "total_watts": b.total_watts})
        print(f"{kind.value}: total {b.total_watts:.6g} W (CU {cu:.6g}, RRH {rrh:.6g})")
    return [("power", POWER_COLUMNS, rows)]


def cmd_link(sc, args, out):
    report = run_link(sc)
    for k, e in enumerate(report.evm_percent):
        print(f"{sc.link_kind.value} channel {k}: EVM {e:.4f} %")
    rows = _evm_rows(sc.link_kind.value, sc.wdm_channels, sc.modulator.laser_power_dbm, report)
    return [("link", EVM_COLUMNS, rows)]


def cmd_sweep(sc, args, out):
    result = run_evm_sweep(sc, jobs=args.jobs)
    rows, dyn = [], []
    for p in result.points:
        if p.ok:
            rows.extend(_evm_rows(p.kind, p.wdm, p.laser_dbm, p.report))
    for kind in result.kinds:
        for wdm in result.wdm_counts:
            dr = result.dynamic_range_db(kind, wdm)
            dyn.append({"kind": kind, "wdm": wdm, "threshold": result.threshold_percent, "dynamic_range_db": dr})
            print(f"{kind} {wdm}-WDM: dynamic range {dr:g} dB at {result.threshold_percent:g} % EVM")
    tables = [("sweep", EVM_COLUMNS, rows), ("dynrange", DYNRANGE_COLUMNS, dyn)]
    failed = [{"kind": p.kind, "wdm": p.wdm, "laser_dbm": p.laser_dbm, "error": p.error} for p in result.failures()]
    if failed:
        log.warning("%d sweep point(s) failed; see failures table", len(failed))
        tables.append(("failures", FAILURE_COLUMNS, failed))
    return tables


def cmd_figure3(sc, args, out):
    rows = run_figure3(sc)
    print(f"{len(rows)} bandwidth points at {sc.sweep.figure3_carrier_ghz:g} GHz")
    return [("figure3", FIGURE3_COLUMNS, rows)]


def cmd_figure4(sc, args, out):
    rows = run_figure4(sc)
    print(f"{len(rows)} antenna counts")
    return [("figure4", FIGURE4_COLUMNS, rows)]


COMMANDS = {
    "dimension": cmd_dimension,
    "power": cmd_power,
    "link": cmd_link,
    "sweep": cmd_sweep,
    "figure3": cmd_figure3,
    "figure4": cmd_figure4,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        sc = _scenario(args)
        tables = COMMANDS[args.command](sc, args, args.out)
        digest = sc.hash()
        run_dir = run_directory(args.out, digest)
        (run_dir / "scenario.json").write_text(sc.canonical_json() + "\n")
        for name, columns, rows in tables:
            path = write_table(run_dir, name, columns, rows, digest, args.output)
            log.info("wrote %s", path)
        print(f"results in {run_dir}")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RofBenchError, ArithmeticError, MemoryError) as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

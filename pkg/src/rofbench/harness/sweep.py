"""Laser-power / WDM-count sweeps and the bandwidth and power tables."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from ..dimensioning import CSV_COLUMNS, dimension_sweep
from ..dsp import EvmReport
from ..errors import ConfigError, RofBenchError
from ..powermodel import LinkKind, power_sweep
from .link import run_link
from .scenario import FronthaulScenario


@dataclass(frozen=True)
class SweepPoint:
    kind: str
    wdm: int
    laser_dbm: float
    report: Optional[EvmReport] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.report is not None


@dataclass(frozen=True)
class SweepResult:
    laser_powers_dbm: tuple
    wdm_counts: tuple
    kinds: tuple
    threshold_percent: float
    points: tuple

    def curve(self, kind: str, wdm: int) -> list[SweepPoint]:
        return [p for p in self.points if p.kind == kind and p.wdm == wdm]

    def worst_evm(self, kind: str, wdm: int) -> list[float]:
        """Worst-channel EVM per power; failed points count as infinite."""
        return [p.report.worst if p.ok else float("inf") for p in self.curve(kind, wdm)]

    def dynamic_range_db(self, kind: str, wdm: int, threshold: Optional[float] = None) -> float:
        t = self.threshold_percent if threshold is None else threshold
        return dynamic_range(self.laser_powers_dbm, self.worst_evm(kind, wdm), t)

    def failures(self) -> list[SweepPoint]:
        return [p for p in self.points if not p.ok]


def dynamic_range(powers_dbm: Sequence[float], evm_percent: Sequence[float], threshold: float) -> float:
    """Widest contiguous power span (max - min) with EVM at or below ``threshold``.

    Returns 0 when no point meets the threshold.  Powers must be increasing.
    """
    best = 0.0
    start = None
    for i, (p, e) in enumerate(zip(powers_dbm, evm_percent)):
        if e <= threshold:
            if start is None:
                start = i
            best = max(best, p - powers_dbm[start])
        else:
            start = None
    return float(best)


def _point(args) -> SweepPoint:
    scenario, kind, wdm, power = args
    sc = scenario.with_(
        link_kind=LinkKind.parse(kind),
        wdm_channels=wdm,
        modulator=replace(scenario.modulator, laser_power_dbm=power),
    )
    try:
        return SweepPoint(kind, wdm, power, run_link(sc))
    except RofBenchError as exc:
        return SweepPoint(kind, wdm, power, error=str(exc))


def run_evm_sweep(
    template: FronthaulScenario,
    laser_powers_dbm: Optional[Sequence[float]] = None,
    wdm_counts: Optional[Sequence[int]] = None,
    threshold_percent: Optional[float] = None,
    kinds: Optional[Sequence[str]] = None,
    jobs: int = 1,
) -> SweepResult:
    """Evaluate the full (kind, wdm, power) grid.

    Points run on up to ``jobs`` worker processes; results are ordered by
    grid index regardless of completion order.  Failed points are kept with
    their error message and the sweep continues.
    """
    s = template.sweep
    powers = tuple(laser_powers_dbm if laser_powers_dbm is not None else s.laser_powers())
    wdms = tuple(wdm_counts if wdm_counts is not None else s.wdm_counts)
    kinds = tuple(LinkKind.parse(k).value for k in (kinds if kinds is not None else s.kinds))
    threshold = s.threshold_percent if threshold_percent is None else threshold_percent
    if not powers or not wdms or not kinds:
        raise ConfigError("sweep axes must be nonempty")
    grid = [(template, k, w, p) for k in kinds for w in wdms for p in powers]
    if jobs > 1 and len(grid) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            points = list(pool.map(_point, grid))
    else:
        points = [_point(g) for g in grid]
    return SweepResult(powers, wdms, kinds, threshold, tuple(points))


def run_figure3(scenario: FronthaulScenario) -> list[dict]:
    """Aggregate-bandwidth table over the configured per-wavelength bandwidths."""
    reports = dimension_sweep(
        scenario.sweep.figure3_carrier_ghz,
        scenario.geom,
        scenario.coding,
        scenario.mod,
        scenario.sweep.bw_points_ghz,
    )
    return [r.as_row() for r in reports]


FIGURE3_COLUMNS = CSV_COLUMNS
FIGURE4_COLUMNS = ("n_t", "arof_watts", "drof_watts")


def run_figure4(scenario: FronthaulScenario) -> list[dict]:
    rows = power_sweep(scenario.power, scenario.geom, scenario.sweep.antenna_counts)
    return [{"n_t": r.n_t, "arof_watts": r.arof_watts, "drof_watts": r.drof_watts} for r in rows]

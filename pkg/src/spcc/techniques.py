"""Control technique implementations: earned value, tolerance bands,
trend projection, and status aggregation.

All functions are pure and stateless; the catena engine wires them to
data-series bindings and parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from datetime import datetime, timedelta, timezone
from typing import Optional, Sequence, Union

from .errors import BaselineZero, InsufficientData, InvalidWeight
from .model import DataSeries, IndicatorValue, MeasurementPoint, StatusColor
from .serialization import format_instant

EVM_GREEN_CUT = 0.95
EVM_YELLOW_CUT = 0.80


@dataclass(frozen=True)
class EvmSnapshot:
    """Earned value indicators at one instant.

    cv = ev - ac, sv = ev - pv always; ratio-derived fields are None when
    their denominator vanishes (cpi needs ac > 0, spi needs pv > 0,
    eac/etc/vac need cpi, tcpi needs bac > ac).
    """

    t: datetime
    pv: float
    ev: float
    ac: float
    bac: float
    cpi: Optional[float]
    spi: Optional[float]
    cv: float
    sv: float
    eac: Optional[float]
    etc_: Optional[float]
    vac: Optional[float]
    tcpi: Optional[float]
    status: StatusColor

    def to_dict(self) -> dict:
        return {
            "t": format_instant(self.t),
            "pv": self.pv,
            "ev": self.ev,
            "ac": self.ac,
            "bac": self.bac,
            "cpi": self.cpi,
            "spi": self.spi,
            "cv": self.cv,
            "sv": self.sv,
            "eac": self.eac,
            "etc": self.etc_,
            "vac": self.vac,
            "tcpi": self.tcpi,
            "status": self.status.name,
        }


def evm_snapshot(t: datetime, pv: float, ev: float, ac: float, bac: float,
                 green_cut: float = EVM_GREEN_CUT, yellow_cut: float = EVM_YELLOW_CUT) -> EvmSnapshot:
    """Derive the full indicator set from one (pv, ev, ac, bac) sample."""
    if min(pv, ev, ac, bac) < 0:
        raise ValueError("pv, ev, ac, bac must be nonnegative")
    cpi = ev / ac if ac > 0 else None
    spi = ev / pv if pv > 0 else None
    cv = ev - ac
    sv = ev - pv
    eac = bac / cpi if cpi else None
    etc_ = eac - ac if eac is not None else None
    vac = bac - eac if eac is not None else None
    tcpi = (bac - ev) / (bac - ac) if bac > ac else None

    ratios = [r for r in (cpi, spi) if r is not None]
    if not ratios:
        status = StatusColor.NO_DATA
    else:
        m = min(ratios)
        if m >= green_cut:
            status = StatusColor.GREEN
        elif m >= yellow_cut:
            status = StatusColor.YELLOW
        else:
            status = StatusColor.RED
    return EvmSnapshot(t, pv, ev, ac, bac, cpi, spi, cv, sv, eac, etc_, vac, tcpi, status)


def _daily_last(series: DataSeries) -> dict:
    """Resample to day granularity: last observation within each UTC day."""
    out = {}
    for p in series.points:
        out[p.timestamp.date()] = p.value
    return out


def evm(pv_series: DataSeries, ev_series: DataSeries, ac_series: DataSeries, bac: float,
        green_cut: float = EVM_GREEN_CUT, yellow_cut: float = EVM_YELLOW_CUT) -> list:
    """Earned value snapshots, one per day common to all three series.

    Series are resampled to day granularity (last observation per day) and
    inner-joined; `bac` must be positive. Empty intersection yields [].
    """
    if bac <= 0:
        raise ValueError(f"bac must be positive, got {bac}")
    pv_d, ev_d, ac_d = _daily_last(pv_series), _daily_last(ev_series), _daily_last(ac_series)
    days = sorted(set(pv_d) & set(ev_d) & set(ac_d))
    snapshots = []
    for day in days:
        t = datetime(day.year, day.month, day.day, tzinfo=timezone.utc)
        snapshots.append(evm_snapshot(t, pv_d[day], ev_d[day], ac_d[day], bac, green_cut, yellow_cut))
    return snapshots


@dataclass(frozen=True)
class ToleranceSpec:
    """Relative tolerance band around a baseline value or reference series.

    The yellow band ends at `red_factor * tol`; `abs_tol` is the absolute
    fallback applied where the baseline is zero.
    """

    baseline: Union[float, DataSeries]
    tol: float
    red_factor: float = 2.0
    abs_tol: Optional[float] = None

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")
        if self.red_factor < 1:
            raise ValueError(f"red_factor must be >= 1, got {self.red_factor}")


def _band_status(d: float, tol: float, red_factor: float) -> StatusColor:
    if d <= tol:
        return StatusColor.GREEN
    if d <= red_factor * tol:
        return StatusColor.YELLOW
    return StatusColor.RED


def tolerance_check(actual: DataSeries, spec: ToleranceSpec) -> IndicatorValue:
    """Grade the latest point of `actual` against the tolerance band.

    Relative deviation d = |actual - baseline| / |baseline| per point; where
    the baseline is zero the absolute deviation is graded against `abs_tol`
    (BaselineZero if none is configured). With a reference series, each
    point uses the last baseline observation at or before it; points before
    the first baseline observation are skipped.
    """
    name = f"tolerance({actual.metric})"
    if actual.is_empty:
        return IndicatorValue("", name, actual, StatusColor.NO_DATA, "no data")

    def baseline_at(ts):
        if isinstance(spec.baseline, DataSeries):
            value = None
            for p in spec.baseline.points:
                if p.timestamp <= ts:
                    value = p.value
                else:
                    break
            return value
        return float(spec.baseline)

    dev_points = []
    graded = []  # (timestamp, d, status, band_hi) for points with a baseline
    for p in actual.points:
        base = baseline_at(p.timestamp)
        if base is None:
            continue
        if base == 0:
            if spec.abs_tol is None:
                raise BaselineZero(f"baseline is 0 at {format_instant(p.timestamp)} and no absolute tolerance configured")
            d = abs(p.value)
            status = _band_status(d, spec.abs_tol, spec.red_factor)
            band = (spec.abs_tol, spec.red_factor * spec.abs_tol)
        else:
            d = abs(p.value - base) / abs(base)
            status = _band_status(d, spec.tol, spec.red_factor)
            band = (spec.tol, spec.red_factor * spec.tol)
        dev_points.append(MeasurementPoint(f"{actual.metric}.deviation", actual.entity, p.timestamp, d))
        graded.append((p.timestamp, d, status, band))

    deviation = DataSeries(f"{actual.metric}.deviation", actual.entity, dev_points)
    if not graded:
        return IndicatorValue("", name, deviation, StatusColor.NO_DATA, "no baseline observation covers the data")
    ts, d, status, (lo, hi) = graded[-1]
    explanation = (
        f"deviation d={d:.6g} at {format_instant(ts)}; "
        f"green d<={lo:.6g}, yellow d<={hi:.6g}, red beyond"
    )
    return IndicatorValue("", name, deviation, status, explanation)


class TrendDirection:
    ABOVE = "ABOVE"
    BELOW = "BELOW"


@dataclass(frozen=True)
class TrendSpec:
    window: int
    threshold: float
    direction: str = TrendDirection.ABOVE

    def __post_init__(self):
        if self.window < 2:
            raise ValueError(f"window must be >= 2, got {self.window}")
        if self.direction not in (TrendDirection.ABOVE, TrendDirection.BELOW):
            raise ValueError(f"direction must be ABOVE or BELOW, got {self.direction!r}")


@dataclass(frozen=True)
class TrendResult:
    slope: float  # units per day
    intercept: float
    crossing: Optional[datetime]

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "crossing": format_instant(self.crossing) if self.crossing else None,
        }


_SLOPE_EPS = 1e-12


def trend_project(series: DataSeries, spec: TrendSpec) -> TrendResult:
    """Least-squares line over the last `window` points, time in days since
    the first window point; `crossing` is the earliest instant at or after
    the last point where the line meets the threshold moving in the
    specified direction, absent when the slope points away or is ~zero.
    """
    if len(series) < spec.window:
        raise InsufficientData(f"trend needs {spec.window} points, series has {len(series)}")
    window = series.points[-spec.window:]
    t0 = window[0].timestamp
    xs = [(p.timestamp - t0).total_seconds() / 86400.0 for p in window]
    ys = [p.value for p in window]
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx if sxx > 0 else 0.0
    intercept = my - slope * mx

    crossing = None
    if abs(slope) >= _SLOPE_EPS:
        toward = slope > 0 if spec.direction == TrendDirection.ABOVE else slope < 0
        if toward:
            t_star = (spec.threshold - intercept) / slope
            if t_star >= xs[-1]:
                try:
                    crossing = t0 + timedelta(days=t_star)
                except (OverflowError, OSError):
                    crossing = None  # beyond the representable horizon
    return TrendResult(slope, intercept, crossing)


class AggregationMode:
    WORST = "WORST"
    WEIGHTED = "WEIGHTED"


_WEIGHT_OF = {StatusColor.GREEN: 1.0, StatusColor.YELLOW: 0.5, StatusColor.RED: 0.0}


def aggregate_status(children: Sequence, mode: str = AggregationMode.WORST,
                     green_cut: float = 0.75, yellow_cut: float = 0.4) -> StatusColor:
    """Combine (status, weight) pairs; NO_DATA children are dropped first
    and an all-NO_DATA input yields NO_DATA.
    """
    live = []
    for status, weight in children:
        if weight < 0:
            raise InvalidWeight(f"negative weight {weight}")
        if status != StatusColor.NO_DATA:
            live.append((status, weight))
    if not live:
        return StatusColor.NO_DATA
    if mode == AggregationMode.WORST:
        return worst(live)
    if mode != AggregationMode.WEIGHTED:
        raise ValueError(f"unknown aggregation mode {mode!r}")
    total = sum(w for _, w in live)
    if total == 0:
        return worst(live)
    m = sum(_WEIGHT_OF[s] * w for s, w in live) / total
    if m >= green_cut:
        return StatusColor.GREEN
    if m >= yellow_cut:
        return StatusColor.YELLOW
    return StatusColor.RED


def worst(live: Sequence) -> StatusColor:
    return max((s for s, _ in live), default=StatusColor.NO_DATA)

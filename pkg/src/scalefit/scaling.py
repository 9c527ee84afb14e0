"""Power-law scaling fits and scale-dependent Hurst estimation.

The order-m cumulant of an aggregated self-similar series grows as a
power of the block size, so log2|k_m| regressed against log2 n has
slope m*H(m). A constant H(m) across orders indicates a monofractal
(strictly self-similar) series; variation with m indicates
multifractality. Sliding the regression window across scales produces
a locality curve; a change of slope in such a curve (the knee) marks
the scale where the estimate becomes regime-dependent.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np


class InsufficientScalesError(ValueError):
    """Fewer usable scales than a regression needs."""


def _ols(x: np.ndarray, y: np.ndarray, w=None):
    """(Weighted) least squares line fit: slope, intercept, r^2, sse."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.ones_like(x) if w is None else np.asarray(w, dtype=float)
    wsum = w.sum()
    xm = (w * x).sum() / wsum
    ym = (w * y).sum() / wsum
    sxx = (w * (x - xm) ** 2).sum()
    sxy = (w * (x - xm) * (y - ym)).sum()
    slope = sxy / sxx
    intercept = ym - slope * xm
    resid = y - intercept - slope * x
    sse = (w * resid**2).sum()
    sst = (w * (y - ym) ** 2).sum()
    r_squared = 1.0 if sst <= 0.0 else max(0.0, 1.0 - sse / sst)
    return slope, intercept, r_squared, sse


def _warn_if_outside_unit(h: float, context: str):
    if not 0.0 < h < 1.0:
        warnings.warn(
            f"{context}: estimated Hurst exponent {h:.4g} lies outside (0, 1); "
            f"reported unclamped",
            stacklevel=3,
        )


@dataclass
class ScalingFit:
    """One log-log regression: slope estimates order * H(order)."""

    order: int
    slope: float
    intercept: float
    r_squared: float
    window: tuple
    points_used: int

    def hurst(self) -> float:
        return self.slope / self.order


@dataclass
class HurstCurve:
    """H(m) per cumulant order, with reasons for any omitted order."""

    entries: dict
    window: tuple
    omitted: dict = field(default_factory=dict)

    def hurst(self, m: int) -> float:
        return self.entries[m][0]


@dataclass
class LocalityCurve:
    """Hurst estimate as a function of the analysis-window position."""

    points: tuple
    order: int
    window_width: int

    def centers(self) -> np.ndarray:
        return np.array([p[0] for p in self.points])

    def estimates(self) -> np.ndarray:
        return np.array([p[1] for p in self.points])


@dataclass
class KneePoint:
    """Best two-segment split of a curve (segments share the knee point).

    split_sse is the sum of both segments' SSEs; because the shared
    point's residual is counted in each segment, it can exceed the
    single-line SSE on structureless data, in which case sse_reduction
    clamps to 0.
    """

    octave: float
    left_slope: float
    right_slope: float
    sse_reduction: float
    single_line_sse: float
    split_sse: float


def fit_loglog(table, m: int, window=None, weight_by_blocks: bool = False) -> ScalingFit:
    """OLS of log2|k_m| against log2 n over usable scales in a window.

    window is an inclusive octave range (j_lo, j_hi); None uses every
    scale in the table. Weighting by block counts is off by default.
    """
    if m not in table.orders:
        raise ValueError(f"order {m} not present in table (orders {table.orders})")
    octaves = np.log2(np.array(table.scales, dtype=float))
    if window is None:
        window = (float(octaves.min()), float(octaves.max()))
    j_lo, j_hi = float(window[0]), float(window[1])
    xs, ys, ws = [], [], []
    for n, j in zip(table.scales, octaves):
        if not (j_lo - 1e-12 <= j <= j_hi + 1e-12):
            continue
        if not table.usable[(m, n)]:
            continue
        xs.append(j)
        ys.append(np.log2(abs(table.values[(m, n)])))
        ws.append(table.block_counts[n])
    if len(xs) < 3:
        raise InsufficientScalesError(
            f"order {m}: only {len(xs)} usable scales in octave window "
            f"[{j_lo:g}, {j_hi:g}]; at least 3 are required"
        )
    slope, intercept, r_squared, _ = _ols(
        np.array(xs), np.array(ys), np.array(ws, dtype=float) if weight_by_blocks else None
    )
    fit = ScalingFit(
        order=m,
        slope=slope,
        intercept=intercept,
        r_squared=r_squared,
        window=(j_lo, j_hi),
        points_used=len(xs),
    )
    _warn_if_outside_unit(fit.hurst(), f"fit_loglog(order={m})")
    return fit


def hurst_spectrum(table, window=None, weight_by_blocks: bool = False) -> HurstCurve:
    """H(m) = slope/m for every fittable order; others recorded as omitted."""
    entries = {}
    omitted = {}
    resolved_window = None
    for m in table.orders:
        try:
            fit = fit_loglog(table, m, window, weight_by_blocks)
        except InsufficientScalesError as exc:
            omitted[m] = str(exc)
            continue
        entries[m] = (fit.hurst(), fit.r_squared)
        resolved_window = fit.window
    if not entries:
        raise InsufficientScalesError(
            "no order could be fitted: " + "; ".join(omitted.values())
        )
    return HurstCurve(entries=entries, window=resolved_window, omitted=omitted)


def locality_curve(table, m: int, window_width: int = 4) -> LocalityCurve:
    """Hurst estimates from a window slid across the table's octaves.

    Windows are anchored at each scale's octave and span window_width
    consecutive octaves; windows with fewer than 3 usable scales are
    skipped.
    """
    if window_width < 3:
        raise ValueError(f"window_width must be at least 3 octaves, got {window_width}")
    octaves = sorted(set(float(np.log2(n)) for n in table.scales))
    points = []
    for j0 in octaves:
        j1 = j0 + window_width - 1
        if j1 > octaves[-1] + 1e-12:
            break
        try:
            fit = fit_loglog(table, m, (j0, j1))
        except InsufficientScalesError:
            continue
        points.append((j0 + (window_width - 1) / 2.0, fit.hurst()))
    if len(points) < 2:
        raise InsufficientScalesError(
            f"order {m}: fewer than 2 sliding windows of width {window_width} "
            f"could be fitted over octaves {octaves[0]:g}..{octaves[-1]:g}"
        )
    return LocalityCurve(points=tuple(points), order=m, window_width=window_width)


MIN_KNEE_POINTS = 6
MIN_SEGMENT_POINTS = 3


def detect_knee(curve_or_xy) -> KneePoint:
    """Exhaustive best two-segment OLS split of a curve.

    Every admissible breakpoint (at a data point, shared by both
    segments, with at least 3 points per side) is tried; the split
    minimizing total SSE wins. sse_reduction is measured against the
    single-line fit and is always >= 0.
    """
    if isinstance(curve_or_xy, LocalityCurve):
        x = curve_or_xy.centers()
        y = curve_or_xy.estimates()
    else:
        x, y = curve_or_xy
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
    if x.size != y.size:
        raise ValueError("x and y must have equal length")
    if x.size < MIN_KNEE_POINTS:
        raise ValueError(f"knee detection needs at least {MIN_KNEE_POINTS} points, got {x.size}")
    _, _, _, single_sse = _ols(x, y)
    best = None
    for i in range(MIN_SEGMENT_POINTS - 1, x.size - MIN_SEGMENT_POINTS + 1):
        ls, _, _, lsse = _ols(x[: i + 1], y[: i + 1])
        rs, _, _, rsse = _ols(x[i:], y[i:])
        total = lsse + rsse
        if best is None or total < best[0]:
            best = (total, x[i], ls, rs)
    total, octave, left, right = best
    return KneePoint(
        octave=float(octave),
        left_slope=float(left),
        right_slope=float(right),
        sse_reduction=float(max(0.0, single_sse - total)),
        single_line_sse=float(single_sse),
        split_sse=float(total),
    )


@dataclass
class MonofractalReport:
    """Spread of H(m) across orders versus a tolerance."""

    monofractal: bool
    spread: float
    hurst_min: float
    hurst_max: float


def classify_monofractal(curve: HurstCurve, tolerance: float) -> MonofractalReport:
    """True iff max H(m) - min H(m) is within tolerance."""
    if tolerance <= 0:
        raise ValueError(f"tolerance must be positive, got {tolerance}")
    if len(curve.entries) < 2:
        raise ValueError(
            f"classification needs at least 2 fitted orders, got {len(curve.entries)}"
        )
    values = [h for h, _ in curve.entries.values()]
    spread = max(values) - min(values)
    return MonofractalReport(
        monofractal=spread <= tolerance,
        spread=spread,
        hurst_min=min(values),
        hurst_max=max(values),
    )

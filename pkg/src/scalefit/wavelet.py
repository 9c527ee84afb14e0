"""Orthonormal periodic discrete wavelet transform and logscale-diagram
Hurst estimation.

The logscale diagram plots log2 of the mean squared detail coefficient
per octave against the octave; for a stationary long-range dependent
series its slope alpha relates to the Hurst exponent by H = (alpha+1)/2.
Octave energies are chi-square-like averages of n_j coefficients, so
the regression is weighted by the coefficient counts.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .scaling import LocalityCurve, _ols, _warn_if_outside_unit

_SQRT_HALF = np.sqrt(0.5)

# Scaling (low-pass) filters, normalized so the coefficients sum to
# sqrt(2). Daubechies 4-tap values hardcoded to 15 significant digits.
_SCALING_FILTERS = {
    "haar": np.array([_SQRT_HALF, _SQRT_HALF]),
    "db4": np.array(
        [
            0.482962913144534,
            0.836516303737808,
            0.224143868042013,
            -0.129409522551260,
        ]
    ),
}


def _filters(family: str):
    lo = _SCALING_FILTERS[family]
    # quadrature mirror: g[k] = (-1)^k * h[L-1-k], so Haar detail is
    # (x1 - x2)/sqrt(2)
    hi = (lo[::-1] * np.array([1.0, -1.0] * (lo.size // 2))).copy()
    return lo, hi


FAMILIES = tuple(sorted(_SCALING_FILTERS))


@dataclass(frozen=True)
class WaveletSpec:
    """Transform family and pyramid depth."""

    family: str = "db4"
    levels: int = 1

    def __post_init__(self):
        if self.family not in _SCALING_FILTERS:
            raise ValueError(f"unknown wavelet family {self.family!r}; choose from {FAMILIES}")
        if self.levels < 1 or int(self.levels) != self.levels:
            raise ValueError(f"levels must be a positive integer, got {self.levels}")


def max_levels(length: int) -> int:
    """Deepest pyramid keeping >= 8 detail coefficients per octave."""
    return max(int(np.log2(length)) - 3, 1)


@dataclass
class DwtResult:
    """Per-octave detail coefficients (finest first) plus the final
    approximation."""

    details: tuple
    approximation: np.ndarray
    family: str


@dataclass
class LogscaleDiagram:
    """Mean squared detail energy and coefficient count per octave."""

    octaves: tuple
    energy: dict
    counts: dict


def _analysis_step(a: np.ndarray, lo: np.ndarray, hi: np.ndarray):
    taps = lo.size
    idx = (2 * np.arange(a.size // 2)[:, None] + np.arange(taps)) % a.size
    windows = a[idx]
    return windows @ lo, windows @ hi


def dwt(series, spec: WaveletSpec) -> DwtResult:
    """Periodic orthonormal pyramid transform.

    The input length must be a power of two >= 2**levels. Periodic
    boundary handling preserves exact orthonormality, so the transform
    conserves energy (Parseval); coefficients whose filter support
    wraps around the boundary see the series as circular.
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1:
        raise ValueError("series must be one-dimensional")
    n = x.size
    if n < 2 or (n & (n - 1)) != 0:
        raise ValueError(f"series length must be a power of two, got {n}")
    if n < 2**spec.levels:
        raise ValueError(
            f"series of length {n} cannot be decomposed over {spec.levels} levels"
        )
    lo, hi = _filters(spec.family)
    a = x
    details = []
    for _ in range(spec.levels):
        a, d = _analysis_step(a, lo, hi)
        details.append(d)
    return DwtResult(details=tuple(details), approximation=a, family=spec.family)


def logscale_diagram(trace_or_samples, spec: WaveletSpec) -> LogscaleDiagram:
    """Mean squared detail coefficient per octave j = 1..levels.

    Unlike the bare transform, diagram estimation requires at least 8
    detail coefficients at the coarsest octave (levels <= log2(n) - 3),
    so every per-octave energy is an average of >= 8 terms.
    """
    samples = np.asarray(getattr(trace_or_samples, "samples", trace_or_samples), dtype=float)
    if samples.size < 2 ** (spec.levels + 3):
        raise ValueError(
            f"series of length {samples.size} supports a diagram of at most "
            f"{max_levels(samples.size)} octaves, got {spec.levels}"
        )
    result = dwt(samples, spec)
    energy = {}
    counts = {}
    for j, d in enumerate(result.details, start=1):
        energy[j] = float(d @ d) / d.size
        counts[j] = d.size
    return LogscaleDiagram(octaves=tuple(range(1, spec.levels + 1)), energy=energy, counts=counts)


class WaveletHurstFit(NamedTuple):
    hurst: float
    alpha: float
    r_squared: float


DEFAULT_J1 = 3


def default_fit_range(levels: int):
    """Default octave range: drop the discretization-affected finest
    octaves and the single coarsest one."""
    return DEFAULT_J1, levels - 1


def wavelet_hurst(diagram: LogscaleDiagram, j1: int, j2: int) -> WaveletHurstFit:
    """Weighted fit of log2 energy vs octave over [j1, j2].

    Weights are the per-octave coefficient counts. H = (slope + 1)/2.
    """
    if j1 >= j2:
        raise ValueError(f"octave range requires j1 < j2, got [{j1}, {j2}]")
    octaves = [j for j in diagram.octaves if j1 <= j <= j2]
    if len(octaves) < 3:
        raise ValueError(
            f"octave range [{j1}, {j2}] contains {len(octaves)} diagram octaves; "
            f"at least 3 are required"
        )
    energies = np.array([diagram.energy[j] for j in octaves])
    if np.any(energies <= 0.0):
        raise ValueError(
            f"zero detail energy in octave range [{j1}, {j2}] (constant input?); "
            f"the logscale diagram has no slope there"
        )
    weights = np.array([diagram.counts[j] for j in octaves], dtype=float)
    alpha, _, r_squared, _ = _ols(np.array(octaves, dtype=float), np.log2(energies), weights)
    hurst = (alpha + 1.0) / 2.0
    _warn_if_outside_unit(hurst, "wavelet_hurst")
    return WaveletHurstFit(hurst=hurst, alpha=alpha, r_squared=r_squared)


def wavelet_locality_curve(diagram: LogscaleDiagram, window_width: int = 4) -> LocalityCurve:
    """wavelet_hurst slid across octave windows; same curve type as the
    cumulant-based locality analysis, so knee detection applies
    unchanged."""
    if window_width < 3:
        raise ValueError(f"window_width must be at least 3 octaves, got {window_width}")
    octaves = diagram.octaves
    if len(octaves) < window_width:
        raise ValueError(
            f"diagram with {len(octaves)} octaves cannot host windows of "
            f"width {window_width}"
        )
    points = []
    for j0 in octaves:
        j1 = j0 + window_width - 1
        if j1 > octaves[-1]:
            break
        fit = wavelet_hurst(diagram, j0, j1)
        points.append((j0 + (window_width - 1) / 2.0, fit.hurst))
    if len(points) < 2:
        raise ValueError(
            f"fewer than 2 windows of width {window_width} fit in octaves "
            f"{octaves[0]}..{octaves[-1]}"
        )
    return LocalityCurve(points=tuple(points), order=2, window_width=window_width)

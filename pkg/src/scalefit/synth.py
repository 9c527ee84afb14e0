"""Trace synthesis: fractional Gaussian noise, conservative binary
cascades, and the cascade-modulated composite model.

The composite trace is an energy-preserving modulation of fGn by the
square root of a normalized cascade measure. It is a documented
stand-in for a refined multifractal traffic model whose exact closed
form is not fixed here; it keeps the fGn marginal variance while
injecting scale-dependent (multifractal) variability, so Hurst
estimates drift with the analysis scale.
"""
from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.special import betaincinv

from .rng import check_seed, make_rng, standard_normals

FIXED_CLOCK_ENV = "SCALEFIT_FIXED_CLOCK"
FIXED_CLOCK_VALUE = "1970-01-01T00:00:00Z"

# Relative threshold below which negative circulant eigenvalues abort
# synthesis; values between -tol*max and 0 are clamped to zero.
EMBEDDING_TOLERANCE = 1e-8


class SynthesisError(RuntimeError):
    """Covariance embedding produced spectral values too negative to clamp."""


def _timestamp() -> str:
    if os.environ.get(FIXED_CLOCK_ENV):
        return FIXED_CLOCK_VALUE
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class FgnSpec:
    """Parameters of a fractional Gaussian noise trace."""

    hurst: float
    length: int
    variance: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.hurst < 1.0:
            raise ValueError(f"hurst must be in the open interval (0, 1), got {self.hurst}")
        if not _is_power_of_two(self.length) or self.length < 16:
            raise ValueError(f"length must be a power of two >= 16, got {self.length}")
        if not self.variance > 0.0:
            raise ValueError(f"variance must be positive, got {self.variance}")
        check_seed(self.seed)


@dataclass(frozen=True)
class CascadeSpec:
    """Parameters of a conservative binary multiplicative cascade.

    Each dyadic interval splits its mass into fractions (W, 1-W) with
    W ~ Beta(multiplier_param, multiplier_param). ``equal_split`` is the
    degenerate infinite-shape limit: every split is exactly (1/2, 1/2),
    and no random draws are consumed.
    """

    depth: int
    multiplier_param: float = 2.0
    total_mass: float = 1.0
    seed: int = 0
    equal_split: bool = False

    def __post_init__(self):
        if not isinstance(self.depth, (int, np.integer)) or self.depth < 2:
            raise ValueError(f"depth must be an integer >= 2, got {self.depth}")
        if not self.multiplier_param > 0.0:
            raise ValueError(f"multiplier_param must be positive, got {self.multiplier_param}")
        if not self.total_mass > 0.0:
            raise ValueError(f"total_mass must be positive, got {self.total_mass}")
        check_seed(self.seed)


@dataclass
class Trace:
    """A finite real-valued increment series with generation metadata."""

    samples: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 1 or self.samples.size < 1:
            raise ValueError("samples must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("samples must all be finite")

    def __len__(self):
        return self.samples.size


def fgn_autocovariance(hurst: float, variance: float, lag: int) -> float:
    """Closed-form autocovariance of fGn at a nonnegative integer lag.

    gamma(k) = (variance/2) * (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H});
    gamma(0) = variance, and gamma(k) = 0 for all k >= 1 when H = 1/2.
    """
    if not 0.0 < hurst < 1.0:
        raise ValueError(f"hurst must be in (0, 1), got {hurst}")
    if not variance > 0.0:
        raise ValueError(f"variance must be positive, got {variance}")
    if lag < 0 or int(lag) != lag:
        raise ValueError(f"lag must be a nonnegative integer, got {lag}")
    k = float(lag)
    two_h = 2.0 * hurst
    return 0.5 * variance * (abs(k + 1.0) ** two_h - 2.0 * abs(k) ** two_h + abs(k - 1.0) ** two_h)


def _embedding_eigenvalues(gamma: np.ndarray) -> np.ndarray:
    """Spectrum of the length-2N circulant embedding of gamma(0..N).

    First row is [g0, ..., g_{N-1}, g_N, g_{N-1}, ..., g_1]. Eigenvalues
    more negative than -tol*max abort; small negatives are clamped to 0.
    """
    n = gamma.size - 1
    row = np.concatenate([gamma[:n], gamma[n:n + 1], gamma[1:n][::-1]])
    lam = np.fft.fft(row).real
    lam_max = lam.max()
    if lam.min() < -EMBEDDING_TOLERANCE * lam_max:
        raise SynthesisError(
            f"circulant embedding is not nonnegative definite "
            f"(min eigenvalue {lam.min():.3e} vs max {lam_max:.3e})"
        )
    return np.where(lam < 0.0, 0.0, lam)


def generate_fgn(spec: FgnSpec) -> Trace:
    """Synthesize fGn by circulant embedding of the exact autocovariance.

    The sampled series has theoretical covariance fgn_autocovariance and
    zero mean. Output is deterministic given the spec seed.
    """
    n = spec.length
    gamma = np.array([fgn_autocovariance(spec.hurst, spec.variance, k) for k in range(n + 1)])
    lam = _embedding_eigenvalues(gamma)
    z = standard_normals(make_rng(spec.seed), 2 * n)
    g = np.empty(2 * n, dtype=complex)
    g[0] = z[0]
    g[n] = z[1]
    g[1:n] = (z[2:n + 1] + 1j * z[n + 1:2 * n]) / np.sqrt(2.0)
    g[n + 1:] = np.conj(g[1:n][::-1])
    samples = np.fft.ifft(np.sqrt(lam) * g).real[:n] * np.sqrt(2.0 * n)
    meta = {
        "model": "fgn",
        "params": {
            "hurst": spec.hurst,
            "length": spec.length,
            "variance": spec.variance,
        },
        "seed": spec.seed,
        "created": _timestamp(),
    }
    return Trace(samples, meta)


def _cascade_masses(spec: CascadeSpec) -> np.ndarray:
    masses = np.array([spec.total_mass])
    if spec.equal_split:
        return masses[0] * np.full(2**spec.depth, 0.5**spec.depth)
    rng = make_rng(spec.seed)
    a = spec.multiplier_param
    for _ in range(spec.depth):
        u = rng.random(masses.size)
        # keep W strictly inside (0, 1) even on the measure-zero u = 0 draw
        u = np.clip(u, 2.0**-53, 1.0 - 2.0**-53)
        w = betaincinv(a, a, u)
        children = np.empty(2 * masses.size)
        children[0::2] = masses * w
        children[1::2] = masses * (1.0 - w)
        masses = children
    return masses


def generate_cascade(spec: CascadeSpec) -> Trace:
    """Conservative binary cascade measure on 2**depth dyadic cells.

    Splits are drawn level by level, left to right: one uniform per
    split, mapped through the Beta(a, a) inverse CDF. Every split
    partitions the parent mass exactly, so the sample total equals
    total_mass up to floating-point rounding and all cells are >= 0.
    """
    samples = _cascade_masses(spec)
    meta = {
        "model": "cascade",
        "params": {
            "depth": spec.depth,
            "multiplier_param": spec.multiplier_param,
            "total_mass": spec.total_mass,
            "equal_split": spec.equal_split,
        },
        "seed": spec.seed,
        "created": _timestamp(),
    }
    return Trace(samples, meta)


def generate_multifractal(fgn: FgnSpec, cascade: CascadeSpec) -> Trace:
    """Cascade-modulated composite: x(k) * sqrt(N * mu(k)).

    mu is the cascade measure normalized to unit total, so the expected
    energy of the composite equals that of the underlying fGn. In the
    equal-split limit mu(k) = 1/N and the composite reproduces the fGn
    sample for sample.
    """
    if fgn.length != 2**cascade.depth:
        raise ValueError(
            f"fgn length {fgn.length} must equal 2**cascade.depth = {2**cascade.depth}"
        )
    base = generate_fgn(fgn)
    masses = _cascade_masses(cascade)
    mu = masses / math.fsum(masses)
    samples = base.samples * np.sqrt(fgn.length * mu)
    meta = {
        "model": "multifractal",
        "params": {
            "hurst": fgn.hurst,
            "length": fgn.length,
            "variance": fgn.variance,
            "fgn_seed": fgn.seed,
            "depth": cascade.depth,
            "multiplier_param": cascade.multiplier_param,
            "total_mass": cascade.total_mass,
            "equal_split": cascade.equal_split,
            "cascade_seed": cascade.seed,
        },
        "seed": fgn.seed,
        "created": _timestamp(),
    }
    return Trace(samples, meta)


def partial_sums(trace: Trace) -> Trace:
    """Cumulative process of an increment trace: y[k] = sum(x[:k+1]).

    Differencing the output recovers the input except for the first
    element, which equals itself.
    """
    samples = np.cumsum(trace.samples)
    meta = {
        "model": "partial_sums",
        "params": {"source_model": trace.meta.get("model")},
        "seed": trace.meta.get("seed"),
        "created": _timestamp(),
    }
    return Trace(samples, meta)

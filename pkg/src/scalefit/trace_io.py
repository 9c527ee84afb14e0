"""Trace and result persistence in diff-friendly CSV.

A trace is stored as a two-column CSV ("index,value") with a JSON
sidecar at <path>.meta.json carrying the generation metadata and the
declared length. Samples are serialized with 17 significant digits, so
write -> read is bit-exact for 64-bit floats. Data files never contain
timestamps; the only timestamp lives in the sidecar's "created" field.
"""
from __future__ import annotations

import json
import os
import warnings

import numpy as np

from .cumulants import CumulantTable
from .scaling import HurstCurve, LocalityCurve
from .synth import Trace
from .wavelet import LogscaleDiagram

FORMAT_VERSION = "scalefit-trace/1"


class TraceFormatError(ValueError):
    """A trace file or sidecar failed to parse or is inconsistent."""


def sidecar_path(path) -> str:
    return f"{path}.meta.json"


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def write_trace(trace: Trace, path) -> None:
    """Write samples as CSV rows "i,value" (1-based) plus a JSON sidecar."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("index,value\n")
        for i, v in enumerate(trace.samples, start=1):
            fh.write(f"{i},{_fmt(v)}\n")
    sidecar = {
        "format": FORMAT_VERSION,
        "length": int(trace.samples.size),
        "model": trace.meta.get("model"),
        "params": trace.meta.get("params", {}),
        "seed": trace.meta.get("seed"),
        "created": trace.meta.get("created"),
    }
    with open(sidecar_path(path), "w", encoding="ascii", newline="\n") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_trace(path) -> Trace:
    """Load a trace written by write_trace.

    A missing sidecar degrades to empty metadata with a warning; a
    present but inconsistent sidecar (unknown format version, length
    mismatch) is an error.
    """
    samples = []
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if header != "index,value":
            raise TraceFormatError(f"{path}:1: expected header 'index,value', got {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if len(fields) != 2:
                raise TraceFormatError(f"{path}:{lineno}: expected 2 fields, got {len(fields)}")
            try:
                index = int(fields[0])
                value = float(fields[1])
            except ValueError as exc:
                raise TraceFormatError(f"{path}:{lineno}: {exc}") from exc
            if index != lineno - 1:
                raise TraceFormatError(
                    f"{path}:{lineno}: expected index {lineno - 1}, got {index}"
                )
            if not np.isfinite(value):
                raise TraceFormatError(f"{path}:{lineno}: non-finite sample {fields[1]!r}")
            samples.append(value)
    if not samples:
        raise TraceFormatError(f"{path}: trace contains no samples")

    meta = {}
    spath = sidecar_path(path)
    if not os.path.exists(spath):
        warnings.warn(f"sidecar {spath} missing; trace loaded with empty metadata")
    else:
        with open(spath, "r", encoding="ascii") as fh:
            try:
                sidecar = json.load(fh)
            except json.JSONDecodeError as exc:
                raise TraceFormatError(f"{spath}: invalid JSON: {exc}") from exc
        version = sidecar.get("format")
        if version != FORMAT_VERSION:
            raise TraceFormatError(
                f"{spath}: unknown format version {version!r} (expected {FORMAT_VERSION!r})"
            )
        declared = sidecar.get("length")
        if declared != len(samples):
            raise TraceFormatError(
                f"{spath}: declared length {declared} does not match "
                f"{len(samples)} samples in {path}"
            )
        meta = {
            "model": sidecar.get("model"),
            "params": sidecar.get("params", {}),
            "seed": sidecar.get("seed"),
            "created": sidecar.get("created"),
        }
    return Trace(np.array(samples), meta)


def write_curve(obj, path) -> None:
    """Write an analysis result as plot-ready CSV with a typed header.

    LocalityCurve -> "octave,hurst"; LogscaleDiagram ->
    "octave,log2_energy,count" (zero energies serialized as nan);
    CumulantTable -> "order,scale,log2_abs_cumulant,usable";
    HurstCurve -> "order,hurst,r_squared".
    """
    lines = []
    if isinstance(obj, LocalityCurve):
        lines.append("octave,hurst")
        for center, hurst in obj.points:
            lines.append(f"{_fmt(center)},{_fmt(hurst)}")
    elif isinstance(obj, LogscaleDiagram):
        lines.append("octave,log2_energy,count")
        for j in obj.octaves:
            mu = obj.energy[j]
            log2_mu = _fmt(np.log2(mu)) if mu > 0.0 else "nan"
            lines.append(f"{j},{log2_mu},{obj.counts[j]}")
    elif isinstance(obj, CumulantTable):
        lines.append("order,scale,log2_abs_cumulant,usable")
        for m in obj.orders:
            for n in obj.scales:
                value = obj.values[(m, n)]
                log2_abs = _fmt(np.log2(abs(value))) if value != 0.0 else "nan"
                usable = "true" if obj.usable[(m, n)] else "false"
                lines.append(f"{m},{n},{log2_abs},{usable}")
    elif isinstance(obj, HurstCurve):
        lines.append("order,hurst,r_squared")
        for m in sorted(obj.entries):
            hurst, r2 = obj.entries[m]
            lines.append(f"{m},{_fmt(hurst)},{_fmt(r2)}")
    else:
        raise TypeError(f"no CSV serialization for {type(obj).__name__}")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")

"""Command-line front end: generation -> aggregation -> estimation ->
plot-ready CSV reporting.

Exit codes: 0 success, 1 computation/estimation failure, 2 usage or
validation failure. All flag values are validated before any
computation starts, so no flag combination can reach a module with an
out-of-range argument. Set the environment variable
SCALEFIT_FIXED_CLOCK to freeze recorded timestamps and make
generate -> report pipelines byte-reproducible.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import cumulants, scaling, synth, trace_io, wavelet
from .aggregate import aggregate as aggregate_series
from .aggregate import build_pyramid
from .rng import SEED_MAX

DEFAULT_KNEE_THRESHOLD = 0.2


def _positive_int(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scalefit",
        description=(
            "Synthesize self-similar / multifractal traces and estimate "
            "scale-dependent Hurst exponents via cumulant scaling and "
            "wavelet logscale diagrams."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="synthesize a trace and write it as CSV")
    gen.add_argument("--model", required=True, choices=("fgn", "cascade", "multifractal"))
    gen.add_argument("--hurst", type=float, default=0.7, help="Hurst exponent in (0,1) [0.7]")
    gen.add_argument("--length", type=_positive_int, default=65536,
                     help="trace length, a power of two >= 16 [65536]")
    gen.add_argument("--variance", type=float, default=1.0, help="marginal variance [1.0]")
    gen.add_argument("--seed", type=int, default=0, help="64-bit unsigned seed [0]")
    gen.add_argument("--depth", type=_positive_int, default=16,
                     help="cascade depth, producing 2**depth cells [16]")
    gen.add_argument("--multiplier", type=float, default=2.0,
                     help="Beta(a,a) shape of the cascade multiplier [2.0]")
    gen.add_argument("--mass", type=float, default=1.0, help="cascade total mass [1.0]")
    gen.add_argument("--cascade-seed", type=int, default=None,
                     help="cascade seed (defaults to --seed)")
    gen.add_argument("--equal-split", action="store_true",
                     help="degenerate cascade: every split is exactly (1/2, 1/2)")
    gen.add_argument("--out", required=True, help="output CSV path")

    agp = sub.add_parser("aggregate", help="block-aggregate a trace at one scale")
    agp.add_argument("input", help="trace CSV")
    agp.add_argument("--scale", type=_positive_int, required=True, help="block size n")
    agp.add_argument("--out", required=True, help="output CSV path")

    cum = sub.add_parser("cumulants", help="cumulant scaling table over dyadic scales")
    cum.add_argument("input", help="trace CSV")
    cum.add_argument("--max-order", type=int, default=cumulants.DEFAULT_ORDER,
                     help=f"highest cumulant order, 1..6 [{cumulants.DEFAULT_ORDER}]")
    cum.add_argument("--out", required=True, help="output CSV path")

    hur = sub.add_parser("hurst", help="point estimate of the Hurst exponent")
    hur.add_argument("input", help="trace CSV")
    hur.add_argument("--method", choices=("cumulant", "variance", "wavelet"),
                     default="cumulant")
    hur.add_argument("--order", type=int, default=2,
                     help="cumulant order for method=cumulant [2]")
    hur.add_argument("--max-order", type=int, default=cumulants.DEFAULT_ORDER,
                     help="table depth for the reported spectrum [4]")
    hur.add_argument("--j-lo", type=float, default=None, help="lowest octave of the fit window")
    hur.add_argument("--j-hi", type=float, default=None, help="highest octave of the fit window")
    hur.add_argument("--family", choices=wavelet.FAMILIES, default="db4",
                     help="wavelet family for method=wavelet [db4]")
    hur.add_argument("--levels", type=_positive_int, default=None,
                     help="wavelet pyramid depth [deepest with >= 8 coefficients]")
    hur.add_argument("--j1", type=int, default=None, help="first octave of the wavelet fit [3]")
    hur.add_argument("--j2", type=int, default=None,
                     help="last octave of the wavelet fit [levels-1]")
    hur.add_argument("--out", default=None, help="optional CSV (spectrum or diagram)")

    loc = sub.add_parser("locality", help="Hurst-vs-scale curve and knee report")
    loc.add_argument("input", help="trace CSV")
    loc.add_argument("--method", choices=("cumulant", "wavelet"), default="cumulant")
    loc.add_argument("--order", type=int, default=2, help="cumulant order [2]")
    loc.add_argument("--window", type=int, default=4, help="window width in octaves, >= 3 [4]")
    loc.add_argument("--family", choices=wavelet.FAMILIES, default="db4")
    loc.add_argument("--levels", type=_positive_int, default=None)
    loc.add_argument("--knee-threshold", type=float, default=DEFAULT_KNEE_THRESHOLD,
                     help="knee is significant when sse_reduction >= threshold * "
                          f"single-line SSE [{DEFAULT_KNEE_THRESHOLD}]")
    loc.add_argument("--out", default=None, help="optional locality-curve CSV")

    wav = sub.add_parser("wavelet", help="logscale diagram and wavelet Hurst estimate")
    wav.add_argument("input", help="trace CSV")
    wav.add_argument("--family", choices=wavelet.FAMILIES, default="db4")
    wav.add_argument("--levels", type=_positive_int, default=None)
    wav.add_argument("--j1", type=int, default=None)
    wav.add_argument("--j2", type=int, default=None)
    wav.add_argument("--out", default=None, help="optional diagram CSV")

    rep = sub.add_parser("report", help="full analysis bundle: 6 CSVs plus a manifest")
    rep.add_argument("input", help="trace CSV")
    rep.add_argument("--outdir", required=True, help="output directory (created if missing)")
    rep.add_argument("--max-order", type=int, default=cumulants.DEFAULT_ORDER)
    rep.add_argument("--order", type=int, default=2, help="locality-curve order [2]")
    rep.add_argument("--window", type=int, default=4)
    rep.add_argument("--family", choices=wavelet.FAMILIES, default="db4")
    rep.add_argument("--levels", type=_positive_int, default=None)
    rep.add_argument("--knee-threshold", type=float, default=DEFAULT_KNEE_THRESHOLD)
    return parser


def _fail_validation(parser, message):
    parser.error(message)  # prints usage + message, exits 2


def _validate(parser, args):
    cmd = args.command
    if cmd == "generate":
        if args.model in ("fgn", "multifractal"):
            if not 0.0 < args.hurst < 1.0:
                _fail_validation(parser, f"--hurst must be in the open interval (0, 1), got {args.hurst}")
            if args.length < 16 or args.length & (args.length - 1):
                _fail_validation(parser, f"--length must be a power of two >= 16, got {args.length}")
            if args.variance <= 0.0:
                _fail_validation(parser, f"--variance must be positive, got {args.variance}")
        if args.model in ("cascade", "multifractal"):
            if args.depth < 2:
                _fail_validation(parser, f"--depth must be at least 2, got {args.depth}")
            if args.multiplier <= 0.0:
                _fail_validation(parser, f"--multiplier must be positive, got {args.multiplier}")
            if args.mass <= 0.0:
                _fail_validation(parser, f"--mass must be positive, got {args.mass}")
        if args.model == "multifractal" and args.length != 2**args.depth:
            _fail_validation(
                parser,
                f"--length {args.length} must equal 2**depth = {2**args.depth} "
                f"for the multifractal model",
            )
        for name in ("seed", "cascade_seed"):
            value = getattr(args, name)
            if value is not None and not 0 <= value <= SEED_MAX:
                _fail_validation(parser, f"--{name.replace('_', '-')} must be an unsigned "
                                         f"64-bit integer, got {value}")
    else:
        if not os.path.exists(args.input):
            _fail_validation(parser, f"input trace not found: {args.input}")
    if cmd in ("cumulants", "hurst", "report"):
        if not 1 <= args.max_order <= cumulants.MAX_ORDER:
            _fail_validation(parser, f"--max-order must be in 1..{cumulants.MAX_ORDER}, "
                                     f"got {args.max_order}")
    if cmd in ("hurst", "locality", "report"):
        if not 1 <= args.order <= cumulants.MAX_ORDER:
            _fail_validation(parser, f"--order must be in 1..{cumulants.MAX_ORDER}, got {args.order}")
    if cmd in ("locality", "report") and args.window < 3:
        _fail_validation(parser, f"--window must be at least 3 octaves, got {args.window}")
    if cmd in ("locality", "report") and args.knee_threshold < 0:
        _fail_validation(parser, f"--knee-threshold must be nonnegative, got {args.knee_threshold}")
    if cmd in ("hurst", "wavelet"):
        if args.j1 is not None and args.j2 is not None and args.j1 >= args.j2:
            _fail_validation(parser, f"--j1 must be below --j2, got [{args.j1}, {args.j2}]")
    if cmd == "hurst" and args.j_lo is not None and args.j_hi is not None:
        if args.j_lo >= args.j_hi:
            _fail_validation(parser, f"--j-lo must be below --j-hi, got [{args.j_lo}, {args.j_hi}]")


def _summary_line(trace: synth.Trace) -> str:
    x = trace.samples
    return (
        f"length={x.size} mean={x.mean():.6g} variance={x.var(ddof=1):.6g} "
        f"seed={trace.meta.get('seed')}"
    )


def _cmd_generate(args) -> int:
    if args.model == "fgn":
        trace = synth.generate_fgn(
            synth.FgnSpec(args.hurst, args.length, args.variance, args.seed)
        )
    elif args.model == "cascade":
        trace = synth.generate_cascade(
            synth.CascadeSpec(args.depth, args.multiplier, args.mass, args.seed,
                              equal_split=args.equal_split)
        )
    else:
        cascade_seed = args.seed if args.cascade_seed is None else args.cascade_seed
        trace = synth.generate_multifractal(
            synth.FgnSpec(args.hurst, args.length, args.variance, args.seed),
            synth.CascadeSpec(args.depth, args.multiplier, args.mass, cascade_seed,
                              equal_split=args.equal_split),
        )
    trace_io.write_trace(trace, args.out)
    print(f"wrote {args.out} [{args.model}] {_summary_line(trace)}")
    return 0


def _cmd_aggregate(args) -> int:
    trace = trace_io.read_trace(args.input)
    series = aggregate_series(trace, args.scale)
    out = synth.Trace(series, {
        "model": "aggregate",
        "params": {"scale": args.scale, "source_model": trace.meta.get("model")},
        "seed": trace.meta.get("seed"),
        "created": trace.meta.get("created"),
    })
    trace_io.write_trace(out, args.out)
    print(f"wrote {args.out} [aggregate scale={args.scale}] {_summary_line(out)}")
    return 0


def _table_for(trace, max_order):
    pyramid = build_pyramid(trace)
    return cumulants.cumulant_scaling_table(pyramid, max_order)


def _cmd_cumulants(args) -> int:
    trace = trace_io.read_trace(args.input)
    table = _table_for(trace, args.max_order)
    trace_io.write_curve(table, args.out)
    usable = sum(table.usable.values())
    print(f"wrote {args.out}: orders 1..{args.max_order} x {len(table.scales)} scales "
          f"({usable}/{len(table.values)} cells usable)")
    return 0


def _diagram_for(trace, family, levels):
    levels = levels if levels is not None else wavelet.max_levels(len(trace))
    spec = wavelet.WaveletSpec(family=family, levels=levels)
    return wavelet.logscale_diagram(trace, spec), levels


def _cmd_hurst(args) -> int:
    trace = trace_io.read_trace(args.input)
    window = None
    if args.j_lo is not None or args.j_hi is not None:
        j_max = float(np.floor(np.log2(len(trace)))) - 3
        window = (
            args.j_lo if args.j_lo is not None else 0.0,
            args.j_hi if args.j_hi is not None else j_max,
        )
    if args.method == "wavelet":
        diagram, levels = _diagram_for(trace, args.family, args.levels)
        j1, j2 = wavelet.default_fit_range(levels)
        j1 = args.j1 if args.j1 is not None else j1
        j2 = args.j2 if args.j2 is not None else j2
        fit = wavelet.wavelet_hurst(diagram, j1, j2)
        print(f"method=wavelet family={args.family} octaves=[{j1},{j2}]")
        print(f"alpha = {fit.alpha:.4f}  r2 = {fit.r_squared:.4f}")
        print(f"Hurst estimate: {fit.hurst:.4f}")
        if args.out:
            trace_io.write_curve(diagram, args.out)
        return 0
    order = 2 if args.method == "variance" else args.order
    table = _table_for(trace, max(args.max_order, order))
    fit = scaling.fit_loglog(table, order, window)
    print(f"method={args.method} order={order} octaves=[{fit.window[0]:g},{fit.window[1]:g}] "
          f"points={fit.points_used}")
    if args.method == "cumulant":
        spectrum = scaling.hurst_spectrum(table, window)
        for m in sorted(spectrum.entries):
            h, r2 = spectrum.entries[m]
            print(f"H({m}) = {h:.4f}  (r2 = {r2:.4f})")
        for m in sorted(spectrum.omitted):
            print(f"H({m}): omitted - {spectrum.omitted[m]}")
        if args.out:
            trace_io.write_curve(spectrum, args.out)
    print(f"Hurst estimate: {fit.hurst():.4f}  (slope {fit.slope:.4f}, r2 {fit.r_squared:.4f})")
    return 0


def _knee_report(curve, threshold):
    knee = scaling.detect_knee(curve)
    if knee.single_line_sse > 0:
        fraction = knee.sse_reduction / knee.single_line_sse
    else:
        fraction = 0.0
    significant = fraction >= threshold
    lines = [
        f"knee octave {knee.octave:g}: slopes {knee.left_slope:+.4f} -> "
        f"{knee.right_slope:+.4f}, sse_reduction {knee.sse_reduction:.3e} "
        f"({100 * fraction:.1f}% of single-line SSE)"
    ]
    if not significant:
        lines.append(f"no significant knee (reduction below {100 * threshold:.0f}% threshold)")
    return knee, significant, fraction, lines


def _cmd_locality(args) -> int:
    trace = trace_io.read_trace(args.input)
    if args.method == "cumulant":
        table = _table_for(trace, max(2, args.order))
        curve = scaling.locality_curve(table, args.order, args.window)
    else:
        diagram, _ = _diagram_for(trace, args.family, args.levels)
        curve = wavelet.wavelet_locality_curve(diagram, args.window)
    print(f"locality curve: {len(curve.points)} windows of {args.window} octaves "
          f"(method={args.method})")
    _, _, _, lines = _knee_report(curve, args.knee_threshold)
    for line in lines:
        print(line)
    if args.out:
        trace_io.write_curve(curve, args.out)
        print(f"wrote {args.out}")
    return 0


def _cmd_wavelet(args) -> int:
    trace = trace_io.read_trace(args.input)
    diagram, levels = _diagram_for(trace, args.family, args.levels)
    print(f"logscale diagram: family={args.family} levels={levels}")
    print("octave,log2_energy,count")
    for j in diagram.octaves:
        mu = diagram.energy[j]
        log2_mu = f"{np.log2(mu):.6f}" if mu > 0 else "nan"
        print(f"{j},{log2_mu},{diagram.counts[j]}")
    j1, j2 = wavelet.default_fit_range(levels)
    j1 = args.j1 if args.j1 is not None else j1
    j2 = args.j2 if args.j2 is not None else j2
    fit = wavelet.wavelet_hurst(diagram, j1, j2)
    print(f"alpha = {fit.alpha:.4f}  H = {fit.hurst:.4f}  r2 = {fit.r_squared:.4f} "
          f"octaves=[{j1},{j2}]")
    if args.out:
        trace_io.write_curve(diagram, args.out)
        print(f"wrote {args.out}")
    return 0


REPORT_FILES = (
    "cumulant_table.csv",
    "hurst_spectrum.csv",
    "locality_cumulant.csv",
    "locality_wavelet.csv",
    "logscale_diagram.csv",
    "knees.csv",
)


def _cmd_report(args) -> int:
    trace = trace_io.read_trace(args.input)
    os.makedirs(args.outdir, exist_ok=True)
    table = _table_for(trace, args.max_order)
    spectrum = scaling.hurst_spectrum(table)
    curve_c = scaling.locality_curve(table, args.order, args.window)
    diagram, levels = _diagram_for(trace, args.family, args.levels)
    curve_w = wavelet.wavelet_locality_curve(diagram, args.window)

    paths = {name: os.path.join(args.outdir, name) for name in REPORT_FILES}
    trace_io.write_curve(table, paths["cumulant_table.csv"])
    trace_io.write_curve(spectrum, paths["hurst_spectrum.csv"])
    trace_io.write_curve(curve_c, paths["locality_cumulant.csv"])
    trace_io.write_curve(curve_w, paths["locality_wavelet.csv"])
    trace_io.write_curve(diagram, paths["logscale_diagram.csv"])

    knee_lines = ["method,octave,left_slope,right_slope,sse_reduction,significant"]
    for method, curve in (("cumulant", curve_c), ("wavelet", curve_w)):
        knee, significant, fraction, _ = _knee_report(curve, args.knee_threshold)
        knee_lines.append(
            f"{method},{knee.octave:.17g},{knee.left_slope:.17g},{knee.right_slope:.17g},"
            f"{knee.sse_reduction:.17g},{'true' if significant else 'false'}"
        )
    with open(paths["knees.csv"], "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(knee_lines) + "\n")

    manifest = {
        "format": "scalefit-report/1",
        "input": os.path.basename(args.input),
        "parameters": {
            "max_order": args.max_order,
            "order": args.order,
            "window": args.window,
            "family": args.family,
            "levels": levels,
            "knee_threshold": args.knee_threshold,
        },
        "files": list(REPORT_FILES),
    }
    manifest_path = os.path.join(args.outdir, "manifest.json")
    with open(manifest_path, "w", encoding="ascii", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {len(REPORT_FILES)} CSVs + manifest to {args.outdir}")
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "aggregate": _cmd_aggregate,
    "cumulants": _cmd_cumulants,
    "hurst": _cmd_hurst,
    "locality": _cmd_locality,
    "wavelet": _cmd_wavelet,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"scalefit {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

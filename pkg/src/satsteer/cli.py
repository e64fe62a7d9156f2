"""Command-line front end.

Exit codes: 0 success, 2 argument or domain error, 3 I/O error. Data goes to
``--out`` (or standard output); diagnostics go to standard error.
"""

import argparse
import math
import os
import sys
from pathlib import Path

from . import channel, experiments, spacetime, steering

CONSTANTS_ENV = "SATSTEER_CONSTANTS"


class UsageError(Exception):
    pass


def _fmt(x):
    return f"{x:.11e}"


def _earth(args):
    path = args.constants or os.environ.get(CONSTANTS_ENV)
    if not path:
        return spacetime.EarthModel()
    try:
        return spacetime.EarthModel.from_file(path)
    except OSError as exc:
        raise OSError(f"cannot read constants file {path}: {exc}") from exc


def _wavepacket(args):
    peak = args.peak_hz if args.peak_hz is not None else args.omega2 * channel.PEAK_FREQ_UNIT_HZ
    width = (
        args.bandwidth_hz
        if args.bandwidth_hz is not None
        else args.sigma * channel.BANDWIDTH_UNIT_HZ
    )
    return channel.WavePacket(peak, width)


def _epsilon(text):
    if text in ("+1", "1"):
        return 1
    if text == "-1":
        return -1
    raise argparse.ArgumentTypeError("epsilon must be +1 or -1")


def _height(text):
    value = float(text)
    if not math.isfinite(value) or value < 0:
        raise argparse.ArgumentTypeError("height must be a finite number >= 0")
    return value


def _write(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_delta(args):
    earth = _earth(args)
    geom = spacetime.OrbitGeometry(earth, args.height_km * 1e3, args.epsilon)
    lines = []
    if args.mode == "exact":
        shift = spacetime.kerr_frequency_ratio(geom)
        lines += [f"delta = {_fmt(shift.delta)}", f"ratio_minus_one = {_fmt(shift.ratio_minus_one)}"]
    else:
        d = spacetime.delta_perturbative(geom)
        lines += [
            f"delta = {_fmt(d.total)}",
            f"delta_sch = {_fmt(d.sch)}",
            f"delta_rot = {_fmt(d.rot)}",
            f"delta_h = {_fmt(d.h)}",
        ]
    _write("\n".join(lines) + "\n", args.out)


def cmd_steer(args):
    if not 0 <= args.squeezing <= experiments.S_MAX:
        raise UsageError(f"--squeezing must lie in [0, {experiments.S_MAX}]")
    if args.omega2 <= 0 or args.sigma <= 0:
        raise UsageError("--omega2 and --sigma must be positive")
    earth = _earth(args)
    geom = spacetime.OrbitGeometry(earth, args.height_km * 1e3, args.epsilon)
    wp = _wavepacket(args)
    res = channel.end_to_end(geom, wp, args.squeezing, args.delta_mode)
    lines = [f"delta = {_fmt(res.delta)}", f"theta = {_fmt(res.theta)}"]
    if args.direction in ("ab", "both"):
        lines.append(f"g_ab = {_fmt(res.g_ab)}")
    if args.direction in ("ba", "both"):
        lines.append(f"g_ba = {_fmt(res.g_ba)}")
    if args.direction == "both":
        lines.append(f"g_asym = {_fmt(res.asymmetry)}")
    if args.compare_double_angle:
        s, t = args.squeezing, res.theta
        lines += [
            f"g0 = {_fmt(steering.lossless_steering(s))}",
            f"g0_double_angle = {_fmt(steering.g0_double_angle(s))}",
            f"g_ab_double_angle = {_fmt(steering.steering_ab_double_angle(s, t))}",
            f"g_ba_double_angle = {_fmt(steering.steering_ba_double_angle(s, t))}",
        ]
    _write("\n".join(lines) + "\n", args.out)


def _emit(spec, rows, args):
    columns = spec.columns
    if args.out is None or args.out == "-":
        experiments.emit(rows, args.format, sys.stdout, columns)
        return
    experiments.emit(rows, args.format, args.out, columns)
    if args.plot_script:
        if args.format != "csv":
            raise UsageError("--plot-script needs --format csv")
        experiments.emit_plot_script(spec, args.out, Path(args.out).with_suffix(".plot.py"))


def _with_common(spec, args):
    return experiments.SweepSpec(
        axes=spec.axes,
        fixed=spec.fixed,
        delta_mode=args.delta_mode,
        epsilon=args.epsilon,
        earth=_earth(args),
        plotted=spec.plotted,
    )


def cmd_figure(args):
    spec = _with_common(experiments.figure_preset(args.id, args.steps), args)
    rows = experiments.run_sweep(spec, workers=args.workers)
    _emit(spec, rows, args)


def _parse_var(text):
    name, sep, rng = text.partition("=")
    parts = rng.split(":")
    if not sep or len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected NAME=LO:HI:STEPS, got {text!r}")
    try:
        return name.strip(), float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad numbers in {text!r}") from None


def _parse_fix(text):
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number in {text!r}") from None


def cmd_sweep(args):
    axes = tuple(experiments.Axis(*v) for v in args.var)
    fixed = dict(args.fix or [])
    overlap = set(fixed) & {a.name for a in axes}
    if overlap:
        raise UsageError(f"parameters both swept and fixed: {sorted(overlap)}")
    spec = experiments.SweepSpec(
        axes=axes,
        fixed=fixed,
        delta_mode=args.delta_mode,
        epsilon=args.epsilon,
        earth=_earth(args),
        plotted=("g_ab", "g_ba", "g_asym"),
    )
    rows = experiments.run_sweep(spec, workers=args.workers)
    _emit(spec, rows, args)


def cmd_diagnostics(args):
    """Consistency report on quoted magnitudes and alternative formulas."""
    earth = _earth(args)
    wp = channel.WavePacket()
    geom = spacetime.OrbitGeometry(earth, 2e7, 1)
    d = spacetime.delta_exact(geom)
    lines = [
        "# loss parameter delta^2 Omega0^2 / (2 sigma^2) at 500 THz, 1 MHz",
        f"loss_param(delta=1e-12) = {_fmt(steering.loss_parameter(1e-12, wp.peak_freq, wp.bandwidth))}",
        f"loss_param(delta=1e-10) = {_fmt(steering.loss_parameter(1e-10, wp.peak_freq, wp.bandwidth))}",
        f"delta_exact(h=20000 km) = {_fmt(d)}",
        f"loss_param(delta_exact(h=20000 km)) = {_fmt(steering.loss_parameter(d, wp.peak_freq, wp.bandwidth))}",
        "note: a loss parameter of 1.25e-7 corresponds to delta ~ 1e-12;"
        " delta ~ 1e-10 gives ~1.25e-3",
        "# lossless steering at s = 1",
        f"g0(ln cosh 2s) = {_fmt(steering.lossless_steering(1.0))}",
        f"g0_double_angle(ln[1+2 sinh^2 2s]) = {_fmt(steering.g0_double_angle(1.0))}",
        "# overlap at delta = 1e-12: closed form vs quadrature of the rescaled spectrum",
        f"theta_closed = {_fmt(channel.overlap_theta_closed(1e-12, wp).theta)}",
        f"theta_quadrature = {_fmt(channel.overlap_theta_quadrature(1e-12, wp).theta)}",
        "# bandwidth dependence at h = 20000 km, s = 1",
    ]
    for sig in (0.5, 1.0, 2.0):
        r = channel.end_to_end(geom, channel.WavePacket.from_dimensionless(1.0, sig), 1.0)
        lines.append(f"g_ab(sigma={sig:g}) = {_fmt(r.g_ab)}")
    lines.append("note: steering increases with bandwidth (loss term scales as 1/sigma^2)")
    lines += [
        "# delta at h = 0",
        f"delta_exact(h=0) = {_fmt(spacetime.delta_exact(spacetime.OrbitGeometry(earth, 0.0)))}",
        "note: the orbiting receiver is shifted even at h = 0, so the asymmetry"
        " does not vanish there; a static receiver would give delta(0) = 0",
    ]
    _write("\n".join(lines) + "\n", args.out)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="satsteer",
        description="Gaussian EPR steering of ground-to-satellite photon pairs.",
    )
    parser.add_argument(
        "--constants",
        help=f"constants override file (key = value); default from ${CONSTANTS_ENV}",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, delta_mode=True):
        p.add_argument("--epsilon", type=_epsilon, default=1, help="orbit direction, +1 or -1")
        if delta_mode:
            p.add_argument("--delta-mode", choices=("exact", "perturbative"), default="exact")
        p.add_argument("--out", help="output path (default: standard output)")

    p = sub.add_parser("delta", help="frequency-shift parameter at a height")
    p.add_argument("height_km", type=_height)
    p.add_argument("--mode", choices=("exact", "perturbative"), default="exact")
    common(p, delta_mode=False)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("steer", help="steering at a single orbit")
    p.add_argument("--height-km", type=_height, default=20000.0)
    p.add_argument("--squeezing", type=float, default=1.0)
    p.add_argument("--omega2", type=float, default=1.0, help="peak frequency / 500 THz")
    p.add_argument("--sigma", type=float, default=1.0, help="bandwidth / 1 MHz")
    p.add_argument("--peak-hz", type=float, help="peak frequency in Hz (overrides --omega2)")
    p.add_argument("--bandwidth-hz", type=float, help="bandwidth in Hz (overrides --sigma)")
    p.add_argument("--direction", choices=("ab", "ba", "both"), default="both")
    p.add_argument(
        "--compare-double-angle",
        action="store_true",
        help="also print the sinh^2(2s) variants of the closed forms",
    )
    common(p)
    p.set_defaults(func=cmd_steer)

    for name, helptext in (("figure", "figure preset sweep"), ("sweep", "custom sweep")):
        p = sub.add_parser(name, help=helptext)
        if name == "figure":
            p.add_argument("id", choices=experiments.FIGURES)
            p.add_argument("--steps", type=int, help="points per axis (default per preset)")
            p.set_defaults(func=cmd_figure)
        else:
            p.add_argument("--var", type=_parse_var, action="append", required=True,
                           help="swept axis NAME=LO:HI:STEPS (h in km), up to two")
            p.add_argument("--fix", type=_parse_fix, action="append",
                           help="fixed parameter NAME=VALUE")
            p.set_defaults(func=cmd_sweep)
        p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--plot-script", action="store_true",
                       help="with --out, also write a matplotlib script next to the CSV")
        common(p)

    p = sub.add_parser("diagnostics", help="consistency report")
    p.add_argument("--out")
    p.set_defaults(func=cmd_diagnostics)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"satsteer: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"satsteer: I/O error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, experiments.SweepError) as exc:
        print(f"satsteer: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

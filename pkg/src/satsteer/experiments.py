"""Parameter sweeps over orbit height, squeezing, bandwidth and peak frequency.

Axis values use the dimensionless conventions of the CLI: ``h`` in km,
``sigma`` in units of 1 MHz, ``omega2`` in units of 500 THz.
"""

import csv
import io
import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import channel, spacetime

AXIS_NAMES = ("h", "s", "sigma", "omega2")
AXIS_COLUMNS = {"h": "h_km", "s": "s", "sigma": "sigma", "omega2": "omega2"}
OUTPUT_COLUMNS = ("delta", "theta", "g_ab", "g_ba", "g_asym")
DEFAULT_FIXED = {"h": 20000.0, "s": 1.0, "sigma": 1.0, "omega2": 1.0}

GEO_KM = spacetime.GEO_HEIGHT_M / 1e3
S_MAX = 3.0
DEFAULT_STEPS = 400
SURFACE_STEPS = 200


class SweepError(RuntimeError):
    """A grid point failed; ``point`` holds its axis values."""

    def __init__(self, point, cause):
        super().__init__(f"sweep failed at {point}: {cause}")
        self.point = point
        self.cause = cause


def _check_value(name, value):
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value}")
    if name == "h" and not 0.0 <= value <= GEO_KM:
        raise ValueError(f"h must lie in [0, {GEO_KM}] km, got {value}")
    if name == "s" and not 0.0 <= value <= S_MAX:
        raise ValueError(f"s must lie in [0, {S_MAX}], got {value}")
    if name in ("sigma", "omega2") and value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    steps: int

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValueError(f"unknown axis {self.name!r}; expected one of {AXIS_NAMES}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ValueError(f"axis {self.name!r} needs at least 2 steps")
        if self.hi < self.lo:
            raise ValueError(f"axis {self.name!r} has hi < lo")
        _check_value(self.name, self.lo)
        _check_value(self.name, self.hi)

    def values(self):
        return np.linspace(self.lo, self.hi, int(self.steps))


@dataclass(frozen=True)
class SweepSpec:
    """One- or two-axis linear grid plus fixed values for the other parameters.

    ``plotted`` names the output column(s) a figure shows; every output column
    is always written.
    """

    axes: tuple
    fixed: dict = field(default_factory=dict)
    delta_mode: str = "exact"
    epsilon: int = 1
    earth: spacetime.EarthModel = field(default_factory=spacetime.EarthModel)
    plotted: tuple = ("g_ab",)

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        if not 1 <= len(self.axes) <= 2:
            raise ValueError("a sweep has one or two axes")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ValueError(f"repeated axis name in {names}")
        for key, value in self.fixed.items():
            if key not in AXIS_NAMES:
                raise ValueError(f"unknown fixed parameter {key!r}")
            _check_value(key, value)
        if self.delta_mode not in ("exact", "perturbative"):
            raise ValueError(f"unknown delta mode {self.delta_mode!r}")
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        for col in self.plotted:
            if col not in OUTPUT_COLUMNS:
                raise ValueError(f"unknown output column {col!r}")

    @property
    def columns(self):
        swept = {a.name for a in self.axes}
        return tuple(AXIS_COLUMNS[n] for n in AXIS_NAMES if n in swept) + OUTPUT_COLUMNS

    def points(self):
        """Grid points in row-major order (first axis outermost)."""
        base = {**DEFAULT_FIXED, **self.fixed}
        grids = [a.values() for a in self.axes]
        for combo in itertools.product(*grids):
            point = dict(base)
            point.update({a.name: float(v) for a, v in zip(self.axes, combo)})
            yield point


def evaluate_point(spec, point):
    """Evaluate one grid point and return its row as a column -> value dict."""
    geom = spacetime.OrbitGeometry(spec.earth, point["h"] * 1e3, spec.epsilon)
    wp = channel.WavePacket.from_dimensionless(point["omega2"], point["sigma"])
    res = channel.end_to_end(geom, wp, point["s"], spec.delta_mode)
    swept = {a.name for a in spec.axes}
    row = {AXIS_COLUMNS[n]: point[n] for n in AXIS_NAMES if n in swept}
    row.update(
        delta=res.delta, theta=res.theta, g_ab=res.g_ab, g_ba=res.g_ba, g_asym=res.asymmetry
    )
    return row


def run_sweep(spec, workers=1):
    """Evaluate the grid; rows come back in grid order whatever ``workers`` is."""
    points = list(spec.points())

    def work(point):
        try:
            return evaluate_point(spec, point)
        except (ValueError, ArithmeticError) as exc:
            raise SweepError({k: point[k] for k in AXIS_NAMES}, exc) from exc

    if workers <= 1:
        return [work(p) for p in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(work, points))


def figure_preset(fig_id, steps=None):
    """Preset sweep for one of the standard figures.

    ``fig1``: steering vs ``s`` for three peak frequencies at 20000 km.
    ``fig2``: steering surface over height and bandwidth.
    ``fig3a``/``fig3b``: both steering directions vs height, ``omega2`` 0.6 / 1.
    ``fig4``: asymmetry surface over height and peak frequency.
    """
    line = steps or DEFAULT_STEPS
    surf = steps or SURFACE_STEPS
    h_axis = lambda n: Axis("h", 0.0, GEO_KM, n)  # noqa: E731
    if fig_id == "fig1":
        return SweepSpec(
            axes=(Axis("omega2", 0.6, 1.4, 3), Axis("s", 0.0, S_MAX, line)),
            fixed={"h": 20000.0, "sigma": 1.0},
            plotted=("g_ab",),
        )
    if fig_id == "fig2":
        return SweepSpec(
            axes=(h_axis(surf), Axis("sigma", 0.5, 2.0, surf)),
            fixed={"s": 1.0, "omega2": 1.0},
            plotted=("g_ab",),
        )
    if fig_id in ("fig3a", "fig3b"):
        return SweepSpec(
            axes=(h_axis(line),),
            fixed={"s": 1.0, "sigma": 1.0, "omega2": 0.6 if fig_id == "fig3a" else 1.0},
            plotted=("g_ab", "g_ba"),
        )
    if fig_id == "fig4":
        return SweepSpec(
            axes=(h_axis(surf), Axis("omega2", 0.6, 1.0, surf)),
            fixed={"s": 1.0, "sigma": 1.0},
            plotted=("g_asym",),
        )
    raise ValueError(f"unknown figure {fig_id!r}; expected fig1, fig2, fig3a, fig3b or fig4")


FIGURES = ("fig1", "fig2", "fig3a", "fig3b", "fig4")


def format_csv(rows, columns):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([f"{row[c]:.11e}" for c in columns])
    return buf.getvalue()


def format_jsonl(rows, columns):
    return "".join(json.dumps({c: row[c] for c in columns}) + "\n" for row in rows)


def emit(rows, fmt, destination, columns=None):
    """Write rows as CSV or JSON lines.

    Args:
        rows (list[dict]): sweep rows, at least one
        fmt (str): ``"csv"`` or ``"jsonl"``
        destination: path or writable text stream
        columns (Sequence[str]): column order, default the keys of the first row
    """
    if not rows:
        raise ValueError("nothing to emit")
    columns = list(columns or rows[0].keys())
    if fmt == "csv":
        text = format_csv(rows, columns)
    elif fmt == "jsonl":
        text = format_jsonl(rows, columns)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def parse(text, fmt):
    """Read back rows written by :func:`emit` (values as floats)."""
    if fmt == "csv":
        reader = csv.DictReader(io.StringIO(text))
        return [{k: float(v) for k, v in row.items()} for row in reader]
    if fmt == "jsonl":
        return [json.loads(line) for line in text.splitlines() if line.strip()]
    raise ValueError(f"unknown format {fmt!r}")


_PLOT_TEMPLATE = '''"""Plot {csv_name}; generated by satsteer."""
import csv
from pathlib import Path

import matplotlib.pyplot as plt

here = Path(__file__).resolve().parent
with open(here / {csv_name!r}, newline="") as fh:
    rows = [{{k: float(v) for k, v in r.items()}} for r in csv.DictReader(fh)]

axes = {axes!r}
plotted = {plotted!r}
fig, ax = plt.subplots()
if len(axes) == 1:
    x = [r[axes[0]] for r in rows]
    for col in plotted:
        ax.plot(x, [r[col] for r in rows], label=col)
    ax.set_xlabel(axes[0])
    ax.legend()
else:
    outer, inner = axes
    for key in sorted({{r[outer] for r in rows}}):
        sub = [r for r in rows if r[outer] == key]
        for col in plotted:
            ax.plot([r[inner] for r in sub], [r[col] for r in sub],
                    label=f"{{col}} {{outer}}={{key:g}}")
    ax.set_xlabel(inner)
    if len({{r[outer] for r in rows}}) <= 6:
        ax.legend()
fig.savefig(here / {png_name!r}, dpi=150)
'''


def emit_plot_script(spec, csv_path, script_path):
    """Write a matplotlib script that plots ``csv_path`` (referenced relatively)."""
    csv_path, script_path = Path(csv_path), Path(script_path)
    rel = csv_path.resolve().relative_to(script_path.resolve().parent)
    axes = [AXIS_COLUMNS[a.name] for a in spec.axes]
    script_path.write_text(
        _PLOT_TEMPLATE.format(
            csv_name=str(rel),
            axes=axes,
            plotted=list(spec.plotted),
            png_name=str(rel.with_suffix(".png")),
        ),
        encoding="utf-8",
    )

r"""Frequency shift between a ground station and a circular equatorial orbit.

Lengths are in metres and the Earth's angular velocity is converted to
geometric units (``omega / c``, in 1/m) on entry, so ``r_A * omega`` is the
dimensionless equatorial speed of the station.

The exact frequency ratio for a photon sent from the rotating station at
``r_A`` to a satellite on a circular equatorial geodesic at ``r_B`` is

.. math::

    \frac{\Omega_B}{\Omega_A} = \frac{(1 + \epsilon k)\sqrt{1 - P}}
        {\sqrt{1 - 3M/r_B + 2\epsilon k}}, \qquad
    k = \frac{a}{r_B}\sqrt{\frac{M}{r_B}},

    P = \frac{2M}{r_A}(1 - 2a\omega) + \Big(r_A^2 + a^2 + \frac{2Ma^2}{r_A}\Big)\omega^2,

where :math:`\sqrt{1-P}` is the station's lapse on the Kerr equator. The
shift parameter is :math:`\delta = \sqrt{\Omega_B/\Omega_A} - 1`, of order
1e-10 for the Earth, and is evaluated in double-double arithmetic so that it
keeps far more than the six significant digits the steering loss needs.
"""

import functools
import math
import warnings
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import NamedTuple

from scipy.optimize import bisect

from .ddouble import DD

GEO_HEIGHT_M = 3.5784e7

#: Keys accepted by constants override files, mapped to EarthModel fields.
CONSTANT_KEYS = {
    "r_a_m": "r_a",
    "r_s_m": "r_s",
    "omega_rad_s": "omega",
    "kerr_a_m": "kerr_a",
    "c_m_s": "c",
}


@dataclass(frozen=True)
class EarthModel:
    """Earth parameters.

    Attributes:
        r_a: ground-station radial coordinate (m)
        r_s: Schwarzschild radius (m)
        omega: equatorial angular velocity (rad/s)
        kerr_a: Kerr parameter J/(Mc) (m)
        c: speed of light (m/s), used only to convert ``omega``
    """

    r_a: float = 6.371e6
    r_s: float = 9e-3
    omega: float = 7.2921150e-5
    kerr_a: float = 3.28
    c: float = 2.99792458e8

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not math.isfinite(v):
                raise ValueError(f"{f.name} must be finite, got {v}")
        if self.r_a <= 0 or self.c <= 0:
            raise ValueError("r_a and c must be positive")
        if self.r_s < 0 or self.omega < 0 or self.kerr_a < 0:
            raise ValueError("r_s, omega and kerr_a must be non-negative")
        if self.r_s / self.r_a >= 1e-6:
            raise ValueError("weak-field model needs r_s / r_a < 1e-6")
        if self.kerr_a >= 1e-3 * self.r_a:
            raise ValueError("kerr_a must be much smaller than r_a")

    @property
    def mass(self):
        """Mass in geometric units, ``r_s / 2`` (m)."""
        return self.r_s / 2

    @property
    def omega_geometric(self):
        """Angular velocity in geometric units (1/m)."""
        return self.omega / self.c

    @classmethod
    def from_file(cls, path):
        """Load overrides from a flat ``key = value`` file.

        Blank lines and ``#`` comments are ignored; keys are those of
        :data:`CONSTANT_KEYS`. Unknown or repeated keys raise ``ValueError``.
        """
        values = {}
        text = Path(path).read_text(encoding="utf-8")
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            if key not in CONSTANT_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown constant {key!r}")
            name = CONSTANT_KEYS[key]
            if name in values:
                raise ValueError(f"{path}:{lineno}: duplicate constant {key!r}")
            try:
                values[name] = float(value)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: invalid number {value.strip()!r}") from None
        return cls(**values)


@dataclass(frozen=True)
class OrbitGeometry:
    """Ground station plus satellite at height ``h`` (m) on a circular equatorial orbit.

    ``epsilon`` is +1 for an orbit co-rotating with the Earth, -1 otherwise.
    """

    earth: EarthModel = field(default_factory=EarthModel)
    h: float = 2e7
    epsilon: int = 1

    def __post_init__(self):
        if not math.isfinite(self.h) or self.h < 0:
            raise ValueError(f"height must be finite and >= 0, got {self.h}")
        if self.epsilon not in (1, -1):
            raise ValueError(f"epsilon must be +1 or -1, got {self.epsilon}")
        if self.r_b <= 3 * self.earth.mass:
            raise ValueError("satellite radius must exceed 3M")

    @property
    def r_b(self):
        return self.earth.r_a + self.h


class FrequencyShift(NamedTuple):
    ratio: float
    ratio_minus_one: float
    delta: float


class PerturbativeDelta(NamedTuple):
    total: float
    sch: float
    rot: float
    h: float


def schwarzschild_factor(r, earth):
    """``1 - r_s / r``."""
    if r <= earth.r_s:
        raise ValueError(f"radius {r} is inside the Schwarzschild radius {earth.r_s}")
    return 1.0 - earth.r_s / r


def _station_lapse_sq_deficit(earth, r_a, w, flipped):
    # 1 - P is the squared lapse of the co-rotating station.
    m, a = DD(earth.mass), DD(earth.kerr_a)
    if not flipped:
        return (2 * m / r_a) * (1 - 2 * a * w) + (r_a * r_a + a * a + 2 * m * a * a / r_a) * w * w
    return (2 * m / r_a) * (1 + 2 * a * w) - (r_a * r_a + a * a - 2 * m * a * a / r_a) * w * w


@functools.lru_cache(maxsize=4096)
def kerr_frequency_ratio(geom, normalization="metric"):
    """Exact received-to-emitted frequency ratio and the derived shift.

    Args:
        geom (OrbitGeometry): station and orbit
        normalization (str): ``"metric"`` uses the station lapse derived from
            the Kerr line element. ``"flipped"`` reverses the sign of the
            ``a*omega`` and ``omega**2`` corrections, for comparison only; its
            rotation term then has the opposite sign to
            :func:`delta_perturbative`.

    Returns:
        FrequencyShift: ratio, ratio - 1 and delta, with ratio - 1 and delta
        formed in double-double arithmetic
    """
    if normalization not in ("metric", "flipped"):
        raise ValueError(f"unknown normalization {normalization!r}")
    earth = geom.earth
    r_a = DD(earth.r_a)
    r_b = r_a + geom.h
    m = DD(earth.mass)
    w = DD(earth.omega) / earth.c
    k = DD(earth.kerr_a) / r_b * (m / r_b).sqrt() * geom.epsilon

    lapse_a = 1 - _station_lapse_sq_deficit(earth, r_a, w, normalization == "flipped")
    orbit = 1 - 3 * m / r_b + 2 * k
    if lapse_a.hi <= 0 or orbit.hi <= 0:
        raise ValueError("non-positive square-root argument in the frequency ratio")

    ratio = (1 + k) * lapse_a.sqrt() / orbit.sqrt()
    u = ratio - 1
    delta = u / (1 + ratio.sqrt())
    return FrequencyShift(float(ratio), float(u), float(delta))


def delta_exact(geom, normalization="metric"):
    r""":math:`\delta = \sqrt{\Omega_B/\Omega_A} - 1` from the exact ratio."""
    return kerr_frequency_ratio(geom, normalization).delta


def delta_perturbative(geom):
    r"""Weak-field, slow-rotation expansion of :math:`\delta`.

    .. math::

        \delta = \frac{r_S}{8 r_A}\frac{1 - 2h/r_A}{1 + h/r_A}
               - \frac{(r_A\omega)^2}{4}
               - \frac{(r_A\omega)^2}{4}\Big(\frac34\frac{r_S}{r_A}
               - \frac{4Ma}{\omega r_A^3}\Big)

    The three terms are returned separately (``sch``, ``rot``, ``h``) along
    with their sum. The expansion does not depend on the orbit direction.
    With ``omega == 0`` the last term is reported as zero.
    """
    earth = geom.earth
    x = geom.h / earth.r_a
    rs_ra = earth.r_s / earth.r_a
    w = earth.omega_geometric
    v2 = (earth.r_a * w) ** 2

    d_sch = rs_ra / 8 * (1 - 2 * x) / (1 + x)
    d_rot = -v2 / 4
    if w == 0:
        if earth.kerr_a != 0 and earth.r_s != 0:
            warnings.warn(
                "omega = 0: higher-order term is singular, reported as 0",
                RuntimeWarning,
                stacklevel=2,
            )
        d_h = 0.0
    else:
        d_h = -v2 / 4 * (0.75 * rs_ra - 4 * earth.mass * earth.kerr_a / (w * earth.r_a**3))
    return PerturbativeDelta(d_sch + d_rot + d_h, d_sch, d_rot, d_h)


def delta_static(geom):
    r"""Shift for a static (non-orbiting) receiver in Schwarzschild spacetime.

    :math:`-\frac{r_S}{4 r_A}\frac{h}{r_A + h}`; no special-relativistic
    contribution, vanishes at ``h = 0``. Comparison only.
    """
    earth = geom.earth
    return -earth.r_s / (4 * earth.r_a) * geom.h / (earth.r_a + geom.h)


def compensation_height(earth, mode="full", epsilon=1, rtol=1e-13):
    r"""Height in ``[0, r_A]`` at which the frequency shift vanishes.

    Args:
        earth (EarthModel): constants
        mode (str): ``"schwarzschild"`` roots only the leading term of the
            expansion (root ``r_A/2``); ``"full"`` roots
            :func:`delta_perturbative`; ``"exact"`` roots :func:`delta_exact`.
        epsilon (int): orbit direction, used by ``"exact"`` only
        rtol (float): relative bracket width at termination

    Returns:
        float: height in metres

    Raises:
        ValueError: unknown mode or no sign change over the bracket
    """
    r_a = earth.r_a
    if mode == "schwarzschild":
        def f(h):
            return (1 - 2 * h / r_a) / (1 + h / r_a)
    elif mode == "full":
        def f(h):
            return delta_perturbative(OrbitGeometry(earth, h, epsilon)).total
    elif mode == "exact":
        def f(h):
            return delta_exact(OrbitGeometry(earth, h, epsilon))
    else:
        raise ValueError(f"unknown mode {mode!r}")

    lo, hi = f(0.0), f(r_a)
    if lo == 0:
        return 0.0
    if hi == 0:
        return r_a
    if lo * hi > 0:
        raise ValueError(f"no sign change of delta(h) on [0, {r_a}] in mode {mode!r}")
    return bisect(f, 0.0, r_a, xtol=1e-300, rtol=rtol, maxiter=400)

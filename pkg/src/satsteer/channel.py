r"""Wavepacket overlap and the end-to-end ground-to-satellite channel.

A photon with the normalized Gaussian spectrum

.. math::

    F(\Omega) = (2\pi\sigma^2)^{-1/4} \exp\big(-(\Omega - \Omega_0)^2 / 4\sigma^2\big)

is received with a deformed spectrum. The overlap :math:`\Theta` between
sent and received spectra acts as the transmissivity amplitude of a lossy
channel on the travelling mode.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import gaussian, spacetime, steering

PEAK_FREQ_UNIT_HZ = 5e14
BANDWIDTH_UNIT_HZ = 1e6
QUAD_WINDOW = 12.0
QUAD_EPSABS = 1e-12


class StageError(ValueError):
    """A pipeline failure tagged with the stage that raised it."""

    def __init__(self, stage, cause):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class WavePacket:
    """Gaussian frequency profile, peak ``peak_freq`` and width ``bandwidth`` (Hz)."""

    peak_freq: float = PEAK_FREQ_UNIT_HZ
    bandwidth: float = BANDWIDTH_UNIT_HZ

    def __post_init__(self):
        if not (self.peak_freq > 0 and self.bandwidth > 0):
            raise ValueError("peak frequency and bandwidth must be positive")
        if not (math.isfinite(self.peak_freq) and math.isfinite(self.bandwidth)):
            raise ValueError("peak frequency and bandwidth must be finite")
        if self.peak_freq / self.bandwidth < 1e3:
            warnings.warn(
                f"peak/bandwidth = {self.peak_freq / self.bandwidth:.3g} is below 1e3; "
                "the narrow-band approximation is questionable",
                RuntimeWarning,
                stacklevel=3,
            )

    @classmethod
    def from_dimensionless(cls, omega2=1.0, sigma=1.0):
        """Build from peak in units of 500 THz and bandwidth in units of 1 MHz."""
        return cls(omega2 * PEAK_FREQ_UNIT_HZ, sigma * BANDWIDTH_UNIT_HZ)

    @property
    def ratio(self):
        return self.peak_freq / self.bandwidth


@dataclass(frozen=True)
class ChannelParams:
    """Overlap ``theta`` clamped to ``[0, 1]``; ``theta_raw`` is the unclamped value."""

    theta: float
    theta_raw: float = None

    def __post_init__(self):
        if self.theta_raw is None:
            object.__setattr__(self, "theta_raw", self.theta)
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta must lie in [0, 1], got {self.theta}")

    @classmethod
    def clamped(cls, raw):
        return cls(min(1.0, max(0.0, raw)), raw)

    @property
    def fidelity(self):
        return self.theta**2


def _theta(theta):
    return theta.theta if isinstance(theta, ChannelParams) else float(theta)


def _check_delta(delta):
    if not math.isfinite(delta) or delta <= -1:
        raise ValueError(f"delta must be finite and > -1, got {delta}")


def overlap_theta_closed(delta, wp):
    r"""Closed-form overlap

    .. math::

        \Theta = \sqrt{\frac{2}{1+(1+\delta)^2}}\,\frac{1}{1+\delta}\,
                 \exp\Big(-\frac{\delta^2\Omega_0^2}{4(1+(1+\delta)^2)\sigma^2}\Big)
    """
    _check_delta(delta)
    q = 1.0 + (1.0 + delta) ** 2
    raw = math.sqrt(2.0 / q) / (1.0 + delta) * math.exp(-((delta * wp.ratio) ** 2) / (4.0 * q))
    return ChannelParams.clamped(raw)


def overlap_theta_quadrature(delta, wp):
    r"""Overlap by adaptive quadrature of the transformed spectrum.

    The received spectrum is
    :math:`F_B(\Omega) = (1+\delta)^{-1} F(\Omega / (1+\delta)^2)` and
    :math:`\Theta = \int F_B(\Omega) F(\Omega)\,d\Omega`, integrated over the
    real line truncated to ``QUAD_WINDOW`` effective widths around both peaks.
    Works in the scaled variable ``t = (Omega - Omega_0) / sigma``.

    Raises:
        RuntimeError: if the estimated error exceeds ``QUAD_EPSABS``
    """
    _check_delta(delta)
    lam = (1.0 + delta) ** 2
    shift = delta * (2.0 + delta) * wp.ratio  # (lam - 1) * Omega_0 / sigma
    norm = (2.0 * math.pi) ** -0.5 / (1.0 + delta)

    def integrand(t):
        v = (t - shift) / lam
        return norm * math.exp(-0.25 * (t * t + v * v))

    width = math.sqrt(2.0) * max(1.0, lam)
    lo = min(0.0, shift) - QUAD_WINDOW * width
    hi = max(0.0, shift) + QUAD_WINDOW * width
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        try:
            value, err = quad(
                integrand, lo, hi, points=sorted({0.0, shift}),
                epsabs=QUAD_EPSABS, epsrel=QUAD_EPSABS, limit=200,
            )
        except Warning as exc:
            raise RuntimeError(f"overlap quadrature did not converge: {exc}") from None
    if err > QUAD_EPSABS:
        raise RuntimeError(f"overlap quadrature error estimate {err:.3g} exceeds {QUAD_EPSABS}")
    return ChannelParams.clamped(value)


def overlap_theta_rescaled(delta, wp):
    r"""Analytic value of the integral evaluated by :func:`overlap_theta_quadrature`.

    With :math:`\lambda = (1+\delta)^2`,
    :math:`\Theta = \sqrt{2\lambda/(1+\lambda^2)}\,
    \exp(-(\lambda-1)^2\Omega_0^2 / (4\sigma^2(1+\lambda^2)))`.
    """
    _check_delta(delta)
    lam = (1.0 + delta) ** 2
    lm1 = delta * (2.0 + delta)
    q = 1.0 + lam * lam
    raw = math.sqrt(2.0 * lam / q) * math.exp(-((lm1 * wp.ratio) ** 2) / (4.0 * q))
    return ChannelParams.clamped(raw)


def overlap_theta_perturbative(delta, wp):
    r"""Second-order overlap :math:`1 - \delta^2\Omega_0^2 / (8\sigma^2)`."""
    _check_delta(delta)
    y = (delta * wp.ratio) ** 2
    if y >= 1:
        warnings.warn(
            f"(delta * Omega_0 / sigma)^2 = {y:.3g} >= 1; quadratic overlap is unreliable",
            RuntimeWarning,
            stacklevel=2,
        )
    return ChannelParams.clamped(1.0 - y / 8.0)


def propagate_two_mode(s, theta, dtype=np.float64):
    """Channel-output covariance matrix of ``(b1, b2)`` via the four-mode model.

    Builds the squeezed pair with vacuum orthogonal modes, applies the lossy
    Bogoliubov transformation and traces out the orthogonal modes. Pass
    ``dtype=np.longdouble`` for a better-conditioned result at large ``s``.
    """
    t = _theta(theta)
    sigma0 = gaussian.initial_four_mode_cm(s, dtype=dtype)
    S = gaussian.lossy_bogoliubov(t, dtype=dtype)
    out = gaussian.apply_symplectic(S, sigma0)
    return gaussian.partial_trace(out, [gaussian.B1, gaussian.B2])


def final_cm_closed(s, theta):
    r"""Channel-output covariance matrix in closed form.

    Diagonal blocks :math:`(1 + 2\sinh^2 s) I` and
    :math:`(1 + 2\Theta^2\sinh^2 s) I`, off-diagonal
    :math:`\Theta\sinh(2s)\sigma_z`.
    """
    if not math.isfinite(s) or s < 0:
        raise ValueError(f"squeezing parameter must be finite and >= 0, got {s}")
    t = _theta(theta)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {t}")
    u = math.sinh(s) ** 2
    a, b, c = 1 + 2 * u, 1 + 2 * t * t * u, t * math.sinh(2 * s)
    return np.array(
        [
            [a, 0, c, 0],
            [0, a, 0, -c],
            [c, 0, b, 0],
            [0, -c, 0, b],
        ],
        dtype=np.float64,
    )


@dataclass(frozen=True)
class PipelineResult:
    """Steering for one orbit plus every intermediate quantity."""

    steering: steering.SteeringResult
    delta: float
    theta: float
    theta_raw: float
    fidelity: float
    ratio: float = field(default=float("nan"))

    @property
    def g_ab(self):
        return self.steering.g_ab

    @property
    def g_ba(self):
        return self.steering.g_ba

    @property
    def asymmetry(self):
        return self.steering.asymmetry


def end_to_end(geom, wp, s, delta_mode="exact"):
    """Orbit geometry and wavepacket to steering in both directions.

    Args:
        geom (OrbitGeometry): station and satellite orbit
        wp (WavePacket): photon spectrum
        s (float): squeezing parameter
        delta_mode (str): ``"exact"`` or ``"perturbative"`` frequency shift

    Returns:
        PipelineResult

    Raises:
        StageError: naming the failing stage (``delta``, ``overlap`` or ``steering``)
    """
    try:
        if delta_mode == "exact":
            shift = spacetime.kerr_frequency_ratio(geom)
            delta, ratio = shift.delta, shift.ratio
        elif delta_mode == "perturbative":
            delta = spacetime.delta_perturbative(geom).total
            ratio = (1.0 + delta) ** 2
        else:
            raise ValueError(f"unknown delta mode {delta_mode!r}")
    except ValueError as exc:
        raise StageError("delta", exc) from exc
    try:
        ch = overlap_theta_closed(delta, wp)
    except ValueError as exc:
        raise StageError("overlap", exc) from exc
    try:
        result = steering.steering_asymmetry(s, ch.theta)
    except ValueError as exc:
        raise StageError("steering", exc) from exc
    return PipelineResult(result, delta, ch.theta, ch.theta_raw, ch.fidelity, ratio)

r"""Gaussian EPR steering.

The general measure is evaluated from the symplectic spectrum of a Schur
complement. For the channel-output state

.. math::

    \sigma = \begin{pmatrix} (1+2u) I & \Theta\sinh 2s\,\sigma_z \\
             \Theta\sinh 2s\,\sigma_z & (1+2\Theta^2 u) I \end{pmatrix},
    \qquad u = \sinh^2 s,

that measure reduces to

.. math::

    G^{1\to 2} = \ln\frac{1+2u}{1+2(1-\Theta^2)u}, \qquad
    G^{2\to 1} = \ln\frac{1+2\Theta^2 u}{1+2(1-\Theta^2)u},

each clamped at zero. All values are in nats.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import gaussian

PERTURBATIVE_WARN_FRACTION = 0.1


@dataclass(frozen=True)
class SteeringResult:
    """Steering in both directions for the ``(b1, b2)`` pair.

    ``raw_ab`` and ``raw_ba`` keep the values before clamping at zero.
    """

    g_ab: float
    g_ba: float
    asymmetry: float
    raw_ab: float
    raw_ba: float


def _check_inputs(s, theta):
    if not math.isfinite(s) or s < 0:
        raise ValueError(f"squeezing parameter must be finite and >= 0, got {s}")
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")


def gaussian_steering(sigma, steering_party, check=True):
    r"""Gaussian steering of the complementary modes by ``steering_party``.

    .. math::

        G = \max\{0, -\textstyle\sum_{\bar\nu_j < 1} \ln\bar\nu_j\}

    where :math:`\bar\nu_j` are the symplectic eigenvalues of the Schur
    complement of the steering party's block. A single steered mode is
    handled with :math:`\bar\nu = \sqrt{\det M}` in the input dtype, so
    extended-precision input keeps its accuracy.

    Args:
        sigma (array): bipartite covariance matrix
        steering_party (Sequence[int]): modes performing the measurements
        check (bool): reject non-bona-fide input

    Returns:
        float: steering in nats
    """
    sigma = np.asarray(sigma)
    n = gaussian.n_modes(sigma)
    party = list(steering_party)
    steered = [m for m in range(n) if m not in party]
    if check and not gaussian.is_bona_fide(sigma):
        raise ValueError("covariance matrix violates the bona fide condition")
    m = gaussian.schur_complement(sigma, steered)
    if m.shape == (2, 2):
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if det <= 0:
            raise ValueError("Schur complement is not positive definite")
        nu = [np.sqrt(det)]
    else:
        nu = gaussian.symplectic_eigenvalues(m)
    total = -sum(np.log(v) for v in nu if v < 1)
    return float(max(0.0, total))


def renyi_steering(sigma, steering_party):
    r"""Steering of a single steered mode from Rényi-2 entropies.

    :math:`\max\{0, S(A) - S(\sigma)\}` with :math:`A` the steering party's
    reduced state. Independent of :func:`gaussian_steering` numerically.
    """
    sigma = np.asarray(sigma)
    n = gaussian.n_modes(sigma)
    party = list(steering_party)
    if n - len(party) != 1:
        raise ValueError("the entropy form needs exactly one steered mode")
    a = gaussian.partial_trace(sigma, party)
    return max(0.0, gaussian.renyi2_entropy(a) - gaussian.renyi2_entropy(sigma))


def _log_ratios(s, theta):
    u = math.sinh(s) ** 2
    loss = (1.0 - theta) * (1.0 + theta)
    denom = math.log1p(2.0 * loss * u)
    raw_ab = math.log1p(2.0 * u) - denom
    raw_ba = math.log1p(2.0 * theta * theta * u) - denom
    return raw_ab, raw_ba


def steering_ab_closed(s, theta):
    """Steering ``b1 -> b2`` of the channel-output state."""
    _check_inputs(s, theta)
    return max(0.0, _log_ratios(s, theta)[0])


def steering_ba_closed(s, theta):
    """Steering ``b2 -> b1`` of the channel-output state."""
    _check_inputs(s, theta)
    return max(0.0, _log_ratios(s, theta)[1])


def steering_asymmetry(s, theta):
    """Both steering directions and their absolute difference."""
    _check_inputs(s, theta)
    raw_ab, raw_ba = _log_ratios(s, theta)
    g_ab, g_ba = max(0.0, raw_ab), max(0.0, raw_ba)
    return SteeringResult(g_ab, g_ba, abs(g_ab - g_ba), raw_ab, raw_ba)


def lossless_steering(s):
    r"""Steering of the undisturbed two-mode squeezed state, :math:`\ln\cosh 2s`."""
    return math.log1p(2.0 * math.sinh(s) ** 2)


def loss_parameter(delta, peak_freq, bandwidth):
    r""":math:`\delta^2\Omega_0^2 / (2\sigma^2)`, the prefactor of the loss terms."""
    return 0.5 * (delta * peak_freq / bandwidth) ** 2


def _perturbative(s, delta, peak_freq, bandwidth, extra):
    if not math.isfinite(s) or s < 0:
        raise ValueError(f"squeezing parameter must be finite and >= 0, got {s}")
    g0 = lossless_steering(s)
    u = math.sinh(s) ** 2
    loss = loss_parameter(delta, peak_freq, bandwidth) * (u + extra(s, u))
    if loss > PERTURBATIVE_WARN_FRACTION * g0 and loss > 0:
        warnings.warn(
            f"loss term {loss:.3g} exceeds {PERTURBATIVE_WARN_FRACTION} of the "
            f"lossless steering {g0:.3g}; second-order expansion is unreliable",
            RuntimeWarning,
            stacklevel=3,
        )
    return max(0.0, g0 - loss)


def steering_ab_perturbative(s, delta, peak_freq, bandwidth):
    r"""Second-order expansion of ``b1 -> b2`` steering in the frequency shift.

    :math:`\max\{0, G_0 - \frac{\delta^2\Omega_0^2}{2\sigma^2}\sinh^2 s\}`
    with :math:`G_0 = \ln\cosh 2s`.
    """
    return _perturbative(s, delta, peak_freq, bandwidth, lambda s, u: 0.0)


def steering_ba_perturbative(s, delta, peak_freq, bandwidth):
    r"""Second-order expansion of ``b2 -> b1`` steering.

    :math:`\max\{0, G_0 - \frac{\delta^2\Omega_0^2}{2\sigma^2}
    (\sinh^2 s + \sinh^2 s / \cosh 2s)\}`.
    """
    return _perturbative(s, delta, peak_freq, bandwidth, lambda s, u: u / math.cosh(2 * s))


# Double-angle variants. These use sinh^2(2s) numerators and cosh(4s), which do
# not follow from the channel-output covariance matrix; exposed only so that
# both forms can be tabulated side by side.


def g0_double_angle(s):
    r""":math:`\ln[1 + 2\sinh^2 2s]`."""
    return math.log1p(2.0 * math.sinh(2 * s) ** 2)


def steering_ab_double_angle(s, theta):
    _check_inputs(s, theta)
    u = math.sinh(s) ** 2
    return max(0.0, g0_double_angle(s) - math.log1p(2.0 * (1 - theta * theta) * u))


def steering_ba_double_angle(s, theta):
    _check_inputs(s, theta)
    u = math.sinh(s) ** 2
    num = math.log1p(2.0 * math.sinh(2 * s) ** 2 * theta * theta)
    return max(0.0, num - math.log1p(2.0 * (1 - theta * theta) * u))


def steering_ba_perturbative_double_angle(s, delta, peak_freq, bandwidth):
    u = math.sinh(s) ** 2
    loss = loss_parameter(delta, peak_freq, bandwidth) * (
        u + math.sinh(2 * s) ** 2 / math.cosh(4 * s)
    )
    return max(0.0, g0_double_angle(s) - loss)

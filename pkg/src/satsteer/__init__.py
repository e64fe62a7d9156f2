"""Gaussian EPR steering of photon pairs shared between a ground station and a satellite."""

from .channel import (
    ChannelParams,
    PipelineResult,
    StageError,
    WavePacket,
    end_to_end,
    final_cm_closed,
    overlap_theta_closed,
    overlap_theta_perturbative,
    overlap_theta_quadrature,
    propagate_two_mode,
)
from .spacetime import (
    EarthModel,
    FrequencyShift,
    OrbitGeometry,
    compensation_height,
    delta_exact,
    delta_perturbative,
    kerr_frequency_ratio,
)
from .steering import (
    SteeringResult,
    gaussian_steering,
    steering_ab_closed,
    steering_asymmetry,
    steering_ba_closed,
)

__version__ = "0.1.0"

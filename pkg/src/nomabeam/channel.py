"""Stochastic multipath channel generation and channel-vector assembly.

This is a deliberately simple sparse-multipath generator for rural mmWave
cells: a dominant line-of-sight path with free-space path loss plus log-normal
shadowing, and a handful of weaker scattered paths clustered in angle around
it.  Knobs (path counts per time cluster, NLOS gain offsets, angle spread,
shadowing) are exposed through :class:`ChannelParams`.

Geometry: the base station sits at the origin with its array at a fixed
height above the user plane; users are dropped uniformly over the half-disc
in front of the array (azimuth in [0, pi], the array's field of view), so
azimuth maps one-to-one onto the horizontal direction cosine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .array_geometry import ArrayConfig, Direction, steering_vector

__all__ = [
    "BS_HEIGHT_M",
    "SPEED_OF_LIGHT",
    "InvalidParams",
    "DimensionMismatch",
    "PathComponent",
    "UserChannel",
    "ChannelParams",
    "generate_user_channel",
    "channel_vector",
    "effective_gain",
]

SPEED_OF_LIGHT = 299_792_458.0

# Antenna height above the user plane; fixes the elevation geometry of a drop
# and keeps the free-space loss bounded for users close to the mast.
BS_HEIGHT_M = 10.0


class InvalidParams(ValueError):
    """Channel parameters are out of range (empty interval, bad radius, ...)."""


class DimensionMismatch(ValueError):
    """Vectors fed to an inner product have different lengths."""


@dataclass(frozen=True)
class PathComponent:
    """One propagation path: complex amplitude and departure direction."""

    gain: complex
    direction: Direction

    def __post_init__(self) -> None:
        if not abs(self.gain) > 0:
            raise InvalidParams("path gain must be nonzero")


@dataclass(frozen=True)
class UserChannel:
    """Ordered multipath description of one user's downlink channel.

    ``paths[0]`` is the line-of-sight / strongest path; ``range_m`` is the 3D
    base-station-to-user distance.  The user position is the pair
    (``range_m``, ``paths[0].direction``).
    """

    paths: tuple[PathComponent, ...]
    range_m: float

    def __post_init__(self) -> None:
        if not self.paths:
            raise InvalidParams("a user channel needs at least one path")
        strongest = abs(self.paths[0].gain)
        if any(abs(p.gain) > strongest for p in self.paths[1:]):
            raise InvalidParams("paths must be ordered with the strongest first")

    @property
    def los(self) -> PathComponent:
        return self.paths[0]

    @property
    def num_paths(self) -> int:
        return len(self.paths)


@dataclass(frozen=True)
class ChannelParams:
    """Knobs of the multipath generator.

    Integer intervals are inclusive; degenerate intervals (lo == hi) pin the
    draw.  Rural defaults: 1-2 time clusters of 1-2 paths each, scattered
    paths 5-15 dB below line of sight within a 15 degree spread.
    """

    carrier_hz: float = 28e9
    num_time_clusters_range: tuple[int, int] = (1, 2)
    paths_per_cluster_range: tuple[int, int] = (1, 2)
    nlos_gain_offset_db: tuple[float, float] = (5.0, 15.0)
    angle_spread_deg: float = 15.0
    shadowing_sigma_db: float = 4.0

    def __post_init__(self) -> None:
        if not self.carrier_hz > 0:
            raise InvalidParams(f"carrier must be positive, got {self.carrier_hz}")
        for name in ("num_time_clusters_range", "paths_per_cluster_range", "nlos_gain_offset_db"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise InvalidParams(f"{name} is empty: ({lo}, {hi})")
        if self.num_time_clusters_range[0] < 1 or self.paths_per_cluster_range[0] < 1:
            raise InvalidParams("path count intervals must start at 1 or more")
        if self.angle_spread_deg < 0 or self.shadowing_sigma_db < 0:
            raise InvalidParams("angle spread and shadowing sigma must be nonnegative")

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_hz


def generate_user_channel(
    rng: np.random.Generator,
    cfg: ArrayConfig,
    params: ChannelParams,
    cell_radius_m: float,
) -> UserChannel:
    """Drop one user uniformly in the cell and draw its multipath channel.

    The line-of-sight amplitude is free-space path loss at the carrier over
    the 3D distance, shadowed log-normally; scattered paths are drawn per
    ``params`` below it and within ``angle_spread_deg`` of the LOS direction.
    Paths are returned strongest-first.  Identical (rng state, params) yield
    an identical channel.
    """
    if not cell_radius_m > 0:
        raise InvalidParams(f"cell radius must be positive, got {cell_radius_m}")

    ground_r = cell_radius_m * math.sqrt(rng.uniform())
    theta = rng.uniform(0.0, math.pi)
    slant = math.hypot(ground_r, BS_HEIGHT_M)
    phi = -math.asin(BS_HEIGHT_M / slant)
    los_dir = Direction(theta, phi)

    fspl_amp = params.wavelength_m / (4.0 * math.pi * slant)
    shadow_db = rng.normal(0.0, params.shadowing_sigma_db)
    los_amp = fspl_amp * 10.0 ** (shadow_db / 20.0)
    los_phase = rng.uniform(0.0, 2.0 * math.pi)
    paths = [PathComponent(los_amp * complex(math.cos(los_phase), math.sin(los_phase)), los_dir)]

    lo_tc, hi_tc = params.num_time_clusters_range
    lo_p, hi_p = params.paths_per_cluster_range
    total_paths = sum(int(rng.integers(lo_p, hi_p + 1)) for _ in range(int(rng.integers(lo_tc, hi_tc + 1))))
    spread = math.radians(params.angle_spread_deg)
    for _ in range(total_paths - 1):
        offset_db = rng.uniform(*params.nlos_gain_offset_db)
        amp = los_amp * 10.0 ** (-offset_db / 20.0)
        phase = rng.uniform(0.0, 2.0 * math.pi)
        d_theta = rng.uniform(-spread, spread)
        d_phi = rng.uniform(-spread, spread)
        nlos_dir = Direction(
            (theta + d_theta) % (2.0 * math.pi),
            min(max(phi + d_phi, -math.pi / 2.0), math.pi / 2.0),
        )
        paths.append(PathComponent(amp * complex(math.cos(phase), math.sin(phase)), nlos_dir))

    paths.sort(key=lambda p: -abs(p.gain))
    return UserChannel(paths=tuple(paths), range_m=slant)


def channel_vector(uc: UserChannel, cfg: ArrayConfig) -> np.ndarray:
    """Multipath channel row vector: sum of gain-weighted conjugate steering vectors."""
    h = np.zeros(cfg.num_elements, dtype=complex)
    for path in uc.paths:
        h += path.gain * np.conj(steering_vector(cfg, path.direction).entries)
    return h


def effective_gain(h: np.ndarray, w: np.ndarray) -> float:
    """Received beam power |h . w|^2 of channel row ``h`` through weights ``w``."""
    if len(h) != len(w):
        raise DimensionMismatch(f"channel has {len(h)} entries, weights {len(w)}")
    return float(abs(np.dot(h, w)) ** 2)

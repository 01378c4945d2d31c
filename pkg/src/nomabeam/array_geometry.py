"""Uniform planar array geometry: steering vectors, array pattern, beamwidths.

The array is a rectangular grid of ``m_h x m_v`` elements with spacing ``d``
expressed in wavelengths.  Directions are (azimuth, elevation) pairs mapped to
the direction cosines

    u_az = cos(theta) * cos(phi),    u_el = sin(phi),

and every pattern quantity in this module is a function of those cosines only.
The normalized pattern of a steered beam evaluated at another direction is the
interference metric ``beta``: the magnitude of the conjugate inner product of
the two steering vectors divided by the element count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ArrayConfig",
    "Direction",
    "SteeringVector",
    "NoCrossing",
    "steering_vector",
    "direction_cosines",
    "beta_metric",
    "beta_matrix",
    "array_factor",
    "beamwidth",
]

# Below this, |sin(pi * d/lambda * delta)| is treated as a removable
# singularity of the closed-form pattern and the per-axis factor is its
# limit, 1.
_SINGULAR_EPS = 1e-12


class NoCrossing(Exception):
    """The array pattern never drops to the requested level within +/- pi/2."""


@dataclass(frozen=True)
class ArrayConfig:
    """Uniform planar array layout.

    m_h, m_v: horizontal / vertical element counts (>= 1 each).
    d_over_lambda: element spacing as a fraction of the carrier wavelength.
    """

    m_h: int
    m_v: int
    d_over_lambda: float = 0.5

    def __post_init__(self) -> None:
        if self.m_h < 1 or self.m_v < 1:
            raise ValueError(f"element counts must be >= 1, got {self.m_h}x{self.m_v}")
        if not self.d_over_lambda > 0:
            raise ValueError(f"element spacing must be positive, got {self.d_over_lambda}")

    @property
    def num_elements(self) -> int:
        return self.m_h * self.m_v


@dataclass(frozen=True)
class Direction:
    """Departure direction in radians.

    Canonical ranges: azimuth ``theta`` in [0, 2*pi), elevation ``phi`` in
    [-pi/2, pi/2].  Values outside these ranges are accepted (the trigonometry
    is total) but the simulator only produces canonical ones.
    """

    theta: float
    phi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError(f"direction angles must be finite, got ({self.theta}, {self.phi})")


@dataclass(frozen=True)
class SteeringVector:
    """Per-element unit-modulus phase profile pointing at ``direction``."""

    entries: np.ndarray
    direction: Direction


def direction_cosines(direction: Direction) -> tuple[float, float]:
    """(u_az, u_el) for a direction: (cos(theta)cos(phi), sin(phi))."""
    return (
        math.cos(direction.theta) * math.cos(direction.phi),
        math.sin(direction.phi),
    )


def steering_vector(cfg: ArrayConfig, direction: Direction) -> SteeringVector:
    """Steering vector of the array toward ``direction``.

    Entry for horizontal index i and vertical index j (flattened as
    ``i * m_v + j``, the Kronecker product of the azimuth and elevation
    progressions) is ``exp(j * 2*pi * d/lambda * (i*u_az + j*u_el))``.
    """
    u_az, u_el = direction_cosines(direction)
    step = 2.0 * math.pi * cfg.d_over_lambda
    az_phase = step * u_az * np.arange(cfg.m_h)
    el_phase = step * u_el * np.arange(cfg.m_v)
    phases = np.add.outer(az_phase, el_phase).ravel()
    return SteeringVector(entries=np.exp(1j * phases), direction=direction)


def _axis_factor(m: int, x: float) -> float:
    """One axis of the normalized pattern: sin(m*x) / (m*sin(x)), limit 1 at sin(x)=0."""
    s = math.sin(x)
    if abs(s) < _SINGULAR_EPS:
        return 1.0
    return math.sin(m * x) / (m * s)


def beta_metric(cfg: ArrayConfig, dir_k: Direction, dir_u: Direction) -> float:
    """Normalized spatial interference between two directions, in [0, 1].

    Equals (1/M) |a(dir_k)^H a(dir_u)| evaluated through the closed-form
    product of per-axis sin ratios; symmetric in its direction arguments.
    """
    uk_az, uk_el = direction_cosines(dir_k)
    uu_az, uu_el = direction_cosines(dir_u)
    c = math.pi * cfg.d_over_lambda
    f_az = _axis_factor(cfg.m_h, c * (uk_az - uu_az))
    f_el = _axis_factor(cfg.m_v, c * (uk_el - uu_el))
    return abs(f_az * f_el)


def beta_matrix(dirs: list[Direction], cfg: ArrayConfig) -> np.ndarray:
    """Symmetric K x K matrix of pairwise ``beta_metric`` values (diagonal 1)."""
    u_az = np.array([math.cos(d.theta) * math.cos(d.phi) for d in dirs])
    u_el = np.array([math.sin(d.phi) for d in dirs])
    c = math.pi * cfg.d_over_lambda
    x_az = c * (u_az[:, None] - u_az[None, :])
    x_el = c * (u_el[:, None] - u_el[None, :])

    def factors(m: int, x: np.ndarray) -> np.ndarray:
        s = np.sin(x)
        singular = np.abs(s) < _SINGULAR_EPS
        safe = np.where(singular, 1.0, s)
        return np.where(singular, 1.0, np.sin(m * x) / (m * safe))

    return np.abs(factors(cfg.m_h, x_az) * factors(cfg.m_v, x_el))


def array_factor(cfg: ArrayConfig, beam_dir: Direction, probe_dir: Direction) -> float:
    """Normalized pattern of a beam steered at ``beam_dir``, probed at ``probe_dir``."""
    return beta_metric(cfg, probe_dir, beam_dir)


def _sweep_factor(cfg: ArrayConfig, beam_dir: Direction, axis: str, offsets: np.ndarray) -> np.ndarray:
    """array_factor along one angular axis, vectorized over signed offsets."""
    if axis == "az":
        thetas = beam_dir.theta + offsets
        phis = np.full_like(offsets, beam_dir.phi)
    else:
        thetas = np.full_like(offsets, beam_dir.theta)
        phis = beam_dir.phi + offsets
    ub_az = math.cos(beam_dir.theta) * math.cos(beam_dir.phi)
    ub_el = math.sin(beam_dir.phi)
    u_az = np.cos(thetas) * np.cos(phis)
    u_el = np.sin(phis)
    c = math.pi * cfg.d_over_lambda

    def factors(m: int, x: np.ndarray) -> np.ndarray:
        s = np.sin(x)
        singular = np.abs(s) < _SINGULAR_EPS
        safe = np.where(singular, 1.0, s)
        return np.where(singular, 1.0, np.sin(m * x) / (m * safe))

    return np.abs(factors(cfg.m_h, c * (u_az - ub_az)) * factors(cfg.m_v, c * (u_el - ub_el)))


def _first_crossing(cfg: ArrayConfig, beam_dir: Direction, axis: str, level: float, tol: float) -> float:
    """Smallest |offset| along ``axis`` where the pattern first reaches ``level``.

    Both signed directions are scanned (the pattern is not symmetric in angle
    away from broadside); the nearer crossing wins.  Elevation probes are kept
    inside [-pi/2, pi/2].
    """
    m_axis = max(cfg.m_h, cfg.m_v)
    step = min(5e-3, 1.0 / (m_axis * cfg.d_over_lambda) / 16.0)
    best = math.inf
    for sign in (1.0, -1.0):
        max_off = math.pi / 2.0
        if axis == "el":
            # keep the probe elevation physical
            if sign > 0:
                max_off = min(max_off, math.pi / 2.0 - beam_dir.phi)
            else:
                max_off = min(max_off, beam_dir.phi + math.pi / 2.0)
        if max_off <= 0:
            continue
        grid = np.arange(step, max_off + step, step)
        grid = grid[grid <= max_off]
        if grid.size == 0:
            continue
        values = _sweep_factor(cfg, beam_dir, axis, sign * grid)
        below = np.nonzero(values <= level)[0]
        if below.size == 0:
            continue
        hi = grid[below[0]]
        lo = grid[below[0] - 1] if below[0] > 0 else 0.0
        # bisect on f(offset) = pattern - level, f(lo) > 0 >= f(hi)
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            val = _sweep_factor(cfg, beam_dir, axis, np.array([sign * mid]))[0]
            if val <= level:
                hi = mid
            else:
                lo = mid
        best = min(best, hi)
    if not math.isfinite(best):
        raise NoCrossing(
            f"pattern never drops to level {level} within +/- pi/2 along the {axis} axis"
        )
    return best


def beamwidth(
    cfg: ArrayConfig,
    beam_dir: Direction,
    level: float,
    tol: float = 1e-9,
) -> tuple[float, float]:
    """Angular offsets (azimuth, elevation) at which the pattern falls to ``level``.

    For each axis, with the other axis held at the beam direction, returns the
    smallest offset where ``array_factor`` first crosses ``level``, located by
    bisection to ``tol`` radians.  ``level = sqrt(1/2)`` reproduces the
    half-power (3 dB) beamwidth definition.

    Raises NoCrossing if either axis never reaches ``level`` within +/- pi/2
    (for example a single-element, isotropic pattern).
    """
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be in (0, 1), got {level}")
    omega_az = _first_crossing(cfg, beam_dir, "az", level, tol)
    omega_el = _first_crossing(cfg, beam_dir, "el", level, tol)
    return omega_az, omega_el

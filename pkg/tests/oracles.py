"""Independent reference implementations used to cross-check the library.

Everything here recomputes quantities from first principles (direct phasor
sums, dense grids, finite differences) without going through the code paths
under test.
"""

import math

import numpy as np

from nomabeam.array_geometry import ArrayConfig, Direction


def beta_phasor_sum(cfg: ArrayConfig, dir_k: Direction, dir_u: Direction) -> float:
    """(1/M) |a_k^H a_u| by summing the M element phasors directly."""
    c = 2.0 * math.pi * cfg.d_over_lambda
    uk_az = math.cos(dir_k.theta) * math.cos(dir_k.phi)
    uk_el = math.sin(dir_k.phi)
    uu_az = math.cos(dir_u.theta) * math.cos(dir_u.phi)
    uu_el = math.sin(dir_u.phi)
    i = np.arange(cfg.m_h)[:, None]
    j = np.arange(cfg.m_v)[None, :]
    phase = c * (i * (uu_az - uk_az) + j * (uu_el - uk_el))
    return float(np.abs(np.exp(1j * phase).sum())) / (cfg.m_h * cfg.m_v)


def random_direction(rng: np.random.Generator) -> Direction:
    return Direction(rng.uniform(0.0, 2.0 * math.pi), rng.uniform(-math.pi / 2, math.pi / 2))


def pair_rate(zeta1: float, zeta2: float, gamma1: float) -> float:
    """Unit-bandwidth throughput of a shared beam at split gamma1."""
    strong = math.log2(1.0 + zeta1 * gamma1)
    weak = math.log2(1.0 + zeta2 * (1.0 - gamma1) / (1.0 + zeta2 * gamma1))
    return strong + weak


def pair_rate_grid_max(zeta1: float, zeta2: float, gamma_max: float, step: float = 1e-4) -> float:
    """Dense-grid maximum of the shared-beam throughput over [0, gamma_max]."""
    grid = np.arange(0.0, gamma_max + step, step)
    grid = grid[grid <= gamma_max]
    if grid.size == 0 or grid[-1] < gamma_max:
        grid = np.append(grid, gamma_max)
    strong = np.log2(1.0 + zeta1 * grid)
    weak = np.log2(1.0 + zeta2 * (1.0 - grid) / (1.0 + zeta2 * grid))
    return float(np.max(strong + weak))

"""Scenario configuration, seeded Monte Carlo sweeps, and CSV emission.

A scenario file is flat ``key = value`` text (``#`` comments, one key per
line, unknown keys rejected).  A sweep runs every (scheme, user count, trial)
combination; within a trial index all schemes see the identical user drop and
channels, because the per-trial random stream is derived only from
(master_seed, K, trial) through numpy's SeedSequence spawn-key mixing.
Results are sorted by (scheme, K, trial) before emission so the CSV bytes do
not depend on execution order.
"""

from __future__ import annotations

import logging
import math
import statistics
from dataclasses import dataclass, fields

import numpy as np

from .array_geometry import ArrayConfig, Direction
from .baselines import SchemeId, conjugate_bf_rates, energy_efficiency, oma_dbs_rates
from .beamforming import BeamformingPlan, build_plan
from .channel import ChannelParams, UserChannel, channel_vector, effective_gain, generate_user_channel
from .clustering import Cluster, ClusterSet, beta_uc, order_cluster_users
from .link_metrics import LinkState, compute_link_state, rate, sinr_noma_strong, sinr_noma_weak
from .power_allocation import (
    Branch,
    InfeasibleSic,
    PaInput,
    PaResult,
    opa,
    opa_partial_csi,
)

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "ScenarioResult",
    "AggregateRow",
    "CSV_HEADER",
    "parse_config_text",
    "load_scenario",
    "run_trial",
    "run_sweep",
    "write_csv",
    "format_aggregates",
]

log = logging.getLogger(__name__)

CSV_HEADER = "scheme,K,trial,sum_rate_bps,spectral_eff,energy_eff,noma_clusters,deactivated_users"

# Consumption model constants for the energy-efficiency metric.
PA_INEFFICIENCY_RHO = 10.0
PER_ANTENNA_POWER_W = 1.0
BASE_STATION_POWER_W = 0.2


class ConfigError(ValueError):
    """A scenario file or its values are invalid."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one simulation campaign (defaults: rural 28 GHz cell)."""

    m_h: int = 32
    m_v: int = 2
    d_over_lambda: float = 0.5
    carrier_hz: float = 28e9
    bandwidth_hz: float = 20e6
    cell_radius_m: float = 100.0
    total_power_dbm: float = 30.0
    noise_power_dbm: float = -100.9178
    p_min: float = 1e-3
    beta0: float = 0.5
    epsilon: float = 0.05
    num_time_clusters: tuple[int, int] = (1, 2)
    paths_per_cluster: tuple[int, int] = (1, 2)
    nlos_gain_offset_db: tuple[float, float] = (5.0, 15.0)
    angle_spread_deg: float = 15.0
    shadowing_sigma_db: float = 4.0
    user_counts: tuple[int, ...] = (5, 15, 25, 35, 45, 55)
    schemes: tuple[SchemeId, ...] = (
        SchemeId.DBS,
        SchemeId.NOMA_DBS_FCSI,
        SchemeId.NOMA_DBS_PCSI,
        SchemeId.OMA_DBS,
        SchemeId.CONJUGATE_BF,
    )
    trials: int = 500
    master_seed: int = 1
    inter_cluster_rule: str = "proportional"
    csi_mode: str = "full"

    def __post_init__(self) -> None:
        array = self.array_config  # validates antenna counts / spacing
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not self.user_counts:
            raise ConfigError("user_counts must not be empty")
        for k in self.user_counts:
            if k < 1 or k >= array.num_elements:
                raise ConfigError(
                    f"user counts must satisfy 1 <= K < M={array.num_elements}, got {k}"
                )
        if not 0.0 < self.beta0 < 1.0:
            raise ConfigError(f"beta0 must be in (0, 1), got {self.beta0}")
        if not 0.0 <= self.epsilon < 1.0:
            raise ConfigError(f"epsilon must be in [0, 1), got {self.epsilon}")
        if self.p_min < 0:
            raise ConfigError(f"p_min must be nonnegative, got {self.p_min}")
        if self.inter_cluster_rule not in ("proportional", "uniform"):
            raise ConfigError(f"unknown inter_cluster_rule: {self.inter_cluster_rule!r}")
        if self.csi_mode not in ("full", "partial"):
            raise ConfigError(f"unknown csi_mode: {self.csi_mode!r}")
        if not self.schemes:
            raise ConfigError("schemes must not be empty")

    @property
    def array_config(self) -> ArrayConfig:
        try:
            return ArrayConfig(self.m_h, self.m_v, self.d_over_lambda)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def channel_params(self) -> ChannelParams:
        return ChannelParams(
            carrier_hz=self.carrier_hz,
            num_time_clusters_range=self.num_time_clusters,
            paths_per_cluster_range=self.paths_per_cluster,
            nlos_gain_offset_db=self.nlos_gain_offset_db,
            angle_spread_deg=self.angle_spread_deg,
            shadowing_sigma_db=self.shadowing_sigma_db,
        )

    @property
    def total_power_w(self) -> float:
        return 10.0 ** (self.total_power_dbm / 10.0) / 1000.0

    @property
    def noise_w(self) -> float:
        return 10.0 ** (self.noise_power_dbm / 10.0) / 1000.0


@dataclass(frozen=True)
class ScenarioResult:
    """One (scheme, K, trial) outcome."""

    scheme: SchemeId
    K: int
    trial: int
    sum_rate_bps: float
    spectral_eff_bps_per_hz: float
    energy_eff_bps_per_j: float
    noma_cluster_count: int
    deactivated_user_count: int


@dataclass(frozen=True)
class AggregateRow:
    """Mean and standard error of the spectral efficiency per (scheme, K)."""

    scheme: SchemeId
    K: int
    trials: int
    mean_spectral_eff: float
    stderr_spectral_eff: float
    mean_energy_eff: float


# ---------------------------------------------------------------------------
# Configuration file handling


def _parse_int_interval(raw: str) -> tuple[int, int]:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) == 1:
        return (int(parts[0]), int(parts[0]))
    if len(parts) == 2:
        return (int(parts[0]), int(parts[1]))
    raise ConfigError(f"expected 'lo,hi' or a single value, got {raw!r}")


def _parse_float_interval(raw: str) -> tuple[float, float]:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) == 1:
        return (float(parts[0]), float(parts[0]))
    if len(parts) == 2:
        return (float(parts[0]), float(parts[1]))
    raise ConfigError(f"expected 'lo,hi' or a single value, got {raw!r}")


def _parse_schemes(raw: str) -> tuple[SchemeId, ...]:
    tags = [p.strip() for p in raw.split(",") if p.strip()]
    schemes = []
    for tag in tags:
        try:
            schemes.append(SchemeId(tag))
        except ValueError as exc:
            known = ", ".join(s.value for s in SchemeId)
            raise ConfigError(f"unknown scheme {tag!r} (known: {known}, noma_dbs)") from exc
    return tuple(schemes)


_PARSERS = {
    "m_h": int,
    "m_v": int,
    "d_over_lambda": float,
    "carrier_hz": float,
    "bandwidth_hz": float,
    "cell_radius_m": float,
    "total_power_dbm": float,
    "noise_power_dbm": float,
    "p_min": float,
    "beta0": float,
    "epsilon": float,
    "num_time_clusters": _parse_int_interval,
    "paths_per_cluster": _parse_int_interval,
    "nlos_gain_offset_db": _parse_float_interval,
    "angle_spread_deg": float,
    "shadowing_sigma_db": float,
    "user_counts": lambda raw: tuple(int(p.strip()) for p in raw.split(",") if p.strip()),
    "schemes": _parse_schemes,
    "trials": int,
    "master_seed": int,
    "inter_cluster_rule": str.strip,
    "csi_mode": str.strip,
}


def parse_config_text(text: str) -> dict:
    """Parse flat ``key = value`` scenario text into constructor keywords.

    Lines are independent; ``#`` starts a comment; blank lines are ignored.
    Unknown keys and malformed values raise ConfigError.
    """
    values: dict = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw_line!r}")
        key, _, raw_value = line.partition("=")
        key = key.strip()
        raw_value = raw_value.strip()
        if key == "schemes":
            # 'noma_dbs' is resolved against csi_mode after all keys are read
            values[key] = raw_value
            continue
        if key not in _PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = _PARSERS[key](raw_value)
        except (ValueError, ConfigError) as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from exc
    if "schemes" in values:
        alias = "noma_dbs_fcsi" if values.get("csi_mode", "full") == "full" else "noma_dbs_pcsi"
        tags = [t.strip() for t in values["schemes"].split(",") if t.strip()]
        values["schemes"] = _parse_schemes(",".join(alias if t == "noma_dbs" else t for t in tags))
    return values


def load_scenario(path: str, **overrides) -> ScenarioConfig:
    """Read a scenario file and apply keyword overrides (e.g. trials, master_seed)."""
    with open(path, "r", encoding="utf-8") as fh:
        values = parse_config_text(fh.read())
    for key, value in overrides.items():
        if value is None:
            continue
        if key not in {f.name for f in fields(ScenarioConfig)}:
            raise ConfigError(f"unknown override {key!r}")
        values[key] = value
    return ScenarioConfig(**values)


# ---------------------------------------------------------------------------
# Trial pipeline


def _trial_rng(config: ScenarioConfig, k_users: int, trial_index: int) -> np.random.Generator:
    """Per-trial stream: master seed mixed with (K, trial) via SeedSequence spawn keys."""
    seq = np.random.SeedSequence(entropy=config.master_seed, spawn_key=(k_users, trial_index))
    return np.random.default_rng(seq)


def _drop_users(
    config: ScenarioConfig, k_users: int, trial_index: int
) -> tuple[list[UserChannel], np.ndarray, list[Direction]]:
    rng = _trial_rng(config, k_users, trial_index)
    array = config.array_config
    params = config.channel_params
    users = [generate_user_channel(rng, array, params, config.cell_radius_m) for _ in range(k_users)]
    h_rows = np.stack([channel_vector(u, array) for u in users])
    los_dirs = [u.los.direction for u in users]
    return users, h_rows, los_dirs


def _ordered_clusters(
    cs: ClusterSet, plan: BeamformingPlan, h_rows: np.ndarray
) -> list[Cluster]:
    """Apply the received-power strong/weak ordering inside every cluster."""
    ordered = []
    for c_idx, cluster in enumerate(cs.clusters):
        gains = [effective_gain(h_rows[m], plan.weights[c_idx]) for m in cluster.members]
        ordered.append(order_cluster_users(cluster, gains))
    return ordered


def _cluster_link_states(
    clusters: list[Cluster],
    plan: BeamformingPlan,
    h_rows: np.ndarray,
    noise_w: float,
) -> list[list[LinkState]]:
    return [
        [compute_link_state(h_rows[m], plan, c_idx, noise_w) for m in cluster.members]
        for c_idx, cluster in enumerate(clusters)
    ]


def _noma_gamma(
    config: ScenarioConfig,
    scheme: SchemeId,
    cluster: Cluster,
    c_idx: int,
    states: list[LinkState],
    plan: BeamformingPlan,
    los_dirs: list[Direction],
) -> PaResult:
    """Intra-cluster split for one shared beam, falling back on infeasibility."""
    try:
        if scheme is SchemeId.NOMA_DBS_PCSI:
            return opa_partial_csi(
                los_dirs[cluster.members[0]],
                los_dirs[cluster.members[1]],
                plan,
                c_idx,
                config.array_config,
                config.p_min,
                config.epsilon,
                noise_w=config.noise_w,
            )
        return opa(
            PaInput(
                zeta1=states[0].zeta,
                zeta2=states[1].zeta,
                p_min=config.p_min,
                epsilon=config.epsilon,
            )
        )
    except InfeasibleSic:
        # Empty feasible interval: serve only the weak user.
        log.debug(
            "cluster %d: infeasible cancellation constraint, deactivating the strong user",
            c_idx,
        )
        return PaResult(gamma1=0.0, branch=Branch.DEACTIVATE)


def run_trial(
    config: ScenarioConfig,
    k_users: int,
    trial_index: int,
    scheme: SchemeId,
) -> ScenarioResult:
    """One full pipeline pass: drop -> channels -> clusters -> powers -> rates.

    Deterministic given (master_seed, K, trial, scheme); the channel draw
    depends only on (master_seed, K, trial) so schemes are compared on
    identical drops.
    """
    _, h_rows, los_dirs = _drop_users(config, k_users, trial_index)
    array = config.array_config
    bandwidth = config.bandwidth_hz
    noma_clusters = 0
    deactivated = 0

    if scheme is SchemeId.CONJUGATE_BF:
        rates = conjugate_bf_rates(list(h_rows), config.total_power_w, config.noise_w, bandwidth)
    elif scheme is SchemeId.DBS:
        singles = ClusterSet(
            clusters=tuple(Cluster(members=(k,), beam_dir=los_dirs[k]) for k in range(k_users)),
            noma_count=0,
        )
        plan = build_plan(singles, array, config.total_power_w, k_users, config.inter_cluster_rule)
        states = _cluster_link_states(list(singles.clusters), plan, h_rows, config.noise_w)
        rates = [rate(per_cluster[0].zeta, bandwidth) for per_cluster in states]
    else:
        cs = beta_uc(los_dirs, array, config.beta0)
        plan = build_plan(cs, array, config.total_power_w, k_users, config.inter_cluster_rule)
        clusters = _ordered_clusters(cs, plan, h_rows)
        states = _cluster_link_states(clusters, plan, h_rows, config.noise_w)
        noma_clusters = cs.noma_count
        rates = []
        for c_idx, cluster in enumerate(clusters):
            per_cluster = states[c_idx]
            if scheme is SchemeId.OMA_DBS:
                rates.extend(oma_dbs_rates(cluster, per_cluster, bandwidth))
            elif not cluster.is_noma:
                rates.append(rate(per_cluster[0].zeta, bandwidth))
            else:
                result = _noma_gamma(config, scheme, cluster, c_idx, per_cluster, plan, los_dirs)
                if result.gamma1 == 0.0:
                    deactivated += 1
                rates.append(rate(sinr_noma_strong(per_cluster[0], result.gamma1), bandwidth))
                rates.append(rate(sinr_noma_weak(per_cluster[1], result.gamma1), bandwidth))

    sum_rate = float(sum(rates))
    return ScenarioResult(
        scheme=scheme,
        K=k_users,
        trial=trial_index,
        sum_rate_bps=sum_rate,
        spectral_eff_bps_per_hz=sum_rate / bandwidth,
        energy_eff_bps_per_j=energy_efficiency(
            sum_rate,
            config.total_power_w,
            array.num_elements,
            PA_INEFFICIENCY_RHO,
            PER_ANTENNA_POWER_W,
            BASE_STATION_POWER_W,
        ),
        noma_cluster_count=noma_clusters,
        deactivated_user_count=deactivated,
    )


def run_sweep(config: ScenarioConfig) -> tuple[list[ScenarioResult], list[AggregateRow]]:
    """Every (scheme, K, trial) combination, plus per-(scheme, K) aggregates.

    Results come back sorted by (scheme tag, K, trial), so any parallel or
    reordered execution of the independent trials yields identical output.
    """
    results = [
        run_trial(config, k_users, trial, scheme)
        for scheme in config.schemes
        for k_users in config.user_counts
        for trial in range(config.trials)
    ]
    results.sort(key=lambda r: (r.scheme.value, r.K, r.trial))
    aggregates = []
    for scheme in sorted(config.schemes, key=lambda s: s.value):
        for k_users in sorted(config.user_counts):
            ses = [r.spectral_eff_bps_per_hz for r in results if r.scheme is scheme and r.K == k_users]
            ees = [r.energy_eff_bps_per_j for r in results if r.scheme is scheme and r.K == k_users]
            stderr = statistics.stdev(ses) / math.sqrt(len(ses)) if len(ses) > 1 else 0.0
            aggregates.append(
                AggregateRow(
                    scheme=scheme,
                    K=k_users,
                    trials=len(ses),
                    mean_spectral_eff=statistics.fmean(ses),
                    stderr_spectral_eff=stderr,
                    mean_energy_eff=statistics.fmean(ees),
                )
            )
    return results, aggregates


def _fmt(value: float) -> str:
    return format(value, ".9g")


def write_csv(results: list[ScenarioResult], path: str) -> None:
    """Emit one row per result with floats at 9 significant digits."""
    lines = [CSV_HEADER]
    for r in results:
        lines.append(
            ",".join(
                (
                    r.scheme.value,
                    str(r.K),
                    str(r.trial),
                    _fmt(r.sum_rate_bps),
                    _fmt(r.spectral_eff_bps_per_hz),
                    _fmt(r.energy_eff_bps_per_j),
                    str(r.noma_cluster_count),
                    str(r.deactivated_user_count),
                )
            )
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def format_aggregates(aggregates: list[AggregateRow]) -> str:
    """Human-readable mean +/- standard-error table."""
    lines = [f"{'scheme':<16} {'K':>4} {'trials':>7} {'SE mean [bps/Hz]':>18} {'SE stderr':>12} {'EE mean [bps/J]':>16}"]
    for row in aggregates:
        lines.append(
            f"{row.scheme.value:<16} {row.K:>4} {row.trials:>7} "
            f"{row.mean_spectral_eff:>18.4f} {row.stderr_spectral_eff:>12.4f} "
            f"{row.mean_energy_eff:>16.4g}"
        )
    return "\n".join(lines)

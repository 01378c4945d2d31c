"""nomabeam: link-level simulator for a beam-steered mmWave multi-user downlink.

A base station with a uniform planar array steers one beam per cluster of
users; strongly interfering users are paired two-by-two onto shared beams and
separated in the power domain, with a closed-form optimal intra-cluster power
split under full or direction-only channel feedback.  Seeded Monte Carlo
sweeps compare the scheme against one-beam-per-user steering, orthogonal beam
sharing, and conjugate beamforming.
"""

from .array_geometry import (
    ArrayConfig,
    Direction,
    NoCrossing,
    SteeringVector,
    array_factor,
    beamwidth,
    beta_matrix,
    beta_metric,
    steering_vector,
)
from .baselines import SchemeId, conjugate_bf_rates, energy_efficiency, oma_dbs_rates
from .beamforming import BeamformingPlan, build_plan, emitted_power_check
from .channel import (
    ChannelParams,
    DimensionMismatch,
    InvalidParams,
    PathComponent,
    UserChannel,
    channel_vector,
    effective_gain,
    generate_user_channel,
)
from .clustering import Cluster, ClusterSet, beta_uc, cluster_beam_dir, order_cluster_users
from .link_metrics import (
    LinkState,
    compute_link_state,
    rate,
    sic_feasible,
    sinr_dbs,
    sinr_dbs_monopath_closed,
    sinr_dbs_multipath_closed,
    sinr_noma_strong,
    sinr_noma_weak,
)
from .power_allocation import (
    Branch,
    DegenerateInterference,
    InfeasibleSic,
    PaInput,
    PaResult,
    gamma_fair,
    gamma_hat,
    opa,
    opa_partial_csi,
    partial_csi_zeta,
    rc_derivative,
)
from .sim_harness import (
    ConfigError,
    ScenarioConfig,
    ScenarioResult,
    load_scenario,
    parse_config_text,
    run_sweep,
    run_trial,
    write_csv,
)

__version__ = "0.1.0"

"""Resource and accuracy analysis for federated learning over a wireless cell.

The package splits into analytical link/geometry models (`geometry`, `links`),
empirical cross-checks (`montecarlo`), a synthetic federated training loop
(`fl`), resource planning under budgets (`planner`), and a CSV-emitting
experiment runner (`cli`).
"""

from .network import (
    NetworkConfig,
    PowerLawPathLoss,
    TabulatedPathLoss,
    PathLossModel,
    FlHyperParams,
    DatasetLaw,
    FullConfig,
    load_config,
    config_hash,
    dbm_to_mw,
    mw_to_dbm,
    db_to_linear,
    linear_to_db,
    gain,
    snr_down,
)
from .geometry import (
    UePopulation,
    InterfererRealization,
    TruncationError,
    derive_rng,
    distance_pdf,
    active_probability,
    mean_interferers,
    interferer_count_pmf,
    sample_population,
    sample_interferers,
)
from .links import (
    LinkStats,
    interference_moments,
    uplink_success_probability,
    downlink_success_probability,
    expected_uplink_bandwidth,
    expected_downlink_bandwidth,
    expected_compute_per_iteration,
    total_compute,
    link_stats,
)
from .montecarlo import (
    McEstimate,
    estimate_uplink_success,
    estimate_downlink_success,
    estimate_bandwidth,
    estimate_compute,
)
from .fl import (
    FederatedTask,
    TrainingTrace,
    make_task,
    local_subproblem_value,
    local_gd,
    run_federated,
    global_loss,
)
from .planner import (
    ResourceBudget,
    ResourcePlan,
    min_local_iterations,
    min_rounds,
    plan_case1,
    plan_case2,
    plan_case3,
)

__version__ = "0.1.0"

"""salpaudit: the salp-swarm optimizer family (rule as published, as shipped
in the reference implementation, and an amended shift-invariant variant)
alongside random-search and differential-evolution baselines, with probes for
shift invariance, origin bias, and boundary bounce."""

from .core import (
    Bounds,
    Candidate,
    ConfigurationError,
    DimensionError,
    RngStream,
    RunTrace,
    SalpChain,
    clip,
    uniform_init,
)
from .benchmarks import (
    ObjectiveSpec,
    ackley,
    alpine,
    get_objective,
    objective_names,
    random_fitness,
    random_objective,
    rastrigin,
    register_objective,
    rosenbrock,
    shifted,
    sphere,
)
from .algorithms import (
    ALGORITHM_IDS,
    DeConfig,
    RsConfig,
    SsoConfig,
    SSO_PRESETS,
    c1_coefficient,
    config_for,
    de_step,
    follower_update,
    leader_update_amended,
    leader_update_published,
    random_search_step,
    run,
    sso_step,
)
from .stats import (
    ComparisonReport,
    SampleSet,
    abf,
    bonferroni,
    compare_samples,
    mann_whitney_u,
    significance_class,
)
from .harness import (
    ExperimentConfig,
    ManifestExistsError,
    ObjectiveRequest,
    ResultSet,
    bounce_probe,
    counted,
    dynamics_probe,
    load_result_set,
    rerun_cell_repetition,
    run_experiment,
    shift_invariance_probe,
)
from . import backend

__version__ = "0.1.0"

"""Kelly (log-optimal) bet sizing from theoretical models and empirical data."""

from .constraints import (
    AtomHull,
    Hypercube,
    Hypersphere,
    Interval,
    confinement_interval,
    kelly_feasible,
    sphere_constraint_boundary,
    support_function,
)
from .distributions import (
    BernoulliCoin,
    DiscreteDistribution,
    NormalReturns,
    Pathological,
    SampleSet,
    ToyBernoulli,
    empirical_from_samples,
    from_spec,
    gaussian_samples,
    parse_model_spec,
    support_extremes,
)
from .errors import (
    BoundaryError,
    ContinuousModelError,
    DomainError,
    ParseError,
    SurvivalViolated,
    UnboundedBoundaryError,
)
from .growth import NEG_INFINITY, feasible_interval, log_growth, log_growth_gradient
from .ingest import (
    ReturnStats,
    TickSeries,
    gbm_ticks,
    matched_drift,
    read_prices_csv,
    returns_from_prices,
    summary_stats,
)
from .optimizer import (
    OptimizationResult,
    OptimizerConfig,
    coin_closed_form,
    empirical_coin_fraction,
    merton_fraction,
    optimize,
    optimize_scalar,
    optimize_vector,
    p_bad,
    theoretical_kelly,
    toy_closed_form,
)
from .simulator import (
    ComparisonReport,
    WealthPath,
    run_comparison,
    sweep_kelly_vs_mu,
    wealth_path,
)

__version__ = "0.1.0"

"""Learning in linear-quadratic games over random networks and dynamic populations."""

from .exceptions import AssumptionViolated, DegenerateDenominator, NotConverged
from .game import (
    GameConstants,
    GameSpec,
    StrategyBox,
    check_network,
    cost,
    feasible,
    game_constants,
    game_jacobian,
    project,
    random_game,
)
from .linalg import spectral_norm
from .networks import (
    BernoulliEdges,
    BinomialAverage,
    BlockBernoulli,
    ConstantNetwork,
    ParticipationModel,
    block_mean,
    compensated_effective_mean,
    effective_network,
    expected_network,
    iteration_rng,
    network_from_dict,
    sample_network,
    sample_participation,
)
from .equilibrium import gradient_play, solve_static, solve_unconstrained, system_matrix, vi_residual
from .metrics import (
    ConcentrationReport,
    best_response_cost,
    best_responses,
    epsilon_bound,
    stage_gaps,
    suboptimality_gap,
    validate_concentration,
)
from .dynamics import (
    ConstantStep,
    FixedL,
    Harmonic,
    Probes,
    Trajectory,
    perturbation,
    perturbation_statistics,
    population_perturbation,
    run_dynamic_population,
    run_time_varying,
    step_value,
    uniform_noise,
    write_trajectories_csv,
)
from .pricing import PricingParams, demand, even_split, pricing_to_lq
from .experiment import ExperimentConfig, RunReport, build_problem, builtin_config, load_config, run_experiment

__version__ = "0.1.0"

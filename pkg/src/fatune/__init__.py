"""fatune: a parameter-tuning workbench for the firefly algorithm.

Generates (theta, beta, gamma) settings with Monte Carlo, scrambled Sobol, or
Latin hypercube sampling, scores them on six benchmark problems with the
firefly algorithm, and compares the tuning methods with t-tests, F-tests,
Friedman tests, and two-way ANOVA.
"""

__version__ = "0.1.0"

from .benchmarks import (
    PenaltyConfig,
    Problem,
    evaluate_constraints,
    evaluate_objective,
    make_problem,
    penalized_objective,
    problem_names,
    trid_optimum,
)
from .firefly import FaConfig, FireflyState, RunOutcome, init_population, optimize, step
from .sampling import (
    ParameterRanges,
    ParameterSample,
    RandomStream,
    SamplerKind,
    draw_lhs,
    draw_mc,
    draw_sobol,
    scale_to_ranges,
    standard_normal,
)
from .stats import (
    BlockMatrix,
    TestResult,
    chi2_cdf,
    f_cdf,
    f_test_variance,
    friedman,
    paired_t,
    t_cdf,
    two_sample_t,
    two_way_anova,
)
from .tuning import (
    ExperimentReport,
    ProblemSpec,
    SettingResult,
    TuningPlan,
    evaluate_setting,
    extended_runs,
    generate_settings,
    run_experiment,
)

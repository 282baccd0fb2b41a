"""Experiment orchestration: sample settings, score them with repeated firefly
runs, and assemble the methods x problems x settings result cube.

Every firefly call derives its stream from
(master seed, method tag, problem tag, setting index, call index), so results
are identical no matter how the work units are scheduled or parallelized.
"""
from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .benchmarks import PenaltyConfig, Problem, make_problem
from .firefly import FaConfig, optimize
from .sampling import ParameterRanges, ParameterSample, RandomStream, SamplerKind, draw, scale_to_ranges


@dataclass(frozen=True)
class ProblemSpec:
    """A benchmark reference by name, with an optional dimension override."""

    name: str
    dimension: int | None = None

    @property
    def label(self) -> str:
        return self.name

    def build(self) -> Problem:
        return make_problem(self.name, self.dimension)


@dataclass(frozen=True)
class TuningPlan:
    """Everything needed to reproduce one tuning experiment."""

    samplers: tuple[SamplerKind, ...]
    problems: tuple[ProblemSpec, ...]
    ranges: ParameterRanges = ParameterRanges()
    num_settings: int = 10
    calls_per_setting: int = 50
    population_size: int = 20
    max_iterations: int = 1000
    alpha0: float = 1.0
    penalty: PenaltyConfig = PenaltyConfig()
    master_seed: int = 0
    redraw_per_problem: bool = False

    def __post_init__(self):
        if self.num_settings < 1:
            raise ValueError(f"num_settings must be >= 1, got {self.num_settings}")
        if self.calls_per_setting < 1:
            raise ValueError(f"calls_per_setting must be >= 1, got {self.calls_per_setting}")
        if not self.samplers:
            raise ValueError("at least one sampler method is required")
        if not self.problems:
            raise ValueError("at least one problem is required")

    def fa_config(self, params: ParameterSample) -> FaConfig:
        return FaConfig(
            theta=params.theta,
            beta=params.beta,
            gamma=params.gamma,
            population_size=self.population_size,
            max_iterations=self.max_iterations,
            alpha0=self.alpha0,
        )


@dataclass(frozen=True)
class SettingResult:
    """Best outcome of the repeated firefly calls for one parameter setting."""

    setting_index: int
    params: ParameterSample
    best_value: float
    best_point: np.ndarray
    per_call_bests: np.ndarray


@dataclass(frozen=True)
class MethodProblemTable:
    """One (method, problem) cell: all setting results plus summary rows."""

    method: str
    problem: str
    settings: tuple[SettingResult, ...]
    mean: float
    sigma: float | None
    best_index: int

    @property
    def best_values(self) -> np.ndarray:
        return np.array([s.best_value for s in self.settings])

    @property
    def best_params(self) -> ParameterSample:
        return self.settings[self.best_index].params

    @property
    def best_value(self) -> float:
        return self.settings[self.best_index].best_value


@dataclass
class ExperimentReport:
    """The full 3-methods x problems x settings result cube."""

    plan: TuningPlan
    methods: tuple[str, ...]
    problems: tuple[tuple[str, int], ...]  # (label, dimension)
    tables: dict

    def table(self, method: str, problem: str) -> MethodProblemTable:
        return self.tables[(method, problem)]

    def best_values(self, method: str, problem: str) -> np.ndarray:
        return self.table(method, problem).best_values

    def objective_matrix(self, method: str) -> np.ndarray:
        """num_settings x num_problems matrix of per-setting best values."""
        cols = [self.best_values(method, label) for label, _ in self.problems]
        return np.column_stack(cols)

    def best_params_matrix(self, parameter: str) -> np.ndarray:
        """num_problems x num_methods matrix of the best setting's parameter."""
        if parameter not in ("theta", "beta", "gamma"):
            raise ValueError(f"unknown parameter {parameter!r}")
        rows = []
        for label, _ in self.problems:
            rows.append([getattr(self.table(m, label).best_params, parameter) for m in self.methods])
        return np.array(rows)


def settings_stream(plan: TuningPlan, sampler: SamplerKind, problem_label: str | None = None) -> RandomStream:
    tags = ["settings", sampler.value]
    if plan.redraw_per_problem and problem_label is not None:
        tags.append(problem_label)
    return RandomStream(plan.master_seed, tuple(tags))


def generate_settings(
    plan: TuningPlan,
    sampler: SamplerKind | None = None,
    problem_label: str | None = None,
) -> list[ParameterSample]:
    """Draw the plan's parameter settings with the requested sampler.

    By default one pool is shared across all problems; with
    plan.redraw_per_problem the pool is re-drawn per problem label.
    """
    if sampler is None:
        sampler = plan.samplers[0]
    stream = settings_stream(plan, sampler, problem_label)
    points = draw(sampler, plan.num_settings, 3, stream, scramble=True)
    return scale_to_ranges(points, plan.ranges)


def call_stream(plan_seed: int, method: str, problem_label: str, setting_index: int, call_index: int) -> RandomStream:
    """The stream owned by one firefly call, derived purely from its coordinates."""
    return RandomStream(plan_seed, ("run", method, problem_label, setting_index, call_index))


def evaluate_setting(
    problem: Problem,
    params: ParameterSample,
    plan: TuningPlan,
    substream: RandomStream,
    setting_index: int = 0,
) -> SettingResult:
    """Run calls_per_setting independent firefly calls and keep the minimum."""
    config = plan.fa_config(params)
    per_call = np.empty(plan.calls_per_setting)
    best_value = np.inf
    best_point = None
    for call in range(plan.calls_per_setting):
        outcome = optimize(problem, config, substream.substream(call), plan.penalty)
        per_call[call] = outcome.best_value
        if outcome.best_value < best_value or best_point is None:
            best_value = outcome.best_value
            best_point = outcome.best_point
    return SettingResult(
        setting_index=setting_index,
        params=params,
        best_value=float(best_value),
        best_point=best_point,
        per_call_bests=per_call,
    )


@lru_cache(maxsize=32)
def _cached_problem(name: str, dimension: int | None) -> Problem:
    return make_problem(name, dimension)


def _run_setting_job(job: tuple) -> tuple:
    """One (method, problem, setting) work unit; payload is picklable primitives."""
    (master_seed, method, name, dimension, label, setting_index, theta, beta, gamma,
     population, iterations, alpha0, lam, calls) = job
    problem = _cached_problem(name, dimension)
    plan = TuningPlan(
        samplers=(SamplerKind.MC,),  # not used by evaluate_setting
        problems=(ProblemSpec(name, dimension),),
        num_settings=1,
        calls_per_setting=calls,
        population_size=population,
        max_iterations=iterations,
        alpha0=alpha0,
        penalty=PenaltyConfig(lam),
        master_seed=master_seed,
    )
    params = ParameterSample(theta=theta, beta=beta, gamma=gamma)
    substream = RandomStream(master_seed, ("run", method, label, setting_index))
    result = evaluate_setting(problem, params, plan, substream, setting_index)
    return (method, label, setting_index, result.best_value, result.best_point, result.per_call_bests)


def run_experiment(plan: TuningPlan, threads: int = 1) -> ExperimentReport:
    """Run the full cube over requested methods x problems x settings.

    threads > 1 fans the (method, problem, setting) units out over worker
    processes; the result is identical to the serial run because every unit
    derives its own stream from its coordinates.
    """
    problems = [(spec, spec.build()) for spec in plan.problems]  # fail fast
    labels = [spec.label for spec, _ in problems]
    if len(set(labels)) != len(labels):
        raise ValueError(f"problem labels must be unique, got {labels}")

    methods = tuple(kind.value for kind in plan.samplers)
    settings_pool: dict[tuple[str, str], list[ParameterSample]] = {}
    for kind in plan.samplers:
        if plan.redraw_per_problem:
            for spec, _ in problems:
                settings_pool[(kind.value, spec.label)] = generate_settings(plan, kind, spec.label)
        else:
            shared = generate_settings(plan, kind)
            for spec, _ in problems:
                settings_pool[(kind.value, spec.label)] = shared

    jobs = []
    for kind in plan.samplers:
        for spec, _ in problems:
            for idx, params in enumerate(settings_pool[(kind.value, spec.label)]):
                jobs.append((
                    plan.master_seed, kind.value, spec.name, spec.dimension, spec.label,
                    idx, params.theta, params.beta, params.gamma,
                    plan.population_size, plan.max_iterations, plan.alpha0,
                    plan.penalty.lam, plan.calls_per_setting,
                ))

    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            raw = list(pool.map(_run_setting_job, jobs, chunksize=4))
    else:
        raw = [_run_setting_job(job) for job in jobs]

    cell_results: dict[tuple[str, str], dict[int, tuple]] = {}
    for method, label, idx, best_value, best_point, per_call in raw:
        cell_results.setdefault((method, label), {})[idx] = (best_value, best_point, per_call)

    tables: dict[tuple[str, str], MethodProblemTable] = {}
    for kind in plan.samplers:
        for spec, _ in problems:
            key = (kind.value, spec.label)
            pool_params = settings_pool[key]
            settings = []
            for idx in range(plan.num_settings):
                best_value, best_point, per_call = cell_results[key][idx]
                settings.append(SettingResult(idx, pool_params[idx], best_value, best_point, per_call))
            bests = np.array([s.best_value for s in settings])
            tables[key] = MethodProblemTable(
                method=kind.value,
                problem=spec.label,
                settings=tuple(settings),
                mean=float(bests.mean()),
                sigma=float(bests.std(ddof=1)) if bests.size >= 2 else None,
                best_index=int(np.argmin(bests)),
            )

    report_problems = tuple((spec.label, prob.dimension) for spec, prob in problems)
    return ExperimentReport(plan=plan, methods=methods, problems=report_problems, tables=tables)


def extended_runs(
    plan: TuningPlan,
    problem: ProblemSpec,
    num_settings: int = 30,
    threads: int = 1,
) -> dict[str, np.ndarray]:
    """Per-method best-value vectors for one problem at a larger sample size."""
    sub_plan = dataclasses.replace(plan, num_settings=num_settings, problems=(problem,))
    report = run_experiment(sub_plan, threads=threads)
    return {method: report.best_values(method, problem.label) for method in report.methods}

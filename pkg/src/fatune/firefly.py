"""The firefly algorithm: attraction-based minimization of a penalized objective.

Brighter means lower penalized value. Within one iteration the classic double
sweep runs over ordered pairs with stale fitness values; afterwards positions
are clamped to the bounds, fitness is re-evaluated once per firefly, the
randomization strength decays geometrically, and the best-so-far record is
updated monotonically.

The attraction term measures pairwise distance in box-normalized coordinates
(each coordinate difference divided by its bound width). The Gaussian
randomization step alpha * eps stays in raw coordinates, unscaled by the
domain.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import attraction_sweep, count_moves
from .benchmarks import PenaltyConfig, Problem, penalized_values
from .sampling import RandomStream


@dataclass(frozen=True)
class FaConfig:
    """Control parameters of one firefly run."""

    theta: float
    beta: float
    gamma: float
    population_size: int = 20
    max_iterations: int = 1000
    alpha0: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.theta < 1.0:
            raise ValueError(f"theta must lie in (0, 1), got {self.theta}")
        if self.beta < 0.0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if self.gamma < 0.0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.population_size < 2:
            raise ValueError(f"population size must be >= 2, got {self.population_size}")
        if self.max_iterations < 1:
            raise ValueError(f"max iterations must be >= 1, got {self.max_iterations}")


@dataclass
class FireflyState:
    """Mutable snapshot of the swarm after a completed iteration."""

    positions: np.ndarray
    fitness: np.ndarray
    iteration: int
    alpha: float
    best_point: np.ndarray
    best_value: float


@dataclass(frozen=True)
class RunOutcome:
    """Best solution of one run plus the per-iteration best-value trace."""

    best_value: float
    best_point: np.ndarray
    history: np.ndarray
    evaluations: int


def init_population(
    problem: Problem,
    config: FaConfig,
    stream: RandomStream | None = None,
    penalty: PenaltyConfig = PenaltyConfig(),
) -> FireflyState:
    """Uniform random swarm inside the bound box, fitness already evaluated."""
    if stream is None:
        stream = RandomStream(config.seed)
    n, d = config.population_size, problem.dimension
    span = problem.upper_bounds - problem.lower_bounds
    positions = problem.lower_bounds + stream.uniform((n, d)) * span
    fitness = penalized_values(problem, positions, penalty.lam)
    best = int(np.argmin(fitness))
    return FireflyState(
        positions=positions,
        fitness=fitness,
        iteration=0,
        alpha=config.alpha0,
        best_point=positions[best].copy(),
        best_value=float(fitness[best]),
    )


def step(
    state: FireflyState,
    problem: Problem,
    config: FaConfig,
    stream: RandomStream,
    penalty: PenaltyConfig = PenaltyConfig(),
) -> FireflyState:
    """One full iteration: double sweep, clamp, re-evaluate, decay alpha."""
    fit = state.fitness
    n_moves = count_moves(fit)
    if n_moves:
        eps = stream.normal((n_moves, problem.dimension))
    else:
        eps = np.zeros((0, problem.dimension))
    positions = np.array(state.positions, dtype=float, copy=True)
    inv_w2 = 1.0 / (problem.upper_bounds - problem.lower_bounds) ** 2
    used = attraction_sweep(positions, fit, eps, config.beta, config.gamma, state.alpha, inv_w2)
    if used != n_moves:
        raise RuntimeError(f"sweep consumed {used} kicks, expected {n_moves}")
    np.clip(positions, problem.lower_bounds, problem.upper_bounds, out=positions)
    fitness = penalized_values(problem, positions, penalty.lam)

    iteration = state.iteration + 1
    best_point, best_value = state.best_point, state.best_value
    candidate = int(np.argmin(fitness))
    if fitness[candidate] < best_value:
        best_value = float(fitness[candidate])
        best_point = positions[candidate].copy()
    return FireflyState(
        positions=positions,
        fitness=fitness,
        iteration=iteration,
        alpha=config.alpha0 * config.theta ** iteration,
        best_point=best_point,
        best_value=best_value,
    )


def optimize(
    problem: Problem,
    config: FaConfig,
    stream: RandomStream | None = None,
    penalty: PenaltyConfig = PenaltyConfig(),
) -> RunOutcome:
    """Initialize and run the configured number of iterations."""
    if stream is None:
        stream = RandomStream(config.seed)
    state = init_population(problem, config, stream, penalty)
    history = np.empty(config.max_iterations + 1)
    history[0] = state.best_value
    for t in range(1, config.max_iterations + 1):
        state = step(state, problem, config, stream, penalty)
        history[t] = state.best_value
    evaluations = config.population_size * (config.max_iterations + 1)
    return RunOutcome(
        best_value=state.best_value,
        best_point=state.best_point.copy(),
        history=history,
        evaluations=evaluations,
    )

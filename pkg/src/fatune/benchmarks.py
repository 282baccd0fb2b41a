"""The six benchmark problems and penalty-method constraint handling.

Objectives and constraints are vectorized: they accept an (..., D) array and
return shape (...,). The last three problems carry known best solutions from
the engineering-design literature; the first three have their optimum at zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

TRUSS_LOAD = 2000.0
TRUSS_STRESS_LIMIT = 2000.0


@dataclass(frozen=True)
class PenaltyConfig:
    """Coefficient of the max(0, g) penalty added per violated constraint."""

    lam: float = 1000.0

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"penalty coefficient must be positive, got {self.lam}")


@dataclass(frozen=True)
class Problem:
    """One benchmark: objective, inequality constraints g_j(x) <= 0, and bounds."""

    name: str
    dimension: int
    lower_bounds: np.ndarray
    upper_bounds: np.ndarray
    objective: Callable[[np.ndarray], np.ndarray]
    constraints: tuple[Callable[[np.ndarray], np.ndarray], ...] = ()
    known_best_value: float | None = None
    known_best_point: np.ndarray | None = None


def _sphere(x):
    return np.sum(x * x, axis=-1)


def _rosenbrock(x):
    head = (1.0 - x[..., 0]) ** 2
    return head + np.sum(100.0 * (x[..., 1:] - x[..., :-1] ** 2) ** 2, axis=-1)


def _ackley(x):
    d = x.shape[-1]
    rms = np.sqrt(np.sum(x * x, axis=-1) / d)
    cos_mean = np.sum(np.cos(2.0 * np.pi * x), axis=-1) / d
    return -20.0 * np.exp(-0.2 * rms) - np.exp(cos_mean) + 20.0 + math.e


def _trid(x):
    return np.sum((x - 1.0) ** 2, axis=-1) - np.sum(x[..., 1:] * x[..., :-1], axis=-1)


def _spring_objective(x):
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    return (2.0 + x3) * x1 ** 2 * x2


def _spring_g1(x):
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    return 1.0 - x2 ** 3 * x3 / (71785.0 * x1 ** 4)


def _spring_g2(x):
    x1, x2 = x[..., 0], x[..., 1]
    return (4.0 * x2 ** 2 - x1 * x2) / (12566.0 * (x2 * x1 ** 3 - x1 ** 4)) + 1.0 / (5108.0 * x1 ** 2) - 1.0


def _spring_g3(x):
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    return 1.0 - 140.45 * x1 / (x2 ** 2 * x3)


def _spring_g4(x):
    # Standard surge-frequency form: (x1 + x2)/1.5 - 1 <= 0. Some statements of
    # this benchmark omit the -1 shift, which leaves no feasible point for
    # positive wire/coil diameters; _spring_g4_raw reproduces that variant.
    x1, x2 = x[..., 0], x[..., 1]
    return (x1 + x2) / 1.5 - 1.0


def _spring_g4_raw(x):
    x1, x2 = x[..., 0], x[..., 1]
    return (x1 + x2) / 1.5


def _truss_objective(x):
    x1, x2 = x[..., 0], x[..., 1]
    return 100.0 * (2.0 * math.sqrt(2.0) * x1 + x2)


def _truss_g1(x):
    x1, x2 = x[..., 0], x[..., 1]
    r2 = math.sqrt(2.0)
    return (r2 * x1 + x2) * TRUSS_LOAD / (r2 * x1 ** 2 + 2.0 * x1 * x2) - TRUSS_STRESS_LIMIT


def _truss_g2(x):
    x1, x2 = x[..., 0], x[..., 1]
    r2 = math.sqrt(2.0)
    return x2 * TRUSS_LOAD / (r2 * x1 ** 2 + 2.0 * x1 * x2) - TRUSS_STRESS_LIMIT


def _truss_g3(x):
    x1, x2 = x[..., 0], x[..., 1]
    return TRUSS_LOAD / (x1 + math.sqrt(2.0) * x2) - TRUSS_STRESS_LIMIT


_FIXED_DIMENSION = {"spring": 3, "truss": 2}
_DEFAULT_DIMENSION = {"sphere": 10, "rosenbrock": 10, "ackley": 10, "trid": 4}


def problem_names() -> tuple[str, ...]:
    """Catalog order used throughout tables and reports."""
    return ("sphere", "rosenbrock", "ackley", "trid", "spring", "truss")


def make_problem(name: str, dimension: int | None = None, spring_raw_g4: bool = False) -> Problem:
    """Build a benchmark problem by name.

    `dimension` is only accepted for the variable-dimension functions
    (sphere, rosenbrock, ackley, trid); spring is fixed at D=3 and truss at
    D=2. `spring_raw_g4` switches the spring problem's fourth constraint to
    the unshifted (x1 + x2)/1.5 <= 0 form, which is infeasible everywhere
    in-bounds and exists only for side-by-side comparison.
    """
    if name not in problem_names():
        raise ValueError(f"unknown problem {name!r}; known: {', '.join(problem_names())}")
    if name in _FIXED_DIMENSION:
        if dimension is not None and dimension != _FIXED_DIMENSION[name]:
            raise ValueError(f"{name} has fixed dimension {_FIXED_DIMENSION[name]}")
        dimension = _FIXED_DIMENSION[name]
    elif dimension is None:
        dimension = _DEFAULT_DIMENSION[name]
    elif dimension < 1 or (name == "trid" and dimension < 2):
        raise ValueError(f"invalid dimension {dimension} for {name}")

    d = int(dimension)
    if name == "sphere":
        return Problem(
            name, d, np.full(d, -10.0), np.full(d, 10.0), _sphere,
            known_best_value=0.0, known_best_point=np.zeros(d),
        )
    if name == "rosenbrock":
        return Problem(
            name, d, np.full(d, -30.0), np.full(d, 30.0), _rosenbrock,
            known_best_value=0.0, known_best_point=np.ones(d),
        )
    if name == "ackley":
        return Problem(
            name, d, np.full(d, -32.768), np.full(d, 32.768), _ackley,
            known_best_value=0.0, known_best_point=np.zeros(d),
        )
    if name == "trid":
        value, point = trid_optimum(d)
        bound = float(d * d)
        return Problem(
            name, d, np.full(d, -bound), np.full(d, bound), _trid,
            known_best_value=value, known_best_point=point,
        )
    if name == "spring":
        g4 = _spring_g4_raw if spring_raw_g4 else _spring_g4
        return Problem(
            name, 3,
            np.array([0.05, 0.25, 2.0]), np.array([2.0, 1.3, 15.0]),
            _spring_objective,
            constraints=(_spring_g1, _spring_g2, _spring_g3, g4),
            known_best_value=0.012665,
            known_best_point=np.array([0.051690, 0.356750, 11.287126]),
        )
    # truss
    return Problem(
        name, 2,
        np.array([0.001, 0.001]), np.array([1.0, 1.0]),
        _truss_objective,
        constraints=(_truss_g1, _truss_g2, _truss_g3),
        known_best_value=263.8958,
        known_best_point=np.array([0.78853, 0.40866]),
    )


def trid_optimum(dimension: int) -> tuple[float, np.ndarray]:
    """Closed-form minimum of the trid function: -D(D+4)(D-1)/6 at x_i = i(D+1-i)."""
    if dimension < 2:
        raise ValueError(f"trid optimum needs dimension >= 2, got {dimension}")
    d = int(dimension)
    i = np.arange(1, d + 1, dtype=float)
    point = i * (d + 1 - i)
    value = -d * (d + 4) * (d - 1) / 6.0
    return value, point


def _check_vector(problem: Problem, x) -> np.ndarray:
    vec = np.asarray(x, dtype=float)
    if vec.ndim != 1 or vec.shape[0] != problem.dimension:
        raise ValueError(
            f"{problem.name} expects a length-{problem.dimension} vector, got shape {vec.shape}"
        )
    return vec


def evaluate_objective(problem: Problem, x) -> float:
    """Raw objective value (no penalty) at a single point."""
    vec = _check_vector(problem, x)
    with np.errstate(all="ignore"):
        return float(problem.objective(vec))


def evaluate_constraints(problem: Problem, x) -> np.ndarray:
    """Constraint values g_j(x); <= 0 means satisfied. Non-finite maps to +inf."""
    vec = _check_vector(problem, x)
    if not problem.constraints:
        return np.empty(0)
    with np.errstate(all="ignore"):
        values = np.array([float(g(vec)) for g in problem.constraints])
    return np.where(np.isfinite(values), values, np.inf)


def penalized_objective(problem: Problem, x, penalty: PenaltyConfig = PenaltyConfig()) -> float:
    """f(x) + lam * sum_j max(0, g_j(x)); equals f(x) when all constraints hold."""
    vec = _check_vector(problem, x)
    return float(penalized_values(problem, vec[None, :], penalty.lam)[0])


def penalized_values(problem: Problem, points: np.ndarray, lam: float) -> np.ndarray:
    """Vectorized penalized objective over an (m, D) batch; non-finite -> +inf."""
    with np.errstate(all="ignore"):
        total = np.asarray(problem.objective(points), dtype=float)
        total = np.where(np.isfinite(total), total, np.inf)
        for g in problem.constraints:
            gv = np.asarray(g(points), dtype=float)
            gv = np.where(np.isfinite(gv), gv, np.inf)
            total = total + lam * np.maximum(gv, 0.0)
    return np.where(np.isfinite(total), total, np.inf)

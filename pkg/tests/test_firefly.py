import numpy as np
import pytest

from fatune._kernels import attraction_sweep, count_moves, reference_sweep
from fatune.benchmarks import make_problem
from fatune.firefly import FaConfig, init_population, optimize, step
from fatune.sampling import RandomStream


def test_config_validation():
    with pytest.raises(ValueError):
        FaConfig(theta=1.0, beta=0.5, gamma=1.0)
    with pytest.raises(ValueError):
        FaConfig(theta=0.5, beta=-0.1, gamma=1.0)
    with pytest.raises(ValueError):
        FaConfig(theta=0.5, beta=0.5, gamma=-1.0)
    with pytest.raises(ValueError):
        FaConfig(theta=0.5, beta=0.5, gamma=1.0, population_size=1)


def test_init_population_inside_bounds():
    problem = make_problem("sphere", 2)
    config = FaConfig(theta=0.9, beta=0.5, gamma=1.0, population_size=20, max_iterations=10)
    state = init_population(problem, config, RandomStream(0))
    assert state.positions.shape == (20, 2)
    assert np.all(state.positions >= -10.0) and np.all(state.positions <= 10.0)
    assert state.iteration == 0
    assert state.alpha == config.alpha0


def test_init_population_deterministic():
    problem = make_problem("truss")
    config = FaConfig(theta=0.9, beta=0.5, gamma=1.0)
    a = init_population(problem, config, RandomStream(3))
    b = init_population(problem, config, RandomStream(3))
    assert np.array_equal(a.positions, b.positions)
    assert np.array_equal(a.fitness, b.fitness)


def test_init_best_is_population_minimum():
    problem = make_problem("spring")
    config = FaConfig(theta=0.9, beta=0.5, gamma=1.0)
    state = init_population(problem, config, RandomStream(1))
    assert state.best_value == state.fitness.min()
    idx = int(np.argmin(state.fitness))
    assert np.array_equal(state.best_point, state.positions[idx])


def test_step_is_identity_with_beta_and_alpha_zero():
    problem = make_problem("sphere", 3)
    config = FaConfig(theta=0.9, beta=0.0, gamma=1.0, alpha0=0.0, population_size=8)
    state = init_population(problem, config, RandomStream(2))
    nxt = step(state, problem, config, RandomStream(4))
    assert np.array_equal(nxt.positions, state.positions)
    assert nxt.iteration == 1


def test_less_fit_firefly_lands_on_brighter_one():
    # n=2, gamma=0, beta=1, alpha=0: x1 + 1*(x2 - x1) = x2 exactly
    problem = make_problem("sphere", 2)
    config = FaConfig(theta=0.9, beta=1.0, gamma=0.0, alpha0=0.0, population_size=2)
    state = init_population(problem, config, RandomStream(5))
    brighter = int(np.argmin(state.fitness))
    target = state.positions[brighter].copy()
    nxt = step(state, problem, config, RandomStream(6))
    assert np.array_equal(nxt.positions[0], target)
    assert np.array_equal(nxt.positions[1], target)


def test_best_firefly_never_moves_within_one_step():
    problem = make_problem("ackley", 4)
    config = FaConfig(theta=0.9, beta=0.8, gamma=0.5, population_size=10)
    state = init_population(problem, config, RandomStream(7))
    best = int(np.argmin(state.fitness))
    nxt = step(state, problem, config, RandomStream(8))
    assert np.array_equal(nxt.positions[best], state.positions[best])


def test_step_monotone_best():
    problem = make_problem("rosenbrock", 4)
    config = FaConfig(theta=0.95, beta=0.6, gamma=1.0, population_size=12)
    state = init_population(problem, config, RandomStream(9))
    stream = RandomStream(10)
    for _ in range(50):
        nxt = step(state, problem, config, stream)
        assert nxt.best_value <= state.best_value
        state = nxt


def test_history_monotone_and_final_entry():
    problem = make_problem("sphere", 5)
    config = FaConfig(theta=0.93, beta=0.7, gamma=1.0, max_iterations=200)
    out = optimize(problem, config, RandomStream(11))
    assert np.all(np.diff(out.history) <= 0.0)
    assert out.history[-1] == out.best_value
    assert out.history.size == 201


def test_alpha_decay_tracks_power_law():
    problem = make_problem("sphere", 2)
    config = FaConfig(theta=0.97, beta=0.5, gamma=1.0, population_size=6)
    state = init_population(problem, config, RandomStream(12))
    stream = RandomStream(13)
    for t in range(1, 120):
        state = step(state, problem, config, stream)
        expected = config.alpha0 * config.theta ** t
        assert abs(state.alpha - expected) <= 1e-12 * abs(expected)


def test_positions_clamped_to_bounds():
    problem = make_problem("truss")
    config = FaConfig(theta=0.9, beta=0.9, gamma=0.1, alpha0=5.0, population_size=10)
    state = init_population(problem, config, RandomStream(14))
    stream = RandomStream(15)
    for _ in range(20):
        state = step(state, problem, config, stream)
        assert np.all(state.positions >= problem.lower_bounds)
        assert np.all(state.positions <= problem.upper_bounds)


def test_optimize_deterministic_and_counts_evaluations():
    problem = make_problem("spring")
    config = FaConfig(theta=0.92, beta=0.6, gamma=0.8, max_iterations=100)
    a = optimize(problem, config, RandomStream(16))
    b = optimize(problem, config, RandomStream(16))
    assert a.best_value == b.best_value
    assert np.array_equal(a.best_point, b.best_point)
    assert np.array_equal(a.history, b.history)
    assert a.evaluations == 20 * 101


def test_optimize_uses_config_seed_without_stream():
    problem = make_problem("sphere", 3)
    config = FaConfig(theta=0.92, beta=0.6, gamma=0.8, max_iterations=30, seed=99)
    a = optimize(problem, config)
    b = optimize(problem, config, RandomStream(99))
    assert a.best_value == b.best_value


def test_sphere_seeded_quality():
    # quality target replicated over 5 seeds
    problem = make_problem("sphere", 10)
    config = FaConfig(theta=0.95, beta=0.7, gamma=1.0, population_size=20, max_iterations=1000)
    for seed in range(5):
        out = optimize(problem, config, RandomStream(seed))
        assert out.best_value <= 1e-3, (seed, out.best_value)


def test_trid_midrange_quality():
    problem = make_problem("trid", 4)
    config = FaConfig(theta=0.95, beta=0.5, gamma=1.3, population_size=20, max_iterations=1000)
    out = optimize(problem, config, RandomStream(0))
    assert abs(out.best_value - (-16.0)) <= 0.5


def test_truss_midrange_quality():
    # truss has a feasible local trap near (1, 0); this seed lands in the
    # global basin (the tuning protocol's repeated calls make that routine)
    problem = make_problem("truss")
    config = FaConfig(theta=0.95, beta=0.5, gamma=1.3, population_size=20, max_iterations=1000)
    out = optimize(problem, config, RandomStream(0))
    assert out.best_value <= 264.2


def test_beta_zero_matches_pure_random_walk_dynamics():
    # with beta = 0 the pairwise coupling term contributes nothing, so a run
    # must reproduce the same trajectory with gamma replaced arbitrarily
    problem = make_problem("sphere", 3)
    base = FaConfig(theta=0.9, beta=0.0, gamma=2.5, max_iterations=60)
    alt = FaConfig(theta=0.9, beta=0.0, gamma=0.1, max_iterations=60)
    a = optimize(problem, base, RandomStream(17))
    b = optimize(problem, alt, RandomStream(17))
    assert a.best_value == b.best_value
    assert np.array_equal(a.history, b.history)


def test_reported_best_point_matches_best_value():
    for name in ("sphere", "truss", "spring"):
        problem = make_problem(name)
        config = FaConfig(theta=0.93, beta=0.5, gamma=1.0, max_iterations=150)
        out = optimize(problem, config, RandomStream(18))
        from fatune.benchmarks import penalized_objective
        assert penalized_objective(problem, out.best_point) == pytest.approx(out.best_value, rel=1e-12)
        assert np.all(out.best_point >= problem.lower_bounds)
        assert np.all(out.best_point <= problem.upper_bounds)


def test_compiled_sweep_matches_reference():
    rng = np.random.default_rng(19)
    for _ in range(10):
        n, d = int(rng.integers(2, 15)), int(rng.integers(1, 8))
        pos = rng.uniform(-5, 5, (n, d))
        fit = rng.uniform(0, 10, n)
        inv_w2 = rng.uniform(0.01, 1.0, d)
        moves = count_moves(fit)
        eps = rng.standard_normal((moves, d))
        pos_a, pos_b = pos.copy(), pos.copy()
        ka = attraction_sweep(pos_a, fit, eps, 0.7, 1.2, 0.3, inv_w2)
        kb = reference_sweep(pos_b, fit, eps, 0.7, 1.2, 0.3, inv_w2)
        assert ka == kb == moves
        assert np.allclose(pos_a, pos_b, rtol=1e-12, atol=1e-12)


def test_non_finite_fitness_never_selected_as_best():
    problem = make_problem("spring")
    config = FaConfig(theta=0.9, beta=0.5, gamma=1.0, population_size=5, max_iterations=5)
    state = init_population(problem, config, RandomStream(20))
    # force one firefly onto the in-bounds singular line x1 == x2 of g2
    state.positions[0] = np.array([0.3, 0.3, 5.0])
    from fatune.benchmarks import penalized_values
    state.fitness = penalized_values(problem, state.positions, 1000.0)
    assert state.fitness[0] == np.inf
    nxt = step(state, problem, config, RandomStream(21))
    assert np.isfinite(nxt.best_value)

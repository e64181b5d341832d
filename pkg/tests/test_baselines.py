import math

import numpy as np
import pytest

from qwgo.baselines import GAConfig, SAConfig, metropolis_acceptance, run_ga, run_sa
from qwgo.errors import DomainError
from qwgo.objectives import ObjectiveSpec, get_objective

CONST = ObjectiveSpec("const", lambda x: 5.0 + 0.0 * np.asarray(x, float), (-1.0, 1.0), 0.0, 5.0)


def test_acceptance_probability():
    assert metropolis_acceptance(-3.0, 10.0) == 1.0
    assert metropolis_acceptance(0.0, 10.0) == 1.0
    assert metropolis_acceptance(7.0, 7.0) == pytest.approx(math.exp(-1))


def test_config_validation():
    with pytest.raises(DomainError):
        SAConfig(t0=0)
    with pytest.raises(DomainError):
        SAConfig(alpha=1.0)
    with pytest.raises(DomainError):
        GAConfig(population=1)
    with pytest.raises(DomainError):
        GAConfig(mutation_rate=1.5)


@pytest.mark.parametrize("method,config", [(run_sa, SAConfig(max_evals=300)), (run_ga, GAConfig(max_evals=300))])
def test_constant_objective(method, config):
    t = method(CONST, config, np.random.default_rng(0))
    assert len(t.best_f) == 300
    assert np.all(t.best_f == 5.0)


def test_sa_accepts_every_move_on_flat_landscape():
    xs = []
    f = ObjectiveSpec("flat", lambda x: (xs.append(x), 0.0)[1], (-1.0, 1.0), 0.0, 0.0)
    run_sa(f, SAConfig(max_evals=50, sigma=0.01), np.random.default_rng(1))
    # each proposal is a clipped step from the previous one, so every move was taken
    steps = np.abs(np.diff(xs))
    assert steps.max() < 0.06


def test_ga_elitism_without_variation():
    t = run_ga(get_objective("rastrigin"), GAConfig(population=2, crossover_rate=0, mutation_rate=0, max_evals=200),
               np.random.default_rng(3))
    assert np.all(np.diff(t.best_f) <= 0)


@pytest.mark.parametrize("method,config", [(run_sa, SAConfig(max_evals=2000)), (run_ga, GAConfig(max_evals=2000))])
@pytest.mark.parametrize("name", ["rastrigin", "schwefel", "ackley"])
def test_traces_monotone_and_deterministic(method, config, name):
    spec = get_objective(name)
    a = method(spec, config, np.random.default_rng(5))
    b = method(spec, config, np.random.default_rng(5))
    np.testing.assert_array_equal(a.best_f, b.best_f)
    assert np.all(np.diff(a.best_f) <= 0)
    lo, hi = spec.default_domain
    assert np.all((a.best_x >= lo) & (a.best_x <= hi))
    np.testing.assert_allclose(spec.f(a.best_x), a.best_f)


def test_first_success_is_one_based():
    t = run_sa(CONST, SAConfig(max_evals=10), np.random.default_rng(0))
    x0 = t.best_x[0]
    assert t.first_success_evals(x0, 1e-12) == 1
    assert t.first_success_evals(x0 + 10, 1e-4) is None


def test_ga_rastrigin_regression_statistic():
    spec = get_objective("rastrigin")
    hits = [run_ga(spec, GAConfig(max_evals=10_000), np.random.default_rng(s)).first_success_evals(0.0, 1e-4)
            for s in range(200)]
    assert sum(h is not None for h in hits) / 200 == GA_RASTRIGIN_SUCCESS


GA_RASTRIGIN_SUCCESS = 1.0


def test_batch_recording_matches_one_at_a_time():
    from qwgo.baselines import _Recorder

    f = get_objective("ackley").f
    rng = np.random.default_rng(0)
    for _ in range(50):
        xs = rng.choice([-1.0, 0.0, 0.5, 2.0], size=rng.integers(1, 30))
        one, many = _Recorder(f, 20), _Recorder(f, 20)
        for x in xs:
            if not one.exhausted:
                one(x)
        i = 0
        while i < len(xs) and not many.exhausted:
            k = int(rng.integers(1, 5))
            many.batch(xs[i:i + k])
            i += k
        a, b = one.trace(), many.trace()
        np.testing.assert_array_equal(a.best_f, b.best_f)
        np.testing.assert_array_equal(a.best_x, b.best_x)

import math

import numpy as np
import pytest

from tagwalk.errors import DomainError, ParameterError, SizingError
from tagwalk.group import make_instance, make_params
from tagwalk.stats import (
    RhoSample,
    first_collision_length,
    histogram,
    histogram_csv,
    max_quantile_deviation,
    qq_correlation,
    qq_csv,
    qq_points,
    rayleigh_pdf,
    rayleigh_quantile,
    run_trials,
    samples_csv,
    summarize,
    summary_csv,
)
from tagwalk.walk import make_multipliers, start_state
from tagwalk.tags import TagParams, gamma


def test_rayleigh_closed_forms():
    assert rayleigh_pdf(0.0) == 0
    assert rayleigh_pdf(1e-12) == pytest.approx(1e-12)
    assert rayleigh_pdf(1.0) == pytest.approx(math.exp(-0.5))
    assert rayleigh_quantile(1 - math.exp(-0.5)) == pytest.approx(1.0)
    assert rayleigh_quantile(0.5) == pytest.approx(math.sqrt(2 * math.log(2)))
    assert rayleigh_quantile(0.5) == pytest.approx(1.177410, abs=1e-6)
    assert rayleigh_quantile(0) == 0
    with pytest.raises(DomainError):
        rayleigh_quantile(1)
    with pytest.raises(DomainError):
        rayleigh_pdf(-1)


def test_first_collision_tiny_group():
    params = make_params(3)
    for seed in range(50):
        s = first_collision_length(make_instance(params, seed=seed), 4, seed)
        assert 1 <= s.steps <= 8


def test_first_collision_against_reference(params19):
    """Independent re-walk: count steps until an element repeats."""
    inst = make_instance(params19, seed=4)
    s = first_collision_length(inst, 16, 4)
    ms = make_multipliers(inst, 16, 4)
    p = TagParams.for_r(16, 19)
    y = start_state(inst, 4).Y
    seen = [y]
    while True:
        y = inst.field.mul(y, ms[gamma(y, p) - 1].element)
        if y in seen:
            break
        seen.append(y)
    assert s.steps == len(seen)
    assert s == first_collision_length(inst, 16, 4)


def test_memory_gate(params19):
    with pytest.raises(SizingError):
        first_collision_length(make_instance(params19, seed=1), 4, 1, budget=1000)


def test_summaries():
    q = 100
    same = [RhoSample(10, 4, q, k) for k in range(5)]
    s = summarize(same)
    assert s.sd_units == 0 and s.n_trials == 5
    assert s.mean_units == pytest.approx(10 / math.sqrt(math.pi * q / 2))
    with pytest.raises(ParameterError):
        summarize(same[:1])


def test_qq_perfect_input():
    q = 10**6
    n = 500
    samples = [RhoSample(0, 20, q, 0)] * 0
    for i in range(1, n + 1):
        x = rayleigh_quantile((i - 0.5) / n)
        samples.append(RhoSample(round(x * math.sqrt(q)), 20, q, i))
    pts = qq_points(samples)
    assert qq_correlation(pts) > 0.99999
    assert max_quantile_deviation(pts) < 2e-3
    assert pts[0][0] == pytest.approx(0.5 / n)


def test_histogram_area_and_degenerate():
    rng = np.random.default_rng(0)
    q = 10**6
    samples = [RhoSample(int(v), 4, q, 0) for v in rng.rayleigh(1000, 2000) + 1]
    h = histogram(samples, bins=30)
    assert h.area == pytest.approx(1.0, abs=1e-9)
    assert 0.6 < h.mode < 1.5
    flat = histogram([RhoSample(500, 4, q, k) for k in range(10)], bins=5)
    assert flat.area == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ParameterError):
        histogram(samples, bins=4)


def test_trials_are_seeded_and_thread_independent(params19):
    a = run_trials(params19, 20, 12, seed=100)
    b = run_trials(params19, 20, 12, seed=100, threads=3)
    assert a == b
    assert [s.seed for s in a] == list(range(100, 112))
    with pytest.raises(ParameterError):
        run_trials(params19, 20, 0)


def test_csv_headers(params19):
    samples = run_trials(params19, 4, 5, seed=0)
    assert samples_csv(samples).splitlines()[0] == "r,q,seed,steps"
    assert summary_csv([summarize(samples)]).splitlines()[0] == "r,q,trials,mean_units,sd_units"
    assert qq_csv(qq_points(samples)).splitlines()[0] == "p,theoretical,empirical"
    assert histogram_csv(histogram(samples, bins=5)).splitlines()[0] == "bin_left,bin_right,density"
    assert len(samples_csv(samples).splitlines()) == 6

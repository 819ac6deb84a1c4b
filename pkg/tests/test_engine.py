import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swapengine.engine import (
    BathPair,
    DomainError,
    EngineConfig,
    cycle,
    final_energy,
    heat_capacity,
    initial_energy,
    is_engine,
    occupation_ground,
    swap_is_optimal,
)

spacing = st.floats(1e-3, 1e2)
temperature = st.floats(1e-2, 1e2)
ratio = st.floats(0.01, 0.99)


def test_occupation_ground():
    assert occupation_ground(0.0, 1.0) == 0.5
    assert abs(occupation_ground(100.0, 1.0) - 1.0) < 1e-12
    assert occupation_ground(1.0, 1.0) == pytest.approx(0.7310585786300049, rel=1e-15)
    # no overflow far into the frozen-out regime
    assert occupation_ground(1e4, 1.0) == 1.0


@pytest.mark.parametrize("t", [0.0, -1.0, math.inf, math.nan])
def test_occupation_rejects_bad_temperature(t):
    with pytest.raises(DomainError):
        occupation_ground(1.0, t)


def test_initial_energy():
    assert initial_energy(1.0, 0.01) < 1e-12
    assert initial_energy(1.0, 1e6) == pytest.approx(0.5, abs=1e-6)
    assert initial_energy(1.0, 1.0) == pytest.approx(0.2689414213699951, rel=1e-15)


def test_final_energy():
    assert final_energy(1.3, 1.3, 0.7) == pytest.approx(initial_energy(1.3, 0.7), rel=1e-15)
    assert final_energy(2.0, 1.0, 1.0) == pytest.approx(0.5378828427399902, rel=1e-15)
    assert final_energy(1.0, 100.0, 1.0) < 1e-12


def test_cycle_equal_spacings(baths):
    q = cycle(EngineConfig(1.0, 1.0), baths)
    assert q.work == 0 and q.heat_hot > 0 and q.efficiency == 0


def test_cycle_carnot_edge(baths):
    q = cycle(EngineConfig(1.0, 0.5), baths)
    assert q.work == 0 and q.heat_hot == 0
    assert q.efficiency == 0.5


def test_cycle_final_temperatures(baths):
    q = cycle(EngineConfig(2.0, 1.0), baths)
    assert q.temp_final_hot_side == 1.0
    assert q.temp_final_cold_side == 0.5


@pytest.mark.parametrize(
    "a2, expected", [(0.7, True), (1.1, False), (0.4, False), (0.5, True), (1.0, True)]
)
def test_is_engine(baths, a2, expected):
    assert is_engine(EngineConfig(1.0, a2), baths) is expected


def test_heat_capacity():
    assert heat_capacity(1e-4, 1.0) < 1e-6
    assert heat_capacity(100.0, 1.0) < 1e-12
    assert heat_capacity(1e5, 1.0) == 0.0
    assert heat_capacity(1.0, 1.0) == pytest.approx(0.19661193324148185, rel=1e-14)
    x = np.linspace(0.01, 20, 20001)
    assert heat_capacity(x, 1.0).max() == pytest.approx(0.43923, abs=1e-5)


def test_invalid_configs():
    with pytest.raises(DomainError):
        EngineConfig(0.0, 1.0)
    with pytest.raises(DomainError):
        BathPair(0.5, 1.0)
    with pytest.raises(DomainError):
        BathPair.from_theta(1.0, 1.0)


def _enumerate_min(a1, a2, t1, t2):
    # independent brute force over the 24 level assignments
    r1 = 1 / (1 + math.exp(-a1 / t1))
    s1 = 1 / (1 + math.exp(-a2 / t2))
    probs = [r1 * s1, r1 * (1 - s1), (1 - r1) * s1, (1 - r1) * (1 - s1)]
    levels = [0.0, a2, a1, a1 + a2]
    best = min(sum(p * e for p, e in zip(perm, levels)) for perm in itertools.permutations(probs))
    swap = a1 * (1 - s1) + a2 * (1 - r1)
    return best, swap


@pytest.mark.parametrize("a1, a2, t1, t2", [(2, 1, 1, 0.5), (1, 1, 1, 0.5), (1, 1, 3, 0.1)])
def test_swap_optimal_examples(a1, a2, t1, t2):
    assert swap_is_optimal(EngineConfig(a1, a2), BathPair(t1, t2))


def test_swap_not_optimal_below_engine_band():
    # a2 = 0.2 < a1 theta = 0.45: the identity leaves less energy than the swap
    cfg, b = EngineConfig(3.0, 0.2), BathPair(2.0, 0.3)
    best, swap = _enumerate_min(3.0, 0.2, 2.0, 0.3)
    # identity assignment a1 r2 + a2 s2 vs swap a1 s2 + a2 r2 (mpmath, 30 digits)
    assert best == pytest.approx(0.6151252976659056, rel=1e-14)
    assert swap == pytest.approx(1.0542159984638197, rel=1e-14)
    assert not swap_is_optimal(cfg, b)


@settings(max_examples=300, deadline=None)
@given(a1=spacing, frac=st.floats(1e-3, 1.0), t1=temperature, th=ratio)
def test_swap_optimal_iff_engine_side(a1, frac, t1, th):
    b = BathPair.from_theta(t1, th)
    a2 = a1 * frac
    cfg = EngineConfig(a1, a2)
    best, swap = _enumerate_min(a1, a2, b.t_hot, b.t_cold)
    expected = swap <= best + 1e-12 * max(best, swap, 1e-300)
    assert swap_is_optimal(cfg, b) is expected
    if a2 / b.t_cold > a1 / b.t_hot * (1 + 1e-9):
        assert expected


def test_swap_optimal_random_engine_draws():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        t1 = rng.uniform(0.1, 10)
        b = BathPair(t1, t1 * rng.uniform(0.01, 0.99))
        a1 = rng.uniform(0.01, 10)
        a2 = a1 * rng.uniform(b.theta, 1.0)
        assert swap_is_optimal(EngineConfig(a1, a2), b)


@settings(max_examples=300, deadline=None)
@given(a1=spacing, a2=spacing, t1=temperature, th=ratio)
def test_energy_conservation(a1, a2, t1, th):
    q = cycle(EngineConfig(a1, a2), BathPair.from_theta(t1, th))
    assert abs(q.work - (q.heat_hot + q.heat_cold)) <= 1e-12 * max(1.0, abs(q.work))


@settings(max_examples=300, deadline=None)
@given(a1=spacing, frac=st.floats(0.0, 1.0), t1=temperature, th=ratio)
def test_engine_band_signs_and_carnot(a1, frac, t1, th):
    b = BathPair.from_theta(t1, th)
    a2 = a1 * (th + frac * (1 - th))
    cfg = EngineConfig(a1, a2)
    if not is_engine(cfg, b):
        return
    q = cycle(cfg, b)
    assert q.work >= -1e-14 and q.heat_hot >= -1e-14
    assert q.efficiency <= 1 - th + 1e-14
    if a1 * th * (1 + 1e-9) < a2 < a1 * (1 - 1e-9) and q.heat_hot > 1e-300:
        assert q.work > 0 and q.heat_hot > 0


@pytest.mark.parametrize("lam", [0.1, 10.0])
@settings(max_examples=100, deadline=None)
@given(a1=spacing, a2=spacing, t1=temperature, th=ratio)
def test_scale_covariance(lam, a1, a2, t1, th):
    b = BathPair.from_theta(t1, th)
    q = cycle(EngineConfig(a1, a2), b)
    qs = cycle(EngineConfig(lam * a1, lam * a2), BathPair(lam * b.t_hot, lam * b.t_cold))
    for name in ("work", "heat_hot", "heat_cold"):
        # a1 - a2 rounds differently once scaled, so allow one ulp of the spacings
        scale_abs = 1e-15 * lam * max(a1, a2)
        assert getattr(qs, name) == pytest.approx(lam * getattr(q, name), rel=1e-12,
                                                  abs=scale_abs)
    assert qs.efficiency == pytest.approx(q.efficiency, rel=1e-14, abs=1e-15)


@settings(max_examples=300, deadline=None)
@given(a1=spacing, a2=spacing, t1=temperature, th=ratio)
def test_final_temperature_product(a1, a2, t1, th):
    b = BathPair.from_theta(t1, th)
    q = cycle(EngineConfig(a1, a2), b)
    assert q.temp_final_hot_side * q.temp_final_cold_side == pytest.approx(
        b.t_hot * b.t_cold, rel=1e-14)

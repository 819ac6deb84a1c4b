"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the collected lines
are repeated in the terminal summary. ``python tests/test_acceptance.py``
prints them without pytest.
"""

import math
import time

import numpy as np
from scipy import integrate

from swapengine import engine, expectations, oracle, priors
from swapengine.constrained import (
    ConstrainedSpec,
    asymptotic_expected_work,
    curzon_ahlborn,
    expected_work_constrained,
    maximize_expected_work,
    work_ratio,
    zhang_efficiency,
)
from swapengine.engine import BathPair, EngineConfig
from swapengine.expectations import Observer
from swapengine.priors import JointPriorSpec, PriorSupport
from swapengine.quadrature import QuadratureSpec

TIGHT = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-12)
THETAS = [round(0.1 * k, 1) for k in range(1, 10)]
RESULTS = []


def report(number, name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {name} ({detail})"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_01_engine_band():
    start = time.perf_counter()
    b = BathPair(1.0, 0.5)
    a = np.linspace(0.01, 10.0, 200)
    a1, a2 = np.meshgrid(a, a, indexing="ij")
    band = np.vectorize(lambda x, y: engine.is_engine(EngineConfig(x, y), b))(a1, a2)
    signs = (engine.work(a1, a2, b) >= -1e-12) & (engine.heat_hot(a1, a2, b) >= -1e-12)
    mismatches = int(np.sum(band != signs))
    elapsed = time.perf_counter() - start
    report(1, "engine band", mismatches == 0 and elapsed < 1.0,
           f"{mismatches} mismatches on 200x200, {elapsed:.2f}s")


def test_02_swap_optimality():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    failures = 0
    for _ in range(1000):
        t1 = rng.uniform(0.1, 5.0)
        b = BathPair(t1, t1 * rng.uniform(0.05, 0.95))
        a1 = rng.uniform(0.01, 10.0)
        a2 = a1 * rng.uniform(b.theta, 1.0)
        failures += not engine.swap_is_optimal(EngineConfig(a1, a2), b)
    elapsed = time.perf_counter() - start
    report(2, "swap optimality", failures == 0 and elapsed < 1.0,
           f"{failures}/1000 engine configurations beat the swap, {elapsed:.2f}s")


def test_03_normalization_and_product_law():
    s, th = PriorSupport(0.1, 10.0), 0.5
    opts = dict(epsabs=1e-14, epsrel=1e-13)
    worst = abs(integrate.quad(lambda a: priors.marginal_density(a, s), s.a_min, s.a_max,
                               **opts)[0] - 1)
    for obs in Observer:
        lo, hi = priors.conditional_range(2.0, obs, th)
        v = integrate.quad(lambda x: priors.conditional_density(x, 2.0, obs, th), lo, hi,
                           **opts)[0]
        worst = max(worst, abs(v - 1))
        spec = JointPriorSpec(s, th, obs)
        if obs is Observer.A:
            v = integrate.dblquad(lambda y, x: priors.joint_density(x, y, spec), s.a_min,
                                  s.a_max, lambda x: x * th, lambda x: x, **opts)[0]
        else:
            v = integrate.dblquad(lambda x, y: priors.joint_density(x, y, spec), s.a_min,
                                  s.a_max, lambda y: y, lambda y: y / th, **opts)[0]
        worst = max(worst, abs(v - 1))

    rng = np.random.default_rng(3)
    product = 0.0
    for obs in Observer:
        first = priors.sample_marginal(s, rng.random(1000))
        second = priors.sample_conditional(first, obs, th, rng.random(1000))
        a1, a2 = (first, second) if obs is Observer.A else (second, first)
        joint = priors.joint_density(a1, a2, JointPriorSpec(s, th, obs))
        fact = priors.conditional_density(second, first, obs, th) * priors.marginal_density(
            first, s)
        product = max(product, float(np.max(np.abs(joint / fact - 1))))
    report(3, "prior normalization and product law", worst <= 1e-10 and product <= 1e-14,
           f"normalization {worst:.1e}, product law {product:.1e}")


def test_04_functional_equations():
    log_res = max(priors.verify_functional_equation(th, 100).log_residual
                  for th in (0.1, 0.5, 0.9))
    inv_res = priors.verify_scaling_equation(0.5).inverse_residual
    lin = float(priors.functional_equation_residual(lambda x: x, 1.0, 0.5))
    quad = float(priors.functional_equation_residual(lambda x: x * x, 1.0, 0.5))
    ok = log_res <= 1e-14 and inv_res <= 1e-14 and lin > 0.1 and quad > 0.1
    report(4, "functional equations", ok,
           f"ln residual {log_res:.1e}, 1/x residual {inv_res:.1e}, "
           f"linear {lin:.2f}, quadratic {quad:.2f}")


def test_05_observer_identity():
    b, s = BathPair(1.0, 0.5), PriorSupport(0.1, 10.0)
    e1a = expectations.expect_final_energy(1, Observer.A, b, s, TIGHT).value
    e2b = expectations.expect_final_energy(2, Observer.B, b, s, TIGHT).value
    ident = abs(e1a / e2b - 1)
    bp = expectations.final_energy_by_parts(2, Observer.B, b, s, TIGHT).value
    parts = abs(bp / e2b - 1)
    report(5, "observer identity", ident <= 1e-9 and parts <= 1e-8,
           f"A vs B {ident:.1e}, by parts vs nested {parts:.1e}")


def test_06_asymptotic_limit():
    b = BathPair(1.0, 0.5)
    s = PriorSupport(1e-6 * b.t_cold, 1e6 * b.t_hot)
    c = expectations.expect_heat_capacity(b, s).value
    ratios = [expectations.expect_initial_energy(i, b, s).value / (c * t)
              for i, t in ((1, b.t_hot), (2, b.t_cold))]
    target = math.log(2) / s.log_range * b.t_hot * (1 - b.theta) / -math.log(b.theta)
    fin = max(abs(expectations.expect_final_energy(i, obs, b, s, TIGHT,
                                                   route="quadrature").value / target - 1)
              for i in (1, 2) for obs in Observer)
    c_half = expectations.expect_heat_capacity(BathPair(0.5, 0.25), s).value
    cap = abs(c_half / c - 1)
    ok = all(0.99 <= r <= 1.01 for r in ratios) and fin <= 0.01 and cap <= 1e-3
    report(6, "asymptotic limit", ok,
           f"E_ini/(C T) = {ratios[0]:.5f}, {ratios[1]:.5f}; worst E_fin {fin:.1e}; "
           f"C(T=1) vs C(T=0.5) {cap:.1e}")


def test_07_common_final_temperature():
    worst = 0.0
    for th in THETAS:
        b = BathPair.from_theta(1.0, th)
        ref = b.t_hot * (1 - th) / math.log(1 / th)
        for s in (PriorSupport(0.5, 2.0), PriorSupport.asymptotic(b.t_hot, b.t_cold)):
            for side in (1, 2):
                for obs in Observer:
                    v = expectations.expect_final_temperature(side, obs, b, s, TIGHT).value
                    worst = max(worst, abs(v / ref - 1))
    report(7, "common final temperature", worst <= 1e-8,
           f"worst relative gap {worst:.1e} over 9 theta, 2 supports")


def test_08_expected_efficiency():
    worst = 0.0
    for th in THETAS:
        b = BathPair.from_theta(1.0, th)
        s = PriorSupport.asymptotic(b.t_hot, b.t_cold)
        formula = expectations.expected_efficiency(th)
        for obs in Observer:
            q1, q2 = expectations.expect_heats(obs, b, s, TIGHT, route="quadrature")
            worst = max(worst, abs((1 + q2.value / q1.value) / formula - 1))
    eps = np.linspace(1e-3, 1e-2, 50)
    eta = np.array([expectations.expected_efficiency(1 - e) for e in eps])
    coef, *_ = np.linalg.lstsq(np.column_stack([eps, eps**2, eps**3]), eta, rcond=None)
    c1, c2 = coef[0], coef[1]
    ok = worst <= 5e-3 and abs(c1 - 1 / 3) <= 1e-3 and abs(c2 - 1 / 9) <= 1e-2
    report(8, "expected efficiency", ok,
           f"quadrature vs formula {worst:.1e}; fit c1={c1:.6f}, c2={c2:.5f}")


def test_09_curzon_ahlborn():
    start = time.perf_counter()
    thetas = [0.1, 0.2, 0.25, 0.3, 0.5, 0.6, 0.7, 0.81, 0.9]
    gap = 0.0
    for th in thetas:
        b = BathPair.from_theta(1.0, th)
        eta, _ = maximize_expected_work(b, PriorSupport.asymptotic(b.t_hot, b.t_cold))
        gap = max(gap, abs(eta - curzon_ahlborn(th)))
    b = BathPair(1.0, 0.5)
    closed_vs_quad = 0.0
    wide_gap = 0.0
    wide = PriorSupport.asymptotic(b.t_hot, b.t_cold)
    for eta in (0.1, 0.25, 0.4):
        narrow = ConstrainedSpec(eta, b, PriorSupport(0.1, 10.0))
        for obs in Observer:
            c = expected_work_constrained(obs, narrow).value
            q = expected_work_constrained(obs, narrow, "quadrature", TIGHT).value
            closed_vs_quad = max(closed_vs_quad, abs(c - q))
            w = expected_work_constrained(obs, ConstrainedSpec(eta, b, wide)).value
            wide_gap = max(wide_gap, abs(w / asymptotic_expected_work(eta, b, wide) - 1))
    elapsed = time.perf_counter() - start
    ok = gap <= 1e-8 and closed_vs_quad <= 1e-9 and wide_gap <= 0.01 and elapsed < 5.0
    report(9, "Curzon-Ahlborn optimum", ok,
           f"optimizer gap {gap:.1e}, closed vs quadrature {closed_vs_quad:.1e}, "
           f"wide vs asymptote {wide_gap:.1e}, {elapsed:.2f}s")


def test_10_work_ratio():
    r_end = work_ratio(0.999)
    grid = np.linspace(0.01, 0.999, 100)
    r = np.array([work_ratio(t) for t in grid])
    below = bool(np.all(r < 1))
    interior = r[1:-1]
    local_max = int(np.sum((interior > r[:-2] + 1e-12) & (interior > r[2:] + 1e-12)))
    ok = 0.749 <= r_end <= 0.751 and below and local_max == 0
    report(10, "work ratio", ok,
           f"ratio(0.999)={r_end:.6f}, max on grid {r.max():.4f}, {local_max} local maxima")


def test_11_zhang_comparison():
    eps = np.geomspace(1e-3, 1e-1, 60)
    scaled = np.array([abs(zhang_efficiency(1 - e) - expectations.expected_efficiency(1 - e))
                       / e**3 for e in eps])
    report(11, "Zhang comparison", bool(np.all(np.isfinite(scaled)) and scaled.max() < 0.01),
           f"|zhang - eta| / eps^3 in [{scaled.min():.2e}, {scaled.max():.2e}]")


def test_12_monte_carlo():
    b, s = BathPair(1.0, 0.5), PriorSupport(0.1, 10.0)
    worst = 0.0
    names = ["W", "Q1", "E_ini_1", "E_fin_1", "T1_final", "C_1"]
    for k, q in enumerate(names):
        fn = oracle.QUANTITIES[q]
        for obs in Observer:
            if q == "T1_final":
                ref = expectations.common_final_temperature(b)
            elif q == "E_ini_1" and obs is Observer.A:
                ref = expectations.expect_initial_energy(1, b, s).value
            elif q == "C_1" and obs is Observer.A:
                ref = expectations.expect_heat_capacity(b, s).value
            else:
                ref = expectations.expect_quantity(
                    lambda x, y, fn=fn: float(fn(x, y, b)), obs, b, s, TIGHT).value
            r = oracle.mc_expectation(q, obs, b, s, 1_000_000, seed=7000 + 2 * k
                                      + (obs is Observer.B))
            worst = max(worst, r.sigma_deviation(ref))
    report(12, "Monte Carlo oracle", worst <= 3.0,
           f"worst deviation {worst:.2f} standard errors over 12 estimates at n=1e6")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                pass

"""Named invariant checks shared by the ``verify`` command.

Each check measures one discrepancy and compares it against a fixed
tolerance. ``tolerance_scale`` multiplies every tolerance; it exists so the
failure path can be exercised deliberately.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate

from . import constrained, engine, expectations, oracle, priors
from .engine import BathPair, EngineConfig
from .priors import JointPriorSpec, Observer, PriorSupport
from .quadrature import TIGHT

LEVELS = {"fast": 10_000, "full": 1_000_000}


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    tolerance: float
    passed: bool
    note: str = ""

    def as_dict(self):
        return asdict(self)


def _check(name, measured, tol, scale, note=""):
    measured = float(measured)
    return CheckResult(name, measured, tol * scale, bool(measured <= tol * scale), note)


def _normalization(scale):
    out = []
    s = PriorSupport(0.1, 10.0)
    th = 0.5
    v, _ = integrate.quad(lambda a: float(priors.marginal_density(a, s)), s.a_min, s.a_max,
                          epsabs=1e-14, epsrel=1e-13, limit=200)
    out.append(_check("prior.marginal_normalization", abs(v - 1), 1e-10, scale))
    for obs in Observer:
        given = 2.0
        lo, hi = priors.conditional_range(given, obs, th)
        v, _ = integrate.quad(
            lambda x: float(priors.conditional_density(x, given, obs, th)), lo, hi,
            epsabs=1e-14, epsrel=1e-13)
        out.append(_check(f"prior.conditional_normalization[{obs.value}]", abs(v - 1),
                          1e-10, scale))
        spec = JointPriorSpec(s, th, obs)
        if obs is Observer.A:
            v, _ = integrate.dblquad(lambda a2, a1: spec.norm / (a1 * a2), s.a_min, s.a_max,
                                     lambda a1: a1 * th, lambda a1: a1,
                                     epsabs=1e-14, epsrel=1e-13)
        else:
            v, _ = integrate.dblquad(lambda a1, a2: spec.norm / (a1 * a2), s.a_min, s.a_max,
                                     lambda a2: a2, lambda a2: a2 / th,
                                     epsabs=1e-14, epsrel=1e-13)
        out.append(_check(f"prior.joint_normalization[{obs.value}]", abs(v - 1), 1e-10,
                          scale))
    return out


def _functional(scale):
    out = []
    for th in (0.1, 0.5, 0.9):
        rep = priors.verify_functional_equation(th, 100)
        out.append(_check(f"functional_eq.log_residual[theta={th}]", rep.log_residual,
                          1e-14, scale))
        out.append(_check(f"functional_eq.affine_span[theta={th}]",
                          rep.affine_deviation + abs(rep.nullspace_dim - 2), rep.tolerance,
                          scale))
    rep = priors.verify_scaling_equation(0.5)
    out.append(_check("scaling_eq.inverse_residual", rep.inverse_residual, 1e-14, scale))
    lin = float(priors.functional_equation_residual(lambda x: x, 1.0, 0.5))
    quad_ = float(priors.functional_equation_residual(lambda x: x * x, 1.0, 0.5))
    # a trial function is rejected when its residual clearly exceeds 0.1
    out.append(_check("functional_eq.rejects_linear", 0.1 / lin, 1.0, scale))
    out.append(_check("functional_eq.rejects_quadratic", 0.1 / quad_, 1.0, scale))
    return out


def _engine(scale):
    rng = np.random.default_rng(7)
    bad = 0
    for _ in range(1000):
        t1 = rng.uniform(0.1, 5.0)
        b = BathPair(t1, t1 * rng.uniform(0.05, 0.95))
        a1 = rng.uniform(0.01, 10.0)
        a2 = a1 * rng.uniform(b.theta, 1.0)
        bad += not engine.swap_is_optimal(EngineConfig(a1, a2), b)
    a = np.linspace(0.01, 10.0, 200)
    a1, a2 = np.meshgrid(a, a, indexing="ij")
    b = BathPair(1.0, 0.5)
    w = engine.work(a1, a2, b)
    q1 = engine.heat_hot(a1, a2, b)
    band = (a1 * b.theta <= a2) & (a2 <= a1)
    sign_ok = (w >= -1e-12) & (q1 >= -1e-12)
    mismatch = int(np.sum(band != sign_ok))
    return [
        _check("engine.swap_optimality_failures", bad, 0, scale),
        _check("engine.band_mismatches", mismatch, 0, scale),
    ]


def _expectations(scale):
    out = []
    b = BathPair(1.0, 0.5)
    narrow = PriorSupport(0.1, 10.0)
    e1a = expectations.expect_final_energy(1, Observer.A, b, narrow, TIGHT)
    e2b = expectations.expect_final_energy(2, Observer.B, b, narrow, TIGHT)
    out.append(_check("expect.observer_identity", abs(e1a.value / e2b.value - 1), 1e-9,
                      scale))
    bp = expectations.final_energy_by_parts(2, Observer.B, b, narrow, TIGHT)
    out.append(_check("expect.by_parts_vs_nested", abs(bp.value / e2b.value - 1), 1e-8,
                      scale))

    wide = PriorSupport.asymptotic(b.t_hot, b.t_cold)
    c = expectations.expect_heat_capacity(b, wide, 1).value
    for i, t in ((1, b.t_hot), (2, b.t_cold)):
        e = expectations.expect_initial_energy(i, b, wide).value
        out.append(_check(f"asymptotic.E_ini_over_CT[{i}]", abs(e / (c * t) - 1), 0.01,
                          scale))
    target = expectations.expect_final_energy(1, Observer.A, b, wide, route="asymptotic")
    for i in (1, 2):
        for obs in Observer:
            v = expectations.expect_final_energy(i, obs, b, wide, TIGHT,
                                                 route="quadrature").value
            out.append(_check(f"asymptotic.E_fin[{i},{obs.value}]",
                              abs(v / target.value - 1), 0.01, scale))
    c_half = expectations.expect_heat_capacity(BathPair(1.0, 0.5), wide, 2).value
    out.append(_check("asymptotic.capacity_temperature_independence",
                      abs(c_half / c - 1), 1e-3, scale))

    worst = 0.0
    for th in np.round(np.arange(0.1, 1.0, 0.1), 10):
        bb = BathPair.from_theta(1.0, th)
        ref = expectations.common_final_temperature(bb)
        for sup in (PriorSupport(0.5, 2.0), PriorSupport.asymptotic(bb.t_hot, bb.t_cold)):
            for side in (1, 2):
                for obs in Observer:
                    v = expectations.expect_final_temperature(side, obs, bb, sup, TIGHT).value
                    worst = max(worst, abs(v / ref - 1))
    out.append(_check("expect.common_final_temperature", worst, 1e-8, scale))
    return out


def _constrained(scale):
    worst = 0.0
    for th in (0.1, 0.2, 0.25, 0.3, 0.5, 0.6, 0.7, 0.81, 0.9):
        bb = BathPair.from_theta(1.0, th)
        eta, _ = constrained.maximize_expected_work(
            bb, PriorSupport.asymptotic(bb.t_hot, bb.t_cold))
        worst = max(worst, abs(eta - constrained.curzon_ahlborn(th)))
    return [
        _check("constrained.curzon_ahlborn_optimum", worst, 1e-8, scale),
        _check("constrained.work_ratio_limit", abs(constrained.work_ratio(0.999) - 0.75),
               1e-3, scale),
    ]


def _monte_carlo(n, scale):
    b = BathPair(1.0, 0.5)
    s = PriorSupport(0.1, 10.0)
    refs = {
        ("E_ini_1", Observer.A): expectations.expect_initial_energy(1, b, s).value,
        ("E_ini_2", Observer.B): expectations.expect_initial_energy(2, b, s).value,
        ("C_1", Observer.A): expectations.expect_heat_capacity(b, s, 1).value,
        ("Q1", Observer.A): expectations.expect_heats(Observer.A, b, s, TIGHT)[0].value,
        ("T1_final", Observer.B): expectations.common_final_temperature(b),
    }
    for i in (1, 2):
        for obs in Observer:
            refs[(f"E_fin_{i}", obs)] = expectations.expect_final_energy(
                i, obs, b, s, TIGHT).value
    for obs in Observer:
        refs[("W", obs)] = expectations.expect_quantity(
            lambda a1, a2: float(engine.work(a1, a2, b)), obs, b, s, TIGHT).value

    out = []
    for k, ((q, obs), ref) in enumerate(sorted(refs.items(), key=lambda kv: (kv[0][0], kv[0][1].value))):
        r = oracle.mc_expectation(q, obs, b, s, n, seed=1000 + k)
        out.append(_check(f"mc.{q}[{obs.value}]", r.sigma_deviation(ref), 3.0, scale,
                          note=f"mean={r.mean:.9g} ref={ref:.9g} se={r.std_error:.3g}"))
    return out


def run_checks(level: str = "fast", tolerance_scale: float = 1.0) -> list[CheckResult]:
    if level not in LEVELS:
        raise ValueError(f"level must be one of {sorted(LEVELS)}")
    results = []
    results += _normalization(tolerance_scale)
    results += _functional(tolerance_scale)
    results += _engine(tolerance_scale)
    results += _expectations(tolerance_scale)
    results += _constrained(tolerance_scale)
    results += _monte_carlo(LEVELS[level], tolerance_scale)
    return results

"""Prior-averaged engine quantities.

Each expectation is available through several independent routes:

* ``closed_form``: the integral done analytically (where it closes),
* ``quadrature``: nested adaptive quadrature over the observer's joint prior,
* ``asymptotic``: the wide-support limit a_min << t_cold, a_max >> t_hot,

and `swapengine.oracle` adds Monte Carlo. The joint prior is K/(a1 a2), so in
log coordinates u = ln a1, v = ln a2 it is the constant K and every double
integral below is K times the integral of the bare quantity over a
parallelogram. Asymptotic results report a zero error estimate; their
deviation from the exact value is a modelling limit, not a numerical error.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from .engine import BathPair, DomainError
from .priors import Observer, PriorSupport
from .quadrature import QuadratureSpec, nested_quad, quad

__all__ = [
    "Route",
    "ExpectationResult",
    "ConsistencyError",
    "fermi_integral",
    "expect_quantity",
    "expect_initial_energy",
    "expect_final_energy",
    "final_energy_by_parts",
    "ByPartsResult",
    "common_final_temperature",
    "expect_final_temperature",
    "expect_heats",
    "expect_work",
    "expected_efficiency",
    "expect_heat_capacity",
]

LN2 = math.log(2.0)
# below this distance from theta = 1 the removable 0/0 forms switch to series
SERIES_THRESHOLD = 1e-4


class Route(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"
    MONTE_CARLO = "monte_carlo"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class ExpectationResult:
    value: float
    error_estimate: float
    route: Route
    evaluations: int = 0

    def __post_init__(self):
        if not self.error_estimate >= 0:
            raise ValueError("error_estimate must be non-negative")
        if self.route is Route.CLOSED_FORM and self.error_estimate != 0:
            raise ValueError("closed-form results carry no error estimate")

    def __float__(self):
        return float(self.value)


class ConsistencyError(RuntimeError):
    """Two evaluation routes of the same integral disagree."""


def _route(route) -> Route:
    return route if isinstance(route, Route) else Route(route)


def _exact(value) -> ExpectationResult:
    return ExpectationResult(float(value), 0.0, Route.CLOSED_FORM)


def _asymptotic(value) -> ExpectationResult:
    return ExpectationResult(float(value), 0.0, Route.ASYMPTOTIC)


# --- scalar kernels ---------------------------------------------------------


def _fermi(x: float) -> float:
    if x >= 0:
        e = math.exp(-x)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(x))


def _softplus_neg(x: float) -> float:
    """ln(1 + e^{-x})."""
    if x < -30:
        return -x + math.log1p(math.exp(x))
    return math.log1p(math.exp(-x))


def _softplus_gap(x0: float, dx: float) -> float:
    """ln(1 + e^{-x0}) - ln(1 + e^{-x0-dx}) for x0, dx >= 0.

    Written as a single log1p so that narrow supports, where the two
    softplus values nearly coincide, keep full relative precision.
    """
    gap = -math.exp(-x0) * math.expm1(-dx)
    return math.log1p(gap / (1.0 + math.exp(-x0 - dx)))


def fermi_integral(t: float, support: PriorSupport) -> float:
    """Integral of 1/(1+e^{a/t}) da over the support.

    Uses the antiderivative -t ln(1 + e^{-a/t}); the textbook form
    (a_max - a_min) + t ln((1+e^{a_min/t})/(1+e^{a_max/t})) cancels
    catastrophically once a_max >> t.
    """
    x0 = support.a_min / t
    return t * _softplus_gap(x0, (support.a_max - support.a_min) / t)


def _norm(baths: BathPair, support: PriorSupport) -> float:
    return 1.0 / (-math.log(baths.theta) * support.log_range)


def _check_index(i):
    if i not in (1, 2):
        raise DomainError(f"system index must be 1 or 2, got {i}")


def _temperature(baths, i):
    return baths.t_hot if i == 1 else baths.t_cold


# --- generic joint-prior quadrature -----------------------------------------


def expect_quantity(
    f: Callable[[float, float], float],
    observer: Observer,
    baths: BathPair,
    support: PriorSupport,
    quad_spec: QuadratureSpec | None = None,
) -> ExpectationResult:
    """Average f(a1, a2) over the observer's joint prior by nested quadrature."""
    spec = quad_spec or QuadratureSpec()
    k = _norm(baths, support)
    lo, hi = math.log(support.a_min), math.log(support.a_max)
    d = -math.log(baths.theta)
    kinks = (math.log(baths.t_cold), math.log(baths.t_hot))

    if observer is Observer.A:
        # outer u = ln a1, inner v = ln a2 over [u - d, u]
        def g(u, v):
            return f(math.exp(u), math.exp(v))

        def inner(u):
            return u - d, u
    else:
        # outer v = ln a2, inner u = ln a1 over [v, v + d]
        def g(v, u):
            return f(math.exp(u), math.exp(v))

        def inner(v):
            return v, v + d

    value, err, n = nested_quad(g, (lo, hi), inner, spec, outer_points=kinks)
    return ExpectationResult(k * value, k * err, Route.QUADRATURE, n)


# --- initial energy ---------------------------------------------------------


def expect_initial_energy(
    system: int,
    baths: BathPair,
    support: PriorSupport,
    route: Route | str = Route.CLOSED_FORM,
    quad_spec: QuadratureSpec | None = None,
) -> ExpectationResult:
    """Initial energy of system 1 (R) or 2 (S) averaged over the 1/a marginal."""
    _check_index(system)
    route = _route(route)
    t = _temperature(baths, system)
    big_l = support.log_range
    if route is Route.CLOSED_FORM:
        return _exact(fermi_integral(t, support) / big_l)
    if route is Route.ASYMPTOTIC:
        return _asymptotic(LN2 * t / big_l)
    if route is Route.QUADRATURE:
        spec = quad_spec or QuadratureSpec()
        # a/(1+e^{a/t}) * da/(a L) becomes e^u fermi(e^u/t) du / L
        v, e, n = quad(
            lambda u: math.exp(u) * _fermi(math.exp(u) / t),
            math.log(support.a_min), math.log(support.a_max), spec, (math.log(t),),
        )
        return ExpectationResult(v / big_l, e / big_l, route, n)
    raise DomainError(f"route {route.value!r} not available for the initial energy")


# --- final energy -----------------------------------------------------------


def _final_energy_integrand(system, baths):
    t1, t2 = baths.t_hot, baths.t_cold
    if system == 1:
        return lambda a1, a2: a1 * _fermi(a2 / t2)
    return lambda a1, a2: a2 * _fermi(a1 / t1)


def _nested_pair(system, observer):
    # the two (system, observer) pairs without a closed form
    return (system, observer) in ((1, Observer.A), (2, Observer.B))


@dataclass(frozen=True)
class ByPartsResult:
    """Final energy after integrating the outer variable by parts."""

    value: float
    boundary_term: float
    bulk_term: float
    error_estimate: float
    evaluations: int


def _band_log_integral(a, t, d, spec):
    """Integral over x in [a, a e^d] of dx / ((1 + e^{x/t}) x), in w = ln x."""
    lo = math.log(a)
    return quad(lambda w: _fermi(math.exp(w) / t), lo, lo + d, spec, (math.log(t),))


def final_energy_by_parts(
    system: int,
    observer: Observer,
    baths: BathPair,
    support: PriorSupport,
    quad_spec: QuadratureSpec | None = None,
) -> ByPartsResult:
    """Evaluate the nested final-energy integral after one integration by parts.

    With I(a) = integral of dx / ((1+e^{x/T1}) x) over [a, a/theta], the
    nested integral K * int I(a) da becomes

        K [a I(a)]_{a_min}^{a_max} - K (F(T2) - F(T1)),

    F(t) being `fermi_integral`. Only the two boundary values of I need
    quadrature. Observer A's system-1 integral maps onto the same expression
    under x -> x theta, so both nested pairs share it.
    """
    _check_index(system)
    if not _nested_pair(system, observer):
        raise DomainError("the by-parts form applies to (1, A) and (2, B) only")
    spec = quad_spec or QuadratureSpec()
    k = _norm(baths, support)
    d = -math.log(baths.theta)
    t1 = baths.t_hot
    i_hi, e_hi, n_hi = _band_log_integral(support.a_max, t1, d, spec)
    i_lo, e_lo, n_lo = _band_log_integral(support.a_min, t1, d, spec)
    boundary = k * (support.a_max * i_hi - support.a_min * i_lo)
    bulk = -k * (fermi_integral(baths.t_cold, support) - fermi_integral(t1, support))
    err = k * (support.a_max * e_hi + support.a_min * e_lo)
    return ByPartsResult(boundary + bulk, boundary, bulk, err, n_hi + n_lo)


def expect_final_energy(
    system: int,
    observer: Observer,
    baths: BathPair,
    support: PriorSupport,
    quad_spec: QuadratureSpec | None = None,
    route: Route | str | None = None,
) -> ExpectationResult:
    """Expected post-swap energy of system 1 or 2 as estimated by an observer.

    By default (2, A) and (1, B) use their closed forms and the other two
    pairs use nested quadrature, which is cross-checked against
    `final_energy_by_parts`; a disagreement above 10x the larger of the quadrature
    tolerance and the combined error estimates raises `ConsistencyError`.
    """
    _check_index(system)
    spec = quad_spec or QuadratureSpec()
    nested = _nested_pair(system, observer)
    route = _route(route or (Route.QUADRATURE if nested else Route.CLOSED_FORM))
    theta = baths.theta

    if route is Route.ASYMPTOTIC:
        return _asymptotic(
            LN2 / support.log_range * baths.t_hot * (1 - theta) / -math.log(theta)
        )
    if route is Route.CLOSED_FORM:
        if nested:
            raise DomainError(
                f"no closed form for system {system}, observer {observer.value}"
            )
        k = _norm(baths, support)
        if system == 2:
            return _exact(k * (1 - theta) * fermi_integral(baths.t_hot, support))
        return _exact(k * (1 / theta - 1) * fermi_integral(baths.t_cold, support))
    if route is not Route.QUADRATURE:
        raise DomainError(f"route {route.value!r} not available for the final energy")

    res = expect_quantity(_final_energy_integrand(system, baths), observer, baths,
                          support, spec)
    if nested:
        bp = final_energy_by_parts(system, observer, baths, support, spec)
        gap = abs(res.value - bp.value)
        # the two routes carry their own error estimates; near theta = 1 the
        # 1/ln(1/theta) normalization amplifies both well past the tolerance
        allowed = 10 * max(spec.tolerance_for(res.value),
                           res.error_estimate + bp.error_estimate)
        if gap > allowed:
            raise ConsistencyError(
                f"nested quadrature {res.value!r} and by-parts form {bp.value!r} "
                f"differ by {gap:.3g}"
            )
    return res


# --- final temperatures -----------------------------------------------------


def common_final_temperature(baths: BathPair) -> float:
    """t_hot (1 - theta) / ln(1/theta), the expected post-swap temperature."""
    eps = 1.0 - baths.theta
    if eps < SERIES_THRESHOLD:
        return baths.t_hot * (1 - eps / 2 - eps**2 / 12 - eps**3 / 24)
    return baths.t_hot * eps / -math.log(baths.theta)


def expect_final_temperature(
    side: int,
    observer: Observer,
    baths: BathPair,
    support: PriorSupport,
    quad_spec: QuadratureSpec | None = None,
    route: Route | str = Route.QUADRATURE,
) -> ExpectationResult:
    """Expected temperature of system 1 (t_cold a1/a2) or 2 (t_hot a2/a1)."""
    _check_index(side)
    route = _route(route)
    if route in (Route.CLOSED_FORM, Route.ASYMPTOTIC):
        # the integral closes exactly for every support
        return _exact(common_final_temperature(baths))
    if route is not Route.QUADRATURE:
        raise DomainError(f"route {route.value!r} not available for temperatures")
    t1, t2 = baths.t_hot, baths.t_cold
    if side == 1:
        f = lambda a1, a2: t2 * a1 / a2  # noqa: E731
    else:
        f = lambda a1, a2: t1 * a2 / a1  # noqa: E731
    return expect_quantity(f, observer, baths, support, quad_spec)


# --- heats, work, efficiency ------------------------------------------------


def _combine(a: ExpectationResult, b: ExpectationResult, sign=-1.0):
    route = a.route if a.route == b.route else Route.QUADRATURE
    value = a.value + sign * b.value
    err = a.error_estimate + b.error_estimate
    if route is Route.CLOSED_FORM:
        err = 0.0
    return ExpectationResult(value, err, route, a.evaluations + b.evaluations)


def expect_heats(
    observer: Observer,
    baths: BathPair,
    support: PriorSupport,
    quad_spec: QuadratureSpec | None = None,
    route: Route | str | None = None,
) -> tuple[ExpectationResult, ExpectationResult]:
    """(Q1, Q2) = expected initial minus final energy of each system.

    Q1 > 0 is heat taken from the hot bath, Q2 < 0 heat dumped into the cold
    one. The default route mixes closed forms and quadrature as
    `expect_final_energy` does; ``quadrature`` forces quadrature throughout and
    ``asymptotic`` returns the wide-support limits.
    """
    route = _route(route) if route is not None else None
    if route is Route.ASYMPTOTIC:
        th = baths.theta
        lnt = math.log(th)
        c = LN2 / support.log_range
        q1 = c * (1 + (1 - th) / lnt) * baths.t_hot
        q2 = c * (1 + (1 - th) / (th * lnt)) * baths.t_cold
        return _asymptotic(q1), _asymptotic(q2)
    if route not in (None, Route.QUADRATURE):
        raise DomainError(f"route {route.value!r} not available for heats")

    out = []
    for i in (1, 2):
        e_ini = expect_initial_energy(i, baths, support, route or Route.CLOSED_FORM,
                                      quad_spec)
        e_fin = expect_final_energy(i, observer, baths, support, quad_spec, route)
        out.append(_combine(e_ini, e_fin))
    return out[0], out[1]


def expect_work(
    observer: Observer,
    baths: BathPair,
    support: PriorSupport,
    quad_spec: QuadratureSpec | None = None,
    route: Route | str | None = None,
) -> ExpectationResult:
    """Expected work Q1 + Q2 as estimated by one observer."""
    q1, q2 = expect_heats(observer, baths, support, quad_spec, route)
    return _combine(q1, q2, sign=1.0)


def expected_efficiency(theta: float) -> float:
    """Efficiency 1 + Q2/Q1 from the wide-support heats; a function of theta only."""
    if not 0 < theta < 1:
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    eps = 1.0 - theta
    if eps < SERIES_THRESHOLD:
        return eps / 3 + eps**2 / 9 + 8 * eps**3 / 135
    lnt = math.log1p(-eps) if theta > 0.5 else math.log(theta)
    return 1.0 + (theta * lnt + eps) / (lnt + eps)


# --- heat capacity ----------------------------------------------------------


def _capacity_antiderivative(x: float) -> float:
    # integral of x e^x / (1+e^x)^2 dx = -(x/(1+e^x) + ln(1+e^{-x}))
    return -(x * _fermi(x) + _softplus_neg(x))


def _capacity(x: float) -> float:
    return x * x * _fermi(x) * _fermi(-x)


def expect_heat_capacity(
    baths: BathPair,
    support: PriorSupport,
    system: int = 1,
    route: Route | str = Route.CLOSED_FORM,
    quad_spec: QuadratureSpec | None = None,
) -> ExpectationResult:
    """Initial heat capacity of system 1 or 2 averaged over the 1/a marginal."""
    _check_index(system)
    route = _route(route)
    t = _temperature(baths, system)
    big_l = support.log_range
    if route is Route.CLOSED_FORM:
        x0, x1 = support.a_min / t, support.a_max / t
        dx = (support.a_max - support.a_min) / t
        if dx < 1.0:
            # G(x1) - G(x0) rearranged to avoid cancelling two close values;
            # fermi(x1) - fermi(x0) = -fermi(-x0) fermi(x1) expm1(dx)
            dh = -_fermi(-x0) * _fermi(x1) * math.expm1(dx)
            gap = dx * _fermi(x1) + x0 * dh - _softplus_gap(x0, dx)
            return _exact(-gap / big_l)
        g_hi = _capacity_antiderivative(x1)
        g_lo = _capacity_antiderivative(x0)
        return _exact((g_hi - g_lo) / big_l)
    if route is Route.ASYMPTOTIC:
        return _asymptotic(LN2 / big_l)
    if route is Route.QUADRATURE:
        spec = quad_spec or QuadratureSpec()
        v, e, n = quad(lambda u: _capacity(math.exp(u) / t),
                       math.log(support.a_min), math.log(support.a_max), spec,
                       (math.log(t),))
        return ExpectationResult(v / big_l, e / big_l, route, n)
    raise DomainError(f"route {route.value!r} not available for the heat capacity")

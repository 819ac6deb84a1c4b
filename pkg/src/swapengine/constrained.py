"""Expected work when the efficiency eta = 1 - a2/a1 is fixed in advance.

Only one spacing is then uncertain. Observer A puts the 1/x prior on a1,
observer B on a2 = a1 (1 - eta). In the wide-support limit both reduce to

    W(eta) = (ln 2 / L) * eta * (t_hot - t_cold / (1 - eta)),

which peaks at the Curzon-Ahlborn efficiency 1 - sqrt(theta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .engine import BathPair, DomainError
from .expectations import (
    LN2,
    SERIES_THRESHOLD,
    ExpectationResult,
    Route,
    _fermi,
    _route,
    expected_efficiency,
    fermi_integral,
)
from .optimize import Maximum, OptimizationError, golden_section_max
from .priors import Observer, PriorSupport
from .quadrature import QuadratureSpec, quad

__all__ = [
    "ConstrainedSpec",
    "work_at_efficiency",
    "expected_work_constrained",
    "asymptotic_expected_work",
    "curzon_ahlborn",
    "maximize_expected_work",
    "OptimizationError",
    "general_work_asymptotic",
    "work_ratio",
    "zhang_efficiency",
]


@dataclass(frozen=True)
class ConstrainedSpec:
    eta: float
    baths: BathPair
    support: PriorSupport

    def __post_init__(self):
        if not 0 < self.eta < 1:
            raise DomainError(f"eta must lie in (0, 1), got {self.eta}")
        # beyond the Carnot value the cycle stops being an engine
        if self.eta > 1 - self.baths.theta + 1e-15:
            raise DomainError(
                f"eta={self.eta} exceeds the Carnot efficiency {1 - self.baths.theta}"
            )


def work_at_efficiency(a1, spec: ConstrainedSpec):
    """Per-cycle work with a2 = a1 (1 - eta)."""
    if a1 <= 0:
        raise DomainError(f"a1 must be positive, got {a1}")
    t1, t2 = spec.baths.t_hot, spec.baths.t_cold
    eta = spec.eta
    return a1 * eta * (_fermi(a1 / t1) - _fermi(a1 * (1 - eta) / t2))


def expected_work_constrained(
    observer: Observer,
    spec: ConstrainedSpec,
    route: Route | str = Route.CLOSED_FORM,
    quad_spec: QuadratureSpec | None = None,
) -> ExpectationResult:
    """Expected work at fixed efficiency under observer A's or B's 1/x prior."""
    route = _route(route)
    eta, s = spec.eta, spec.support
    t1, t2 = spec.baths.t_hot, spec.baths.t_cold
    big_l = s.log_range
    if route is Route.ASYMPTOTIC:
        return ExpectationResult(asymptotic_expected_work(eta, spec.baths, s), 0.0, route)
    if route is Route.CLOSED_FORM:
        if observer is Observer.A:
            # a1 uncertain: bracket fermi(a1/t1) - fermi(a1/(t2/(1-eta)))
            v = eta / big_l * (fermi_integral(t1, s) - fermi_integral(t2 / (1 - eta), s))
        else:
            # a2 uncertain, a1 = a2/(1-eta)
            v = eta / ((1 - eta) * big_l) * (
                fermi_integral((1 - eta) * t1, s) - fermi_integral(t2, s)
            )
        return ExpectationResult(v, 0.0, route)
    if route is not Route.QUADRATURE:
        raise DomainError(f"route {route.value!r} not available for constrained work")

    qs = quad_spec or QuadratureSpec()
    if observer is Observer.A:
        w = lambda x: work_at_efficiency(x, spec)  # noqa: E731
    else:
        w = lambda x: work_at_efficiency(x / (1 - eta), spec)  # noqa: E731
    # W(x) dx / (x L) in u = ln x is W(e^u) du / L
    v, e, n = quad(lambda u: w(math.exp(u)), math.log(s.a_min), math.log(s.a_max), qs,
                   (math.log(t2), math.log(t1)))
    return ExpectationResult(v / big_l, e / big_l, route, n)


def asymptotic_expected_work(eta: float, baths: BathPair, support: PriorSupport) -> float:
    if not 0 <= eta < 1:
        raise DomainError(f"eta must lie in [0, 1), got {eta}")
    return LN2 / support.log_range * eta * (baths.t_hot - baths.t_cold / (1 - eta))


def curzon_ahlborn(theta: float) -> float:
    """1 - sqrt(theta), written to avoid cancellation near theta = 1."""
    return (1 - theta) / (1 + math.sqrt(theta))


def maximize_expected_work(baths: BathPair, support: PriorSupport, tol: float = 1e-10):
    """Numerically maximize the wide-support expected work over eta.

    Returns (eta_star, w_star). Raises `OptimizationError` if the search
    does not settle strictly inside (0, 1 - theta).
    """
    carnot = 1 - baths.theta
    lo, hi = 1e-9, carnot - 1e-9
    if not lo < hi:
        raise OptimizationError("Carnot efficiency too small to bracket", (lo, hi))
    # normalized so the objective is O(carnot^2) regardless of L and t_hot
    scale = LN2 / support.log_range * baths.t_hot

    def objective(eta):
        return asymptotic_expected_work(eta, baths, support) / scale

    m: Maximum = golden_section_max(objective, lo, hi, tol=tol * carnot)
    return m.x, m.fx * scale


# --- comparisons ------------------------------------------------------------


def general_work_asymptotic(baths: BathPair, support: PriorSupport) -> float:
    """Q1 + Q2 in the wide-support limit, both spacings uncertain.

    Equals (ln 2 / L) t_hot (1 + theta + 2 (1-theta)/ln theta); the bracket is
    O((1-theta)^2) and is expanded in series close to theta = 1.
    """
    th = baths.theta
    eps = 1 - th
    if eps < SERIES_THRESHOLD:
        g = eps**2 / 6 + eps**3 / 12 + 19 * eps**4 / 360
    else:
        lnt = math.log1p(-eps) if th > 0.5 else math.log(th)
        g = 1 + th + 2 * eps / lnt
    return LN2 / support.log_range * baths.t_hot * g


def work_ratio(
    theta: float,
    support: PriorSupport | None = None,
    baths: BathPair | None = None,
    efficiency: str = "expected",
) -> float:
    """General-case over fixed-efficiency expected work, both wide-support.

    The fixed-efficiency work is taken at the general case's own expected
    efficiency (``efficiency="expected"``) or at Curzon-Ahlborn
    (``efficiency="ca"``). The ratio depends on theta alone; `support` and
    `baths` only set the common scale and default to t_hot = 1 with the
    six-decade support.
    """
    if not 0 < theta < 1:
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    if efficiency not in ("expected", "ca"):
        raise DomainError(f"efficiency must be 'expected' or 'ca', got {efficiency!r}")
    if efficiency == "expected" and 1 - theta < SERIES_THRESHOLD:
        eps = 1 - theta
        return 0.75 + eps**2 / 240 + eps**3 / 240
    if baths is None:
        baths = BathPair.from_theta(1.0, theta)
    elif abs(baths.theta - theta) > 1e-12:
        raise DomainError(f"baths ratio {baths.theta} does not match theta={theta}")
    if support is None:
        support = PriorSupport.asymptotic(baths.t_hot, baths.t_cold)
    eta = expected_efficiency(theta) if efficiency == "expected" else curzon_ahlborn(theta)
    return general_work_asymptotic(baths, support) / asymptotic_expected_work(
        eta, baths, support
    )


def zhang_efficiency(theta: float) -> float:
    """2(1-theta)^2 / (3 - 2 theta (1 + ln theta) - theta^2)."""
    if not 0 < theta < 1:
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    eps = 1 - theta
    if eps < SERIES_THRESHOLD:
        return eps / 3 + eps**2 / 9 + eps**3 / 18
    lnt = math.log1p(-eps) if theta > 0.5 else math.log(theta)
    # 3 - 2 theta - theta^2 = eps (3 + theta), kept factored to avoid cancellation
    return 2 * eps * eps / (eps * (3 + theta) - 2 * theta * lnt)

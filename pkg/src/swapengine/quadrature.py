"""Adaptive 1-D and nested 2-D quadrature on top of QUADPACK."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

from scipy import integrate

from .engine import DomainError

__all__ = ["QuadratureSpec", "ConvergenceError", "quad", "nested_quad"]


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 16:
            raise DomainError("max_subdivisions must be at least 16")

    def tolerance_for(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


TIGHT = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-12, max_subdivisions=2000)


class ConvergenceError(RuntimeError):
    """Quadrature failed to reach the requested tolerance."""

    def __init__(self, message, best_estimate, error_estimate):
        super().__init__(f"{message} (best estimate {best_estimate!r} +/- {error_estimate:.3g})")
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


def quad(f: Callable[[float], float], lo: float, hi: float, spec: QuadratureSpec,
         points: Sequence[float] = ()):
    """Integrate f over [lo, hi]; returns (value, error_estimate, evaluations)."""
    pts = sorted(p for p in points if lo < p < hi) or None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(
            f, lo, hi, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
            limit=spec.max_subdivisions, points=pts, full_output=1,
        )
    value, err, info = out[0], out[1], out[2]
    ier = 0 if len(out) == 3 else 1
    if ier and err > 10 * spec.tolerance_for(value):
        raise ConvergenceError(out[3].split("\n")[0], value, err)
    return value, err, info["neval"]


def nested_quad(
    f: Callable[[float, float], float],
    outer: tuple[float, float],
    inner: Callable[[float], tuple[float, float]],
    spec: QuadratureSpec,
    outer_points: Sequence[float] = (),
    inner_points: Sequence[float] = (),
):
    """Integrate f(x, y) dy dx with y over inner(x) and x over `outer`.

    Returns (value, error_estimate, evaluations). The error estimate adds the
    outer QUADPACK estimate to the worst inner estimate times the outer length.
    """
    worst_inner = 0.0
    evals = 0

    def g(x):
        nonlocal worst_inner, evals
        lo, hi = inner(x)
        v, e, n = quad(lambda y: f(x, y), lo, hi, spec, inner_points)
        worst_inner = max(worst_inner, e)
        evals += n
        return v

    value, err, _ = quad(g, outer[0], outer[1], spec, outer_points)
    err = err + worst_inner * (outer[1] - outer[0])
    if not math.isfinite(value):
        raise ConvergenceError("non-finite nested integral", value, err)
    return value, err, evals

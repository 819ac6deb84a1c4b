"""Derivative-free 1-D maximization: golden-section search plus parabolic polish."""

from __future__ import annotations

import math
from dataclasses import dataclass

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI2 = (3 - math.sqrt(5)) / 2


class OptimizationError(RuntimeError):
    def __init__(self, message, bracket):
        super().__init__(f"{message}; bracket={bracket}")
        self.bracket = bracket


@dataclass(frozen=True)
class Maximum:
    x: float
    fx: float
    bracket: tuple[float, float]
    evaluations: int


def golden_section_max(f, a, b, tol=1e-10, max_iter=500):
    """Shrink [a, b] around the maximum of a unimodal f until b - a <= tol.

    Golden section alone stalls near sqrt(machine eps) relative to the scale
    of x because f is flat at the top. The result is then polished by Newton
    steps on central differences (a parabola through three points), which
    reach well below that.
    """
    lo, hi = min(a, b), max(a, b)
    c = lo + INV_PHI2 * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    n = 2
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if fc > fd:
            hi, d, fd = d, c, fc
            c = lo + INV_PHI2 * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + INV_PHI * (hi - lo)
            fd = f(d)
        n += 1
    x = c if fc > fd else d

    edge = 4 * tol + 1e-12 * abs(x)
    if x - a <= edge or b - x <= edge:
        raise OptimizationError("maximum sits on the search boundary", (lo, hi))

    for _ in range(20):
        h = max(1e-5 * max(abs(x), b - a), 1e-12)
        h = min(h, (x - a) / 2, (b - x) / 2)
        fm, f0, fp = f(x - h), f(x), f(x + h)
        n += 3
        curv = fm - 2 * f0 + fp
        if not curv < 0:
            break
        step = -h * (fp - fm) / (2 * curv)
        if abs(step) > h:
            break
        x += step
        if abs(step) <= 1e-15 * max(1.0, abs(x)):
            break
    if not a < x < b:
        raise OptimizationError("parabolic refinement left the search interval", (lo, hi))
    return Maximum(x, f(x), (lo, hi), n + 1)

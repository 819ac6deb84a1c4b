"""Plain Monte Carlo over the prior ensemble, used to cross-check quadrature.

Samples are drawn in fixed-size chunks. Chunk ``k`` gets its own generator
spawned from ``SeedSequence(seed)``, so the result depends only on
(seed, n) and not on how many workers process the chunks. Per-chunk
(count, mean, M2) accumulators are merged in chunk order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import engine
from .constrained import ConstrainedSpec
from .engine import BathPair, DomainError, fermi
from .priors import Observer, PriorSupport, sample_conditional, sample_marginal

__all__ = ["MCResult", "QUANTITIES", "mc_expectation", "mc_constrained_work",
           "draw_pairs"]

CHUNK = 1 << 16
MIN_SAMPLES = 1000
WORKERS_ENV = "SWAPENGINE_WORKERS"


@dataclass(frozen=True)
class MCResult:
    mean: float
    std_error: float
    n_samples: int
    seed: int

    def sigma_deviation(self, reference: float) -> float:
        """|mean - reference| in units of the standard error."""
        if self.std_error == 0:
            return 0.0 if self.mean == reference else float("inf")
        return abs(self.mean - reference) / self.std_error


def _t1p(a1, a2, b):
    return b.t_cold * a1 / a2


def _t2p(a1, a2, b):
    return b.t_hot * a2 / a1


QUANTITIES = {
    "W": lambda a1, a2, b: engine.work(a1, a2, b),
    "Q1": lambda a1, a2, b: engine.heat_hot(a1, a2, b),
    "Q2": lambda a1, a2, b: engine.heat_cold(a1, a2, b),
    "E_ini_1": lambda a1, a2, b: a1 * fermi(a1 / b.t_hot),
    "E_ini_2": lambda a1, a2, b: a2 * fermi(a2 / b.t_cold),
    "E_fin_1": lambda a1, a2, b: a1 * fermi(a2 / b.t_cold),
    "E_fin_2": lambda a1, a2, b: a2 * fermi(a1 / b.t_hot),
    "T1_final": _t1p,
    "T2_final": _t2p,
    "C_1": lambda a1, a2, b: engine.heat_capacity(a1, b.t_hot),
    "C_2": lambda a1, a2, b: engine.heat_capacity(a2, b.t_cold),
}


def draw_pairs(observer: Observer, theta: float, support: PriorSupport, rng, size):
    """(a1, a2) draws from the observer's joint prior via marginal x conditional."""
    u = rng.random(size)
    w = rng.random(size)
    first = sample_marginal(support, u)
    second = sample_conditional(first, observer, theta, w)
    if observer is Observer.A:
        return first, second
    return second, first


def _chunk_sizes(n):
    full, rest = divmod(n, CHUNK)
    return [CHUNK] * full + ([rest] if rest else [])


def _merge(parts):
    count, mean, m2 = 0, 0.0, 0.0
    for c, m, s in parts:
        if c == 0:
            continue
        delta = m - mean
        tot = count + c
        mean += delta * c / tot
        m2 += s + delta * delta * count * c / tot
        count = tot
    return count, mean, m2


def _run(sample_chunk, n, seed, workers):
    if n < MIN_SAMPLES:
        raise DomainError(f"need at least {MIN_SAMPLES} samples, got {n}")
    sizes = _chunk_sizes(n)
    seqs = np.random.SeedSequence(seed).spawn(len(sizes))

    def one(k):
        x = sample_chunk(np.random.default_rng(seqs[k]), sizes[k])
        m = float(np.mean(x))
        return len(x), m, float(np.sum((x - m) ** 2))

    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(one, range(len(sizes))))
    else:
        parts = [one(k) for k in range(len(sizes))]

    count, mean, m2 = _merge(parts)
    std = np.sqrt(m2 / (count - 1))
    return MCResult(mean, float(std / np.sqrt(count)), count, seed)


def mc_expectation(
    quantity: str,
    observer: Observer,
    baths: BathPair,
    support: PriorSupport,
    n: int,
    seed: int,
    workers: int | None = None,
) -> MCResult:
    """Sample mean and standard error of a per-cycle quantity under a joint prior."""
    try:
        fn = QUANTITIES[quantity]
    except KeyError:
        raise DomainError(
            f"unknown quantity {quantity!r}; choose from {sorted(QUANTITIES)}"
        ) from None

    def chunk(rng, size):
        a1, a2 = draw_pairs(observer, baths.theta, support, rng, size)
        return fn(a1, a2, baths)

    return _run(chunk, n, seed, workers)


def mc_constrained_work(
    observer: Observer,
    spec: ConstrainedSpec,
    n: int,
    seed: int,
    workers: int | None = None,
) -> MCResult:
    """Fixed-efficiency work with the single uncertain spacing drawn log-uniformly."""
    eta = spec.eta
    b = spec.baths

    def chunk(rng, size):
        x = sample_marginal(spec.support, rng.random(size))
        a1 = x if observer is Observer.A else x / (1 - eta)
        return a1 * eta * (fermi(a1 / b.t_hot) - fermi(a1 * (1 - eta) / b.t_cold))

    return _run(chunk, n, seed, workers)

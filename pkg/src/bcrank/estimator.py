"""Risk estimation with a partitioned sample space.

The expected risk of every hypothesis is the exact contribution of the
exact subspace plus ``lam`` times its risk on the approximate subspace.
The latter is estimated from i.i.d. samples, doubling the sample until
every empirical-Bernstein radius is below ``eps / lam`` or the VC-based
budget is exhausted.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

import numpy as np

logger = logging.getLogger(__name__)


@dataclass
class EstimatorConfig:
    epsilon: float = 0.05
    delta: float = 0.01
    c: float = 0.5
    vc_bound: int = 1
    seed: int | None = 0
    max_workers: int = 1
    rejection_cap: int = 10**6
    max_samples: int | None = None  # overrides the VC budget when set

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if self.c <= 0:
            raise ValueError("c must be positive")
        if self.vc_bound < 1:
            raise ValueError("vc_bound must be at least 1")
        if self.max_workers < 1:
            raise ValueError("max_workers must be at least 1")


@dataclass
class HypothesisTally:
    """Streaming sums of 0/1 losses for one hypothesis."""

    count: int = 0
    total: int = 0
    total_sq: int = 0
    delta: float = 0.0
    eps: float = math.inf

    def add(self, z: int) -> None:
        self.count += 1
        self.total += z
        self.total_sq += z * z

    @property
    def variance(self) -> float:
        return tally_variance(self.count, self.total, self.total_sq)


def tally_variance(count, total, total_sq):
    """Unbiased sample variance from streaming sums (``count >= 2``)."""
    count = np.asarray(count, dtype=np.float64)
    total = np.asarray(total, dtype=np.float64)
    total_sq = np.asarray(total_sq, dtype=np.float64)
    var = (count * total_sq - total * total) / (count * (count - 1))
    return np.maximum(var, 0.0)


def bernstein_epsilon(N, delta0, var):
    """Empirical-Bernstein radius ``sqrt(2 var ln(2/d) / N) + 7 ln(2/d) / (3 N)``.

    Vectorises over its arguments.
    """
    N_arr = np.asarray(N, dtype=np.float64)
    d_arr = np.asarray(delta0, dtype=np.float64)
    v_arr = np.asarray(var, dtype=np.float64)
    if np.any(N_arr < 2):
        raise ValueError("need at least two samples")
    if np.any((d_arr <= 0) | (d_arr >= 1)):
        raise ValueError("delta0 must lie in (0, 1)")
    if np.any(v_arr < 0):
        raise ValueError("variance must be nonnegative")
    log_term = np.log(2.0 / d_arr)
    out = np.sqrt(2.0 * v_arr * log_term / N_arr) + 7.0 * log_term / (3.0 * N_arr)
    return float(out) if out.ndim == 0 else out


def sample_budget(eps_prime: float, delta: float, vc_bound: int, c: float = 0.5) -> tuple[float, float]:
    """Unrounded initial and maximum sample sizes ``(N0, Nmax)``."""
    k = c / (eps_prime * eps_prime)
    return k * math.log(1.0 / delta), k * (vc_bound + math.log(1.0 / delta))


def sample_sizes(eps_prime: float, delta: float, vc_bound: int, c: float = 0.5) -> tuple[int, int]:
    """Rounded ``(N0, Nmax)`` with ``2 <= N0 <= Nmax``."""
    n0, nmax = sample_budget(eps_prime, delta, vc_bound, c)
    n0 = max(2, math.ceil(n0))
    return n0, max(n0, math.ceil(nmax))


def doubling_rounds(n0: int, nmax: int) -> int:
    """Number of stopping-rule checks before the budget is reached."""
    return max(1, math.ceil(math.log2(nmax / n0)))


def _delta_for_radius(N: int, var: float, eps: float) -> float:
    """``log`` of the ``delta0`` at which the Bernstein radius equals ``eps``.

    The radius is a quadratic in ``x = sqrt(ln(2/delta0))``, solved in
    closed form.
    """
    a = 7.0 / (3.0 * N)
    b = math.sqrt(2.0 * var / N)
    x = (-b + math.sqrt(b * b + 4.0 * a * eps)) / (2.0 * a)
    return math.log(2.0) - x * x


def allocate_deltas(pilot_vars: Sequence[float], epsilon_prime: float, delta: float, rounds: int, n0: int | None = None) -> np.ndarray:
    """Per-hypothesis failure probabilities with ``sum(2 delta_i) = delta / rounds``.

    Each hypothesis first gets the ``delta_i`` at which its pilot variance
    would just meet ``epsilon_prime`` with ``n0`` samples; the vector is
    then rescaled to the union-bound budget. Higher variance earns a larger
    share. With no usable variance information the split is uniform.
    """
    v = np.asarray(pilot_vars, dtype=np.float64)
    k = len(v)
    if k == 0:
        raise ValueError("no hypotheses")
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    budget = delta / (2.0 * rounds)
    if k == 1 or n0 is None or not np.any(v > 0):
        return np.full(k, budget / k)
    logs = np.array([_delta_for_radius(n0, float(x), epsilon_prime) for x in v])
    logs -= logs.max()
    share = np.exp(logs)
    share /= share.sum()
    return np.maximum(share * budget, np.finfo(float).tiny)


@dataclass
class RiskBreakdown:
    hat_ell: np.ndarray
    tilde_ell: np.ndarray
    ell: np.ndarray
    hat_lambda: float
    lam: float
    samples_used: int
    pilot_samples: int
    rounds: int
    halted_by: str  # "stopping-rule", "sample-cap" or "exact"
    n0: int = 0
    n_max: int = 0
    eps_prime: float = 0.0
    deltas: np.ndarray = field(default_factory=lambda: np.zeros(0))
    radii: np.ndarray = field(default_factory=lambda: np.zeros(0))


Exact = Callable[[], tuple[float, Sequence[float]]]
Gen = Callable[[np.random.Generator], Hashable]
Losses = Callable[[object], Sequence[int]]


class _Workers:
    """Independent RNG streams, one per worker, persisting across rounds."""

    def __init__(self, seed, workers: int):
        ss = np.random.SeedSequence(seed)
        pilot_ss, main_ss = ss.spawn(2)
        self.pilot = [np.random.default_rng(s) for s in pilot_ss.spawn(workers)]
        self.main = [np.random.default_rng(s) for s in main_ss.spawn(workers)]
        self.workers = workers
        self.pool = ThreadPoolExecutor(workers) if workers > 1 else None

    def draw(self, streams, count: int, gen: Gen, losses: Losses, k: int) -> np.ndarray:
        shares = [count // self.workers + (1 if j < count % self.workers else 0) for j in range(self.workers)]

        def job(j):
            hits = np.zeros(k, dtype=np.int64)
            rng = streams[j]
            for _ in range(shares[j]):
                for h in losses(gen(rng)):
                    hits[h] += 1
            return hits

        if self.pool is None:
            return job(0)
        return np.sum(list(self.pool.map(job, range(self.workers))), axis=0)

    def close(self):
        if self.pool is not None:
            self.pool.shutdown()


def estimate_risks(exact: Exact, gen: Gen, losses: Losses, k: int, cfg: EstimatorConfig) -> RiskBreakdown:
    """Combine exact-subspace risks with adaptively sampled approximate ones.

    ``exact()`` returns ``(hat_lambda, hat_ell)``; ``gen(rng)`` draws one
    sample from the approximate subspace; ``losses(sample)`` lists the
    hypotheses (``0..k-1``) whose loss on the sample is 1.
    """
    if k < 1:
        raise ValueError("need at least one hypothesis")
    hat_lambda, hat_ell = exact()
    hat_ell = np.asarray(hat_ell, dtype=np.float64)
    if hat_ell.shape != (k,):
        raise ValueError("exact() returned the wrong number of risks")
    lam = 1.0 - hat_lambda
    if lam <= 1e-15:
        return RiskBreakdown(hat_ell, np.zeros(k), hat_ell.copy(), hat_lambda, 0.0, 0, 0, 0, "exact")

    eps_prime = cfg.epsilon / lam
    n0, nmax = sample_sizes(eps_prime, cfg.delta, cfg.vc_bound, cfg.c)
    if cfg.max_samples is not None:
        nmax = max(2, cfg.max_samples)
        n0 = min(n0, nmax)
    rounds = doubling_rounds(n0, nmax)
    pool = _Workers(cfg.seed, cfg.max_workers)
    try:
        pilot_hits = pool.draw(pool.pilot, n0, gen, losses, k)
        pilot_var = tally_variance(n0, pilot_hits, pilot_hits)
        deltas = allocate_deltas(pilot_var, eps_prime, cfg.delta, rounds, n0)

        hits = np.zeros(k, dtype=np.int64)
        drawn, target, checks = 0, n0, 0
        halted = "sample-cap"
        radii = np.full(k, math.inf)
        while True:
            hits += pool.draw(pool.main, target - drawn, gen, losses, k)
            drawn = target
            checks += 1
            radii = bernstein_epsilon(drawn, deltas, tally_variance(drawn, hits, hits))
            logger.debug("round %d: N=%d max radius %.4g (target %.4g)", checks, drawn, radii.max(), eps_prime)
            if radii.max() <= eps_prime:
                halted = "stopping-rule"
                break
            if drawn >= nmax:
                break
            target = min(2 * drawn, nmax)
    finally:
        pool.close()

    tilde = hits / drawn
    return RiskBreakdown(
        hat_ell=hat_ell,
        tilde_ell=tilde,
        ell=hat_ell + lam * tilde,
        hat_lambda=hat_lambda,
        lam=lam,
        samples_used=drawn,
        pilot_samples=n0,
        rounds=checks,
        halted_by=halted,
        n0=n0,
        n_max=nmax,
        eps_prime=eps_prime,
        deltas=deltas,
        radii=np.asarray(radii),
    )

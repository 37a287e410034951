"""Rank correlation and relative-error reports against ground truth."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ranker import rank_order


def spearman_rank_correlation(estimates: Sequence[float], truths: Sequence[float], ids: Sequence[int] | None = None) -> float:
    """``1 - 6 sum(dr^2) / (k (k^2 - 1))`` on ID-tie-broken ranks.

    Both vectors are ranked in descending order; equal values are ordered
    by ascending id so that every rank ``1..k`` is used exactly once.
    """
    est = np.asarray(estimates, dtype=np.float64)
    tru = np.asarray(truths, dtype=np.float64)
    if est.shape != tru.shape:
        raise ValueError("estimates and truths differ in length")
    k = len(est)
    if k < 2:
        raise ValueError("need at least two items to correlate ranks")
    ids = np.arange(k) if ids is None else np.asarray(ids)
    dr = rank_order(est, ids) - rank_order(tru, ids)
    return 1.0 - 6.0 * float(np.sum(dr * dr)) / (k * (k * k - 1))


@dataclass
class RankReport:
    """Comparison of ``k`` estimates with their true values.

    ``true_zeros``, ``false_zeros`` and ``nonzero_estimated`` partition the
    ``k`` nodes: a zero estimate is a true zero when the truth is zero and
    a false zero otherwise.
    """

    k: int
    spearman: float
    relative_error: np.ndarray  # signed percent, inf where truth is 0 but estimate is not
    true_zeros: int
    false_zeros: int
    nonzero_truth: int
    nonzero_estimated: int
    max_abs_error: float

    def summary(self) -> str:
        finite = self.relative_error[np.isfinite(self.relative_error)]
        med = float(np.median(np.abs(finite))) if len(finite) else math.nan
        return (
            f"k={self.k} spearman={self.spearman:.6f} max_abs_error={self.max_abs_error:.6g} "
            f"median_abs_rel_error={med:.4g}% true_zeros={self.true_zeros} "
            f"false_zeros={self.false_zeros} nonzero_truth={self.nonzero_truth}"
        )


def relative_errors(estimates: Sequence[float], truths: Sequence[float]) -> np.ndarray:
    """Signed ``(est / truth - 1) * 100``; ``0`` for 0/0 and ``inf`` for x/0."""
    est = np.asarray(estimates, dtype=np.float64)
    tru = np.asarray(truths, dtype=np.float64)
    out = np.zeros(len(est))
    nz = tru != 0
    out[nz] = (est[nz] / tru[nz] - 1.0) * 100.0
    out[~nz & (est != 0)] = math.inf
    return out


def relative_error_report(estimates: Sequence[float], truths: Sequence[float], ids: Sequence[int] | None = None) -> RankReport:
    est = np.asarray(estimates, dtype=np.float64)
    tru = np.asarray(truths, dtype=np.float64)
    if est.shape != tru.shape:
        raise ValueError("estimates and truths differ in length")
    k = len(est)
    rho = spearman_rank_correlation(est, tru, ids) if k >= 2 else math.nan
    zt = tru == 0
    return RankReport(
        k=k,
        spearman=rho,
        relative_error=relative_errors(est, tru),
        true_zeros=int(np.sum(zt & (est == 0))),
        false_zeros=int(np.sum(~zt & (est == 0))),
        nonzero_truth=int(np.sum(~zt)),
        nonzero_estimated=int(np.sum(est != 0)),
        max_abs_error=float(np.max(np.abs(est - tru))) if k else 0.0,
    )

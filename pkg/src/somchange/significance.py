"""Weighted two-sample Kolmogorov-Smirnov significance of feature changes.

Each pattern induces a weighted distribution of one prototype component;
the KS statistic is the sup-distance of the two weighted ECDFs. Sample
sizes enter through the Kish effective size (sum w)^2 / sum w^2, and the
asymptotic critical value c(alpha) = sqrt(-ln(alpha / 2) / 2) is used,
which reduces to the classical two-sample test for uniform weights.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .association import WeightedPattern
from .errors import DimensionMismatchError
from .som import Som


@dataclass(frozen=True)
class WeightedEcdf:
    """Right-continuous step function from weighted values."""

    values: np.ndarray = field(repr=False)
    cumulative: np.ndarray = field(repr=False)

    def evaluate(self, x) -> np.ndarray:
        """F(x) = total weight of mass at values <= x."""
        idx = np.searchsorted(self.values, np.asarray(x, dtype=np.float64), side="right")
        padded = np.concatenate([[0.0], self.cumulative])
        return padded[idx]


@dataclass(frozen=True)
class KsResult:
    statistic: float
    n_eff_p: float
    n_eff_q: float
    alpha: float
    threshold: float
    significant: bool


def weighted_ecdf(pattern: WeightedPattern, som: Som, k: int) -> WeightedEcdf:
    """ECDF of prototype component ``k`` weighted by the pattern."""
    if not 0 <= k < som.m:
        raise DimensionMismatchError(f"feature index {k} out of range for m={som.m}")
    values = som.prototypes[:, k]
    order = np.argsort(values, kind="stable")
    sorted_vals = values[order]
    sorted_w = np.asarray(pattern.weights)[order]
    uniq, start = np.unique(sorted_vals, return_index=True)
    sums = np.add.reduceat(sorted_w, start)
    return WeightedEcdf(values=uniq, cumulative=np.cumsum(sums))


def kish_effective_size(weights: np.ndarray) -> float:
    w = np.asarray(weights, dtype=np.float64)
    return float(w.sum() ** 2 / (w**2).sum())


def ks_critical_coefficient(alpha: float) -> float:
    return math.sqrt(-math.log(alpha / 2.0) / 2.0)


def ks_test(
    P: WeightedPattern, Q: WeightedPattern, som: Som, k: int, alpha: float = 0.05
) -> KsResult:
    """Two-sample KS test between the weighted feature distributions.

    ``D = sup_x |F_P(x) - F_Q(x)|`` evaluated on the merged step grid;
    the change is significant at level ``alpha`` when
    ``D > c(alpha) * sqrt((n1 + n2) / (n1 n2))`` with Kish effective
    sample sizes.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    fp = weighted_ecdf(P, som, k)
    fq = weighted_ecdf(Q, som, k)
    grid = np.union1d(fp.values, fq.values)
    d = float(np.abs(fp.evaluate(grid) - fq.evaluate(grid)).max())

    n1 = kish_effective_size(P.weights)
    n2 = kish_effective_size(Q.weights)
    threshold = ks_critical_coefficient(alpha) * math.sqrt((n1 + n2) / (n1 * n2))
    return KsResult(
        statistic=d,
        n_eff_p=n1,
        n_eff_q=n2,
        alpha=alpha,
        threshold=float(threshold),
        significant=bool(d > threshold),
    )

"""Pattern dissimilarity: exact EMD, scaled EMD and per-feature PEMD.

The ground distance between map neurons is the Euclidean distance of
their prototype vectors in feature space (not grid layout space). The
overall dissimilarity of two weighted patterns is the minimum-cost
transport of weight mass under that ground distance; the per-feature
property difference is the work-weighted mean of pairwise prototype
component differences carried by the optimal flow.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .association import WeightedPattern, same_som
from .errors import DimensionMismatchError, PatternError
from .simplex import solve_transport
from .som import Som

ZERO_WORK_EPS = 1e-12
FLOW_FLOOR = 1e-15


@dataclass(frozen=True)
class GroundDistanceMatrix:
    """Pairwise Euclidean prototype distances of one map."""

    d: np.ndarray = field(repr=False)
    max_d: float = 0.0

    def __post_init__(self):
        d = np.asarray(self.d, dtype=np.float64)
        object.__setattr__(self, "d", d)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("ground distance matrix must be square")
        object.__setattr__(self, "max_d", float(d.max()) if d.size else 0.0)


@dataclass(frozen=True)
class FlowSolution:
    """Optimal transport flows between two patterns on one map.

    ``flows`` lists ``(i, j, f_ij)`` for strictly positive flows in
    original neuron indices; ``total_cost`` is ``sum f_ij * d_ij`` and
    ``total_flow`` is ``sum f_ij``.
    """

    n: int
    flows: tuple = ()
    total_cost: float = 0.0
    total_flow: float = 0.0

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n, self.n))
        for i, j, f in self.flows:
            dense[i, j] += f
        return dense

    def row_sums(self) -> np.ndarray:
        return self.to_dense().sum(axis=1)

    def col_sums(self) -> np.ndarray:
        return self.to_dense().sum(axis=0)


def ground_distances(som: Som) -> GroundDistanceMatrix:
    """Exact pairwise Euclidean distances between prototype vectors."""
    diff = som.prototypes[:, None, :] - som.prototypes[None, :, :]
    d = np.sqrt((diff**2).sum(axis=-1))
    return GroundDistanceMatrix(d=d)


def _checked_weights(pattern: WeightedPattern) -> np.ndarray:
    w = np.asarray(pattern.weights, dtype=np.float64)
    if abs(w.sum() - 1.0) > 1e-9 or (w < -1e-12).any():
        raise PatternError("pattern weights must be non-negative and sum to 1")
    return np.maximum(w, 0.0)


def solve_emd(
    P: WeightedPattern, Q: WeightedPattern, dmat: GroundDistanceMatrix
) -> tuple[float, FlowSolution]:
    """Earth mover's distance between two patterns on the same map.

    Returns the optimal cost-per-unit-flow (with unit total weights this
    is the total work) together with the optimal flow itself. Neurons
    carrying zero weight are dropped from the solver instance and the
    solution is re-expanded to original indices.
    """
    if not same_som(P.som, Q.som):
        raise PatternError("patterns must live on the same map")
    n = P.som.n
    if dmat.d.shape != (n, n):
        raise DimensionMismatchError("ground distance matrix does not match the map")
    wp = _checked_weights(P)
    wq = _checked_weights(Q)

    sp = np.flatnonzero(wp > 0)
    sq = np.flatnonzero(wq > 0)
    sub_cost = dmat.d[np.ix_(sp, sq)]
    sub_flows = solve_transport(wp[sp], wq[sq], sub_cost)

    flows = []
    total_cost = 0.0
    total_flow = 0.0
    for a, i in enumerate(sp):
        for b, j in enumerate(sq):
            f = sub_flows[a, b]
            if f > FLOW_FLOOR:
                flows.append((int(i), int(j), float(f)))
                total_cost += f * dmat.d[i, j]
                total_flow += f
    solution = FlowSolution(
        n=n, flows=tuple(flows), total_cost=float(total_cost), total_flow=float(total_flow)
    )
    emd = solution.total_cost / solution.total_flow if solution.total_flow > 0 else 0.0
    return float(emd), solution


def scaled_emd(emd: float, dmat: GroundDistanceMatrix) -> float:
    """EMD scaled by the maximum ground distance of the map, in [0, 1]."""
    if dmat.max_d <= 0:
        warnings.warn("degenerate map: maximum ground distance is 0", RuntimeWarning)
        return 0.0
    return float(min(max(emd / dmat.max_d, 0.0), 1.0))


def pemd(flow: FlowSolution, dmat: GroundDistanceMatrix, som: Som, k: int) -> float:
    """Signed per-feature property difference carried by a flow.

    Work-weighted mean of prototype component differences:
    ``sum f_ij d_ij (c_k_j - c_k_i) / sum f_ij d_ij``. Zero-work flows
    (denominator below 1e-12) return 0 by convention.
    """
    if not 0 <= k < som.m:
        raise DimensionMismatchError(f"feature index {k} out of range for m={som.m}")
    if flow.n != som.n:
        raise DimensionMismatchError("flow was solved on a different map size")
    c = som.prototypes[:, k]
    num = 0.0
    den = 0.0
    for i, j, f in flow.flows:
        work = f * dmat.d[i, j]
        num += work * (c[j] - c[i])
        den += work
    if den < ZERO_WORK_EPS:
        return 0.0
    return float(num / den)


def pemd_all(flow: FlowSolution, dmat: GroundDistanceMatrix, som: Som) -> np.ndarray:
    """PEMD for every feature, shape (m,)."""
    if flow.n != som.n:
        raise DimensionMismatchError("flow was solved on a different map size")
    num = np.zeros(som.m)
    den = 0.0
    for i, j, f in flow.flows:
        work = f * dmat.d[i, j]
        num += work * (som.prototypes[j] - som.prototypes[i])
        den += work
    if den < ZERO_WORK_EPS:
        return np.zeros(som.m)
    return num / den

"""Input-map to output-map association and conditional output patterns.

The association accumulates co-activations of soft input/output
assignments over paired records and is then row-normalized. Records are
accumulated in a canonical content order so the result is bit-identical
under any permutation of the input rows.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, DimensionMismatchError, PatternError
from .som import Som

WEIGHT_SUM_TOL = 1e-9


@dataclass(frozen=True)
class WeightedPattern:
    """Probability weights over the neurons of one map."""

    som: Som
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        object.__setattr__(self, "weights", w)
        if w.shape != (self.som.n,):
            raise PatternError(f"weights must have shape ({self.som.n},), got {w.shape}")
        if not np.isfinite(w).all():
            raise PatternError("weights must be finite")
        if (w < -WEIGHT_SUM_TOL).any():
            raise PatternError("weights must be non-negative")
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise PatternError(f"weights must sum to 1, got {w.sum()!r}")


def same_som(a: Som, b: Som) -> bool:
    if a is b:
        return True
    return (
        a.grid.topology == b.grid.topology
        and a.grid.width == b.grid.width
        and a.grid.height == b.grid.height
        and np.array_equal(a.prototypes, b.prototypes)
    )


@dataclass(frozen=True)
class AssociationMatrix:
    """Non-negative ``(n_in, n_out)`` co-activation matrix."""

    entries: np.ndarray = field(repr=False)
    row_normalized: bool = True

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.float64)
        object.__setattr__(self, "entries", e)
        if e.ndim != 2:
            raise ValueError("association entries must be a 2-D matrix")
        if (e < 0).any():
            raise ValueError("association entries must be non-negative")
        if self.row_normalized:
            sums = e.sum(axis=1)
            bad = np.abs(sums[sums > 0] - 1.0) > WEIGHT_SUM_TOL
            if bad.any():
                raise ValueError("row-normalized matrix has rows not summing to 1")

    @property
    def n_in(self) -> int:
        return self.entries.shape[0]

    @property
    def n_out(self) -> int:
        return self.entries.shape[1]


def input_activation(som: Som, x: np.ndarray, bandwidth: float | None = None) -> np.ndarray:
    """Soft assignment of ``x`` to the map's neurons.

    Gaussian kernel over prototype distance, normalized to sum 1:
    ``a_i proportional to exp(-|x - v_i|^2 / (2 h^2))`` with ``h`` the
    bandwidth frozen on the map at training time. Computed via a shifted
    softmax so tiny bandwidths degrade to a hard BMU assignment instead
    of underflowing.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (som.m,):
        raise DimensionMismatchError(f"expected vector of length {som.m}, got shape {x.shape}")
    if not np.isfinite(x).all():
        raise DataError("input vector contains non-finite values")
    h = som.bandwidth if bandwidth is None else bandwidth
    h = max(float(h), 1e-12)
    d2 = ((som.prototypes - x) ** 2).sum(axis=1)
    logits = -(d2 - d2.min()) / (2.0 * h * h)
    a = np.exp(logits)
    total = a.sum()
    if not np.isfinite(total) or total <= 0:
        raise DataError("activation degenerated; input is not representable on this map")
    return a / total


def build_association(
    in_som: Som, out_som: Som, paired_in: np.ndarray, paired_out: np.ndarray
) -> AssociationMatrix:
    """Accumulate co-activations of paired records, then row-normalize.

    Rows with zero accumulated mass get the uniform distribution so every
    conditional pattern is defined. Record order does not matter: records
    are sorted by content before accumulation.
    """
    paired_in = np.asarray(paired_in, dtype=np.float64)
    paired_out = np.asarray(paired_out, dtype=np.float64)
    if paired_in.ndim != 2 or paired_out.ndim != 2:
        raise DataError("paired records must be 2-D arrays")
    if paired_in.shape[0] != paired_out.shape[0]:
        raise DataError("input and output record counts differ")
    if paired_in.shape[0] == 0:
        raise DataError("at least one paired record is required")
    if paired_in.shape[1] != in_som.m:
        raise DimensionMismatchError(f"input records have {paired_in.shape[1]} columns, map expects {in_som.m}")
    if paired_out.shape[1] != out_som.m:
        raise DimensionMismatchError(f"output records have {paired_out.shape[1]} columns, map expects {out_som.m}")

    key = np.concatenate([paired_in, paired_out], axis=1)
    order = np.lexsort(key.T[::-1])
    paired_in = paired_in[order]
    paired_out = paired_out[order]

    act_in = np.stack([input_activation(in_som, row) for row in paired_in])
    act_out = np.stack([input_activation(out_som, row) for row in paired_out])
    entries = act_in.T @ act_out

    sums = entries.sum(axis=1)
    zero = sums <= 0
    entries[zero] = 1.0 / out_som.n
    entries[~zero] = entries[~zero] / sums[~zero, None]
    return AssociationMatrix(entries=entries, row_normalized=True)


def conditional_pattern(
    x: np.ndarray, assoc: AssociationMatrix, in_som: Som, out_som: Som
) -> WeightedPattern:
    """Weighted output pattern conditional on input vector ``x``."""
    if assoc is None:
        raise PatternError("association has not been built")
    if assoc.entries.shape != (in_som.n, out_som.n):
        raise DimensionMismatchError(
            f"association shape {assoc.entries.shape} does not match maps ({in_som.n}, {out_som.n})"
        )
    a = input_activation(in_som, x)
    w = a @ assoc.entries
    total = w.sum()
    if total <= 0:
        raise PatternError("conditional pattern has zero mass")
    return WeightedPattern(som=out_som, weights=w / total)

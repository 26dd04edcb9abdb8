"""Full change description between a reference and a changed pattern.

Combines the transport metrics (scaled EMD, per-feature PEMD), KS
significance flags, region-of-interest selection, and region-weighted
feature values in T-score units (T = 50 + 10 Z) into one summary that
serializes to the documented JSON schema consumed by the CLI, the HTTP
service and the UI.
"""

from dataclasses import dataclass

import numpy as np

from .association import WeightedPattern, same_som
from .errors import PatternError
from .glyphs import DIRECTION_EPS, scale_pemd_for_display
from .significance import ks_test
from .som import Som
from .transport import GroundDistanceMatrix, ground_distances, pemd_all, scaled_emd, solve_emd

DEFAULT_PERCENTILE = 0.8
DEFAULT_ALPHA = 0.05


@dataclass(frozen=True)
class RegionSelection:
    """Non-empty set of neuron indices, user-picked or percentile-derived."""

    indices: tuple
    source: str = "user"

    def __post_init__(self):
        idx = tuple(sorted(int(i) for i in set(self.indices)))
        object.__setattr__(self, "indices", idx)
        if not idx:
            raise ValueError("region selection must be non-empty")
        if self.source not in ("user", "percentile"):
            raise ValueError(f"unknown region source {self.source!r}")

    def validate_for(self, som: Som) -> None:
        if self.indices[0] < 0 or self.indices[-1] >= som.n:
            raise ValueError(f"region indices out of range for map with {som.n} neurons")


def default_regions(pattern: WeightedPattern, percentile: float = DEFAULT_PERCENTILE) -> RegionSelection:
    """Neurons at or above the given weight percentile (ties included).

    The threshold is the linear-interpolation quantile of the weights
    carried by the pattern's support (zero-weight neurons do not dilute
    it), so a point mass selects exactly its neuron and a uniform
    pattern selects the whole map. Never empty: the argmax neuron always
    qualifies.
    """
    if not 0.0 < percentile < 1.0:
        raise ValueError(f"percentile must be in (0, 1), got {percentile}")
    w = np.asarray(pattern.weights)
    support = w[w > 0]
    threshold = float(np.quantile(support, percentile))
    indices = np.flatnonzero(w >= threshold)
    if indices.size == 0:
        indices = np.array([int(w.argmax())])
    return RegionSelection(indices=tuple(int(i) for i in indices), source="percentile")


def to_t_score(z) -> float:
    return 50.0 + 10.0 * float(z)


@dataclass(frozen=True)
class FeatureChangeDetail:
    """One output feature's change record (values in T-score units)."""

    name: str
    pemd: float
    scaled_pemd: float
    direction: str
    significant: bool
    ks_statistic: float
    ref_value: float
    chg_value: float
    ref_range: tuple
    chg_range: tuple
    feature_range_z: float
    t_lo: float
    t_hi: float


@dataclass(frozen=True)
class ChangeSummary:
    scaled_emd: float
    mean_pemd: float
    overall_direction: str
    details: tuple
    region_ref: RegionSelection
    region_chg: RegionSelection
    alpha: float
    ref_region_fallback: bool = False
    chg_region_fallback: bool = False
    emd: float = 0.0

    def to_dict(self) -> dict:
        """Documented ChangeSummary JSON schema (see docs/schemas.md)."""
        return {
            "schema_version": 1,
            "scaled_emd": float(self.scaled_emd),
            "emd": float(self.emd),
            "mean_pemd": float(self.mean_pemd),
            "overall_direction": self.overall_direction,
            "alpha": float(self.alpha),
            "features": [
                {
                    "name": d.name,
                    "pemd": float(d.pemd),
                    "scaled_pemd": float(d.scaled_pemd),
                    "direction": d.direction,
                    "significant": bool(d.significant),
                    "ks_statistic": float(d.ks_statistic),
                    "ref_value": float(d.ref_value),
                    "chg_value": float(d.chg_value),
                    "ref_range": [float(d.ref_range[0]), float(d.ref_range[1])],
                    "chg_range": [float(d.chg_range[0]), float(d.chg_range[1])],
                    "feature_range_z": float(d.feature_range_z),
                    "t_lo": float(d.t_lo),
                    "t_hi": float(d.t_hi),
                }
                for d in self.details
            ],
            "regions": {
                "reference": {
                    "indices": list(self.region_ref.indices),
                    "source": self.region_ref.source,
                    "fallback": bool(self.ref_region_fallback),
                },
                "changed": {
                    "indices": list(self.region_chg.indices),
                    "source": self.region_chg.source,
                    "fallback": bool(self.chg_region_fallback),
                },
            },
        }


def _sign_direction(value: float) -> str:
    if value > DIRECTION_EPS:
        return "increase"
    if value < -DIRECTION_EPS:
        return "decrease"
    return "none"


def _region_values(pattern: WeightedPattern, region: RegionSelection, som: Som):
    """Region-weighted mean and min/max per feature, with argmax fallback.

    Weights are renormalized within the region; when the region carries
    no pattern mass the selection falls back to the pattern's argmax
    neuron and the fallback flag is raised.
    """
    w = np.asarray(pattern.weights)
    idx = np.asarray(region.indices)
    wr = w[idx]
    total = wr.sum()
    fallback = False
    if total <= 0:
        idx = np.array([int(w.argmax())])
        wr = np.array([1.0])
        total = 1.0
        fallback = True
    rel = wr / total
    protos = som.prototypes[idx]
    means = rel @ protos
    support = rel > 0
    lo = protos[support].min(axis=0)
    hi = protos[support].max(axis=0)
    return means, lo, hi, fallback


def _region_restricted(pattern: WeightedPattern, region: RegionSelection, som: Som) -> WeightedPattern:
    w = np.zeros(som.n)
    idx = np.asarray(region.indices)
    wr = np.asarray(pattern.weights)[idx]
    if wr.sum() <= 0:
        idx = np.array([int(np.asarray(pattern.weights).argmax())])
        wr = np.array([1.0])
    w[idx] = wr / wr.sum()
    return WeightedPattern(som=som, weights=w)


def summarize_change(
    P: WeightedPattern,
    Q: WeightedPattern,
    som: Som,
    region_ref: RegionSelection | None = None,
    region_chg: RegionSelection | None = None,
    alpha: float = DEFAULT_ALPHA,
    percentile: float = DEFAULT_PERCENTILE,
    dmat: GroundDistanceMatrix | None = None,
    restrict_significance: bool = False,
) -> ChangeSummary:
    """Assemble the change description from pattern ``P`` to pattern ``Q``.

    Regions default to the weight-percentile selection of each pattern.
    ``restrict_significance=True`` runs the KS test on region-renormalized
    weights instead of the full weighted distributions.
    """
    if not same_som(P.som, Q.som) or not same_som(P.som, som):
        raise PatternError("patterns must live on the given map")
    if region_ref is None:
        region_ref = default_regions(P, percentile)
    if region_chg is None:
        region_chg = default_regions(Q, percentile)
    region_ref.validate_for(som)
    region_chg.validate_for(som)

    if dmat is None:
        dmat = ground_distances(som)
    emd, flow = solve_emd(P, Q, dmat)
    semd = scaled_emd(emd, dmat)
    pvec = pemd_all(flow, dmat, som)
    ranges = som.feature_ranges()

    ref_means, ref_lo, ref_hi, ref_fb = _region_values(P, region_ref, som)
    chg_means, chg_lo, chg_hi, chg_fb = _region_values(Q, region_chg, som)

    if restrict_significance:
        ks_p = _region_restricted(P, region_ref, som)
        ks_q = _region_restricted(Q, region_chg, som)
    else:
        ks_p, ks_q = P, Q

    proto_lo = som.prototypes.min(axis=0)
    proto_hi = som.prototypes.max(axis=0)
    details = []
    for k, spec in enumerate(som.features):
        ks = ks_test(ks_p, ks_q, som, k, alpha)
        details.append(
            FeatureChangeDetail(
                name=spec.name,
                pemd=float(pvec[k]),
                scaled_pemd=scale_pemd_for_display(float(pvec[k]), float(ranges[k])),
                direction=_sign_direction(float(pvec[k])),
                significant=ks.significant,
                ks_statistic=ks.statistic,
                ref_value=to_t_score(ref_means[k]),
                chg_value=to_t_score(chg_means[k]),
                ref_range=(to_t_score(ref_lo[k]), to_t_score(ref_hi[k])),
                chg_range=(to_t_score(chg_lo[k]), to_t_score(chg_hi[k])),
                feature_range_z=float(ranges[k]),
                t_lo=to_t_score(proto_lo[k]),
                t_hi=to_t_score(proto_hi[k]),
            )
        )

    mean_pemd = float(pvec.mean()) if len(pvec) else 0.0
    return ChangeSummary(
        scaled_emd=semd,
        mean_pemd=mean_pemd,
        overall_direction=_sign_direction(mean_pemd),
        details=tuple(details),
        region_ref=region_ref,
        region_chg=region_chg,
        alpha=alpha,
        ref_region_fallback=ref_fb,
        chg_region_fallback=chg_fb,
        emd=float(emd),
    )

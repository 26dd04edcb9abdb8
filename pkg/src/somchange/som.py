"""Self-Organizing Map training and quality diagnostics.

Maps are trained with the deterministic batch algorithm: every epoch all
rows are assigned to their best matching unit (BMU) and each prototype is
recomputed as the neighborhood-weighted mean of the data. The neighborhood
kernel is a Gaussian ``exp(-g^2 / (2 sigma^2))`` over layout distance ``g``.

Training runs in two phases. During the ordering phase (the first 40% of
epochs, at most half) ``sigma`` decays linearly from the initial to the
final radius. The remaining refine phase holds ``sigma`` at the final
radius and applies half-step (damped) updates; a refine step that would
increase the quantization error is reverted and training freezes there,
which suppresses the assignment limit cycles batch SOM can fall into and
keeps the QE trace non-increasing over the final half of the run.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, DimensionMismatchError
from .grid import ADJACENCY_TOL, SomGrid


@dataclass(frozen=True)
class FeatureSpec:
    """One feature's label and raw-unit standardization parameters."""

    name: str
    index: int
    z_mean: float = 0.0
    z_std: float = 1.0

    def __post_init__(self):
        if self.z_std <= 0:
            raise ValueError(f"feature {self.name!r}: z_std must be > 0")

    def to_z(self, raw: float) -> float:
        return (raw - self.z_mean) / self.z_std

    def to_raw(self, z: float) -> float:
        return self.z_mean + self.z_std * z


def validate_features(features: list[FeatureSpec]) -> None:
    names = [f.name for f in features]
    if len(set(names)) != len(names):
        raise ValueError("feature names must be unique")
    if [f.index for f in features] != list(range(len(features))):
        raise ValueError("feature indices must be contiguous 0..m-1")


def default_features(m: int) -> list[FeatureSpec]:
    return [FeatureSpec(name=f"z{k}", index=k) for k in range(m)]


@dataclass(frozen=True)
class TrainConfig:
    """Batch-training settings.

    ``initial_radius=None`` resolves to ``max(width, height) / 4`` (at
    least the final radius) when training starts.
    """

    epochs: int = 40
    initial_radius: float | None = None
    final_radius: float = 0.5
    seed: int = 0
    init: str = "random_sample"

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.final_radius < 0.5:
            raise ValueError("final radius must be >= 0.5")
        if self.initial_radius is not None and self.initial_radius < self.final_radius:
            raise ValueError("initial radius must be >= final radius")
        if self.init not in ("random_sample", "pca_plane"):
            raise ValueError(f"unknown init {self.init!r}")

    def resolve_radius(self, grid: SomGrid) -> float:
        if self.initial_radius is not None:
            return float(self.initial_radius)
        return max(max(grid.width, grid.height) / 4.0, self.final_radius)


@dataclass(frozen=True)
class Som:
    """A trained map: grid layout plus one prototype vector per neuron.

    Prototypes are in Z-score units. ``bandwidth`` is the mean
    nearest-prototype distance over the training data, frozen at training
    time; it parameterizes the soft input assignment used downstream.
    ``qe_history`` holds the quantization error measured after each epoch.
    """

    grid: SomGrid
    prototypes: np.ndarray = field(repr=False)
    features: list[FeatureSpec] = field(default_factory=list)
    bandwidth: float = 1.0
    qe_history: tuple[float, ...] = field(default=(), repr=False)

    def __post_init__(self):
        protos = np.asarray(self.prototypes, dtype=np.float64)
        object.__setattr__(self, "prototypes", protos)
        if protos.ndim != 2 or protos.shape[0] != self.grid.n:
            raise ValueError(f"prototypes must be ({self.grid.n}, m), got {protos.shape}")
        if not np.isfinite(protos).all():
            raise ValueError("prototypes must be finite")
        feats = list(self.features) or default_features(protos.shape[1])
        if len(feats) != protos.shape[1]:
            raise DimensionMismatchError(
                f"{len(feats)} feature specs for {protos.shape[1]} prototype components"
            )
        validate_features(feats)
        object.__setattr__(self, "features", feats)

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def m(self) -> int:
        return self.prototypes.shape[1]

    @property
    def feature_names(self) -> list[str]:
        return [f.name for f in self.features]

    def feature_ranges(self) -> np.ndarray:
        """Per-feature prototype value range (max - min), shape (m,)."""
        return self.prototypes.max(axis=0) - self.prototypes.min(axis=0)


def _check_data(data: np.ndarray) -> np.ndarray:
    data = np.asarray(data, dtype=np.float64)
    if data.ndim == 1:
        data = data[None, :]
    if data.ndim != 2 or data.shape[0] == 0 or data.shape[1] == 0:
        raise DataError("data must be a non-empty 2-D array")
    if not np.isfinite(data).all():
        raise DataError("data contains non-finite values")
    return data


def _init_prototypes(data: np.ndarray, grid: SomGrid, cfg: TrainConfig) -> np.ndarray:
    rng = np.random.default_rng(cfg.seed)
    n = grid.n
    if cfg.init == "random_sample":
        replace = data.shape[0] < n
        idx = rng.choice(data.shape[0], size=n, replace=replace)
        return data[np.sort(idx)].copy()
    # pca_plane: spread the grid over the first two principal directions
    center = data.mean(axis=0)
    centered = data - center
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    m = data.shape[1]
    axes = np.zeros((2, m))
    scale = np.zeros(2)
    for a in range(min(2, vt.shape[0])):
        vec = vt[a]
        # fix the SVD sign ambiguity for determinism
        lead = vec[np.argmax(np.abs(vec))]
        if lead < 0:
            vec = -vec
        axes[a] = vec
        scale[a] = 2.0 * s[a] / np.sqrt(max(data.shape[0], 1))
    pos = grid.positions
    span = pos.max(axis=0) - pos.min(axis=0)
    span[span == 0] = 1.0
    unit = (pos - pos.min(axis=0)) / span - 0.5
    return center + np.outer(unit[:, 0] * scale[0], axes[0]) + np.outer(unit[:, 1] * scale[1], axes[1])


def _bmu_indices(prototypes: np.ndarray, data: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """BMU index and distance for every row; ties go to the lowest index."""
    d2 = ((data[:, None, :] - prototypes[None, :, :]) ** 2).sum(axis=-1)
    idx = d2.argmin(axis=1)
    dist = np.sqrt(d2[np.arange(data.shape[0]), idx])
    return idx, dist


def train_som(
    data: np.ndarray,
    grid: SomGrid,
    cfg: TrainConfig = TrainConfig(),
    features: list[FeatureSpec] | None = None,
) -> Som:
    """Fit a map to Z-scored rows with deterministic batch training.

    Parameters
    ----------
    data : np.ndarray
        ``(rows, m)`` matrix of Z-scored observations, all finite.
    grid : SomGrid
        Target topology and dimensions.
    cfg : TrainConfig
        Epochs, radii, seed and initialization mode.
    features : list[FeatureSpec] | None
        Optional feature metadata to attach; synthesized when omitted.

    Returns
    -------
    Som
        Trained map with the per-epoch QE history and the frozen
        activation bandwidth (mean nearest-prototype distance).
    """
    data = _check_data(data)
    protos = _init_prototypes(data, grid, cfg)
    layout_d2 = grid.layout_distances() ** 2

    epochs = cfg.epochs
    decay_epochs = max(1, min(int(np.ceil(0.4 * epochs)), epochs // 2)) if epochs > 1 else 1
    sigmas = np.concatenate(
        [
            np.linspace(cfg.resolve_radius(grid), cfg.final_radius, decay_epochs),
            np.full(epochs - decay_epochs, cfg.final_radius),
        ]
    )
    qe_history = []
    frozen = False
    for epoch, sigma in enumerate(sigmas):
        if frozen:
            qe_history.append(qe_history[-1])
            continue
        bmu_idx, _ = _bmu_indices(protos, data)
        kernel = np.exp(-layout_d2 / (2.0 * sigma * sigma))
        influence = kernel[:, bmu_idx]  # (n, rows)
        weight_sum = influence.sum(axis=1)
        updated = influence @ data
        active = weight_sum > 1e-300
        target = protos.copy()
        target[active] = updated[active] / weight_sum[active, None]
        refining = epoch >= decay_epochs
        candidate = 0.5 * (protos + target) if refining else target
        _, dist = _bmu_indices(candidate, data)
        qe = float(dist.mean())
        if refining and qe_history and qe > qe_history[-1] + 1e-12:
            qe_history.append(qe_history[-1])
            frozen = True
            continue
        protos = candidate
        qe_history.append(qe)

    return Som(
        grid=grid,
        prototypes=protos,
        features=features or default_features(data.shape[1]),
        bandwidth=qe_history[-1],
        qe_history=tuple(qe_history),
    )


def bmu(som: Som, x: np.ndarray) -> int:
    """Index of the prototype nearest to ``x`` (lowest index on ties)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (som.m,):
        raise DimensionMismatchError(f"expected vector of length {som.m}, got shape {x.shape}")
    d2 = ((som.prototypes - x) ** 2).sum(axis=1)
    return int(d2.argmin())


def quantization_error(som: Som, data: np.ndarray) -> float:
    """Mean Euclidean distance from each row to its BMU prototype."""
    data = _check_data(data)
    if data.shape[1] != som.m:
        raise DimensionMismatchError(f"expected {som.m} columns, got {data.shape[1]}")
    _, dist = _bmu_indices(som.prototypes, data)
    return float(dist.mean())


def topographic_error(som: Som, data: np.ndarray, tol: float = ADJACENCY_TOL) -> float:
    """Fraction of rows whose two best matching units are not grid-adjacent."""
    data = _check_data(data)
    if data.shape[1] != som.m:
        raise DimensionMismatchError(f"expected {som.m} columns, got {data.shape[1]}")
    if som.n < 2:
        raise DataError("topographic error needs at least 2 neurons")
    d2 = ((data[:, None, :] - som.prototypes[None, :, :]) ** 2).sum(axis=-1)
    order = np.argsort(d2, axis=1, kind="stable")
    first, second = order[:, 0], order[:, 1]
    adj = som.grid.adjacency(tol)
    return float(np.mean(~adj[first, second]))

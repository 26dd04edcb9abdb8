"""Map grid topologies and layout geometry.

Neuron indices are row-major: neuron ``i`` sits at row ``i // width``,
column ``i % width``. Hexagonal layouts shift odd rows right by 0.5 and
space rows by sqrt(3)/2 so that all adjacent neurons are at layout
distance 1.
"""

from dataclasses import dataclass, field

import numpy as np

ADJACENCY_TOL = 1e-6

_TOPOLOGIES = ("hexagonal", "rectangular")


@dataclass(frozen=True)
class SomGrid:
    """Fixed 2-D arrangement of map neurons.

    Parameters
    ----------
    topology : str
        Either ``"hexagonal"`` or ``"rectangular"``.
    width, height : int
        Grid dimensions; the map has ``width * height`` neurons.
    positions : np.ndarray
        ``(n, 2)`` layout coordinates, derived from topology and dims.
    """

    topology: str
    width: int
    height: int
    positions: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.topology not in _TOPOLOGIES:
            raise ValueError(f"unknown topology {self.topology!r}")
        if self.width < 1 or self.height < 1:
            raise ValueError("grid must have positive width and height")
        if self.positions is None:
            object.__setattr__(self, "positions", _layout(self.topology, self.width, self.height))
        expected = (self.n, 2)
        if self.positions.shape != expected:
            raise ValueError(f"positions shape {self.positions.shape} != {expected}")

    @property
    def n(self) -> int:
        return self.width * self.height

    def layout_distances(self) -> np.ndarray:
        """Pairwise Euclidean distances between neuron layout positions."""
        diff = self.positions[:, None, :] - self.positions[None, :, :]
        return np.sqrt((diff**2).sum(axis=-1))

    def adjacency(self, tol: float = ADJACENCY_TOL) -> np.ndarray:
        """Boolean ``(n, n)`` matrix: True where layout distance <= 1 + tol,
        excluding the diagonal."""
        d = self.layout_distances()
        adj = d <= 1.0 + tol
        np.fill_diagonal(adj, False)
        return adj


def _layout(topology: str, width: int, height: int) -> np.ndarray:
    cols, rows = np.meshgrid(np.arange(width), np.arange(height))
    cols = cols.ravel().astype(float)
    rows = rows.ravel().astype(float)
    if topology == "hexagonal":
        x = cols + 0.5 * (rows % 2)
        y = rows * (np.sqrt(3.0) / 2.0)
    else:
        x = cols
        y = rows
    return np.column_stack([x, y])

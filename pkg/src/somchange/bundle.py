"""Model bundle persistence and the on-disk model store.

A bundle holds the input map, the output map, their association and the
dataset fingerprint in one self-describing flat file (layout documented
in docs/model-format.md). Serialization is canonical: saving a loaded
bundle reproduces the file byte for byte. The store is a directory of
bundle files keyed by the content hash of their bytes.
"""

import hashlib
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .association import AssociationMatrix
from .errors import DataError, ModelNotFoundError
from .grid import SomGrid
from .jsonutil import canonical_json
from .som import FeatureSpec, Som

MAGIC = b"SOMBNDL\x01"
SOM_MARKER = b"SOM\x00"
ASSOC_MARKER = b"ASC\x00"
_TOPOLOGY_CODE = {"rectangular": 0, "hexagonal": 1}
_TOPOLOGY_NAME = {v: k for k, v in _TOPOLOGY_CODE.items()}


def _pack_str(s: str) -> bytes:
    raw = s.encode("utf-8")
    return struct.pack("<I", len(raw)) + raw


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise DataError("truncated bundle file")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def u8(self) -> int:
        return self.take(1)[0]

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def f64(self) -> float:
        return struct.unpack("<d", self.take(8))[0]

    def string(self) -> str:
        return self.take(self.u32()).decode("utf-8")

    def f64_array(self, count: int) -> np.ndarray:
        return np.frombuffer(self.take(8 * count), dtype="<f8").astype(np.float64)


def _pack_som(som: Som) -> bytes:
    parts = [
        SOM_MARKER,
        struct.pack("<B", _TOPOLOGY_CODE[som.grid.topology]),
        struct.pack("<II", som.grid.width, som.grid.height),
        struct.pack("<I", som.m),
        struct.pack("<d", som.bandwidth),
    ]
    for f in som.features:
        parts.append(_pack_str(f.name))
        parts.append(struct.pack("<dd", f.z_mean, f.z_std))
    parts.append(np.ascontiguousarray(som.prototypes, dtype="<f8").tobytes())
    return b"".join(parts)


def _unpack_som(r: _Reader) -> Som:
    if r.take(4) != SOM_MARKER:
        raise DataError("bad map section marker")
    topology = _TOPOLOGY_NAME.get(r.u8())
    if topology is None:
        raise DataError("unknown topology code")
    width, height = r.u32(), r.u32()
    m = r.u32()
    bandwidth = r.f64()
    features = []
    for k in range(m):
        name = r.string()
        mean, std = r.f64(), r.f64()
        features.append(FeatureSpec(name=name, index=k, z_mean=mean, z_std=std))
    grid = SomGrid(topology=topology, width=width, height=height)
    protos = r.f64_array(grid.n * m).reshape(grid.n, m)
    return Som(grid=grid, prototypes=protos, features=features, bandwidth=bandwidth)


@dataclass(frozen=True)
class ModelBundle:
    """Trained input/output maps with their association and provenance."""

    in_som: Som
    out_som: Som
    association: AssociationMatrix
    fingerprint: str = ""
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.association.entries.shape != (self.in_som.n, self.out_som.n):
            raise DataError(
                f"association shape {self.association.entries.shape} does not match "
                f"maps ({self.in_som.n}, {self.out_som.n})"
            )

    def to_bytes(self) -> bytes:
        parts = [
            MAGIC,
            _pack_str(self.fingerprint),
            _pack_str(canonical_json(self.config)),
            _pack_som(self.in_som),
            _pack_som(self.out_som),
            ASSOC_MARKER,
            struct.pack("<II", self.association.n_in, self.association.n_out),
            struct.pack("<B", 1 if self.association.row_normalized else 0),
            np.ascontiguousarray(self.association.entries, dtype="<f8").tobytes(),
        ]
        return b"".join(parts)

    @staticmethod
    def from_bytes(data: bytes) -> "ModelBundle":
        r = _Reader(data)
        if r.take(len(MAGIC)) != MAGIC:
            raise DataError("not a model bundle file (bad magic)")
        fingerprint = r.string()
        config = json.loads(r.string())
        in_som = _unpack_som(r)
        out_som = _unpack_som(r)
        if r.take(4) != ASSOC_MARKER:
            raise DataError("bad association section marker")
        n_in, n_out = r.u32(), r.u32()
        row_normalized = bool(r.u8())
        entries = r.f64_array(n_in * n_out).reshape(n_in, n_out)
        if r.pos != len(data):
            raise DataError("trailing bytes after bundle payload")
        return ModelBundle(
            in_som=in_som,
            out_som=out_som,
            association=AssociationMatrix(entries=entries, row_normalized=row_normalized),
            fingerprint=fingerprint,
            config=config,
        )

    def save(self, path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @staticmethod
    def load(path) -> "ModelBundle":
        return ModelBundle.from_bytes(Path(path).read_bytes())

    def model_id(self) -> str:
        return bundle_id(self.to_bytes())


def bundle_id(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()[:16]


class ModelStore:
    """Directory of bundles addressed by content hash."""

    SUFFIX = ".sombundle"

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def path_for(self, model_id: str) -> Path:
        return self.root / f"{model_id}{self.SUFFIX}"

    def save(self, bundle: ModelBundle) -> str:
        data = bundle.to_bytes()
        model_id = bundle_id(data)
        self.path_for(model_id).write_bytes(data)
        return model_id

    def load(self, model_id: str) -> ModelBundle:
        path = self.path_for(model_id)
        if not path.is_file():
            raise ModelNotFoundError(f"no model {model_id!r} in {self.root}")
        return ModelBundle.load(path)

    def ids(self) -> list[str]:
        return sorted(p.name[: -len(self.SUFFIX)] for p in self.root.glob(f"*{self.SUFFIX}"))

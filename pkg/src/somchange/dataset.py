"""CSV ingestion and Z-score standardization of paired records.

Each row splits into an input part and an output part by column name.
Rows with missing cells are dropped and reported by file line number;
non-numeric cells and constant columns are hard errors. Standardization
parameters (mean, population std) are fitted per column on the retained
rows and stored on the feature specs for raw <-> Z round trips.
"""

import csv
import hashlib
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError
from .som import FeatureSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Dataset:
    """Paired raw-unit records plus fitted standardization parameters."""

    raw_in: np.ndarray = field(repr=False)
    raw_out: np.ndarray = field(repr=False)
    input_features: list[FeatureSpec] = field(default_factory=list)
    output_features: list[FeatureSpec] = field(default_factory=list)
    dropped_rows: tuple = ()
    fingerprint: str = ""

    @property
    def n_rows(self) -> int:
        return self.raw_in.shape[0]

    def z_input(self) -> np.ndarray:
        return _to_z(self.raw_in, self.input_features)

    def z_output(self) -> np.ndarray:
        return _to_z(self.raw_out, self.output_features)

    def z_from_raw_input(self, raw: np.ndarray) -> np.ndarray:
        return _to_z(np.asarray(raw, dtype=np.float64)[None, :], self.input_features)[0]


def _to_z(raw: np.ndarray, features: list[FeatureSpec]) -> np.ndarray:
    means = np.array([f.z_mean for f in features])
    stds = np.array([f.z_std for f in features])
    return (raw - means) / stds


def _fit_features(raw: np.ndarray, names: list[str]) -> list[FeatureSpec]:
    specs = []
    for k, name in enumerate(names):
        col = raw[:, k]
        std = float(col.std())
        if std < 1e-12:
            raise DataError(f"column {name!r} is constant; cannot standardize")
        specs.append(FeatureSpec(name=name, index=k, z_mean=float(col.mean()), z_std=std))
    return specs


def ingest_csv(path, input_cols: list[str], output_cols: list[str]) -> Dataset:
    """Load a paired dataset from a headered CSV file.

    Parameters
    ----------
    path : str | Path
        CSV file with a header row and numeric cells.
    input_cols, output_cols : list[str]
        Column names for the input and output parts; must be disjoint
        and present in the header.
    """
    path = Path(path)
    try:
        content = path.read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    return ingest_csv_bytes(content, input_cols, output_cols)


def ingest_csv_bytes(content: bytes, input_cols: list[str], output_cols: list[str]) -> Dataset:
    """Ingest CSV content already in memory; same contract as ingest_csv."""
    if not input_cols or not output_cols:
        raise DataError("both input and output column lists are required")
    overlap = set(input_cols) & set(output_cols)
    if overlap:
        raise DataError(f"columns cannot be both input and output: {sorted(overlap)}")

    try:
        rows = list(csv.reader(content.decode("utf-8-sig").splitlines()))
    except UnicodeDecodeError as exc:
        raise DataError(f"CSV content is not valid UTF-8 text: {exc}") from exc
    if not rows:
        raise DataError("CSV content is empty")
    header = [h.strip() for h in rows[0]]
    for name in (*input_cols, *output_cols):
        if name not in header:
            raise DataError(f"column {name!r} not found in header {header}")
    in_idx = [header.index(c) for c in input_cols]
    out_idx = [header.index(c) for c in output_cols]

    kept_in, kept_out, dropped = [], [], []
    for line_no, row in enumerate(rows[1:], start=2):
        if not row or all(cell.strip() == "" for cell in row):
            dropped.append(line_no)
            continue
        if len(row) != len(header):
            raise DataError(f"line {line_no}: expected {len(header)} cells, got {len(row)}")
        cells = [row[i].strip() for i in (*in_idx, *out_idx)]
        if any(c == "" for c in cells):
            dropped.append(line_no)
            continue
        try:
            values = [float(c) for c in cells]
        except ValueError as exc:
            raise DataError(f"line {line_no}: non-numeric cell ({exc})") from exc
        if not all(np.isfinite(values)):
            raise DataError(f"line {line_no}: non-finite value")
        kept_in.append(values[: len(in_idx)])
        kept_out.append(values[len(in_idx):])

    if dropped:
        logger.warning("dropped %d row(s) with missing cells at lines %s", len(dropped), dropped)
    if not kept_in:
        raise DataError("no complete data rows after ingestion")

    raw_in = np.asarray(kept_in, dtype=np.float64)
    raw_out = np.asarray(kept_out, dtype=np.float64)
    return Dataset(
        raw_in=raw_in,
        raw_out=raw_out,
        input_features=_fit_features(raw_in, list(input_cols)),
        output_features=_fit_features(raw_out, list(output_cols)),
        dropped_rows=tuple(dropped),
        fingerprint=hashlib.sha256(content).hexdigest(),
    )

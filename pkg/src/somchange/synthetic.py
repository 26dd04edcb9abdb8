"""Seeded synthetic paired dataset for demos and end-to-end tests.

130 rows of 5 input and 5 output features. Input ``in4`` is constructed
as the dominant driver: every output depends monotonically on it (with
mild nonlinearity and noise), so shifting ``in4`` further from the
baseline moves the conditional output pattern further as well. Raw
units are arbitrary per column; standardization happens at ingestion.
"""

from pathlib import Path

import numpy as np

INPUT_COLUMNS = ("in1", "in2", "in3", "in4", "in5")
OUTPUT_COLUMNS = ("out1", "out2", "out3", "out4", "out5")
DRIVER_COLUMN = "in4"
DEFAULT_ROWS = 130
DEFAULT_SEED = 1234


def make_paired_data(rows: int = DEFAULT_ROWS, seed: int = DEFAULT_SEED):
    """Return raw ``(rows, 5)`` input and output matrices."""
    rng = np.random.default_rng(seed)
    base = rng.normal(size=(rows, 5))
    x1 = base[:, 0]
    x2 = 0.6 * base[:, 0] + 0.8 * base[:, 1]
    x3 = base[:, 2]
    x4 = 0.3 * base[:, 2] + 0.95 * base[:, 3]
    x5 = base[:, 4]

    noise = rng.normal(scale=0.3, size=(rows, 5))
    y1 = -1.1 * x4 + 0.4 * x1 + 0.2 * x2 + noise[:, 0]
    y2 = 0.9 * x4 - 0.3 * x3 + noise[:, 1]
    y3 = -0.7 * x4 + 0.5 * x5 + noise[:, 2]
    y4 = 0.8 * np.tanh(1.2 * x4) + 0.3 * x2 + noise[:, 3]
    y5 = -0.5 * x4 - 0.4 * x1 + noise[:, 4]

    raw_in = np.column_stack(
        [
            320.0 + 150.0 * x1,
            12.0 + 4.5 * x2,
            3.0 + 1.2 * x3,
            45.0 + 18.0 * x4,
            16.5 + 3.5 * x5,
        ]
    )
    raw_out = np.column_stack(
        [
            40.0 + 12.0 * y1,
            25.0 + 9.0 * y2,
            55.0 + 15.0 * y3,
            18.0 + 6.0 * y4,
            9.0 + 3.0 * y5,
        ]
    )
    return raw_in, raw_out


def write_csv(path, rows: int = DEFAULT_ROWS, seed: int = DEFAULT_SEED) -> Path:
    """Write the synthetic dataset as a headered CSV and return its path."""
    raw_in, raw_out = make_paired_data(rows, seed)
    path = Path(path)
    lines = [",".join(INPUT_COLUMNS + OUTPUT_COLUMNS)]
    for i in range(raw_in.shape[0]):
        cells = [f"{v:.6f}" for v in (*raw_in[i], *raw_out[i])]
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path

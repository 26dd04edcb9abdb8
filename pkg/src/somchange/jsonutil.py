"""Canonical JSON serialization.

All externally visible JSON (CLI output, HTTP bodies, files on disk) goes
through :func:`canonical_json` so that identical payloads are byte-identical
regardless of the code path that produced them.
"""

import json

import numpy as np


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)) and not isinstance(obj, bool):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def canonical_json(obj) -> str:
    """Serialize ``obj`` deterministically: sorted keys, 2-space indent,
    native Python scalars, no trailing newline."""
    return json.dumps(_plain(obj), sort_keys=True, indent=2, ensure_ascii=False)

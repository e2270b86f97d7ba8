"""JSON encoding of matrices and reports.

A matrix is ``{"n": n, "re": [[...]], "im": [[...]]}``; ``im`` may be
omitted for real matrices, and a bare nested list of reals is accepted too.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import ContractError, DimensionError


def matrix_to_json(M) -> dict:
    M = np.asarray(M, dtype=complex)
    return {"n": M.shape[0], "re": _clean(M.real).tolist(), "im": _clean(M.imag).tolist()}


def _clean(A: np.ndarray) -> np.ndarray:
    # avoid "-0.0" in output
    return np.where(A == 0, 0.0, A)


def matrix_from_json(obj) -> np.ndarray:
    if isinstance(obj, dict):
        if "re" not in obj:
            raise ContractError("matrix object needs a 're' field")
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
        if re.shape != im.shape:
            raise DimensionError(f"'re' {re.shape} and 'im' {im.shape} differ in shape")
        M = re + 1j * im
        if "n" in obj and M.shape != (obj["n"], obj["n"]):
            raise DimensionError(f"declared n={obj['n']} but matrix has shape {M.shape}")
    else:
        M = np.asarray(obj, dtype=complex)
    if M.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {M.shape}")
    return M


def load_json(path):
    with open(path) as fh:
        return json.load(fh)


def load_matrix(path) -> np.ndarray:
    return matrix_from_json(load_json(path))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v) or math.isinf(v):
            return str(v)
        return 0.0 if v == 0 else v
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"

"""Hot loops, dispatched to the compiled extension when it is importable.

Set ``CSOUTLIERS_KERNELS=python`` to force the numpy fallback, or
``CSOUTLIERS_KERNELS=cython`` to make a missing extension an import error.
"""
from __future__ import annotations

import os
from types import ModuleType

import numpy as np

from . import _pykernels


def _load_compiled() -> ModuleType | None:
    try:
        from . import _ckernels
    except ImportError:
        return None
    return _ckernels


_choice = os.environ.get("CSOUTLIERS_KERNELS", "auto").strip().lower()
_compiled = None if _choice == "python" else _load_compiled()
if _choice == "cython" and _compiled is None:
    raise ImportError("CSOUTLIERS_KERNELS=cython but csoutliers._ckernels is not built")

_impl: ModuleType = _compiled if _compiled is not None else _pykernels
BACKEND = "cython" if _compiled is not None else "python"


def available_backends() -> dict[str, ModuleType]:
    """Every importable kernel module, keyed by name (the fallback is always present)."""
    found = {"python": _pykernels}
    compiled = _load_compiled()
    if compiled is not None:
        found["cython"] = compiled
    return found


def _u8(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.uint8)


def _i64(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.int64)


def row_distances(S, x) -> np.ndarray:
    """Hamming distance from every row of ``S`` to ``x``."""
    return _impl.row_distances(_u8(S), _u8(x))


def consensus_rows(S, rows, sigma: int) -> tuple[np.ndarray, int]:
    """Consensus of the selected rows and its total distance to them."""
    return _impl.consensus_rows(_u8(S), _i64(rows), int(sigma))


def best_subset(S, m: int, sigma: int) -> tuple[np.ndarray, int]:
    """First size-``m`` row subset (lexicographic order) of minimum consensus cost."""
    return _impl.best_subset(_u8(S), int(m), int(sigma))


def best_center(S, sigma: int, m: int) -> tuple[np.ndarray, int]:
    """First center in Sigma^L (lexicographic) minimizing the sum of its m smallest row distances."""
    return _impl.best_center(_u8(S), int(sigma), int(m))


def multiset_candidates(S, r: int, sigma: int) -> np.ndarray:
    """Distinct consensus strings over all size-``r`` row multisets, in first-seen order."""
    return _impl.multiset_candidates(_u8(S), int(r), int(sigma))


def weighted_consensus(S, W, sigma: int) -> np.ndarray:
    """Row-weighted consensus for each weight vector (one per row of ``W``)."""
    return _impl.weighted_consensus(_u8(S), _i64(np.atleast_2d(W)), int(sigma))


def center_costs(S, X, m: int, sigma: int) -> tuple[np.ndarray, np.ndarray]:
    """For each center x (row of ``X``): consensus cost of S_x and the distance sum d(S_x, x)."""
    return _impl.center_costs(_u8(S), _u8(np.atleast_2d(X)), int(m), int(sigma))

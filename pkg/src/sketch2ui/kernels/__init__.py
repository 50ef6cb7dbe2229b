"""Numeric kernels with a numba-jitted default and a pure-numpy fallback.

The backend is picked once at import time from the ``SKETCH2UI_BACKEND``
environment variable: ``numba`` (default when importable) or ``numpy``.
Both backends implement the same functions with identical semantics;
``benchmarks/bench_kernels.py`` compares their throughput.
"""

from __future__ import annotations

import os

import numpy as np

from ._numpy import EPS

BACKEND_ENV_VAR = "SKETCH2UI_BACKEND"


def _select_backend():
    forced = os.environ.get(BACKEND_ENV_VAR, "").strip().lower()
    if forced not in ("", "numba", "numpy"):
        raise RuntimeError(
            f"{BACKEND_ENV_VAR} must be 'numba' or 'numpy', got {forced!r}"
        )
    if forced != "numpy":
        try:
            from . import _numba as impl

            return impl, "numba"
        except ImportError:
            if forced == "numba":
                raise
    from . import _numpy as impl

    return impl, "numpy"


_impl, BACKEND = _select_backend()

pairwise_overlap_area = _impl.pairwise_overlap_area
pairwise_overlap_ratio = _impl.pairwise_overlap_ratio
vertical_overlap_fraction = _impl.vertical_overlap_fraction
band_labels = _impl.band_labels
cross_entropy = _impl.cross_entropy
balanced_cross_entropy = _impl.balanced_cross_entropy
focal_loss = _impl.focal_loss
focal_loss_grad = _impl.focal_loss_grad

_warmed_up = False


def warmup() -> None:
    """Trigger JIT compilation of every kernel on tiny inputs.

    No-op on the numpy backend and on repeat calls.  The pipeline calls this
    before timing stages so reported times measure the work, not compilation.
    """
    global _warmed_up
    if _warmed_up:
        return
    boxes = np.array([[0.0, 0.0, 2.0, 2.0], [1.0, 1.0, 3.0, 3.0]])
    pairwise_overlap_area(boxes)
    pairwise_overlap_ratio(boxes, False)
    pairwise_overlap_ratio(boxes, True)
    vertical_overlap_fraction(boxes)
    band_labels(np.array([[False, True], [True, False]]))
    x = np.array([0.3, 0.8])
    pos = np.array([True, False])
    cross_entropy(x, pos)
    balanced_cross_entropy(x, pos, 0.25)
    focal_loss(x, pos, 0.25, 2.0)
    focal_loss_grad(x, pos, 0.25, 2.0)
    _warmed_up = True


__all__ = [
    "BACKEND",
    "BACKEND_ENV_VAR",
    "EPS",
    "pairwise_overlap_area",
    "pairwise_overlap_ratio",
    "vertical_overlap_fraction",
    "band_labels",
    "cross_entropy",
    "balanced_cross_entropy",
    "focal_loss",
    "focal_loss_grad",
    "warmup",
]

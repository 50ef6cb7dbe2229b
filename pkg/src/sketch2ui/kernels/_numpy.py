"""Pure-numpy kernel implementations (fallback backend).

Array layouts: boxes are (n, 4) float64 rows of (x_min, y_min, x_max, y_max);
``positive`` is a bool array marking the positive-class ground truth.
"""

from __future__ import annotations

import numpy as np

# Probabilities are clamped to [EPS, 1 - EPS] before any log, identically in
# losses and gradients.
EPS = 1e-12


def pairwise_overlap_area(boxes: np.ndarray) -> np.ndarray:
    """(n, n) matrix of overlap areas dx * dy, zero for disjoint boxes."""
    x1, y1, x2, y2 = boxes[:, 0], boxes[:, 1], boxes[:, 2], boxes[:, 3]
    dx = np.minimum(x2[:, None], x2[None, :]) - np.maximum(x1[:, None], x1[None, :])
    dy = np.minimum(y2[:, None], y2[None, :]) - np.maximum(y1[:, None], y1[None, :])
    np.maximum(dx, 0.0, out=dx)
    np.maximum(dy, 0.0, out=dy)
    return dx * dy


def pairwise_overlap_ratio(boxes: np.ndarray, use_iou: bool = False) -> np.ndarray:
    """(n, n) overlap ratios: intersection / min-area, or IoU when use_iou."""
    inter = pairwise_overlap_area(boxes)
    areas = (boxes[:, 2] - boxes[:, 0]) * (boxes[:, 3] - boxes[:, 1])
    if use_iou:
        denom = areas[:, None] + areas[None, :] - inter
    else:
        denom = np.minimum(areas[:, None], areas[None, :])
    return inter / denom


def vertical_overlap_fraction(boxes: np.ndarray) -> np.ndarray:
    """(n, n) vertical-interval overlap as a fraction of the smaller height."""
    y1, y2 = boxes[:, 1], boxes[:, 3]
    dy = np.minimum(y2[:, None], y2[None, :]) - np.maximum(y1[:, None], y1[None, :])
    np.maximum(dy, 0.0, out=dy)
    h = y2 - y1
    return dy / np.minimum(h[:, None], h[None, :])


def band_labels(adjacency: np.ndarray) -> np.ndarray:
    """Connected-component labels of a symmetric boolean adjacency matrix.

    Labels are assigned in first-occurrence order, so label 0 is the
    component of row 0.  Union always attaches the larger root under the
    smaller, which keeps every root at its component's minimum index.
    """
    n = adjacency.shape[0]
    parent = np.arange(n, dtype=np.int64)

    def find(k: int) -> int:
        while parent[k] != k:
            k = parent[k]
        return k

    for i, j in np.argwhere(np.triu(adjacency, k=1)):
        ri, rj = find(int(i)), find(int(j))
        if ri != rj:
            if ri < rj:
                parent[rj] = ri
            else:
                parent[ri] = rj
    labels = np.full(n, -1, dtype=np.int64)
    next_label = 0
    for i in range(n):
        r = find(i)
        if labels[r] == -1:
            labels[r] = next_label
            next_label += 1
        labels[i] = labels[r]
    return labels


def _p_t(x: np.ndarray, positive: np.ndarray) -> np.ndarray:
    x = np.clip(x, EPS, 1.0 - EPS)
    return np.where(positive, x, 1.0 - x)


def _alpha_t(positive: np.ndarray, alpha: float) -> np.ndarray:
    return np.where(positive, alpha, 1.0 - alpha)


def cross_entropy(x: np.ndarray, positive: np.ndarray) -> np.ndarray:
    return -np.log(_p_t(x, positive))


def balanced_cross_entropy(x: np.ndarray, positive: np.ndarray, alpha: float) -> np.ndarray:
    return _alpha_t(positive, alpha) * cross_entropy(x, positive)


def focal_loss(x: np.ndarray, positive: np.ndarray, alpha: float, gamma: float) -> np.ndarray:
    p = _p_t(x, positive)
    return _alpha_t(positive, alpha) * np.power(1.0 - p, gamma) * (-np.log(p))


def focal_loss_grad(x: np.ndarray, positive: np.ndarray, alpha: float, gamma: float) -> np.ndarray:
    """d(focal loss)/dx.

    With p the clamped ground-truth probability and a_t the class weight:
    dL/dp = -a_t * [(1-p)^g / p - g (1-p)^(g-1) ln p], and dp/dx is +1 for
    positives, -1 for negatives.
    """
    p = _p_t(x, positive)
    a_t = _alpha_t(positive, alpha)
    mod = np.power(1.0 - p, gamma)
    # gamma * (1-p)^(gamma-1) is exactly 0 at gamma == 0; 1-p >= EPS keeps the
    # power finite so the product never produces nan.
    dmod = gamma * np.power(1.0 - p, gamma - 1.0)
    dloss_dp = -a_t * (mod / p - dmod * np.log(p))
    return np.where(positive, dloss_dp, -dloss_dp)

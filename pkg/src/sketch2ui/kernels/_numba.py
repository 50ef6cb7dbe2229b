"""Numba-jitted kernel implementations (default backend).

Semantics match ``_numpy`` exactly; see there for array layouts.  The loops
here are what numba compiles well: no temporaries, one pass per matrix.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from ._numpy import EPS


@njit(cache=True)
def pairwise_overlap_area(boxes):
    n = boxes.shape[0]
    out = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(n):
            dx = min(boxes[i, 2], boxes[j, 2]) - max(boxes[i, 0], boxes[j, 0])
            dy = min(boxes[i, 3], boxes[j, 3]) - max(boxes[i, 1], boxes[j, 1])
            if dx < 0.0:
                dx = 0.0
            if dy < 0.0:
                dy = 0.0
            out[i, j] = dx * dy
    return out


@njit(cache=True)
def pairwise_overlap_ratio(boxes, use_iou=False):
    n = boxes.shape[0]
    areas = np.empty(n, dtype=np.float64)
    for i in range(n):
        areas[i] = (boxes[i, 2] - boxes[i, 0]) * (boxes[i, 3] - boxes[i, 1])
    out = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(n):
            dx = min(boxes[i, 2], boxes[j, 2]) - max(boxes[i, 0], boxes[j, 0])
            dy = min(boxes[i, 3], boxes[j, 3]) - max(boxes[i, 1], boxes[j, 1])
            if dx < 0.0:
                dx = 0.0
            if dy < 0.0:
                dy = 0.0
            inter = dx * dy
            if use_iou:
                denom = areas[i] + areas[j] - inter
            else:
                denom = min(areas[i], areas[j])
            out[i, j] = inter / denom
    return out


@njit(cache=True)
def vertical_overlap_fraction(boxes):
    n = boxes.shape[0]
    out = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        hi = boxes[i, 3] - boxes[i, 1]
        for j in range(n):
            hj = boxes[j, 3] - boxes[j, 1]
            dy = min(boxes[i, 3], boxes[j, 3]) - max(boxes[i, 1], boxes[j, 1])
            if dy < 0.0:
                dy = 0.0
            out[i, j] = dy / min(hi, hj)
    return out


@njit(cache=True)
def band_labels(adjacency):
    n = adjacency.shape[0]
    parent = np.arange(n)
    for i in range(n):
        for j in range(i + 1, n):
            if adjacency[i, j]:
                ri = i
                while parent[ri] != ri:
                    ri = parent[ri]
                rj = j
                while parent[rj] != rj:
                    rj = parent[rj]
                if ri != rj:
                    # larger root under smaller: roots stay at min index
                    if ri < rj:
                        parent[rj] = ri
                    else:
                        parent[ri] = rj
    labels = np.full(n, -1, dtype=np.int64)
    next_label = 0
    for i in range(n):
        r = i
        while parent[r] != r:
            r = parent[r]
        if labels[r] == -1:
            labels[r] = next_label
            next_label += 1
        labels[i] = labels[r]
    return labels


@njit(cache=True)
def cross_entropy(x, positive):
    out = np.empty(x.shape[0], dtype=np.float64)
    for i in range(x.shape[0]):
        xi = min(max(x[i], EPS), 1.0 - EPS)
        p = xi if positive[i] else 1.0 - xi
        out[i] = -math.log(p)
    return out


@njit(cache=True)
def balanced_cross_entropy(x, positive, alpha):
    out = np.empty(x.shape[0], dtype=np.float64)
    for i in range(x.shape[0]):
        xi = min(max(x[i], EPS), 1.0 - EPS)
        if positive[i]:
            p = xi
            a_t = alpha
        else:
            p = 1.0 - xi
            a_t = 1.0 - alpha
        out[i] = a_t * -math.log(p)
    return out


@njit(cache=True)
def focal_loss(x, positive, alpha, gamma):
    out = np.empty(x.shape[0], dtype=np.float64)
    for i in range(x.shape[0]):
        xi = min(max(x[i], EPS), 1.0 - EPS)
        if positive[i]:
            p = xi
            a_t = alpha
        else:
            p = 1.0 - xi
            a_t = 1.0 - alpha
        out[i] = a_t * math.pow(1.0 - p, gamma) * -math.log(p)
    return out


@njit(cache=True)
def focal_loss_grad(x, positive, alpha, gamma):
    out = np.empty(x.shape[0], dtype=np.float64)
    for i in range(x.shape[0]):
        xi = min(max(x[i], EPS), 1.0 - EPS)
        if positive[i]:
            p = xi
            a_t = alpha
        else:
            p = 1.0 - xi
            a_t = 1.0 - alpha
        mod = math.pow(1.0 - p, gamma)
        dmod = gamma * math.pow(1.0 - p, gamma - 1.0)
        dloss_dp = -a_t * (mod / p - dmod * math.log(p))
        out[i] = dloss_dp if positive[i] else -dloss_dp
    return out

"""Focal-loss numerics: cross-entropy, class-balanced form, focal form, gradients.

The focal loss damps the contribution of well-classified examples: the plain
cross-entropy is scaled by a modulating factor (1 - p)^gamma, where p is the
probability the model assigns to the true class, plus a class weight.  The
class weight is applied class-dependently: ``alpha`` for positives and
``1 - alpha`` for negatives, the form that actually re-balances the classes.

Scalar entry points validate their domain and delegate to the array kernels
(see :mod:`sketch2ui.kernels`), so scalar and batch evaluation agree bitwise.
Probabilities are clamped to ``[1e-12, 1 - 1e-12]`` before any log, in losses
and gradients identically.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels


class GroundTruth(enum.Enum):
    """Binary ground-truth class, conventionally written z = +1 / z = -1."""

    POSITIVE = 1
    NEGATIVE = -1

    @classmethod
    def from_text(cls, text: str) -> "GroundTruth":
        t = text.strip().lower()
        if t in ("+1", "1", "pos", "positive"):
            return cls.POSITIVE
        if t in ("-1", "neg", "negative"):
            return cls.NEGATIVE
        raise ValueError(f"ground truth must be +1/-1/pos/neg, got {text!r}")


@dataclass(frozen=True)
class FocalLossParams:
    """Class weight alpha in [0, 1] and focusing exponent gamma >= 0."""

    alpha: float = 0.25
    gamma: float = 2.0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha {self.alpha} outside [0, 1]")
        if not self.gamma >= 0.0:
            raise ValueError(f"gamma {self.gamma} must be >= 0")


def _check_probability(x: float) -> float:
    x = float(x)
    if not 0.0 < x < 1.0:
        raise ValueError(f"probability {x} outside the open interval (0, 1)")
    return x


def _scalar(kernel, x: float, truth: GroundTruth, *args) -> float:
    xs = np.array([_check_probability(x)], dtype=np.float64)
    pos = np.array([truth is GroundTruth.POSITIVE])
    return float(kernel(xs, pos, *args))


def true_class_probability(x: float, truth: GroundTruth) -> float:
    """Probability assigned to the ground-truth class: x for positives, 1-x otherwise."""
    x = _check_probability(x)
    return x if truth is GroundTruth.POSITIVE else 1.0 - x


def cross_entropy(x: float, truth: GroundTruth) -> float:
    """-ln of the true-class probability (natural log)."""
    return _scalar(kernels.cross_entropy, x, truth)


def balanced_cross_entropy(x: float, truth: GroundTruth, alpha: float) -> float:
    """Cross-entropy weighted by alpha for positives and 1-alpha for negatives."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha {alpha} outside [0, 1]")
    return _scalar(kernels.balanced_cross_entropy, x, truth, float(alpha))


def focal_loss(x: float, truth: GroundTruth, params: FocalLossParams) -> float:
    """Class-weighted cross-entropy damped by the modulating factor (1-p)^gamma."""
    return _scalar(kernels.focal_loss, x, truth, params.alpha, params.gamma)


def focal_loss_grad(x: float, truth: GroundTruth, params: FocalLossParams) -> float:
    """Analytic d(focal loss)/dx.

    For the positive class (p = x, weight a):
        dL/dx = -a * [(1-x)^g / x - g * (1-x)^(g-1) * ln x]
    For the negative class (p = 1-x, weight 1-a):
        dL/dx = (1-a) * [x^g / (1-x) - g * x^(g-1) * ln(1-x)]
    which is the positive-branch expression in p with the sign of dp/dx.
    """
    return _scalar(kernels.focal_loss_grad, x, truth, params.alpha, params.gamma)


def _batch(kernel, x, truth: GroundTruth, *args) -> np.ndarray:
    xs = np.asarray(x, dtype=np.float64)
    if xs.ndim != 1:
        raise ValueError("expected a 1-d array of probabilities")
    if not ((xs > 0.0) & (xs < 1.0)).all():
        raise ValueError("all probabilities must lie in the open interval (0, 1)")
    pos = np.full(xs.shape, truth is GroundTruth.POSITIVE)
    return kernel(xs, pos, *args)


def cross_entropy_batch(x, truth: GroundTruth) -> np.ndarray:
    return _batch(kernels.cross_entropy, x, truth)


def balanced_cross_entropy_batch(x, truth: GroundTruth, alpha: float) -> np.ndarray:
    return _batch(kernels.balanced_cross_entropy, x, truth, float(alpha))


def focal_loss_batch(x, truth: GroundTruth, params: FocalLossParams) -> np.ndarray:
    return _batch(kernels.focal_loss, x, truth, params.alpha, params.gamma)


def focal_loss_grad_batch(x, truth: GroundTruth, params: FocalLossParams) -> np.ndarray:
    return _batch(kernels.focal_loss_grad, x, truth, params.alpha, params.gamma)


#: Default sweep used by the gradient check: every combination of these.
GRADCHECK_X = tuple(round(0.01 * k, 2) for k in range(1, 100))
GRADCHECK_GAMMA = (0.0, 0.5, 1.0, 2.0, 5.0)
GRADCHECK_ALPHA = (0.25, 0.5, 1.0)


@dataclass(frozen=True)
class GradCheckResult:
    max_relative_error: float
    worst_x: float
    worst_truth: GroundTruth
    worst_params: FocalLossParams
    points_checked: int


def relative_error(a: float, b: float) -> float:
    """|a - b| relative to the larger magnitude; 0 when both are exactly 0."""
    scale = max(abs(a), abs(b))
    if scale == 0.0:
        return 0.0
    return abs(a - b) / scale


def gradient_check(
    h: float = 1e-6,
    xs: Iterable[float] = GRADCHECK_X,
    gammas: Iterable[float] = GRADCHECK_GAMMA,
    alphas: Iterable[float] = GRADCHECK_ALPHA,
) -> GradCheckResult:
    """Compare analytic gradients against central finite differences.

    The reference value is (L(x+h) - L(x-h)) / 2h computed from the loss
    itself, independent of the analytic-gradient code path.
    """
    xs = np.asarray(list(xs), dtype=np.float64)
    worst = (-1.0, 0.0, GroundTruth.POSITIVE, FocalLossParams())
    count = 0
    for truth in GroundTruth:
        pos = np.full(xs.shape, truth is GroundTruth.POSITIVE)
        for gamma in gammas:
            for alpha in alphas:
                analytic = kernels.focal_loss_grad(xs, pos, alpha, gamma)
                hi = kernels.focal_loss(xs + h, pos, alpha, gamma)
                lo = kernels.focal_loss(xs - h, pos, alpha, gamma)
                fd = (hi - lo) / (2.0 * h)
                for i in range(xs.shape[0]):
                    err = relative_error(float(analytic[i]), float(fd[i]))
                    count += 1
                    if err > worst[0]:
                        worst = (err, float(xs[i]), truth, FocalLossParams(alpha, gamma))
    return GradCheckResult(
        max_relative_error=worst[0],
        worst_x=worst[1],
        worst_truth=worst[2],
        worst_params=worst[3],
        points_checked=count,
    )

"""Cross entropy and penalty-weighted cross entropy over three labels.

Labels are indexed (positive=0, negative=1, neutral=2) everywhere. The
weighted loss multiplies plain cross entropy by a penalty taken from a
3x3 matrix indexed [predicted][expected], where "predicted" is the
argmax of the model's probability vector. Misclassifying across the
positive/negative divide can thereby cost more than drifting into
neutral. Gradients treat the selected penalty as a constant of the
forward pass, since the argmax selection is discrete.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sentiscore.lexicon import LABELS

#: Default penalty weights, rows = predicted label, columns = expected label,
#: both in (positive, negative, neutral) order.
DEFAULT_PENALTIES = (
    (1.0, 4.0, 3.0),
    (4.0, 1.0, 3.0),
    (2.0, 2.0, 1.0),
)

#: Lower bound used when taking logs of predicted probabilities.
PROB_FLOOR = 1e-12


class LossError(ValueError):
    """Raised on malformed labels, distributions, or penalty matrices."""


@dataclass(frozen=True)
class PenaltyMatrix:
    """3x3 misclassification weights indexed [predicted][expected]."""

    weights: np.ndarray

    def __post_init__(self) -> None:
        weights = np.asarray(self.weights, dtype=float)
        if weights.shape != (3, 3):
            raise LossError("penalty matrix must be 3x3")
        if np.any(weights < 1.0):
            raise LossError("penalty weights must all be >= 1")
        if not np.all(np.diag(weights) == 1.0):
            raise LossError("penalty matrix diagonal must be 1")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def default(cls) -> "PenaltyMatrix":
        return cls(np.array(DEFAULT_PENALTIES))

    def weight(self, predicted: int, expected: int) -> float:
        return float(self.weights[predicted, expected])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PenaltyMatrix):
            return NotImplemented
        return bool(np.array_equal(self.weights, other.weights))


def softmax(logits: np.ndarray) -> np.ndarray:
    """Numerically stable softmax over the last axis."""
    logits = np.asarray(logits, dtype=float)
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / np.sum(exp, axis=-1, keepdims=True)


def _one_hot_index(y: np.ndarray) -> int:
    y = np.asarray(y, dtype=float)
    if y.shape != (3,) or not np.all((y == 0.0) | (y == 1.0)) or y.sum() != 1.0:
        raise LossError(f"y must be a one-hot 3-vector, got {y!r}")
    return int(np.argmax(y))


def _check_distribution(probs: np.ndarray) -> np.ndarray:
    probs = np.asarray(probs, dtype=float)
    if probs.shape != (3,):
        raise LossError("probability vector must have 3 entries")
    if np.any(probs < 0.0) or np.any(probs > 1.0) or abs(probs.sum() - 1.0) > 1e-9:
        raise LossError(f"not a probability distribution: {probs!r}")
    return probs


def cross_entropy(y: np.ndarray, y_hat: np.ndarray) -> float:
    """Negative log probability of the true label.

    Probabilities are floored at ``PROB_FLOOR`` before the log so
    saturated predictions stay finite.
    """
    idx = _one_hot_index(y)
    probs = _check_distribution(y_hat)
    return float(-np.log(max(probs[idx], PROB_FLOOR)))


def weighted_cross_entropy(
    y: np.ndarray, y_hat: np.ndarray, penalty: PenaltyMatrix
) -> float:
    """Cross entropy scaled by the penalty for this (predicted, expected) pair.

    The predicted label is the argmax of ``y_hat``; argmax ties resolve
    to the lowest index, i.e. positive before negative before neutral.
    """
    idx = _one_hot_index(y)
    probs = _check_distribution(y_hat)
    predicted = int(np.argmax(probs))
    return penalty.weight(predicted, idx) * cross_entropy(y, y_hat)


def ce_grad_logits(y: np.ndarray, logits: np.ndarray) -> np.ndarray:
    """Gradient of plain cross entropy composed with softmax."""
    idx = _one_hot_index(y)
    probs = softmax(logits)
    grad = probs.copy()
    grad[idx] -= 1.0
    return grad


def weighted_ce_grad_logits(
    y: np.ndarray, logits: np.ndarray, penalty: PenaltyMatrix | None
) -> np.ndarray:
    """Gradient of the weighted loss with respect to pre-softmax logits.

    The penalty weight selected on the forward pass is treated as a
    constant, so the gradient is the plain softmax cross-entropy
    gradient scaled by that weight. Passing ``penalty=None`` recovers
    the unweighted gradient.
    """
    idx = _one_hot_index(y)
    logits = np.asarray(logits, dtype=float)
    if not np.all(np.isfinite(logits)):
        raise LossError("logits must be finite")
    probs = softmax(logits)
    weight = 1.0 if penalty is None else penalty.weight(int(np.argmax(probs)), idx)
    grad = probs.copy()
    grad[idx] -= 1.0
    return weight * grad


def label_loss(
    y: np.ndarray, y_hat: np.ndarray, penalty: PenaltyMatrix | None
) -> float:
    """Weighted loss when a penalty is given, plain cross entropy otherwise."""
    if penalty is None:
        return cross_entropy(y, y_hat)
    return weighted_cross_entropy(y, y_hat, penalty)


def one_hot(index: int) -> np.ndarray:
    """One-hot vector over the global label order."""
    if not 0 <= index < len(LABELS):
        raise LossError(f"label index out of range: {index}")
    vec = np.zeros(len(LABELS))
    vec[index] = 1.0
    return vec

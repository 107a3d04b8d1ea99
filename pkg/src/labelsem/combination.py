"""Composite and compound concepts in weighted binary spaces.

A composite concept is a signed conjunction of labels ``+-L_1 & ... & +-L_n``.
It lives in ``{0,1}^n`` with prototype bit vector (1 for a positive label,
0 for a negated one), distance given by the weighted Hamming metric and a
threshold uniform on ``[0, lambda_T]``. Its membership reduces to a weighted
sum of the signed label memberships; ``binary_oracle`` computes the same
quantity from the definition by enumerating the binary space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError, ResourceError, UnsupportedStructureError
from .semantics import Label, Sign, SignedLabel, ThresholdDistribution, appropriateness

DEFAULT_ENUMERATION_CAP = 20


@dataclass(frozen=True)
class WeightVector:
    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in np.atleast_1d(np.asarray(self.values, dtype=float)))
        if not vals:
            raise InputError("weight vector must be non-empty")
        if not all(v > 0 and np.isfinite(v) for v in vals):
            raise InputError(f"weights must be positive and finite, got {vals}")
        object.__setattr__(self, "values", vals)

    @property
    def total(self) -> float:
        return float(sum(self.values))

    def __len__(self):
        return len(self.values)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


def _as_weights(weights) -> WeightVector:
    return weights if isinstance(weights, WeightVector) else WeightVector(weights)


def _as_bits(x) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(x))
    if not np.all((arr == 0) | (arr == 1)):
        raise InputError(f"expected a bit vector, got {arr.tolist()}")
    return arr.astype(np.int8)


def weighted_hamming(weights, x, x_prime) -> float:
    """Sum of ``weights[i]`` over the coordinates where ``x`` and ``x_prime`` differ."""
    lam = np.asarray(_as_weights(weights))
    a, b = _as_bits(x), _as_bits(x_prime)
    if not (a.shape == b.shape == lam.shape):
        raise InputError(
            f"length mismatch: weights {lam.size}, x {a.size}, x' {b.size}"
        )
    return float(lam @ np.abs(a - b))


@dataclass(frozen=True)
class CompositeConcept:
    labels: tuple
    weights: WeightVector

    def __post_init__(self):
        labels = tuple(self.labels)
        for sl in labels:
            if not isinstance(sl, SignedLabel):
                raise InputError(f"expected SignedLabel, got {type(sl).__name__}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "weights", _as_weights(self.weights))
        if len(labels) != len(self.weights):
            raise InputError(
                f"{len(labels)} labels but {len(self.weights)} weights"
            )

    @classmethod
    def from_signs(cls, signs: Sequence, weights, label: Label | None = None):
        """Build a composite over copies of one label (unit label at 1 by default)."""
        label = label or Label((1.0,), ThresholdDistribution(1.0))
        sl = tuple(
            SignedLabel(label, s if isinstance(s, Sign) else Sign.from_bit(s))
            for s in signs
        )
        return cls(sl, weights)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def signs(self) -> tuple:
        return tuple(sl.sign for sl in self.labels)

    @property
    def prototype_bits(self) -> tuple:
        return tuple(s.bit for s in self.signs)

    def label_memberships(self, points) -> np.ndarray:
        """Positive-sign memberships mu_{L_i}(Y_i), one point per label."""
        if len(points) != self.n:
            raise InputError(f"expected {self.n} points, got {len(points)}")
        return np.array([appropriateness(sl.label, y) for sl, y in zip(self.labels, points)])

    def membership(self, points) -> float:
        return composite_membership(self, self.label_memberships(points))


@dataclass(frozen=True)
class CompoundConcept:
    left: CompositeConcept
    right: CompositeConcept
    pair_weights: tuple = (1.0, 1.0)

    def __post_init__(self):
        w1, w2 = (float(w) for w in self.pair_weights)
        if not (w1 > 0 and w2 > 0):
            raise InputError(f"pair weights must be positive, got {(w1, w2)}")
        object.__setattr__(self, "pair_weights", (w1, w2))

    @property
    def total_weight(self) -> float:
        return sum(self.pair_weights)


def _check_memberships(m, n) -> np.ndarray:
    m = np.atleast_1d(np.asarray(m, dtype=float))
    if m.shape != (n,):
        raise InputError(f"expected {n} memberships, got {m.size}")
    if np.any((m < 0) | (m > 1)) or np.any(np.isnan(m)):
        raise InputError(f"memberships must lie in [0, 1], got {m.tolist()}")
    return m


def signed_values(signs, m) -> np.ndarray:
    bits = np.array([s.bit for s in signs])
    return np.where(bits == 1, m, 1.0 - m)


def composite_membership(concept: CompositeConcept, m) -> float:
    """Membership in ``concept`` given positive-sign label memberships ``m``.

    Returns ``sum_i (lambda_i / lambda_T) * s_i`` with ``s_i = m_i`` for a
    positive label and ``1 - m_i`` for a negated one.
    """
    m = _check_memberships(m, concept.n)
    lam = np.asarray(concept.weights)
    s = signed_values(concept.signs, m)
    return float(np.clip(lam @ s / concept.weights.total, 0.0, 1.0))


def binary_oracle(prototype_bits, weights, bit_probs, cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """Membership by exhaustive enumeration of ``{0,1}^n``.

    Each bit is an independent Bernoulli variable with success probability
    ``bit_probs[i]``; each outcome contributes its probability times
    ``P(H(x, prototype) <= eps)`` for ``eps ~ U(0, lambda_T)``.
    """
    lam = np.asarray(_as_weights(weights))
    proto = _as_bits(prototype_bits)
    p = np.atleast_1d(np.asarray(bit_probs, dtype=float))
    n = lam.size
    if not (proto.size == p.size == n):
        raise InputError(
            f"length mismatch: weights {n}, prototype {proto.size}, probs {p.size}"
        )
    if np.any((p < 0) | (p > 1)):
        raise InputError("bit probabilities must lie in [0, 1]")
    if n > cap:
        raise ResourceError(f"enumeration of 2^{n} outcomes exceeds cap 2^{cap}")

    idx = np.arange(2**n, dtype=np.uint32)[:, None]
    outcomes = ((idx >> np.arange(n, dtype=np.uint32)) & 1).astype(np.int8)
    prob = np.prod(np.where(outcomes == 1, p, 1.0 - p), axis=1)
    dist = np.abs(outcomes - proto) @ lam
    threshold = ThresholdDistribution(lam.sum())
    return float(prob @ threshold.tail(dist))


def compound_membership(compound: CompoundConcept, mu_left: float, mu_right: float) -> float:
    """Membership in the 2-bit space with prototype (1, 1) and pair weights."""
    mu = _check_memberships([mu_left, mu_right], 2)
    w = np.asarray(compound.pair_weights)
    return float(w @ mu / compound.total_weight)


def flatten_compound(compound: CompoundConcept) -> np.ndarray:
    """Per-label coefficients of a compound over a shared signed label sequence.

    Both parents must use the same labels in the same order with the same
    signs; the result sums to one and, used as composite weights, reproduces
    the two-level evaluation.
    """
    theta, phi = compound.left, compound.right
    if theta.n != phi.n:
        raise InputError(f"parents have {theta.n} and {phi.n} labels")
    if theta.signs != phi.signs:
        raise UnsupportedStructureError(
            "cannot flatten a compound whose parents disagree in label polarity"
        )
    w1, w2 = compound.pair_weights
    lt, lp = np.asarray(theta.weights), np.asarray(phi.weights)
    tt, tp = theta.weights.total, phi.weights.total
    return (w1 * tp * lt + w2 * tt * lp) / (compound.total_weight * tt * tp)


def flattened_membership(compound: CompoundConcept, m) -> float:
    coeffs = flatten_compound(compound)
    m = _check_memberships(m, coeffs.size)
    return float(coeffs @ signed_values(compound.left.signs, m))


def two_level_membership(compound: CompoundConcept, m) -> float:
    return compound_membership(
        compound,
        composite_membership(compound.left, m),
        composite_membership(compound.right, m),
    )

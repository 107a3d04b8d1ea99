"""Labels over conceptual spaces and their appropriateness measures.

A label is a prototype point, a distance metric and an uncertain threshold.
The appropriateness of a label for a point ``x`` is the probability that the
threshold is at least the distance from ``x`` to the prototype.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InputError


class ThresholdKind(enum.Enum):
    UNIFORM = "uniform"


class Metric(enum.Enum):
    EUCLIDEAN = "euclidean"


class Sign(enum.Enum):
    POSITIVE = 1
    NEGATIVE = 0

    @property
    def bit(self) -> int:
        return self.value

    @classmethod
    def from_bit(cls, bit) -> "Sign":
        return cls.POSITIVE if int(bit) else cls.NEGATIVE


@dataclass(frozen=True)
class ThresholdDistribution:
    """Distribution of a label threshold. Only ``U(0, upper)`` is supported."""

    upper: float = 1.0
    kind: ThresholdKind = ThresholdKind.UNIFORM

    def __post_init__(self):
        if not self.upper > 0:
            raise InputError(f"threshold upper bound must be > 0, got {self.upper}")

    def tail(self, d):
        """Survival function P(eps >= d). Works on scalars and arrays."""
        return np.clip(1.0 - np.asarray(d, dtype=float) / self.upper, 0.0, 1.0)

    def density(self, eps):
        eps = np.asarray(eps, dtype=float)
        return np.where((eps >= 0) & (eps <= self.upper), 1.0 / self.upper, 0.0)


@dataclass(frozen=True)
class Label:
    prototype: tuple
    threshold: ThresholdDistribution = ThresholdDistribution()
    metric: Metric = Metric.EUCLIDEAN

    def __post_init__(self):
        proto = np.atleast_1d(np.asarray(self.prototype, dtype=float))
        object.__setattr__(self, "prototype", tuple(float(p) for p in proto))

    @property
    def dim(self) -> int:
        return len(self.prototype)

    def distance(self, x) -> float:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != (self.dim,):
            raise InputError(
                f"point has dimension {x.size}, label prototype has {self.dim}"
            )
        return float(np.linalg.norm(x - np.asarray(self.prototype)))

    def __neg__(self) -> "SignedLabel":
        return SignedLabel(self, Sign.NEGATIVE)

    def __pos__(self) -> "SignedLabel":
        return SignedLabel(self, Sign.POSITIVE)


@dataclass(frozen=True)
class SignedLabel:
    label: Label
    sign: Sign = Sign.POSITIVE


def appropriateness(label: Label, x) -> float:
    """mu_L(x) = P(d(x, P) <= eps)."""
    return float(label.threshold.tail(label.distance(x)))


def apply_sign(sign: Sign, membership):
    """Membership of the signed label given the positive-label membership."""
    if sign is Sign.POSITIVE:
        return membership
    return 1.0 - membership


def signed_membership(sl: SignedLabel, x) -> float:
    return apply_sign(sl.sign, appropriateness(sl.label, x))

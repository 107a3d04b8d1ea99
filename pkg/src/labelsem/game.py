"""Language game in which agents align a shared dimension weight.

Every agent carries the same two labels ``<1, euclidean, U(0,1)>`` on
``[0, 1]``, so the label membership of a coordinate ``x_i`` is ``x_i``
itself. An agent only differs in its weight ``lam`` on dimension 1
(dimension 2 gets ``1 - lam``).

A dialogue: an element ``x`` is sampled, a speaker asserts the conjunction
``+-L1 & +-L2`` that fits ``x`` best, and the listener moves its weight
towards the value ``A`` at which its own appropriateness for the assertion
would equal the speaker's reliability ``w``, provided its current
appropriateness does not already exceed ``w``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .semantics import Label, Sign, ThresholdDistribution, apply_sign, appropriateness

GAME_LABEL = Label((1.0,), ThresholdDistribution(1.0))
DEFAULT_LEARNING_RATE = 1e-3


@dataclass
class Agent:
    lam: float
    w: float = 1.0
    h: float = DEFAULT_LEARNING_RATE

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise InputError(f"lam must lie in [0, 1], got {self.lam}")
        if not 0.0 <= self.w <= 1.0:
            raise InputError(f"reliability must lie in [0, 1], got {self.w}")
        if self.h < 0:
            raise InputError(f"learning rate must be nonnegative, got {self.h}")


@dataclass(frozen=True)
class Assertion:
    sign1: Sign = Sign.POSITIVE
    sign2: Sign = Sign.POSITIVE

    def __str__(self):
        pol = {Sign.POSITIVE: "+", Sign.NEGATIVE: "~"}
        return f"{pol[self.sign1]}L1&{pol[self.sign2]}L2"


ALL_ASSERTIONS = tuple(Assertion(a, b) for a in Sign for b in Sign)


@dataclass(frozen=True)
class ElementDistribution:
    """Independent uniform sampling of each coordinate on ``[a_i, b_i]``."""

    bounds: tuple = ((0.0, 1.0), (0.0, 1.0))

    def __post_init__(self):
        bounds = tuple((float(a), float(b)) for a, b in self.bounds)
        if len(bounds) != 2:
            raise InputError(f"expected two intervals, got {len(bounds)}")
        for a, b in bounds:
            if not 0.0 <= a < b <= 1.0:
                raise InputError(f"invalid interval [{a}, {b}]")
        object.__setattr__(self, "bounds", bounds)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        lo = np.array([a for a, _ in self.bounds])
        hi = np.array([b for _, b in self.bounds])
        return lo + (hi - lo) * rng.random((size, 2))


def _memberships(x) -> tuple:
    x = np.asarray(x, dtype=float)
    if x.shape != (2,):
        raise InputError(f"expected a point in [0,1]^2, got shape {x.shape}")
    return appropriateness(GAME_LABEL, x[:1]), appropriateness(GAME_LABEL, x[1:])


def signed_pair(a: Assertion, x) -> tuple:
    m1, m2 = _memberships(x)
    return apply_sign(a.sign1, m1), apply_sign(a.sign2, m2)


def assertion_value(agent: Agent, a: Assertion, x) -> float:
    s1, s2 = signed_pair(a, x)
    return agent.lam * s1 + (1.0 - agent.lam) * s2


def best_assertion(agent: Agent, x) -> Assertion:
    # the value is separable in the two dimensions, so each polarity is
    # chosen on its own; ties go to the positive sign
    m1, m2 = _memberships(x)
    return Assertion(
        Sign.POSITIVE if m1 >= 1.0 - m1 else Sign.NEGATIVE,
        Sign.POSITIVE if m2 >= 1.0 - m2 else Sign.NEGATIVE,
    )


def update_target(a: Assertion, x, w: float) -> float | None:
    """Unclamped weight ``A`` solving ``A*s1 + (1-A)*s2 = w``; None if s1 == s2."""
    s1, s2 = signed_pair(a, x)
    if s1 == s2:
        return None
    return (w - s2) / (s1 - s2)


def listener_update(listener: Agent, a: Assertion, x, speaker_w: float) -> float:
    """Return the listener's weight after hearing ``a`` about ``x``."""
    if not 0.0 <= speaker_w <= 1.0:
        raise InputError(f"speaker reliability must lie in [0, 1], got {speaker_w}")
    if assertion_value(listener, a, x) > speaker_w:
        return listener.lam
    target = update_target(a, x, speaker_w)
    if target is None:
        return listener.lam
    target = min(max(target, 0.0), 1.0)
    return listener.lam + listener.h * (target - listener.lam)


# Vectorised counterparts, used by the simulation loop and the estimators.

def best_signed_values(x: np.ndarray) -> np.ndarray:
    """Signed memberships of the best assertion, shape ``(k, 2)``."""
    m = GAME_LABEL.threshold.tail(np.abs(1.0 - x))
    return np.where(m >= 1.0 - m, m, 1.0 - m)


def clamped_targets(s: np.ndarray, w) -> np.ndarray:
    """Clamped update targets; NaN where the two signed memberships coincide."""
    s1, s2 = s[..., 0], s[..., 1]
    denom = s1 - s2
    with np.errstate(divide="ignore", invalid="ignore"):
        target = np.where(denom != 0, (w - s2) / denom, np.nan)
    return np.clip(target, 0.0, 1.0)


def apply_updates(lam: np.ndarray, s: np.ndarray, w, h) -> np.ndarray:
    """One listener update per row; ``lam[k]`` hears the assertion ``s[k]``."""
    target = clamped_targets(s, w)
    value = lam * s[..., 0] + (1.0 - lam) * s[..., 1]
    fire = (value <= w) & ~np.isnan(target)
    return np.where(fire, lam + h * (np.nan_to_num(target) - lam), lam)


SCHEDULES = ("all-pairs", "listener")
BLOCK = 256


@dataclass
class GameWorld:
    """Population of agents sharing one reliability and learning rate.

    ``schedule`` fixes the dialogues in one timestep: ``"listener"`` gives
    every agent one turn as listener with a random other speaker,
    ``"all-pairs"`` runs one dialogue for every ordered (speaker, listener)
    pair. Elements are drawn from ``rng`` in blocks of ``BLOCK`` timesteps,
    so a trajectory does not depend on how calls to ``step`` are grouped.
    """

    lambdas: np.ndarray
    reliability: float
    distribution: ElementDistribution = field(default_factory=ElementDistribution)
    learning_rate: float = DEFAULT_LEARNING_RATE
    rng: np.random.Generator = field(default_factory=np.random.default_rng)
    schedule: str = "all-pairs"
    timestep: int = 0

    def __post_init__(self):
        self.lambdas = np.asarray(self.lambdas, dtype=float).copy()
        if self.lambdas.ndim != 1 or self.lambdas.size < 2:
            raise InputError("population needs at least two agents")
        if np.any((self.lambdas < 0) | (self.lambdas > 1)):
            raise InputError("initial weights must lie in [0, 1]")
        if not 0.0 <= self.reliability <= 1.0:
            raise InputError(f"reliability must lie in [0, 1], got {self.reliability}")
        if self.learning_rate < 0:
            raise InputError("learning rate must be nonnegative")
        if self.schedule not in SCHEDULES:
            raise InputError(f"unknown schedule {self.schedule!r}, expected one of {SCHEDULES}")
        self._buffer = None
        self._pos = BLOCK

    @classmethod
    def random(cls, size, reliability, distribution=None, learning_rate=DEFAULT_LEARNING_RATE,
               rng=None, schedule="all-pairs"):
        """Population with weights drawn independently from U[0, 1]."""
        rng = np.random.default_rng(rng)
        if size < 2:
            raise InputError("population needs at least two agents")
        return cls(
            lambdas=rng.random(size),
            reliability=reliability,
            distribution=distribution or ElementDistribution(),
            learning_rate=learning_rate,
            rng=rng,
            schedule=schedule,
        )

    @property
    def size(self) -> int:
        return self.lambdas.size

    @property
    def rounds(self) -> int:
        """Dialogues per listener per timestep."""
        return 1 if self.schedule == "listener" else self.size - 1

    @property
    def agents(self) -> list:
        return [Agent(float(v), self.reliability, self.learning_rate) for v in self.lambdas]

    def _refill(self):
        n, r = self.size, self.rounds
        x = self.distribution.sample(self.rng, BLOCK * r * n)
        s = best_signed_values(x)
        self._buffer = (
            s.reshape(BLOCK, r, n, 2),
            clamped_targets(s, self.reliability).reshape(BLOCK, r, n),
        )
        self._pos = 0

    def _take(self, count):
        """Signed memberships and targets for the next ``count`` timesteps.

        Shapes ``(count, rounds, N, 2)`` and ``(count, rounds, N)``; entry
        ``[t, k, j]`` is the ``k``-th dialogue heard by agent ``j`` at ``t``.
        """
        if self._pos >= BLOCK:
            self._refill()
        count = min(count, BLOCK - self._pos)
        s, target = self._buffer
        out = s[self._pos:self._pos + count], target[self._pos:self._pos + count]
        self._pos += count
        return out

    def step(self):
        return self.run(1)

    def run(self, steps: int):
        advance([self], steps)
        return self

    def stats(self) -> tuple:
        return population_stats(self.lambdas)


def advance(worlds, steps: int):
    """Advance several worlds in lockstep by ``steps`` timesteps.

    The worlds must share population size, reliability, learning rate and
    schedule; each keeps its own random stream.
    """
    if not worlds:
        return
    first = worlds[0]
    key = (first.size, first.reliability, first.learning_rate, first.schedule)
    for world in worlds[1:]:
        if (world.size, world.reliability, world.learning_rate, world.schedule) != key:
            raise InputError("worlds advanced together must share their parameters")
    w, h = first.reliability, first.learning_rate
    lam = np.stack([world.lambdas for world in worlds])
    # Only the listener's weight changes in a dialogue and the speaker's best
    # assertion depends on the element alone (every agent has the same labels
    # and reliability). So the speaker's identity and the interleaving of
    # different listeners within a timestep do not affect the outcome; only
    # the order of each listener's own dialogues matters.
    remaining = steps
    while remaining > 0:
        chunks = [world._take(remaining) for world in worlds]
        count = min(c[0].shape[0] for c in chunks)
        if any(c[0].shape[0] != count for c in chunks):
            raise InputError("worlds advanced together must be stepped together")
        s = np.stack([c[0] for c in chunks], axis=2)
        target = np.stack([c[1] for c in chunks], axis=2)
        valid = ~np.isnan(target)
        target = np.nan_to_num(target)
        s1, s2 = s[..., 0], s[..., 1]
        for t in range(count):
            for k in range(s.shape[1]):
                value = lam * s1[t, k] + (1.0 - lam) * s2[t, k]
                fire = (value <= w) & valid[t, k]
                lam = np.where(fire, lam + h * (target[t, k] - lam), lam)
        remaining -= count
    for world, row in zip(worlds, lam):
        world.lambdas = row
        world.timestep += steps


def population_stats(lambdas) -> tuple:
    """Mean and population (divide-by-N) standard deviation of the weights."""
    lam = np.asarray(lambdas, dtype=float)
    if lam.size < 2:
        raise InputError("population statistics need at least two agents")
    return float(lam.mean()), float(lam.std())


def positive_region_probability(dist: ElementDistribution, lam: float, w: float, samples: int, rng=None) -> float:
    """Monte Carlo estimate of the probability that ``A - lam >= 0``."""
    if samples < 1:
        raise InputError("samples must be >= 1")
    rng = np.random.default_rng(rng)
    target = clamped_targets(best_signed_values(dist.sample(rng, samples)), w)
    return float(np.mean(target - lam >= 0))


def _folded_cdf(t, a, b):
    """CDF of max(x, 1-x) for x ~ U[a, b], evaluated at t >= 1/2."""
    lo, hi = max(a, 1.0 - t), min(b, t)
    return max(hi - lo, 0.0) / (b - a)


def _folded_density(t, a, b):
    inside = (a <= t <= b) + (a <= 1.0 - t <= b)
    return inside / (b - a)


def predicted_fixed_point(dist: ElementDistribution) -> float:
    """Limit of the expected weight when every agent has reliability 1.

    With ``w = 1`` the clamped target is 1 when the best assertion's signed
    membership on dimension 1 is at least that on dimension 2 and 0 otherwise,
    so the limit is ``P(s1 >= s2)``. Both folded memberships have piecewise
    linear CDFs on ``[1/2, 1]``; integrating one CDF against the other density
    piece by piece with the midpoint rule is exact.
    """
    (a1, b1), (a2, b2) = dist.bounds
    knots = {0.5, 1.0}
    for v in (a1, b1, a2, b2):
        knots.update((v, 1.0 - v))
    knots = sorted(k for k in knots if 0.5 <= k <= 1.0)
    total = 0.0
    for lo, hi in zip(knots, knots[1:]):
        mid = 0.5 * (lo + hi)
        total += (hi - lo) * _folded_density(mid, a1, b1) * _folded_cdf(mid, a2, b2)
    return float(min(max(total, 0.0), 1.0))


def mean_field_drift(dist: ElementDistribution, lam: float, w: float, samples: int, rng=None) -> float:
    """Monte Carlo estimate of the expected per-update change in ``lam`` (divided by h)."""
    rng = np.random.default_rng(rng)
    s = best_signed_values(dist.sample(rng, samples))
    lam_arr = np.full(samples, float(lam))
    return float(np.mean(apply_updates(lam_arr, s, w, 1.0) - lam_arr))


def standard_error(p: float, samples: int) -> float:
    return math.sqrt(max(p * (1 - p), 1e-12) / samples)

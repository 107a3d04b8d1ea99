"""Randomised equivalence checks between closed forms and their oracles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .combination import (
    CompositeConcept,
    CompoundConcept,
    binary_oracle,
    composite_membership,
    flatten_compound,
    flattened_membership,
    two_level_membership,
)
from .game import ElementDistribution, clamped_targets, positive_region_probability, predicted_fixed_point
from .semantics import Sign


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def random_composite(rng, n, signs=None):
    if signs is None:
        signs = rng.integers(0, 2, size=n)
    return CompositeConcept.from_signs(signs, rng.uniform(0.05, 5.0, size=n))


def composite_vs_oracle(instances=1000, max_n=10, tol=1e-9, rng=None) -> CheckResult:
    rng = np.random.default_rng(rng)
    worst = 0.0
    for _ in range(instances):
        n = int(rng.integers(1, max_n + 1))
        concept = random_composite(rng, n)
        m = rng.random(n)
        # each bit is 1 with the membership of its positive label
        oracle = binary_oracle(concept.prototype_bits, concept.weights, m)
        worst = max(worst, abs(composite_membership(concept, m) - oracle))
    return CheckResult("composite membership vs binary enumeration", worst <= tol,
                       f"{instances} instances, max |diff| = {worst:.3g} (tol {tol:g})")


def compound_flattening(instances=1000, max_n=10, tol=1e-9, sum_tol=1e-12, rng=None) -> CheckResult:
    rng = np.random.default_rng(rng)
    worst = worst_sum = 0.0
    for _ in range(instances):
        n = int(rng.integers(1, max_n + 1))
        signs = rng.integers(0, 2, size=n)
        compound = CompoundConcept(
            random_composite(rng, n, signs),
            random_composite(rng, n, signs),
            tuple(rng.uniform(0.05, 5.0, size=2)),
        )
        m = rng.random(n)
        worst = max(worst, abs(flattened_membership(compound, m) - two_level_membership(compound, m)))
        worst_sum = max(worst_sum, abs(flatten_compound(compound).sum() - 1.0))
    passed = worst <= tol and worst_sum <= sum_tol
    return CheckResult("compound flattening vs two-level evaluation", passed,
                       f"{instances} instances, max |diff| = {worst:.3g} (tol {tol:g}), "
                       f"max |sum - 1| = {worst_sum:.3g} (tol {sum_tol:g})")


def clamping_dichotomy(events=10**6, rng=None) -> CheckResult:
    """With reliability 1 every clamped update target is exactly 0 or 1."""
    rng = np.random.default_rng(rng)
    m = rng.random((events, 2))
    polarity = rng.integers(0, 2, size=(events, 2))
    s = np.where(polarity == Sign.POSITIVE.bit, m, 1.0 - m)
    target = clamped_targets(s, 1.0)
    defined = target[~np.isnan(target)]
    bad = int(np.count_nonzero((defined != 0.0) & (defined != 1.0)))
    return CheckResult("clamped target dichotomy at w = 1", bad == 0,
                       f"{defined.size} update events, {bad} outside {{0, 1}}")


def fixed_point_agreement(bounds=((0.25, 0.75), (0.0, 0.5)), samples=10**6, tol=0.005, rng=None) -> CheckResult:
    dist = ElementDistribution(bounds)
    exact = predicted_fixed_point(dist)
    mc = positive_region_probability(dist, 0.5, 1.0, samples, rng)
    return CheckResult(f"fixed point {bounds}: analytic vs Monte Carlo", abs(exact - mc) <= tol,
                       f"analytic {exact:.6f}, Monte Carlo {mc:.6f} (tol {tol:g})")


def run_all(seed=0, instances=1000, events=10**6, samples=10**6) -> list:
    seeds = np.random.SeedSequence(seed).spawn(5)
    return [
        composite_vs_oracle(instances, rng=np.random.default_rng(seeds[0])),
        compound_flattening(instances, rng=np.random.default_rng(seeds[1])),
        clamping_dichotomy(events, rng=np.random.default_rng(seeds[2])),
        fixed_point_agreement(((0.0, 1.0), (0.0, 0.5)), samples, rng=np.random.default_rng(seeds[3])),
        fixed_point_agreement(((0.25, 0.75), (0.0, 0.5)), samples, rng=np.random.default_rng(seeds[4])),
    ]

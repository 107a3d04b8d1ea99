import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from labelsem import (
    Agent,
    Assertion,
    ElementDistribution,
    GameWorld,
    InputError,
    Sign,
    assertion_value,
    best_assertion,
    listener_update,
    population_stats,
    positive_region_probability,
    predicted_fixed_point,
)
from labelsem.game import ALL_ASSERTIONS, BLOCK, advance, update_target

P, N = Sign.POSITIVE, Sign.NEGATIVE
FIG2A = ElementDistribution(((0.0, 1.0), (0.0, 0.5)))
FIG2B = ElementDistribution(((0.25, 0.75), (0.0, 0.5)))

unit = st.floats(0, 1)
points = st.tuples(unit, unit)


def grid_p_plus(dist, k=2000):
    """P(s1 >= s2) by a midpoint grid over the sampling box."""
    (a1, b1), (a2, b2) = dist.bounds
    x1 = a1 + (np.arange(k) + 0.5) / k * (b1 - a1)
    x2 = a2 + (np.arange(k) + 0.5) / k * (b2 - a2)
    s1 = np.maximum(x1, 1 - x1)[:, None]
    s2 = np.maximum(x2, 1 - x2)[None, :]
    return float(np.mean(s1 >= s2))


class TestAssertions:
    def test_full_memberships(self):
        assert assertion_value(Agent(0.5), Assertion(P, P), (1, 1)) == 1.0

    def test_weighted_value(self):
        assert assertion_value(Agent(0.5), Assertion(P, P), (0.8, 0.4)) == pytest.approx(0.6)

    @given(x=points, a=st.sampled_from(ALL_ASSERTIONS))
    def test_degenerate_weight(self, x, a):
        s1 = x[0] if a.sign1 is P else 1 - x[0]
        assert assertion_value(Agent(1.0), a, x) == pytest.approx(s1, abs=1e-15)

    def test_best_example(self):
        a = best_assertion(Agent(0.5), (0.9, 0.1))
        assert a == Assertion(P, N)
        assert assertion_value(Agent(0.5), a, (0.9, 0.1)) == pytest.approx(0.9)
        values = {b: assertion_value(Agent(0.5), b, (0.9, 0.1)) for b in ALL_ASSERTIONS}
        assert max(values, key=values.get) == a

    def test_best_ties_positive(self):
        assert best_assertion(Agent(0.3), (1, 1)) == Assertion(P, P)
        assert best_assertion(Agent(0.3), (0.5, 0.5)) == Assertion(P, P)

    @given(lam=unit, x=points)
    def test_best_is_exhaustive_argmax(self, lam, x):
        agent = Agent(lam)
        best = assertion_value(agent, best_assertion(agent, x), x)
        assert best >= max(assertion_value(agent, a, x) for a in ALL_ASSERTIONS) - 1e-15


class TestListenerUpdate:
    def test_hand_example(self):
        # v = 0.6 <= 0.9, A = 0.5 / 0.4 = 1.25 -> 1, lam' = 0.5 + 1e-3 * 0.5
        assert listener_update(Agent(0.5), Assertion(P, P), (0.8, 0.4), 0.9) == pytest.approx(0.5005, abs=1e-15)

    def test_no_update_above_reliability(self):
        assert listener_update(Agent(0.5), Assertion(P, P), (0.8, 0.4), 0.55) == 0.5

    def test_equal_memberships_skip(self):
        assert listener_update(Agent(0.2), Assertion(P, P), (0.7, 0.7), 0.9) == 0.2

    def test_rejects_bad_reliability(self):
        with pytest.raises(InputError):
            listener_update(Agent(0.2), Assertion(P, P), (0.7, 0.3), 1.5)

    @settings(max_examples=300)
    @given(lam=unit, x=points, a=st.sampled_from(ALL_ASSERTIONS), w=unit, h=st.floats(0, 1))
    def test_stays_in_unit_interval(self, lam, x, a, w, h):
        assert 0.0 <= listener_update(Agent(lam, h=h), a, x, w) <= 1.0

    @settings(max_examples=300)
    @given(x=points, a=st.sampled_from(ALL_ASSERTIONS), w=unit)
    def test_target_solves_reliability_equation(self, x, a, w):
        target = update_target(a, x, w)
        if target is None or not 0.0 <= target <= 1.0:
            return
        assert assertion_value(Agent(target), a, x) == pytest.approx(w, abs=1e-12)

    @given(x=points, a=st.sampled_from(ALL_ASSERTIONS))
    def test_full_reliability_targets_saturate(self, x, a):
        target = update_target(a, x, 1.0)
        if target is None:
            return
        s1 = x[0] if a.sign1 is P else 1 - x[0]
        s2 = x[1] if a.sign2 is P else 1 - x[1]
        assert (target >= 1) if s1 >= s2 else (target <= 0)


def sequential_reference(seed, size, w, h, dist, steps, schedule):
    """Dialogue-by-dialogue replay of a world through the scalar API."""
    rng = np.random.default_rng(seed)
    lam = list(rng.random(size))
    rounds = 1 if schedule == "listener" else size - 1
    picker = np.random.default_rng(12345)
    elements = None
    for t in range(steps):
        if t % BLOCK == 0:
            elements = dist.sample(rng, BLOCK * rounds * size).reshape(BLOCK, rounds, size, 2)
        for k in range(rounds):
            for j in picker.permutation(size):
                speaker = int(picker.choice([i for i in range(size) if i != j]))
                x = elements[t % BLOCK, k, j]
                a = best_assertion(Agent(lam[speaker], w, h), x)
                lam[j] = listener_update(Agent(lam[j], w, h), a, x, w)
    return np.array(lam)


class TestWorld:
    @pytest.mark.parametrize("schedule", ["listener", "all-pairs"])
    def test_matches_sequential_dialogues(self, schedule):
        world = GameWorld.random(4, 0.8, FIG2A, learning_rate=0.05, rng=11, schedule=schedule)
        world.run(300)
        ref = sequential_reference(11, 4, 0.8, 0.05, FIG2A, 300, schedule)
        np.testing.assert_allclose(world.lambdas, ref, rtol=0, atol=1e-12)

    def test_reproducible(self):
        a = GameWorld.random(2, 0.9, rng=7).run(500)
        b = GameWorld.random(2, 0.9, rng=7).run(500)
        assert np.array_equal(a.lambdas, b.lambdas)

    def test_step_grouping_irrelevant(self):
        a = GameWorld.random(3, 0.8, rng=5).run(BLOCK + 40)
        b = GameWorld.random(3, 0.8, rng=5)
        for _ in range(BLOCK + 40):
            b.step()
        assert np.array_equal(a.lambdas, b.lambdas)
        assert a.timestep == b.timestep == BLOCK + 40

    def test_zero_learning_rate(self):
        world = GameWorld.random(5, 1.0, learning_rate=0.0, rng=1)
        start = world.lambdas.copy()
        assert np.array_equal(world.run(200).lambdas, start)

    @pytest.mark.parametrize("schedule", ["listener", "all-pairs"])
    def test_zero_reliability_never_updates(self, schedule):
        world = GameWorld.random(5, 0.0, rng=2, schedule=schedule)
        start = world.lambdas.copy()
        assert np.array_equal(world.run(10_000 if schedule == "listener" else 2_000).lambdas, start)

    def test_weights_stay_in_range(self):
        world = GameWorld.random(10, 0.7, FIG2B, learning_rate=0.5, rng=3).run(300)
        assert np.all((world.lambdas >= 0) & (world.lambdas <= 1))

    def test_validation(self):
        with pytest.raises(InputError):
            GameWorld(np.array([0.5]), 0.9)
        with pytest.raises(InputError):
            GameWorld(np.array([0.5, 0.2]), 0.9, schedule="round-robin")
        with pytest.raises(InputError):
            ElementDistribution(((0.5, 0.5), (0, 1)))

    def test_advance_needs_shared_parameters(self):
        with pytest.raises(InputError):
            advance([GameWorld.random(3, 0.8, rng=1), GameWorld.random(3, 0.9, rng=2)], 1)

    def test_agents_view(self):
        world = GameWorld.random(3, 0.7, rng=0)
        assert [a.lam for a in world.agents] == world.lambdas.tolist()
        assert all(a.w == 0.7 for a in world.agents)


class TestStats:
    def test_equal(self):
        assert population_stats([0.3] * 4)[1] == 0.0

    def test_split(self):
        assert population_stats([0.0] * 5 + [1.0] * 5) == (0.5, 0.5)

    def test_hand_example(self):
        mean, sd = population_stats([0.2, 0.4, 0.6])
        assert mean == pytest.approx(0.4)
        assert sd == pytest.approx(np.sqrt(0.08 / 3))
        assert sd == pytest.approx(0.1633, abs=1e-4)

    def test_needs_two(self):
        with pytest.raises(InputError):
            population_stats([0.2])


class TestFixedPoint:
    @pytest.mark.parametrize("dist,expected", [(FIG2A, 0.5), (FIG2B, 0.25)])
    def test_analytic_values(self, dist, expected):
        assert predicted_fixed_point(dist) == pytest.approx(expected, abs=1e-12)
        assert grid_p_plus(dist) == pytest.approx(expected, abs=2e-3)

    @pytest.mark.parametrize("dist,expected", [(FIG2A, 0.5), (FIG2B, 0.25)])
    def test_monte_carlo(self, dist, expected):
        est = positive_region_probability(dist, 0.4, 1.0, 200_000, rng=9)
        assert est == pytest.approx(expected, abs=0.005)

    def test_symmetric(self):
        dist = ElementDistribution(((0.1, 0.7), (0.1, 0.7)))
        assert predicted_fixed_point(dist) == pytest.approx(0.5, abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_analytic_matches_grid(self, data):
        bounds = []
        for _ in range(2):
            a = data.draw(st.floats(0, 0.9))
            b = data.draw(st.floats(a + 0.05, 1.0))
            bounds.append((a, b))
        dist = ElementDistribution(tuple(bounds))
        assert predicted_fixed_point(dist) == pytest.approx(grid_p_plus(dist, 1500), abs=3e-3)

    def test_positive_region_lambda_dependence(self):
        # below 1 the target depends on the element, so raising lam shrinks the region
        lo = positive_region_probability(FIG2A, 0.1, 0.8, 50_000, rng=1)
        hi = positive_region_probability(FIG2A, 0.9, 0.8, 50_000, rng=1)
        assert lo > hi

    def test_requires_samples(self):
        with pytest.raises(InputError):
            positive_region_probability(FIG2A, 0.5, 1.0, 0)

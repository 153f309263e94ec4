import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moodrec.similarity import (
    EmptySeedListError,
    Neighbor,
    NoCandidatesError,
    WeightProfile,
    distances_to,
    euclidean_distance,
    nearest,
    seed_centroid,
)

from oracle import brute_force

ONES = WeightProfile.uniform()


class TestDistance:
    def test_identity(self):
        v = (0.3, -1.2, 2.0, 0.0, 5.5, -0.1)
        assert euclidean_distance(v, v, ONES) == 0.0

    def test_pythagorean(self):
        assert euclidean_distance((0,) * 6, (3, 4, 0, 0, 0, 0), ONES) == 5.0

    def test_weighted(self):
        assert euclidean_distance((1,) * 6, (0,) * 6, WeightProfile((4, 0, 0, 0, 0, 0))) == 2.0

    def test_unit_weights_equal_unweighted_formula(self):
        rng = np.random.default_rng(11)
        for _ in range(500):
            p, q = rng.normal(size=6).tolist(), rng.normal(size=6).tolist()
            assert euclidean_distance(p, q, ONES) == euclidean_distance(p, q)
            assert euclidean_distance(p, q) == pytest.approx(math.dist(p, q), rel=1e-12)

    def test_vectorized_is_bitwise_identical(self):
        rng = np.random.default_rng(5)
        m = rng.normal(size=(300, 6))
        q = rng.normal(size=6).tolist()
        w = WeightProfile(tuple(rng.random(6) + 0.1))
        for weights in (None, ONES, w):
            d = distances_to(m, q, weights)
            assert [euclidean_distance(row, q, weights) for row in m.tolist()] == d.tolist()


class TestWeightProfile:
    @pytest.mark.parametrize("bad", [(1,) * 5, (-1, 1, 1, 1, 1, 1), (0,) * 6, (math.inf, 1, 1, 1, 1, 1)])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            WeightProfile(bad)

    def test_from_json(self):
        assert WeightProfile.from_json([2, 1, 1, 1, 1, 1]).values[0] == 2.0
        assert WeightProfile.from_json({"energy": 3}).values == (1.0, 3.0, 1.0, 1.0, 1.0, 1.0)
        assert WeightProfile.from_json({"weights": {"tempo": 0}}).values[2] == 0.0
        with pytest.raises(ValueError):
            WeightProfile.from_json({"speechiness": 1})


class TestCentroid:
    def test_single_seed(self):
        v = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6)
        assert tuple(seed_centroid([v])) == v

    def test_midpoint(self):
        assert tuple(seed_centroid([(0,) * 6, (2,) * 6])) == (1.0,) * 6

    def test_identical_seeds(self):
        v = (0.7, -0.3, 1.1, 0.0, 2.5, -4.0)
        assert tuple(seed_centroid([v, v, v])) == v

    def test_empty(self):
        with pytest.raises(EmptySeedListError):
            seed_centroid([])


class TestNearest:
    def test_saturation(self):
        vecs = [("a", (0,) * 6), ("b", (2,) * 6), ("c", (1,) * 6)]
        out = nearest(vecs, (0,) * 6, 10, ONES)
        assert [n.id for n in out] == ["a", "c", "b"]
        assert out[0] == Neighbor("a", 0.0)

    def test_exact_match_first(self):
        rng = np.random.default_rng(2)
        vecs = [(f"t{i}", tuple(rng.normal(size=6))) for i in range(50)]
        out = nearest(vecs, vecs[17][1], 3, ONES)
        assert out[0] == Neighbor("t17", 0.0)

    def test_exclusion(self):
        vecs = [("a", (0,) * 6), ("b", (1,) * 6)]
        assert [n.id for n in nearest(vecs, (0,) * 6, 5, ONES, exclude={"a"})] == ["b"]
        with pytest.raises(NoCandidatesError):
            nearest(vecs, (0,) * 6, 5, ONES, exclude={"a", "b"})

    def test_tie_break_popularity_then_id(self):
        vecs = [("d", (1,) * 6), ("c", (1,) * 6), ("b", (1,) * 6), ("a", (-1,) * 6)]
        pop = {"a": 10, "b": 50, "c": 50, "d": 90}
        # a/b/c/d all sit at the same distance from the origin
        assert [n.id for n in nearest(vecs, (0,) * 6, 4, ONES, popularity=pop)] == ["d", "b", "c", "a"]
        assert [n.id for n in nearest(vecs, (0,) * 6, 2, ONES, popularity=pop)] == ["d", "b"]
        assert [n.id for n in nearest(vecs, (0,) * 6, 4, ONES)] == ["a", "b", "c", "d"]

    def test_random_200_matches_oracle(self):
        rng = np.random.default_rng(200)
        vecs = [(f"id{i:03d}", tuple(rng.normal(size=6).tolist())) for i in range(200)]
        q = tuple(rng.normal(size=6).tolist())
        assert [n.id for n in nearest(vecs, q, 10, ONES)] == brute_force(vecs, q, 10)

    def test_k_must_be_positive(self):
        with pytest.raises(ValueError):
            nearest([("a", (0,) * 6)], (0,) * 6, 0, ONES)


_vec = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=6, max_size=6)


@given(_vec, _vec, _vec)
@settings(max_examples=1000)
def test_metric_axioms(p, q, r):
    d = euclidean_distance
    assert d(p, q, ONES) >= 0
    assert d(p, q, ONES) == d(q, p, ONES)
    assert d(p, p, ONES) == 0
    assert d(p, r, ONES) <= d(p, q, ONES) + d(q, r, ONES) + 1e-9


@given(
    seed=st.integers(0, 2**32 - 1),
    n=st.integers(1, 80),
    k=st.integers(1, 90),
    grid=st.booleans(),
)
@settings(max_examples=150, deadline=None)
def test_nearest_properties(seed, n, k, grid):
    rng = np.random.default_rng(seed)
    raw = rng.integers(-3, 4, size=(n, 6)).astype(float) if grid else rng.normal(size=(n, 6))
    vecs = [(f"v{i}", tuple(row)) for i, row in enumerate(raw.tolist())]
    pop = {tid: int(rng.integers(0, 4)) for tid, _ in vecs}
    q = tuple(rng.integers(-2, 3, size=6).astype(float)) if grid else tuple(rng.normal(size=6))
    w = WeightProfile(tuple(rng.integers(1, 4, size=6).astype(float)))
    exclude = {f"v{i}" for i in range(0, n, 7)} if n > 1 else set()

    out = nearest(vecs, q, k, w, exclude, pop)
    ids = [x.id for x in out]
    assert ids == brute_force(vecs, q, k, w, exclude, pop)
    assert len(out) == min(k, n - len(exclude))
    assert all(a.distance <= b.distance for a, b in zip(out, out[1:]))
    assert not set(ids) & exclude

    shuffled = list(vecs)
    rng.shuffle(shuffled)
    assert [x.id for x in nearest(shuffled, q, k, w, exclude, pop)] == ids

    scaled = nearest(vecs, q, k, w.scaled(4.0), exclude, pop)
    assert [x.id for x in scaled] == ids
    for a, b in zip(out, scaled):
        assert b.distance == pytest.approx(2.0 * a.distance, rel=1e-12, abs=1e-12)

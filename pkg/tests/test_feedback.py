import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from moodrec.feedback import (
    FeedbackRecord,
    FeedbackStore,
    FeedbackSummary,
    InvalidRatingError,
    StoreIOError,
    emit_histogram,
    histogram_csv,
    read_histogram,
    record_feedback,
    summarize,
    summarize_ratings,
)

TWELVE = [2] + [3] * 11


@pytest.fixture
def store(tmp_path):
    return FeedbackStore(tmp_path / "feedback.jsonl")


def rec(rating, user="alice", comment=""):
    return FeedbackRecord(user=user, playlist_fingerprint="fp", rating=rating, comment=comment)


def test_record_increments(store):
    assert record_feedback(store, rec(3, comment="good on rock and pop")) == 1
    assert record_feedback(store, rec(4)) == 2
    assert summarize(store).count == 2
    stored = store.records()[0]
    assert stored.comment == "good on rock and pop" and stored.rating == 3


@pytest.mark.parametrize("bad", [0, 6, -1, 3.5, True, "3"])
def test_invalid_ratings(bad):
    with pytest.raises(InvalidRatingError) as exc:
        rec(bad)
    assert exc.value.rating == bad


def test_store_is_append_only(store):
    record_feedback(store, rec(1))
    first = store.path.read_text()
    record_feedback(store, rec(5))
    assert store.path.read_text().startswith(first)
    assert len(store.path.read_text().splitlines()) == 2
    assert json.loads(store.path.read_text().splitlines()[1])["rating"] == 5


def test_empty_summary(store):
    s = summarize(store)
    assert (s.count, s.mean) == (0, None)
    assert s.histogram == {1: 0, 2: 0, 3: 0, 4: 0, 5: 0}


def test_all_threes(store):
    for _ in range(3):
        record_feedback(store, rec(3))
    s = summarize(store)
    assert s.mean == 3.0
    assert s.histogram[3] == 3 and sum(s.histogram.values()) == 3


def test_twelve_raters(store):
    for i, r in enumerate(TWELVE):
        record_feedback(store, rec(r, user=f"u{i}"))
    s = summarize(store)
    assert s.count == 12
    # hand sum: 2 + 11*3 = 35; 35 / 12
    assert abs(s.mean - 35 / 12) < 1e-12
    assert round(s.mean, 4) == 2.9167


def test_corrupt_store(store):
    store.path.write_text('{"user": "a", "rating": 9, "recorded_at": "2024-01-01T00:00:00"}\n')
    with pytest.raises(StoreIOError):
        summarize(store)


def test_unwritable_store(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(StoreIOError):
        record_feedback(FeedbackStore(blocker / "sub" / "f.jsonl"), rec(3))


class TestHistogram:
    def test_rows(self, tmp_path):
        s = FeedbackSummary(12, 35 / 12, {1: 0, 2: 1, 3: 11, 4: 0, 5: 0})
        path = emit_histogram(s, tmp_path / "h.csv")
        lines = path.read_text().splitlines()
        assert lines == ["rating,count", "1,0", "2,1", "3,11", "4,0", "5,0"]

    def test_all_zero(self, tmp_path):
        path = emit_histogram(summarize_ratings([]), tmp_path / "h.csv")
        assert path.read_text().splitlines()[1:] == [f"{r},0" for r in range(1, 6)]

    def test_round_trip_and_stable(self, tmp_path):
        s = summarize_ratings(TWELVE)
        emit_histogram(s, tmp_path / "a.csv")
        emit_histogram(s, tmp_path / "b.csv")
        assert read_histogram(tmp_path / "a.csv") == s.histogram
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        assert histogram_csv(s).encode() == (tmp_path / "a.csv").read_bytes()


_ratings = st.lists(st.integers(1, 5), max_size=200)


@given(_ratings, st.integers(1, 5))
def test_incremental_mean(ratings, extra):
    before, after = summarize_ratings(ratings), summarize_ratings(ratings + [extra])
    assert after.count == before.count + 1
    prev = before.mean if before.count else 0.0
    expected = prev + (extra - prev) / after.count
    assert abs(after.mean - expected) < 1e-12


@given(_ratings.filter(bool), st.randoms())
def test_permutation_invariant_and_bounded(ratings, rnd):
    shuffled = list(ratings)
    rnd.shuffle(shuffled)
    a, b = summarize_ratings(ratings), summarize_ratings(shuffled)
    assert a.histogram == b.histogram and a.mean == b.mean
    assert min(ratings) <= a.mean <= max(ratings)
    assert a.mean == float(Fraction(sum(ratings), len(ratings)))

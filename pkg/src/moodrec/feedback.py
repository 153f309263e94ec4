"""Playlist ratings: an append-only JSON-lines store and its summary."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Mapping

RATINGS = (1, 2, 3, 4, 5)


class InvalidRatingError(ValueError):
    def __init__(self, rating):
        super().__init__(f"rating must be an integer from 1 to 5, got {rating!r}")
        self.rating = rating


class StoreIOError(OSError):
    pass


def _check_rating(rating) -> int:
    if isinstance(rating, bool) or not isinstance(rating, int) or rating not in RATINGS:
        raise InvalidRatingError(rating)
    return rating


@dataclass(frozen=True)
class FeedbackRecord:
    user: str
    playlist_fingerprint: str
    rating: int
    comment: str = ""
    recorded_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))

    def __post_init__(self) -> None:
        _check_rating(self.rating)
        if not self.user or not self.user.strip():
            raise ValueError("user must be non-empty")

    def to_json(self) -> dict:
        return {
            "user": self.user,
            "playlist_fingerprint": self.playlist_fingerprint,
            "rating": self.rating,
            "comment": self.comment,
            "recorded_at": self.recorded_at.isoformat(),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "FeedbackRecord":
        return cls(
            user=data["user"],
            playlist_fingerprint=data.get("playlist_fingerprint", ""),
            rating=data["rating"],
            comment=data.get("comment", ""),
            recorded_at=datetime.fromisoformat(data["recorded_at"]),
        )


@dataclass(frozen=True)
class FeedbackSummary:
    count: int
    mean: float | None
    histogram: dict[int, int]

    def to_json(self) -> dict:
        return {
            "count": self.count,
            "mean": self.mean,
            "histogram": {str(r): self.histogram.get(r, 0) for r in RATINGS},
        }


class FeedbackStore:
    """JSON-lines file, one record per line; writes only ever append."""

    def __init__(self, path: str | Path):
        self.path = Path(path)

    def append(self, record: FeedbackRecord) -> int:
        line = json.dumps(record.to_json(), ensure_ascii=False) + "\n"
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line)
                fh.flush()
        except OSError as exc:
            raise StoreIOError(f"cannot append to feedback store {self.path}: {exc}") from exc
        return len(self.records())

    def records(self) -> list[FeedbackRecord]:
        if not self.path.exists():
            return []
        try:
            text = self.path.read_text(encoding="utf-8")
        except OSError as exc:
            raise StoreIOError(f"cannot read feedback store {self.path}: {exc}") from exc
        out = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                out.append(FeedbackRecord.from_json(json.loads(line)))
            except (ValueError, KeyError, TypeError) as exc:
                raise StoreIOError(f"{self.path}:{lineno}: corrupt feedback record: {exc}") from exc
        return out


def record_feedback(store: FeedbackStore, record: FeedbackRecord) -> int:
    """Append ``record``; returns the store size afterwards."""
    _check_rating(record.rating)
    return store.append(record)


def summarize_ratings(ratings: Iterable[int]) -> FeedbackSummary:
    histogram = {r: 0 for r in RATINGS}
    for r in ratings:
        histogram[_check_rating(r)] += 1
    count = sum(histogram.values())
    mean = sum(r * c for r, c in histogram.items()) / count if count else None
    return FeedbackSummary(count, mean, histogram)


def summarize(store: FeedbackStore) -> FeedbackSummary:
    return summarize_ratings(r.rating for r in store.records())


def histogram_csv(summary: FeedbackSummary) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["rating", "count"])
    for r in RATINGS:
        writer.writerow([r, summary.histogram.get(r, 0)])
    return buf.getvalue()


def emit_histogram(summary: FeedbackSummary, path: str | Path) -> Path:
    path = Path(path)
    try:
        path.write_text(histogram_csv(summary), encoding="utf-8")
    except OSError as exc:
        raise StoreIOError(f"cannot write histogram {path}: {exc}") from exc
    return path


def read_histogram(path: str | Path) -> dict[int, int]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        return {int(row["rating"]): int(row["count"]) for row in csv.DictReader(fh)}

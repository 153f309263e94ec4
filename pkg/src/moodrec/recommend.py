"""Seed tracks in, popularity-ranked playlist out."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Any, Mapping, Sequence

import numpy as np

from .catalog import FEATURES, Catalog, Track
from .emotion import DEFAULT_AROUSAL, Quadrant, classify_quadrant, quadrant_mask
from .features import FeatureStats, compute_stats, standardized_matrix
from .similarity import (
    Neighbor,
    NoCandidatesError,
    WeightProfile,
    distances_to,
    seed_centroid,
    select_nearest,
)

DEFAULT_K = 9
DEFAULT_POOL_SIZE = 30
DEFAULT_YEAR_WINDOW = 8


class SeedNotFoundError(KeyError):
    def __init__(self, track_id: str):
        super().__init__(track_id)
        self.track_id = track_id

    def __str__(self) -> str:
        return f"seed track not found: {self.track_id!r}"


class UnknownIdError(KeyError):
    def __init__(self, track_id: str):
        super().__init__(track_id)
        self.track_id = track_id

    def __str__(self) -> str:
        return f"track id not in catalog: {self.track_id!r}"


@dataclass(frozen=True)
class RecommendRequest:
    seed_ids: tuple[str, ...]
    k: int = DEFAULT_K
    pool_size: int | None = None
    year_window: int | None = DEFAULT_YEAR_WINDOW
    target_quadrant: Quadrant | None = None
    weights: WeightProfile = field(default_factory=WeightProfile)
    arousal: str = DEFAULT_AROUSAL

    def __post_init__(self) -> None:
        seeds = tuple(dict.fromkeys(str(s) for s in self.seed_ids))
        if not seeds or any(not s for s in seeds):
            raise ValueError("at least one non-empty seed id is required")
        object.__setattr__(self, "seed_ids", seeds)
        if self.k < 1:
            raise ValueError("k must be >= 1")
        # Leaving pool_size unset widens the default pool when k exceeds it.
        pool = max(DEFAULT_POOL_SIZE, self.k) if self.pool_size is None else self.pool_size
        if pool < self.k:
            raise ValueError(f"pool_size ({pool}) must be >= k ({self.k})")
        object.__setattr__(self, "pool_size", pool)
        if self.year_window is not None and self.year_window < 1:
            raise ValueError("year_window must be >= 1 when given")
        if isinstance(self.target_quadrant, str) and not isinstance(self.target_quadrant, Quadrant):
            object.__setattr__(self, "target_quadrant", Quadrant.parse(self.target_quadrant))

    def to_json(self) -> dict[str, Any]:
        return {
            "seeds": list(self.seed_ids),
            "k": self.k,
            "pool_size": self.pool_size,
            "year_window": self.year_window,
            "quadrant": None if self.target_quadrant is None else self.target_quadrant.value,
            "weights": list(self.weights.values),
            "arousal": self.arousal,
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "RecommendRequest":
        q = data.get("quadrant")
        return cls(
            seed_ids=tuple(data["seeds"]),
            k=int(data.get("k", DEFAULT_K)),
            pool_size=data.get("pool_size"),
            year_window=data.get("year_window", DEFAULT_YEAR_WINDOW),
            target_quadrant=None if q is None else Quadrant.parse(q),
            weights=WeightProfile(tuple(data.get("weights", (1.0,) * len(FEATURES)))),
            arousal=data.get("arousal", DEFAULT_AROUSAL),
        )


@dataclass(frozen=True)
class Recommendation:
    track: Track
    distance: float
    rank: int
    quadrant: Quadrant | None = None

    def to_json(self) -> dict[str, Any]:
        t = self.track
        return {
            "rank": self.rank,
            "id": t.id,
            "title": t.title,
            "artist": t.artist,
            "year": t.year,
            "popularity": t.popularity,
            "distance": self.distance,
            "quadrant": None if self.quadrant is None else self.quadrant.value,
            "features": {f: getattr(t, f) for f in FEATURES},
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "Recommendation":
        track = Track(
            id=data["id"],
            title=data["title"],
            artist=data["artist"],
            year=int(data["year"]),
            popularity=int(data["popularity"]),
            **{f: float(data["features"][f]) for f in FEATURES},
        )
        q = data.get("quadrant")
        return cls(track, float(data["distance"]), int(data["rank"]), None if q is None else Quadrant(q))


@dataclass(frozen=True)
class Playlist:
    request: RecommendRequest
    items: tuple[Recommendation, ...]
    stats_fingerprint: str
    year_floor: int | None = None
    # Wall-clock metadata only: excluded from equality and from the JSON body.
    generated_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc), compare=False)

    @property
    def ids(self) -> list[str]:
        return [r.track.id for r in self.items]

    def to_json(self) -> dict[str, Any]:
        body = self.request.to_json()
        body["year_floor"] = self.year_floor
        body["items"] = [r.to_json() for r in self.items]
        body["stats_fingerprint"] = self.stats_fingerprint
        return body

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "Playlist":
        return cls(
            request=RecommendRequest.from_json(data),
            items=tuple(Recommendation.from_json(i) for i in data["items"]),
            stats_fingerprint=data["stats_fingerprint"],
            year_floor=data.get("year_floor"),
        )

    @classmethod
    def loads(cls, text: str) -> "Playlist":
        return cls.from_json(json.loads(text))

    def fingerprint(self) -> str:
        return hashlib.sha256(json.dumps(self.to_json(), sort_keys=True).encode()).hexdigest()[:16]


def rerank_key(popularity: int, distance: float, track_id: str) -> tuple:
    return (-popularity, distance, track_id)


def popularity_rerank(pool: Sequence[Neighbor], catalog: Catalog, k: int) -> list[Recommendation]:
    if k < 1:
        raise ValueError("k must be >= 1")
    resolved = []
    for n in pool:
        track = catalog.get(n.id)
        if track is None:
            raise UnknownIdError(n.id)
        resolved.append((track, n.distance))
    resolved.sort(key=lambda td: rerank_key(td[0].popularity, td[1], td[0].id))
    return [Recommendation(t, d, rank) for rank, (t, d) in enumerate(resolved[:k], start=1)]


def _seed_tracks(request: RecommendRequest, catalog: Catalog) -> list[Track]:
    seeds = []
    for sid in request.seed_ids:
        track = catalog.get(sid)
        if track is None:
            raise SeedNotFoundError(sid)
        seeds.append(track)
    return seeds


def recommend(request: RecommendRequest, catalog: Catalog, stats: FeatureStats | None = None) -> Playlist:
    """Run the full pipeline against ``catalog``.

    Candidates are restricted by seed exclusion, the release-year window and
    the optional quadrant before the distance search, then the ``pool_size``
    nearest are re-sorted by popularity and cut to ``k``.
    """
    seeds = _seed_tracks(request, catalog)
    stats = stats or compute_stats(catalog)
    z = standardized_matrix(catalog, stats)
    seed_pos = [catalog.position(t.id) for t in seeds]
    centroid = seed_centroid([z[i].tolist() for i in seed_pos])

    mask = np.ones(len(catalog), dtype=bool)
    mask[seed_pos] = False
    if not mask.any():
        raise NoCandidatesError("seed-exclusion", "catalog holds only the seed tracks")
    year_floor = None
    if request.year_window is not None:
        year_floor = max(t.year for t in seeds) - request.year_window
        mask &= catalog.years >= year_floor
        if not mask.any():
            raise NoCandidatesError("year", f"no track released in or after {year_floor}")
    if request.target_quadrant is not None:
        mask &= quadrant_mask(z, request.target_quadrant, request.arousal)
        if not mask.any():
            raise NoCandidatesError("quadrant", f"no remaining track in {request.target_quadrant.value}")

    candidates = np.flatnonzero(mask)
    dist = distances_to(z[candidates], centroid, request.weights)
    full = np.full(len(catalog), np.inf)
    full[candidates] = dist
    chosen = select_nearest(full, catalog.popularity, catalog.id_rank, request.pool_size, candidates)
    pool = [Neighbor(catalog.tracks[i].id, float(full[i])) for i in chosen]

    items = tuple(
        replace(r, quadrant=classify_quadrant(z[catalog.position(r.track.id)].tolist(), request.arousal))
        for r in popularity_rerank(pool, catalog, request.k)
    )
    return Playlist(request, items, stats.fingerprint(), year_floor)


def explain(playlist: Playlist) -> str:
    req = playlist.request
    filters = ["seed-exclusion"]
    if playlist.year_floor is not None:
        filters.append(f"year>={playlist.year_floor}")
    if req.target_quadrant is not None:
        filters.append(f"quadrant={req.target_quadrant.value}")
    lines = [
        f"playlist for seeds {', '.join(req.seed_ids)}: {len(playlist.items)}/{req.k} items "
        f"(pool {req.pool_size}, stats {playlist.stats_fingerprint}, "
        f"generated {playlist.generated_at.isoformat(timespec='seconds')})",
        f"filters: {', '.join(filters)}",
    ]
    if len(playlist.items) < req.k:
        lines.append(f"shortfall: {req.k - len(playlist.items)} fewer items than requested after filtering")
    for r in playlist.items:
        t = r.track
        q = "-" if r.quadrant is None else f"{r.quadrant.value} ({r.quadrant.label})"
        line = (
            f"{r.rank:>3}. {t.id} | {t.artist} - {t.title} | year {t.year} | popularity {t.popularity} "
            f"| distance {r.distance:.4f} | quadrant {q} | passed {', '.join(filters)}"
        )
        if r.distance == 0:
            line += " | feature-identical to seed centroid"
        lines.append(line)
    return "\n".join(lines)

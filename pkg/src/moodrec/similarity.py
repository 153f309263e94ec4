"""Weighted Euclidean distance and exact nearest-neighbour retrieval."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .catalog import FEATURES
from .features import MoodVector


class EmptySeedListError(ValueError):
    def __init__(self) -> None:
        super().__init__("at least one seed vector is required")


class NoCandidatesError(LookupError):
    """Every candidate was removed; ``stage`` names what removed the last ones."""

    def __init__(self, stage: str = "exclusion", detail: str = ""):
        msg = f"no candidate tracks left after {stage} filter"
        super().__init__(f"{msg}: {detail}" if detail else msg)
        self.stage = stage


@dataclass(frozen=True)
class WeightProfile:
    values: tuple[float, ...] = (1.0,) * len(FEATURES)

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != len(FEATURES):
            raise ValueError(f"expected {len(FEATURES)} weights, got {len(vals)}")
        if any(not math.isfinite(v) or v < 0 for v in vals):
            raise ValueError(f"weights must be finite and non-negative: {vals}")
        if not any(v > 0 for v in vals):
            raise ValueError("at least one weight must be positive")

    @classmethod
    def uniform(cls) -> "WeightProfile":
        return cls()

    @classmethod
    def from_json(cls, data) -> "WeightProfile":
        """Accept a 6-item list or a mapping of feature name to weight (missing names weigh 1)."""
        if isinstance(data, Mapping):
            if "weights" in data:
                return cls.from_json(data["weights"])
            unknown = set(data) - set(FEATURES)
            if unknown:
                raise ValueError(f"unknown features in weights: {sorted(unknown)}")
            return cls(tuple(float(data.get(f, 1.0)) for f in FEATURES))
        return cls(tuple(data))

    def as_dict(self) -> dict[str, float]:
        return dict(zip(FEATURES, self.values))

    def scaled(self, c: float) -> "WeightProfile":
        return WeightProfile(tuple(c * v for v in self.values))


class Neighbor(NamedTuple):
    id: str
    distance: float


def euclidean_distance(p: Sequence[float], q: Sequence[float], w: WeightProfile | None = None) -> float:
    """sqrt(sum_f w_f * (q_f - p_f)^2); ``w=None`` is the unweighted distance."""
    total = 0.0
    if w is None:
        for a, b in zip(p, q):
            d = b - a
            total += d * d
    else:
        for a, b, wf in zip(p, q, w.values):
            d = b - a
            total += wf * (d * d)
    return math.sqrt(total)


def distances_to(matrix: np.ndarray, query: Sequence[float], w: WeightProfile | None = None) -> np.ndarray:
    """Distance from every row of ``matrix`` to ``query``.

    Accumulates feature by feature in the same order as euclidean_distance so
    both give bit-identical results.
    """
    total = np.zeros(matrix.shape[0], dtype=np.float64)
    weights = (None,) * matrix.shape[1] if w is None else w.values
    for j, (qj, wj) in enumerate(zip(query, weights)):
        d = qj - matrix[:, j]
        sq = d * d
        total += sq if wj is None else wj * sq
    return np.sqrt(total)


def seed_centroid(seeds: Sequence[Sequence[float]]) -> MoodVector:
    if len(seeds) == 0:
        raise EmptySeedListError()
    # Exactly rounded mean: identical seeds give back the seed, in any order.
    return MoodVector(*(float(statistics.mean(map(float, col))) for col in zip(*seeds)))


def select_nearest(
    distances: np.ndarray,
    popularity: np.ndarray,
    id_rank: np.ndarray,
    k: int,
    candidates: np.ndarray | None = None,
) -> np.ndarray:
    """Indices of the k best candidates by (distance asc, popularity desc, id asc).

    Exact: a partition finds the k-th smallest distance, then every candidate
    at or below it is fully ordered, so ties at the cut are resolved by the
    total order and not by partition internals.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    idx = np.arange(distances.shape[0]) if candidates is None else np.asarray(candidates)
    if idx.size == 0:
        raise NoCandidatesError()
    d = distances[idx]
    if k < idx.size:
        cut = np.partition(d, k - 1)[k - 1]
        keep = d <= cut
        idx, d = idx[keep], d[keep]
    order = np.lexsort((id_rank[idx], -popularity[idx], d))
    return idx[order[:k]]


def nearest(
    vectors: Sequence[tuple[str, Sequence[float]]],
    query: Sequence[float],
    k: int,
    w: WeightProfile | None = None,
    exclude: Iterable[str] = (),
    popularity: Mapping[str, int] | None = None,
) -> list[Neighbor]:
    """Exact k nearest neighbours of ``query`` among ``vectors``.

    Ties on distance go to the more popular track (when ``popularity`` is
    given), then the smaller id.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    excluded = set(exclude)
    kept = [(tid, v) for tid, v in vectors if tid not in excluded]
    if not kept:
        raise NoCandidatesError()
    ids = [tid for tid, _ in kept]
    matrix = np.asarray([v for _, v in kept], dtype=np.float64).reshape(len(kept), -1)
    pop = np.array([0 if popularity is None else popularity[t] for t in ids], dtype=np.int64)
    order = sorted(range(len(ids)), key=ids.__getitem__)
    rank = np.empty(len(ids), dtype=np.int64)
    rank[order] = np.arange(len(ids))
    dist = distances_to(matrix, query, w)
    chosen = select_nearest(dist, pop, rank, k)
    return [Neighbor(ids[i], float(dist[i])) for i in chosen]

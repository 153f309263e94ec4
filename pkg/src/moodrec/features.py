"""Per-feature catalog statistics and z-score standardization."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple

import numpy as np

from .catalog import FEATURES, Catalog, Track


class EmptyCatalogError(ValueError):
    def __init__(self) -> None:
        super().__init__("catalog is empty")


class MoodVector(NamedTuple):
    """Standardized features of one track, in FEATURES order."""

    valence: float
    energy: float
    tempo: float
    danceability: float
    liveness: float
    loudness: float


@dataclass(frozen=True)
class FeatureStats:
    mean: tuple[float, ...]
    std: tuple[float, ...]
    count: int

    def __post_init__(self) -> None:
        if len(self.mean) != len(FEATURES) or len(self.std) != len(FEATURES):
            raise ValueError("FeatureStats needs one mean and one std per feature")
        if self.count < 1:
            raise ValueError("FeatureStats count must be positive")
        for m, s in zip(self.mean, self.std):
            if not (math.isfinite(m) and math.isfinite(s)) or s < 0:
                raise ValueError(f"invalid feature statistics mean={m} std={s}")

    def of(self, feature: str) -> tuple[float, float]:
        i = FEATURES.index(feature)
        return self.mean[i], self.std[i]

    def to_dict(self) -> dict:
        out: dict = {f: {"mean": m, "std": s} for f, m, s in zip(FEATURES, self.mean, self.std)}
        out["count"] = self.count
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "FeatureStats":
        return cls(
            mean=tuple(float(data[f]["mean"]) for f in FEATURES),
            std=tuple(float(data[f]["std"]) for f in FEATURES),
            count=int(data["count"]),
        )

    def fingerprint(self) -> str:
        # repr() of a float round-trips exactly, so equal stats give equal digests.
        payload = json.dumps(
            {"mean": [repr(m) for m in self.mean], "std": [repr(s) for s in self.std], "count": self.count},
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def column_stats(values) -> tuple[float, float]:
    """Mean and population standard deviation of one column.

    ``math.fsum`` makes the result independent of row order.
    """
    xs = [float(v) for v in values]
    n = len(xs)
    if n == 0:
        raise EmptyCatalogError()
    mean = math.fsum(xs) / n
    var = math.fsum((x - mean) * (x - mean) for x in xs) / n
    return mean, math.sqrt(var)


def stats_from_matrix(matrix: np.ndarray) -> FeatureStats:
    if matrix.shape[0] == 0:
        raise EmptyCatalogError()
    pairs = [column_stats(matrix[:, j].tolist()) for j in range(matrix.shape[1])]
    return FeatureStats(
        mean=tuple(p[0] for p in pairs),
        std=tuple(p[1] for p in pairs),
        count=int(matrix.shape[0]),
    )


def compute_stats(catalog: Catalog) -> FeatureStats:
    if len(catalog) == 0:
        raise EmptyCatalogError()
    cached = catalog.extras.get("feature_stats")
    if cached is None:
        cached = catalog.extras["feature_stats"] = stats_from_matrix(catalog.feature_matrix)
    return cached


def z_transform(track: Track, stats: FeatureStats) -> MoodVector:
    """Standardize a track; a zero-variance feature maps to 0."""
    return MoodVector(
        *(0.0 if s == 0 else (x - m) / s for x, m, s in zip(track.features(), stats.mean, stats.std))
    )


def standardize(matrix: np.ndarray, stats: FeatureStats) -> np.ndarray:
    """Vectorized z_transform over an (n, 6) raw-feature array.

    Elementwise IEEE arithmetic makes each row identical to ``z_transform``.
    """
    mean = np.asarray(stats.mean, dtype=np.float64)
    std = np.asarray(stats.std, dtype=np.float64)
    safe = np.where(std == 0, 1.0, std)
    z = (matrix - mean) / safe
    z[:, std == 0] = 0.0
    return z


def standardized_matrix(catalog: Catalog, stats: FeatureStats) -> np.ndarray:
    key = ("mood_matrix", stats)
    cached = catalog.extras.get(key)
    if cached is None:
        cached = standardize(catalog.feature_matrix, stats)
        cached.flags.writeable = False
        catalog.extras[key] = cached
    return cached


def z_transform_all(catalog: Catalog, stats: FeatureStats) -> list[tuple[str, MoodVector]]:
    if len(catalog) == 0:
        raise EmptyCatalogError()
    z = standardized_matrix(catalog, stats)
    return [(t.id, MoodVector(*row)) for t, row in zip(catalog, z.tolist())]

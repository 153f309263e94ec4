"""Arousal-valence quadrants and personality-driven feature weights."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .catalog import FEATURES
from .similarity import WeightProfile

VALENCE_AXIS = FEATURES.index("valence")
AROUSAL_FEATURES = ("energy", "tempo")
DEFAULT_AROUSAL = "energy"


class Quadrant(str, Enum):
    Q1 = "Q1"
    Q2 = "Q2"
    Q3 = "Q3"
    Q4 = "Q4"

    @property
    def signs(self) -> tuple[str, str]:
        """(valence sign, arousal sign)."""
        return _SIGNS[self]

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def from_signs(cls, valence_positive: bool, arousal_positive: bool) -> "Quadrant":
        if valence_positive:
            return cls.Q1 if arousal_positive else cls.Q4
        return cls.Q2 if arousal_positive else cls.Q3

    @classmethod
    def parse(cls, text: str) -> "Quadrant":
        """Accept "Q4", "4", "calm", "Q4_Calm" and similar spellings."""
        key = text.strip().lower()
        for q in cls:
            names = {q.value.lower(), q.value[1:], q.name.lower(), *_ALIASES[q]}
            if key in names or key.split("_", 1)[0] == q.value.lower():
                return q
        raise ValueError(f"unknown quadrant {text!r}")


_SIGNS = {Quadrant.Q1: ("+", "+"), Quadrant.Q2: ("-", "+"), Quadrant.Q3: ("-", "-"), Quadrant.Q4: ("+", "-")}
_LABELS = {
    Quadrant.Q1: "exuberant/happy",
    Quadrant.Q2: "anxious/angry",
    Quadrant.Q3: "sad/depressed",
    Quadrant.Q4: "calm/content",
}
_ALIASES = {
    Quadrant.Q1: {"happy", "exuberant", "exuberanthappy"},
    Quadrant.Q2: {"angry", "anxious", "anxiousangry"},
    Quadrant.Q3: {"sad", "depressed", "saddepressed"},
    Quadrant.Q4: {"calm", "content"},
}


def _arousal_axis(arousal: str) -> int:
    if arousal not in AROUSAL_FEATURES:
        raise ValueError(f"arousal feature must be one of {AROUSAL_FEATURES}, got {arousal!r}")
    return FEATURES.index(arousal)


def classify_quadrant(v: Sequence[float], arousal: str = DEFAULT_AROUSAL) -> Quadrant:
    """Quadrant of a standardized vector; a zero coordinate counts as positive."""
    return Quadrant.from_signs(v[VALENCE_AXIS] >= 0, v[_arousal_axis(arousal)] >= 0)


def quadrant_mask(z: np.ndarray, target: Quadrant, arousal: str = DEFAULT_AROUSAL) -> np.ndarray:
    """Boolean row mask of a standardized matrix selecting ``target``."""
    want_v, want_a = (s == "+" for s in target.signs)
    return ((z[:, VALENCE_AXIS] >= 0) == want_v) & ((z[:, _arousal_axis(arousal)] >= 0) == want_a)


def filter_by_quadrant(candidates, target: Quadrant, arousal: str = DEFAULT_AROUSAL) -> list:
    return [(tid, v) for tid, v in candidates if classify_quadrant(v, arousal) is target]


TRAITS = ("extroversion", "agreeableness", "consciousness", "neuroticism", "openness")


class DegenerateWeightsError(ValueError):
    def __init__(self) -> None:
        super().__init__("personality mapping produced all-zero feature weights")


@dataclass(frozen=True)
class PersonalityProfile:
    extroversion: float = 0.0
    agreeableness: float = 0.0
    consciousness: float = 0.0
    neuroticism: float = 0.0
    openness: float = 0.0

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not 0.0 <= value <= 1.0:
                raise ValueError(f"trait {f.name} must be in [0, 1], got {value!r}")

    def values(self) -> tuple[float, ...]:
        return tuple(float(getattr(self, t)) for t in TRAITS)

    @classmethod
    def from_json(cls, data: Mapping) -> "PersonalityProfile":
        unknown = set(data) - set(TRAITS)
        if unknown:
            raise ValueError(f"unknown traits: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in data.items()})


def _zero_matrix() -> dict[str, tuple[float, ...]]:
    return {t: (0.0,) * len(FEATURES) for t in TRAITS}


@dataclass(frozen=True)
class TraitWeightMap:
    """Affine map from trait scores to feature weights.

    The default (unit baseline, zero matrix) yields uniform weights, so it
    leaves the distance unweighted.
    """

    baseline: tuple[float, ...] = (1.0,) * len(FEATURES)
    matrix: Mapping[str, tuple[float, ...]] = field(default_factory=_zero_matrix)

    def __post_init__(self) -> None:
        base = tuple(float(b) for b in self.baseline)
        if len(base) != len(FEATURES) or any(b < 0 for b in base):
            raise ValueError("baseline needs six non-negative weights")
        unknown = set(self.matrix) - set(TRAITS)
        if unknown:
            raise ValueError(f"unknown traits in matrix: {sorted(unknown)}")
        rows = {}
        for t in TRAITS:
            row = tuple(float(x) for x in self.matrix.get(t, (0.0,) * len(FEATURES)))
            if len(row) != len(FEATURES):
                raise ValueError(f"matrix row {t!r} needs {len(FEATURES)} entries")
            rows[t] = row
        object.__setattr__(self, "baseline", base)
        object.__setattr__(self, "matrix", rows)

    def __hash__(self) -> int:
        return hash((self.baseline, tuple(self.matrix[t] for t in TRAITS)))

    @classmethod
    def from_json(cls, data: Mapping) -> "TraitWeightMap":
        matrix = data.get("matrix", {})
        return cls(baseline=tuple(data.get("baseline", (1.0,) * len(FEATURES))), matrix=dict(matrix))

    def to_json(self) -> dict:
        return {"baseline": list(self.baseline), "matrix": {t: list(self.matrix[t]) for t in TRAITS}}


def weights_from_personality(profile: PersonalityProfile, mapping: TraitWeightMap | None = None) -> WeightProfile:
    """w_f = max(0, baseline_f + sum_t trait_t * matrix[t][f])."""
    mapping = mapping or TraitWeightMap()
    weights = []
    for j in range(len(FEATURES)):
        w = mapping.baseline[j]
        for t, score in zip(TRAITS, profile.values()):
            w += score * mapping.matrix[t][j]
        weights.append(max(0.0, w))
    if not any(w > 0 for w in weights):
        raise DegenerateWeightsError()
    return WeightProfile(tuple(weights))


def load_json(path: str | Path):
    with Path(path).open(encoding="utf-8") as fh:
        return json.load(fh)

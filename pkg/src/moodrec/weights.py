"""Turn user-supplied weight/personality inputs into one WeightProfile."""

from __future__ import annotations

from typing import Any, Mapping

from .emotion import PersonalityProfile, TraitWeightMap, weights_from_personality
from .similarity import WeightProfile


def resolve_weights(
    weights: Any = None,
    personality: Mapping[str, float] | None = None,
    trait_map: Mapping[str, Any] | None = None,
) -> WeightProfile:
    """Explicit weights and a personality profile are mutually exclusive.

    With neither, the distance is unweighted.
    """
    if weights is not None and personality is not None:
        raise ValueError("give either explicit weights or a personality profile, not both")
    if weights is not None:
        return WeightProfile.from_json(weights)
    if personality is not None:
        mapping = TraitWeightMap.from_json(trait_map) if trait_map is not None else TraitWeightMap()
        return weights_from_personality(PersonalityProfile.from_json(personality), mapping)
    if trait_map is not None:
        raise ValueError("a trait map needs a personality profile")
    return WeightProfile.uniform()

"""Request/response models for the HTTP service."""

from __future__ import annotations

from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field


class RecommendIn(BaseModel):
    seeds: List[str] = Field(min_length=1)
    k: int = Field(9, ge=1)
    pool_size: Optional[int] = Field(None, ge=1)
    year_window: Optional[int] = Field(8, ge=1)
    quadrant: Optional[str] = None
    weights: Optional[Union[List[float], Dict[str, float]]] = None
    personality: Optional[Dict[str, float]] = None
    trait_map: Optional[dict] = None
    arousal: Literal["energy", "tempo"] = "energy"


class TrackFeatures(BaseModel):
    valence: float
    energy: float
    tempo: float
    danceability: float
    liveness: float
    loudness: float


class TrackOut(TrackFeatures):
    id: str
    title: str
    artist: str
    year: int
    popularity: int


class PlaylistItem(BaseModel):
    rank: int
    id: str
    title: str
    artist: str
    year: int
    popularity: int
    distance: float
    quadrant: Optional[str]
    features: TrackFeatures


class PlaylistOut(BaseModel):
    seeds: List[str]
    k: int
    pool_size: int
    year_window: Optional[int]
    quadrant: Optional[str]
    weights: List[float]
    arousal: str
    year_floor: Optional[int]
    items: List[PlaylistItem]
    stats_fingerprint: str


class FeatureMoments(BaseModel):
    mean: float
    std: float


class StatsOut(BaseModel):
    valence: FeatureMoments
    energy: FeatureMoments
    tempo: FeatureMoments
    danceability: FeatureMoments
    liveness: FeatureMoments
    loudness: FeatureMoments
    count: int


class FeedbackIn(BaseModel):
    user: str = Field(min_length=1)
    rating: int
    comment: str = ""
    playlist_fingerprint: str = ""


class FeedbackAck(BaseModel):
    stored: bool = True
    count: int


class SummaryOut(BaseModel):
    count: int
    mean: Optional[float]
    histogram: Dict[str, int]


class ErrorOut(BaseModel):
    error: str
    detail: str
    stage: Optional[str] = None
    track_id: Optional[str] = None


class HealthOut(BaseModel):
    status: str
    tracks: int
    stats_fingerprint: str

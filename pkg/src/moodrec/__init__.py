"""Content-based music recommendation over standardized audio features."""

from .catalog import (
    COLUMNS,
    FEATURES,
    Catalog,
    CatalogError,
    DuplicateIdError,
    FieldTypeError,
    MissingFieldError,
    ParseError,
    RangeError,
    SchemaError,
    Track,
    dedupe,
    load_catalog,
    read_catalog,
    validate_row,
    write_catalog,
)
from .emotion import (
    DegenerateWeightsError,
    PersonalityProfile,
    Quadrant,
    TraitWeightMap,
    classify_quadrant,
    filter_by_quadrant,
    weights_from_personality,
)
from .features import EmptyCatalogError, FeatureStats, MoodVector, compute_stats, z_transform, z_transform_all
from .feedback import (
    FeedbackRecord,
    FeedbackStore,
    FeedbackSummary,
    InvalidRatingError,
    StoreIOError,
    emit_histogram,
    record_feedback,
    summarize,
)
from .recommend import (
    Playlist,
    Recommendation,
    RecommendRequest,
    SeedNotFoundError,
    UnknownIdError,
    explain,
    popularity_rerank,
    recommend,
)
from .similarity import (
    EmptySeedListError,
    Neighbor,
    NoCandidatesError,
    WeightProfile,
    euclidean_distance,
    nearest,
    seed_centroid,
)

__version__ = "0.1.0"

"""HTTP service: loads one catalog and answers recommendation and feedback calls."""

from __future__ import annotations

import logging
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .catalog import Catalog, Track, load_catalog
from .emotion import Quadrant
from .features import compute_stats
from .feedback import (
    FeedbackRecord,
    FeedbackStore,
    InvalidRatingError,
    StoreIOError,
    histogram_csv,
    record_feedback,
    summarize,
)
from .recommend import RecommendRequest, SeedNotFoundError, recommend
from .schemas import (
    ErrorOut,
    FeedbackAck,
    FeedbackIn,
    HealthOut,
    PlaylistOut,
    RecommendIn,
    StatsOut,
    SummaryOut,
    TrackOut,
)
from .similarity import NoCandidatesError
from .weights import resolve_weights

log = logging.getLogger(__name__)

# Status codes the CLI client maps back onto its exit codes.
SEED_NOT_FOUND = 404
NO_CANDIDATES = 409
BAD_INPUT = 400


def _error(status: int, error: str, detail: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status, content=ErrorOut(error=error, detail=detail, **extra).model_dump())


def build_request(body: RecommendIn) -> RecommendRequest:
    return RecommendRequest(
        seed_ids=tuple(body.seeds),
        k=body.k,
        pool_size=body.pool_size,
        year_window=body.year_window,
        target_quadrant=None if body.quadrant is None else Quadrant.parse(body.quadrant),
        weights=resolve_weights(body.weights, body.personality, body.trait_map),
        arousal=body.arousal,
    )


def create_app(catalog: Catalog | str | Path, feedback_path: str | Path | None = None) -> FastAPI:
    if not isinstance(catalog, Catalog):
        catalog = load_catalog(catalog)
    stats = compute_stats(catalog)
    store = FeedbackStore(feedback_path) if feedback_path is not None else None
    write_lock = threading.Lock()

    app = FastAPI(title="moodrec", version="0.1.0")
    app.state.catalog = catalog
    app.state.stats = stats
    log.info("serving %d tracks, stats %s", len(catalog), stats.fingerprint())

    @app.exception_handler(SeedNotFoundError)
    async def _seed_missing(request: Request, exc: SeedNotFoundError):
        return _error(SEED_NOT_FOUND, "seed_not_found", str(exc), track_id=exc.track_id)

    @app.exception_handler(NoCandidatesError)
    async def _no_candidates(request: Request, exc: NoCandidatesError):
        return _error(NO_CANDIDATES, "no_candidates", str(exc), stage=exc.stage)

    @app.exception_handler(InvalidRatingError)
    async def _bad_rating(request: Request, exc: InvalidRatingError):
        return _error(BAD_INPUT, "invalid_rating", str(exc))

    @app.exception_handler(StoreIOError)
    async def _store_io(request: Request, exc: StoreIOError):
        return _error(500, "store_io", str(exc))

    @app.exception_handler(ValueError)
    async def _bad_value(request: Request, exc: ValueError):
        return _error(BAD_INPUT, "invalid_request", str(exc))

    @app.get("/health", response_model=HealthOut)
    def health():
        return HealthOut(status="ok", tracks=len(catalog), stats_fingerprint=stats.fingerprint())

    @app.get("/stats", response_model=StatsOut)
    def get_stats():
        return stats.to_dict()

    @app.get("/tracks/{track_id}", response_model=TrackOut)
    def get_track(track_id: str):
        track: Track | None = catalog.get(track_id)
        if track is None:
            raise HTTPException(status_code=404, detail=f"unknown track {track_id!r}")
        return track.to_row()

    @app.post("/recommend", response_model=PlaylistOut)
    def post_recommend(body: RecommendIn):
        playlist = recommend(build_request(body), catalog, stats)
        return playlist.to_json()

    def _store() -> FeedbackStore:
        if store is None:
            raise HTTPException(status_code=503, detail="no feedback store configured")
        return store

    @app.post("/feedback", response_model=FeedbackAck)
    def post_feedback(body: FeedbackIn):
        record = FeedbackRecord(
            user=body.user,
            playlist_fingerprint=body.playlist_fingerprint,
            rating=body.rating,
            comment=body.comment,
        )
        with write_lock:
            count = record_feedback(_store(), record)
        return FeedbackAck(count=count)

    @app.get("/feedback/summary", response_model=SummaryOut)
    def get_summary():
        return summarize(_store()).to_json()

    @app.get("/feedback/histogram", response_class=PlainTextResponse)
    def get_histogram():
        return PlainTextResponse(histogram_csv(summarize(_store())), media_type="text/csv")

    return app

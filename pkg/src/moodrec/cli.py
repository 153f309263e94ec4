"""Command-line entry point.

Exit codes: 0 ok, 1 input/IO error, 2 unknown seed, 3 filters left no candidates.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Callable, Sequence

from .catalog import CatalogError, dedupe, read_catalog, write_catalog, load_catalog
from .emotion import DegenerateWeightsError, Quadrant, load_json
from .features import compute_stats
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
    DEFAULT_K,
    DEFAULT_YEAR_WINDOW,
    Playlist,
    RecommendRequest,
    SeedNotFoundError,
    explain,
    recommend,
)
from .similarity import NoCandidatesError
from .weights import resolve_weights

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_SEED = 2
EXIT_EMPTY = 3

log = logging.getLogger("moodrec")


@dataclass
class Config:
    catalog_path: str | None = None
    k: int = DEFAULT_K
    pool_size: int | None = None
    year_window: int | None = DEFAULT_YEAR_WINDOW
    weights_file: str | None = None
    personality_file: str | None = None
    trait_map_file: str | None = None
    feedback_store: str | None = None
    output_dir: str | None = None
    server: str | None = None

    @classmethod
    def load(cls, path: str | None) -> "Config":
        if path is None:
            return cls()
        data = load_json(path)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**data)
        RecommendRequest(("x",), k=cfg.k, pool_size=cfg.pool_size, year_window=cfg.year_window)
        return cfg


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _fail(message: str, code: int = EXIT_INPUT) -> int:
    print(f"moodrec: error: {message}", file=sys.stderr)
    return code


def _pick(cli_value, cfg_value):
    return cfg_value if cli_value is None else cli_value


def _write_output(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


# ---- thin HTTP client ----------------------------------------------------

def _default_client(url: str):
    import httpx

    return httpx.Client(base_url=url, timeout=60.0)


def _remote(client, method: str, path: str, **kwargs):
    try:
        resp = client.request(method, path, **kwargs)
    except Exception as exc:
        raise CliError(f"cannot reach server: {exc}") from exc
    if resp.status_code == 404 and "seed_not_found" in resp.text:
        raise CliError(resp.json()["detail"], EXIT_SEED)
    if resp.status_code == 409:
        raise CliError(resp.json()["detail"], EXIT_EMPTY)
    if resp.status_code >= 400:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        raise CliError(f"server returned {resp.status_code}: {detail}")
    return resp


# ---- commands ----------------------------------------------------------------

def cmd_ingest(args, cfg: Config, client_factory) -> int:
    try:
        result = read_catalog(args.input, args.format, lenient=args.lenient)
    except FileNotFoundError as exc:
        return _fail(f"FileNotFound: {exc}")
    except CatalogError as exc:
        return _fail(f"{type(exc).__name__}: {exc}")
    deduped = dedupe(result.catalog)
    removed = len(result.catalog) - len(deduped)
    out = args.out or cfg.catalog_path
    if out is None:
        return _fail("ingest needs --out (or catalog_path in the config)")
    try:
        write_catalog(deduped, out, args.out_format)
    except OSError as exc:
        return _fail(f"cannot write {out}: {exc}")
    for err in result.rejected:
        log.warning("rejected %s", err)
    print(f"loaded {len(result.catalog)}, removed {removed} duplicates, rejected {result.rejected_count}")
    return EXIT_OK


def _local_catalog(args, cfg: Config):
    path = _pick(args.catalog, cfg.catalog_path)
    if path is None:
        raise CliError("no catalog given (use --catalog, a config file, or --server)")
    try:
        return load_catalog(path)
    except FileNotFoundError as exc:
        raise CliError(f"FileNotFound: {exc}") from exc
    except CatalogError as exc:
        raise CliError(f"{type(exc).__name__}: {exc}") from exc


def cmd_stats(args, cfg: Config, client_factory) -> int:
    server = _pick(args.server, cfg.server)
    if server:
        with client_factory(server) as client:
            data = _remote(client, "GET", "/stats").json()
    else:
        data = compute_stats(_local_catalog(args, cfg)).to_dict()
    _write_output(json.dumps(data, indent=2) + "\n", args.out)
    return EXIT_OK


def _read_seeds(args) -> list[str]:
    seeds: list[str] = []
    if args.seeds:
        seeds += [s.strip() for s in args.seeds.split(",") if s.strip()]
    if args.seeds_file:
        for line in Path(args.seeds_file).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if line and not line.startswith("#"):
                seeds.append(line)
    if not seeds:
        raise CliError("no seeds given (use --seeds or --seeds-file)")
    return seeds


def _recommend_body(args, cfg: Config) -> dict[str, Any]:
    year_window = None if args.no_year_window else _pick(args.year_window, cfg.year_window)
    weights_file = _pick(args.weights_file, cfg.weights_file)
    personality_file = _pick(args.personality_file, cfg.personality_file)
    trait_map_file = _pick(args.trait_map_file, cfg.trait_map_file)
    body = {
        "seeds": _read_seeds(args),
        "k": _pick(args.k, cfg.k),
        "pool_size": _pick(args.pool, cfg.pool_size),
        "year_window": year_window,
        "quadrant": None if args.quadrant is None else Quadrant.parse(args.quadrant).value,
        "weights": None if weights_file is None else load_json(weights_file),
        "personality": None if personality_file is None else load_json(personality_file),
        "trait_map": None if trait_map_file is None else load_json(trait_map_file),
        "arousal": args.arousal,
    }
    return body


def cmd_recommend(args, cfg: Config, client_factory) -> int:
    try:
        body = _recommend_body(args, cfg)
    except (OSError, ValueError) as exc:
        raise CliError(str(exc)) from exc
    server = _pick(args.server, cfg.server)
    if server:
        with client_factory(server) as client:
            playlist = Playlist.from_json(_remote(client, "POST", "/recommend", json=body).json())
    else:
        catalog = _local_catalog(args, cfg)
        try:
            request = RecommendRequest(
                seed_ids=tuple(body["seeds"]),
                k=body["k"],
                pool_size=body["pool_size"],
                year_window=body["year_window"],
                target_quadrant=None if body["quadrant"] is None else Quadrant(body["quadrant"]),
                weights=resolve_weights(body["weights"], body["personality"], body["trait_map"]),
                arousal=body["arousal"],
            )
        except (ValueError, DegenerateWeightsError) as exc:
            raise CliError(str(exc)) from exc
        try:
            playlist = recommend(request, catalog)
        except SeedNotFoundError as exc:
            raise CliError(f"SeedNotFound: {exc}", EXIT_SEED) from exc
        except NoCandidatesError as exc:
            raise CliError(f"NoCandidates ({exc.stage} filter): {exc}", EXIT_EMPTY) from exc
    out = args.out
    if out is None and cfg.output_dir:
        out = str(Path(cfg.output_dir) / "playlist.json")
    _write_output(playlist.dumps(), out)
    if args.verbose:
        print(explain(playlist), file=sys.stderr)
    return EXIT_OK


def cmd_feedback(args, cfg: Config, client_factory) -> int:
    fingerprint = args.fingerprint or ""
    if args.playlist:
        try:
            fingerprint = Playlist.loads(Path(args.playlist).read_text(encoding="utf-8")).fingerprint()
        except (OSError, ValueError, KeyError) as exc:
            raise CliError(f"cannot read playlist {args.playlist}: {exc}") from exc
    server = _pick(args.server, cfg.server)
    if server:
        payload = {"user": args.user, "rating": args.rating, "comment": args.comment, "playlist_fingerprint": fingerprint}
        with client_factory(server) as client:
            count = _remote(client, "POST", "/feedback", json=payload).json()["count"]
    else:
        store_path = _pick(args.store, cfg.feedback_store)
        if store_path is None:
            raise CliError("no feedback store given (use --store)")
        try:
            record = FeedbackRecord(args.user, fingerprint, args.rating, args.comment)
            count = record_feedback(FeedbackStore(store_path), record)
        except (InvalidRatingError, StoreIOError, ValueError) as exc:
            raise CliError(str(exc)) from exc
    print(f"recorded rating {args.rating} from {args.user}; store holds {count} records")
    return EXIT_OK


def cmd_summary(args, cfg: Config, client_factory) -> int:
    server = _pick(args.server, cfg.server)
    if server:
        with client_factory(server) as client:
            data = _remote(client, "GET", "/feedback/summary").json()
        summary = FeedbackSummary(
            data["count"], data["mean"], {int(r): c for r, c in data["histogram"].items()}
        )
    else:
        store_path = _pick(args.store, cfg.feedback_store)
        if store_path is None:
            raise CliError("no feedback store given (use --store)")
        try:
            summary = summarize(FeedbackStore(store_path))
        except StoreIOError as exc:
            raise CliError(str(exc)) from exc
    histogram = args.histogram
    if histogram is None and cfg.output_dir:
        histogram = str(Path(cfg.output_dir) / "ratings_histogram.csv")
    if histogram:
        try:
            emit_histogram(summary, histogram)
        except StoreIOError as exc:
            raise CliError(str(exc)) from exc
    _write_output(json.dumps(summary.to_json(), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_serve(args, cfg: Config, client_factory) -> int:
    import uvicorn

    from .service import create_app

    catalog = _local_catalog(args, cfg)
    app = create_app(catalog, _pick(args.store, cfg.feedback_store))
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="moodrec", description="Mood-vector music recommender")
    parser.add_argument("--config", help="JSON config file (catalog_path, k, pool_size, ...)")
    parser.add_argument("-q", "--quiet", action="store_true", help="suppress warnings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate, dedupe and normalize a catalog file")
    p.add_argument("input")
    p.add_argument("--out", help="normalized catalog path (.csv or .json)")
    p.add_argument("--format", choices=["csv", "json"], help="input format (default: by extension)")
    p.add_argument("--out-format", choices=["csv", "json"])
    p.add_argument("--lenient", action="store_true", help="skip invalid rows instead of failing")
    p.set_defaults(func=cmd_ingest)

    def remote(p):
        p.add_argument("--server", help="base URL of a running moodrec service")

    p = sub.add_parser("stats", help="print per-feature mean/std as JSON")
    p.add_argument("--catalog")
    p.add_argument("--out")
    remote(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("recommend", help="build a playlist from seed tracks")
    p.add_argument("--catalog")
    p.add_argument("--seeds", help="comma-separated track ids")
    p.add_argument("--seeds-file", help="file with one track id per line")
    p.add_argument("--k", type=int)
    p.add_argument("--pool", type=int, help="distance pool size before popularity re-rank")
    p.add_argument("--year-window", type=int)
    p.add_argument("--no-year-window", action="store_true", help="disable the release-year filter")
    p.add_argument("--quadrant", help="Q1..Q4 or a label such as 'calm'")
    p.add_argument("--arousal", choices=["energy", "tempo"], default="energy")
    p.add_argument("--weights-file")
    p.add_argument("--personality-file")
    p.add_argument("--trait-map-file")
    p.add_argument("--out", help="playlist JSON path (default stdout)")
    p.add_argument("-v", "--verbose", action="store_true", help="print the explain report to stderr")
    remote(p)
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("feedback", help="record a 1-5 playlist rating")
    p.add_argument("--store")
    p.add_argument("--user", required=True)
    p.add_argument("--rating", type=int, required=True)
    p.add_argument("--comment", default="")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--playlist", help="playlist JSON the rating refers to")
    group.add_argument("--fingerprint")
    remote(p)
    p.set_defaults(func=cmd_feedback)

    p = sub.add_parser("summary", help="mean rating and histogram")
    p.add_argument("--store")
    p.add_argument("--out", help="summary JSON path (default stdout)")
    p.add_argument("--histogram", help="write rating,count CSV here")
    remote(p)
    p.set_defaults(func=cmd_summary)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--catalog")
    p.add_argument("--store", help="feedback store (JSON lines)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Sequence[str] | None = None, *, client_factory: Callable | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = Config.load(args.config)
    except (OSError, ValueError, TypeError) as exc:
        return _fail(f"bad config: {exc}")
    try:
        return args.func(args, cfg, client_factory or _default_client)
    except CliError as exc:
        return _fail(str(exc), exc.code)


if __name__ == "__main__":
    sys.exit(main())

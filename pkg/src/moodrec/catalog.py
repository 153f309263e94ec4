"""Track catalog: loading, row validation, and duplicate removal."""

from __future__ import annotations

import ast
import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator, Mapping, Sequence

import numpy as np

FEATURES = ("valence", "energy", "tempo", "danceability", "liveness", "loudness")
COLUMNS = ("id", "title", "artist", "year") + FEATURES + ("popularity",)

UNIT_FEATURES = ("valence", "energy", "danceability", "liveness")
LOUDNESS_RANGE = (-60.0, 5.0)
POPULARITY_RANGE = (0, 100)


class CatalogError(ValueError):
    """Base class for catalog loading and validation failures."""


class MissingFieldError(CatalogError):
    def __init__(self, field: str):
        super().__init__(f"missing field {field!r}")
        self.field = field


class FieldTypeError(CatalogError):
    def __init__(self, field: str, value: Any):
        super().__init__(f"field {field!r} has unparseable value {value!r}")
        self.field = field
        self.value = value


class RangeError(CatalogError):
    def __init__(self, field: str, value: Any):
        super().__init__(f"field {field!r} out of range: {value!r}")
        self.field = field
        self.value = value


class SchemaError(CatalogError):
    def __init__(self, missing: Sequence[str]):
        super().__init__(f"catalog file is missing columns: {', '.join(missing)}")
        self.missing = tuple(missing)


class DuplicateIdError(CatalogError):
    def __init__(self, track_id: str):
        super().__init__(f"duplicate track id {track_id!r}")
        self.track_id = track_id


class ParseError(CatalogError):
    """A data row could not be turned into a Track.

    ``row`` is the 1-based data row (header excluded); ``line`` is the
    physical line in the source for CSV input, otherwise ``None``.
    """

    def __init__(self, row: int, reason: str, line: int | None = None):
        where = f"row {row}" + (f" (line {line})" if line is not None else "")
        super().__init__(f"{where}: {reason}")
        self.row = row
        self.line = line
        self.reason = reason


@dataclass(frozen=True, slots=True)
class Track:
    id: str
    title: str
    artist: str
    year: int
    valence: float
    energy: float
    tempo: float
    danceability: float
    liveness: float
    loudness: float
    popularity: int

    def __post_init__(self) -> None:
        for name in ("id", "title", "artist"):
            value = getattr(self, name)
            if not isinstance(value, str) or not value.strip():
                raise RangeError(name, value)
        if isinstance(self.year, bool) or not isinstance(self.year, int) or self.year <= 0:
            raise RangeError("year", self.year)
        for name in FEATURES:
            value = getattr(self, name)
            if not math.isfinite(value):
                raise RangeError(name, value)
        for name in UNIT_FEATURES:
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise RangeError(name, getattr(self, name))
        if not self.tempo > 0:
            raise RangeError("tempo", self.tempo)
        lo, hi = LOUDNESS_RANGE
        if not lo <= self.loudness <= hi:
            raise RangeError("loudness", self.loudness)
        if isinstance(self.popularity, bool) or not isinstance(self.popularity, int):
            raise FieldTypeError("popularity", self.popularity)
        if not POPULARITY_RANGE[0] <= self.popularity <= POPULARITY_RANGE[1]:
            raise RangeError("popularity", self.popularity)

    def features(self) -> tuple[float, ...]:
        return tuple(getattr(self, f) for f in FEATURES)

    def to_row(self) -> dict[str, Any]:
        return {c: getattr(self, c) for c in COLUMNS}


def normalize_artist(raw: str) -> str:
    """Collapse list-style artist exports like ``"['A', 'B']"`` to ``"A, B"``."""
    text = raw.strip()
    if not (text.startswith("[") and text.endswith("]")):
        return text
    try:
        parsed = ast.literal_eval(text)
    except (ValueError, SyntaxError):
        parsed = None
    if isinstance(parsed, (list, tuple)) and all(isinstance(p, str) for p in parsed):
        names = [p.strip() for p in parsed]
    else:
        names = [p.strip().strip("'\"").strip() for p in text[1:-1].split(",")]
    return ", ".join(n for n in names if n)


def _text(raw: Mapping[str, Any], name: str) -> str:
    value = raw[name]
    if value is None:
        raise MissingFieldError(name)
    return str(value).strip()


def _parse_int(name: str, value: Any) -> int:
    if isinstance(value, bool):
        raise FieldTypeError(name, value)
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if value.is_integer():
            return int(value)
        raise FieldTypeError(name, value)
    text = str(value).strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        number = float(text)
    except ValueError:
        raise FieldTypeError(name, value) from None
    if not number.is_integer():
        raise FieldTypeError(name, value)
    return int(number)


def _parse_float(name: str, value: Any) -> float:
    if isinstance(value, bool):
        raise FieldTypeError(name, value)
    try:
        number = float(value if not isinstance(value, str) else value.strip())
    except (TypeError, ValueError):
        raise FieldTypeError(name, value) from None
    if not math.isfinite(number):
        raise FieldTypeError(name, value)
    return number


def validate_row(raw: Mapping[str, Any]) -> Track:
    """Parse one catalog record (strings or JSON scalars) into a Track."""
    for name in COLUMNS:
        if name not in raw or raw[name] is None:
            raise MissingFieldError(name)
    values: dict[str, Any] = {
        "id": _text(raw, "id"),
        "title": _text(raw, "title"),
        "artist": normalize_artist(_text(raw, "artist")),
        "year": _parse_int("year", raw["year"]),
        "popularity": _parse_int("popularity", raw["popularity"]),
    }
    for name in FEATURES:
        values[name] = _parse_float(name, raw[name])
    return Track(**values)


class Catalog:
    """Immutable, id-indexed sequence of tracks."""

    def __init__(self, tracks: Iterable[Track]):
        self._tracks: tuple[Track, ...] = tuple(tracks)
        index: dict[str, int] = {}
        for pos, track in enumerate(self._tracks):
            if track.id in index:
                raise DuplicateIdError(track.id)
            index[track.id] = pos
        self._index = index
        self._cache: dict[str, Any] = {}

    @property
    def tracks(self) -> tuple[Track, ...]:
        return self._tracks

    @property
    def index(self) -> Mapping[str, int]:
        return self._index

    def __len__(self) -> int:
        return len(self._tracks)

    def __iter__(self) -> Iterator[Track]:
        return iter(self._tracks)

    def __contains__(self, track_id: object) -> bool:
        return track_id in self._index

    def __getitem__(self, track_id: str) -> Track:
        return self._tracks[self._index[track_id]]

    def get(self, track_id: str) -> Track | None:
        pos = self._index.get(track_id)
        return None if pos is None else self._tracks[pos]

    def position(self, track_id: str) -> int:
        return self._index[track_id]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Catalog):
            return NotImplemented
        return self._tracks == other._tracks

    def __repr__(self) -> str:
        return f"Catalog({len(self)} tracks)"

    # Column views are derived once; the catalog never changes after construction.
    def _cached(self, key: str, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @property
    def feature_matrix(self) -> np.ndarray:
        """Raw features as an (n, 6) float array in FEATURES order."""
        def build():
            m = np.array([t.features() for t in self._tracks], dtype=np.float64).reshape(-1, len(FEATURES))
            m.flags.writeable = False
            return m
        return self._cached("features", build)

    @property
    def years(self) -> np.ndarray:
        return self._cached("years", lambda: _frozen(np.array([t.year for t in self._tracks], dtype=np.int64)))

    @property
    def popularity(self) -> np.ndarray:
        return self._cached(
            "popularity", lambda: _frozen(np.array([t.popularity for t in self._tracks], dtype=np.int64))
        )

    @property
    def id_rank(self) -> np.ndarray:
        """Position of each track's id in lexicographic id order."""
        def build():
            order = sorted(range(len(self._tracks)), key=lambda i: self._tracks[i].id)
            rank = np.empty(len(order), dtype=np.int64)
            rank[order] = np.arange(len(order))
            return _frozen(rank)
        return self._cached("id_rank", build)

    @property
    def extras(self) -> dict[str, Any]:
        """Scratch space for derived data keyed by other modules (e.g. stats)."""
        return self._cache


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass
class LoadResult:
    catalog: Catalog
    rejected: list[CatalogError] = field(default_factory=list)

    @property
    def rejected_count(self) -> int:
        return len(self.rejected)


def _detect_format(path: Path, fmt: str | None) -> str:
    if fmt:
        fmt = fmt.lower()
        if fmt not in ("csv", "json"):
            raise ValueError(f"unsupported catalog format {fmt!r}")
        return fmt
    return "json" if path.suffix.lower() == ".json" else "csv"


def _csv_records(path: Path) -> Iterator[tuple[int, int | None, Mapping[str, Any]]]:
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in COLUMNS if c not in header]
        if missing:
            raise SchemaError(missing)
        row = 0
        for record in reader:
            row += 1
            if None in record:
                raise ParseError(row, "too many fields", reader.line_num)
            yield row, reader.line_num, record


def _json_records(path: Path) -> Iterator[tuple[int, int | None, Mapping[str, Any]]]:
    with path.open(encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(0, f"invalid JSON: {exc.msg}", exc.lineno) from exc
    if not isinstance(data, list):
        raise SchemaError(["<top-level array>"])
    if data and isinstance(data[0], dict):
        missing = [c for c in COLUMNS if c not in data[0]]
        if missing:
            raise SchemaError(missing)
    for row, record in enumerate(data, start=1):
        if not isinstance(record, dict):
            raise ParseError(row, "record is not an object")
        yield row, None, record


def read_catalog(path: str | Path, fmt: str | None = None, *, lenient: bool = False) -> LoadResult:
    """Load a catalog file, keeping row order.

    Strict mode (the default) raises on the first bad row. Lenient mode skips
    bad rows, including repeated ids, and collects their errors.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"catalog file not found: {path}")
    records = _json_records(path) if _detect_format(path, fmt) == "json" else _csv_records(path)
    tracks: list[Track] = []
    seen: set[str] = set()
    rejected: list[CatalogError] = []
    for row, line, record in records:
        try:
            track = validate_row(record)
            if track.id in seen:
                raise DuplicateIdError(track.id)
        except CatalogError as exc:
            if not lenient:
                if isinstance(exc, DuplicateIdError):
                    raise
                raise ParseError(row, str(exc), line) from exc
            rejected.append(exc if isinstance(exc, DuplicateIdError) else ParseError(row, str(exc), line))
            continue
        seen.add(track.id)
        tracks.append(track)
    return LoadResult(Catalog(tracks), rejected)


def load_catalog(path: str | Path, fmt: str | None = None, *, lenient: bool = False) -> Catalog:
    return read_catalog(path, fmt, lenient=lenient).catalog


def write_catalog(catalog: Catalog, path: str | Path, fmt: str | None = None) -> None:
    path = Path(path)
    if _detect_format(path, fmt) == "json":
        rows = [t.to_row() for t in catalog]
        path.write_text(json.dumps(rows, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
        return
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=COLUMNS, lineterminator="\n")
        writer.writeheader()
        for track in catalog:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in track.to_row().items()})


def dedupe_key(track: Track) -> tuple[str, str]:
    return (track.artist.strip().casefold(), track.title.strip().casefold())


def dedupe(catalog: Catalog) -> Catalog:
    """Keep one track per (artist, title): the most popular, then the smallest id.

    Survivors stay in their original relative order.
    """
    best: dict[tuple[str, str], Track] = {}
    for track in catalog:
        key = dedupe_key(track)
        current = best.get(key)
        if current is None or (-track.popularity, track.id) < (-current.popularity, current.id):
            best[key] = track
    if len(best) == len(catalog):
        return catalog
    survivors = {t.id for t in best.values()}
    return Catalog(t for t in catalog if t.id in survivors)

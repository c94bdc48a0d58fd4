"""Labeled URL feeds and the canonical 23-column feature matrix."""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import FileUnreadable, NoUrlsFound, SchemaMismatch
from .urls import parse_url

FEATURE_SCHEMA_VERSION = 1

# Canonical feature order; serialized headers and model weights follow it.
FEATURE_NAMES = (
    "Have_At",
    "URL_Length",
    "URL_Depth",
    "Redirection",
    "https_Domain",
    "TinyURL",
    "Prefix/Suffix",
    "DNS_Record",
    "Web_Traffic",
    "Domain_Age",
    "Domain_End",
    "iFrame",
    "Mouse_Over",
    "Right_Click",
    "Web_Forwards",
    "having_ip",
    "SSL",
    "https_token",
    "sub_domain",
    "request_url",
    "url_anchor",
    "links",
    "email",
)

TERNARY_FEATURES = frozenset({"SSL", "sub_domain", "request_url", "url_anchor", "links"})
COUNT_FEATURES = frozenset({"URL_Depth"})


def feature_domain(name: str) -> tuple[int, ...] | None:
    """Legal values for a feature; None means any non-negative count."""
    if name in COUNT_FEATURES:
        return None
    if name in TERNARY_FEATURES:
        return (-1, 0, 1)
    return (0, 1)


@dataclass(frozen=True)
class LabeledUrl:
    url: str
    label: int  # 0 = legitimate, 1 = phishing
    source: str = ""


@dataclass(frozen=True)
class FeatureRow:
    url: str
    values: tuple[int, ...]  # 23 values in FEATURE_NAMES order
    label: int | None = None

    def value(self, name: str) -> int:
        return self.values[FEATURE_NAMES.index(name)]


def validate_values(values: tuple[int, ...]) -> None:
    """Raise SchemaMismatch unless the vector fits the canonical schema."""
    if len(values) != len(FEATURE_NAMES):
        raise SchemaMismatch(f"expected {len(FEATURE_NAMES)} features, got {len(values)}")
    for name, value in zip(FEATURE_NAMES, values):
        domain = feature_domain(name)
        if domain is None:
            if value < 0:
                raise SchemaMismatch(f"{name} must be a non-negative count, got {value}")
        elif value not in domain:
            raise SchemaMismatch(f"{name} value {value} outside domain {domain}")


# --- feed ingestion -----------------------------------------------------------

_URL_SHAPE_RE = re.compile(r"^(https?://\S+|[\w\-]+(\.[\w\-]+)+(/\S*)?)$")
_URL_HEADER_NAMES = {"url", "urls", "website", "site", "domain", "link"}


def _dedupe_key(url: str) -> str:
    try:
        p = parse_url(url)
    except Exception:
        return url.strip().lower()
    return "|".join((p.scheme, p.host, str(p.port), "/".join(p.path_segments), p.query))


def _urls_from_csv(rows: list[list[str]]) -> list[str]:
    header = [cell.strip().lower() for cell in rows[0]]
    col = next((i for i, cell in enumerate(header) if cell in _URL_HEADER_NAMES), None)
    start = 1
    if col is None:
        # no recognizable header: first URL-shaped column of the first row
        start = 0
        for i, cell in enumerate(rows[0]):
            if _URL_SHAPE_RE.match(cell.strip()):
                col = i
                break
        if col is None:
            return []
    urls = []
    for row in rows[start:]:
        if col < len(row) and row[col].strip():
            urls.append(row[col].strip())
    return urls


def ingest_feed(path: str | Path, label: int, limit: int | None = None,
                source: str | None = None) -> list[LabeledUrl]:
    """Read a URL feed (CSV or one-per-line text) into labeled entries.

    The URL column is auto-detected by header name or by shape. Entries
    are deduplicated with case-insensitive hosts, order preserved.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise FileUnreadable(f"cannot read feed {path}: {exc}") from exc

    stripped = [line for line in text.splitlines() if line.strip()]
    if not stripped:
        raise NoUrlsFound(f"feed {path} is empty")

    if any("," in line for line in stripped[:10]):
        rows = [row for row in csv.reader(stripped) if row]
        urls = _urls_from_csv(rows)
    else:
        urls = [line.strip() for line in stripped
                if not line.lstrip().startswith("#") and _URL_SHAPE_RE.match(line.strip())]

    seen: set[str] = set()
    out: list[LabeledUrl] = []
    src = source if source is not None else path.name
    for url in urls:
        key = _dedupe_key(url)
        if key in seen:
            continue
        seen.add(key)
        out.append(LabeledUrl(url=url, label=label, source=src))
        if limit is not None and len(out) >= limit:
            break
    if not out:
        raise NoUrlsFound(f"no URLs found in feed {path}")
    return out


# --- matrix persistence ---------------------------------------------------------

_MATRIX_HEADER = ("url",) + FEATURE_NAMES + ("label",)


def save_matrix(rows: list[FeatureRow], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_MATRIX_HEADER)
        for row in rows:
            label = "" if row.label is None else str(row.label)
            writer.writerow([row.url, *[str(v) for v in row.values], label])


def load_matrix(path: str | Path) -> list[FeatureRow]:
    """Load a matrix CSV; the header must match the canonical schema."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise SchemaMismatch(f"matrix {path} is empty") from None
            if tuple(header) != _MATRIX_HEADER:
                raise SchemaMismatch(
                    f"matrix {path} header does not match the canonical column order")
            out = []
            for line_no, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != len(_MATRIX_HEADER):
                    raise SchemaMismatch(f"matrix {path} line {line_no}: wrong column count")
                values = tuple(int(v) for v in row[1:-1])
                validate_values(values)
                label = int(row[-1]) if row[-1] != "" else None
                out.append(FeatureRow(url=row[0], values=values, label=label))
            return out
    except OSError as exc:
        raise FileUnreadable(f"cannot read matrix {path}: {exc}") from exc
    except ValueError as exc:
        raise SchemaMismatch(f"matrix {path}: {exc}") from exc

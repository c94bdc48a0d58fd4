"""Registry and traffic reputation: WHOIS ages and popularity rank.

Lookups go through pluggable providers so dataset extraction can run
offline against fixture files. Failed lookups fold into "not found"
records; the feature rules then take their phishing-direction branches.
"""

from __future__ import annotations

import csv
import json
import logging
import re
import socket
import threading
import time
from dataclasses import dataclass
from datetime import date, datetime
from pathlib import Path
from typing import Protocol

from . import config

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class WhoisRecord:
    domain: str
    found: bool
    creation_date: date | None = None
    expiration_date: date | None = None


@dataclass(frozen=True)
class RankRecord:
    domain: str
    rank: int | None = None  # absent = unranked


# --- WHOIS providers ----------------------------------------------------------

class WhoisProvider(Protocol):
    def fetch(self, domain: str) -> str:
        """Return the raw WHOIS response text; may raise on failure."""


class NetworkWhoisProvider:
    """Minimal WHOIS client over TCP/43 with one referral hop."""

    def __init__(self, server: str = "whois.iana.org", timeout: float = 10.0):
        self.server = server
        self.timeout = timeout

    def _query(self, server: str, domain: str) -> str:
        with socket.create_connection((server, 43), timeout=self.timeout) as sock:
            sock.sendall(domain.encode("ascii", "ignore") + b"\r\n")
            chunks = []
            while True:
                data = sock.recv(4096)
                if not data:
                    break
                chunks.append(data)
        return b"".join(chunks).decode("utf-8", errors="replace")

    def fetch(self, domain: str) -> str:
        text = self._query(self.server, domain)
        m = re.search(r"^\s*(?:refer|whois server|registrar whois server):\s*(\S+)\s*$",
                      text, re.IGNORECASE | re.MULTILINE)
        if m and m.group(1).lower() != self.server.lower():
            try:
                return self._query(m.group(1), domain)
            except OSError:
                return text
        return text


class FixtureWhoisProvider:
    """Reads <domain>.txt files from a directory; offline mode."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def fetch(self, domain: str) -> str:
        path = self.directory / f"{domain.lower()}.txt"
        return path.read_text(encoding="utf-8")


class StaticWhoisProvider:
    """In-memory mapping, for tests."""

    def __init__(self, responses: dict[str, str]):
        self.responses = responses

    def fetch(self, domain: str) -> str:
        return self.responses[domain]


# --- WHOIS parsing ------------------------------------------------------------

_CREATION_KEYS = (
    "creation date", "created on", "created", "registered on", "registered",
    "registration date", "domain registration date", "registration time",
)
_EXPIRY_KEYS = (
    "registry expiry date", "registrar registration expiration date",
    "expiration date", "expiry date", "expires on", "expires", "paid-till",
    "expiration time",
)
_NO_MATCH_MARKERS = (
    "no match", "not found", "no entries found", "no data found",
    "no object found", "the queried object does not exist",
)
_DATE_FORMATS = ("%d-%b-%Y", "%d.%m.%Y", "%Y.%m.%d", "%b %d %Y", "%d/%m/%Y")


def _parse_whois_date(text: str) -> date | None:
    text = text.strip().rstrip("Z").strip()
    if not text:
        return None
    try:
        return datetime.fromisoformat(text.replace("T", " ").split(" ")[0]).date()
    except ValueError:
        pass
    for fmt in _DATE_FORMATS:
        try:
            return datetime.strptime(text, fmt).date()
        except ValueError:
            continue
    return None


def _find_dated_line(text: str, keys: tuple[str, ...]) -> date | None:
    for line in text.splitlines():
        if ":" not in line:
            continue
        key, _, value = line.partition(":")
        key = key.strip().lower()
        for wanted in keys:
            if key == wanted:
                parsed = _parse_whois_date(value)
                if parsed:
                    return parsed
    return None


def parse_whois_response(domain: str, text: str) -> WhoisRecord:
    """Fold raw WHOIS text into a record; unparseable dates become absent."""
    lowered = text.lower()
    if not text.strip() or any(marker in lowered for marker in _NO_MATCH_MARKERS):
        return WhoisRecord(domain=domain, found=False)
    creation = _find_dated_line(text, _CREATION_KEYS)
    expiry = _find_dated_line(text, _EXPIRY_KEYS)
    has_identity = "domain name:" in lowered or creation or expiry
    if not has_identity:
        return WhoisRecord(domain=domain, found=False)
    if creation and expiry and creation > expiry:
        expiry = None  # inconsistent registry data; keep the invariant
    return WhoisRecord(domain=domain, found=True, creation_date=creation, expiration_date=expiry)


def lookup_whois(domain: str, provider: WhoisProvider,
                 cache: "DiskCache | None" = None) -> WhoisRecord:
    """Query (or replay) WHOIS for a registrable domain; never raises."""
    domain = domain.lower()
    if cache:
        cached = cache.get(domain)
        if cached is not None:
            return cached
    try:
        text = provider.fetch(domain)
        record = parse_whois_response(domain, text)
    except Exception as exc:
        log.warning("whois lookup failed for %s: %s", domain, exc)
        record = WhoisRecord(domain=domain, found=False)
    if cache:
        cache.put(domain, record)
    return record


# --- disk cache ---------------------------------------------------------------

class DiskCache:
    """One JSON file per domain with a TTL; writes are serialized."""

    def __init__(self, directory: str | Path, ttl_days: float = 7.0):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.ttl_seconds = ttl_days * 86400
        self._lock = threading.Lock()

    def _path(self, domain: str) -> Path:
        safe = re.sub(r"[^a-z0-9.\-_]", "_", domain.lower())
        return self.directory / f"{safe}.json"

    def get(self, domain: str) -> WhoisRecord | None:
        path = self._path(domain)
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError):
            return None
        if time.time() - payload["fetched_at"] > self.ttl_seconds:
            return None
        return WhoisRecord(
            domain=payload["domain"],
            found=payload["found"],
            creation_date=date.fromisoformat(payload["creation_date"]) if payload["creation_date"] else None,
            expiration_date=date.fromisoformat(payload["expiration_date"]) if payload["expiration_date"] else None,
        )

    def put(self, domain: str, record: WhoisRecord) -> None:
        payload = {
            "fetched_at": time.time(),
            "domain": record.domain,
            "found": record.found,
            "creation_date": record.creation_date.isoformat() if record.creation_date else None,
            "expiration_date": record.expiration_date.isoformat() if record.expiration_date else None,
        }
        path = self._path(domain)
        tmp = path.with_suffix(".tmp")
        with self._lock:
            tmp.write_text(json.dumps(payload), encoding="utf-8")
            tmp.replace(path)


# --- rank providers -----------------------------------------------------------

class RankProvider(Protocol):
    def rank(self, domain: str) -> int | None: ...


class NullRankProvider:
    """Always unranked; the no-data fallback."""

    def rank(self, domain: str) -> int | None:
        return None


class SnapshotRankProvider:
    """Rank lookup over a CSV snapshot ("rank,domain" or "domain,rank").

    Column layout is auto-detected from the header, or from which column
    is numeric when there is no header. The Majestic Million layout
    (GlobalRank,...,Domain,...) is recognized by its column names.
    """

    def __init__(self, path: str | Path):
        self.ranks: dict[str, int] = {}
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            rows = [row for row in reader if row and any(cell.strip() for cell in row)]
        if not rows:
            return
        rank_col, domain_col, start = self._detect(rows)
        for row in rows[start:]:
            if len(row) <= max(rank_col, domain_col):
                continue
            domain = row[domain_col].strip().lower()
            try:
                rank = int(row[rank_col].strip())
            except ValueError:
                continue
            if domain and rank >= 1:
                self.ranks.setdefault(domain, rank)

    @staticmethod
    def _detect(rows: list[list[str]]) -> tuple[int, int, int]:
        header = [cell.strip().lower() for cell in rows[0]]
        rank_names = {"rank", "globalrank"}
        domain_names = {"domain", "host", "site", "url"}
        rank_col = next((i for i, cell in enumerate(header) if cell in rank_names), None)
        domain_col = next((i for i, cell in enumerate(header) if cell in domain_names), None)
        if rank_col is not None and domain_col is not None:
            return rank_col, domain_col, 1
        # headerless: the numeric column is the rank
        first = rows[0]
        if len(first) >= 2 and first[0].strip().isdigit():
            return 0, 1, 0
        return 1, 0, 0

    def rank(self, domain: str) -> int | None:
        return self.ranks.get(domain.lower())


def lookup_rank(domain: str, provider: RankProvider) -> RankRecord:
    try:
        return RankRecord(domain=domain.lower(), rank=provider.rank(domain))
    except Exception as exc:
        log.warning("rank lookup failed for %s: %s", domain, exc)
        return RankRecord(domain=domain.lower(), rank=None)


# --- features -----------------------------------------------------------------

def feat_dns_record(w: WhoisRecord) -> int:
    """1 when the registry has no record of the domain."""
    return 0 if w.found else 1


def feat_domain_age(w: WhoisRecord, now: date) -> int:
    """1 when the domain is younger than 12 months (365 days) or undated."""
    if w.creation_date is None:
        return 1
    return 1 if (now - w.creation_date).days < config.DOMAIN_MIN_AGE_DAYS else 0


def feat_domain_end(w: WhoisRecord, now: date) -> int:
    """1 when registration ends within 6 months (183 days) or is undated."""
    if w.expiration_date is None:
        return 1
    return 1 if (w.expiration_date - now).days < config.DOMAIN_MIN_REMAINING_DAYS else 0


def feat_web_traffic(r: RankRecord, literal: bool = False) -> int:
    """0 for popular domains (rank <= 100000), 1 otherwise or unranked.

    literal=True flips the popularity inequality (rank < 100000 reads as
    phishing) for anyone reproducing the original comparison table.
    """
    if r.rank is None:
        return 1
    if literal:
        return 1 if r.rank < config.RANK_POPULAR_MAX else 0
    return 0 if r.rank <= config.RANK_POPULAR_MAX else 1

"""Full 23-feature extraction over online or replayed (offline) evidence."""

from __future__ import annotations

import logging
import threading
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from pathlib import Path

from . import content, lexical, reputation
from .content import PageSnapshot, SnapshotStore, census
from .dataset import FEATURE_NAMES, FeatureRow, LabeledUrl
from .fetch import FetchConfig, fetch_page
from .lexical import ShortenerList, default_shorteners
from .reputation import (
    DiskCache,
    FixtureWhoisProvider,
    NetworkWhoisProvider,
    NullRankProvider,
    RankProvider,
    SnapshotRankProvider,
    WhoisProvider,
    lookup_rank,
    lookup_whois,
)
from .urls import ParsedUrl, PublicSuffixList, default_psl, parse_url

log = logging.getLogger(__name__)

# Maximally phishing-direction vector, used when a URL cannot be parsed at
# all: binaries at 1, ternaries at 1, depth at 0.
_UNPARSEABLE_VALUES = tuple(0 if name == "URL_Depth" else 1 for name in FEATURE_NAMES)


@dataclass
class ExtractConfig:
    offline: bool = False
    evidence_dir: str | Path | None = None  # snapshot fixtures (offline)
    whois_dir: str | Path | None = None  # WHOIS fixtures (offline)
    rank_snapshot: str | Path | None = None
    shortener_file: str | Path | None = None
    psl_file: str | Path | None = None
    cache_dir: str | Path | None = None
    now: date | None = None  # pinned clock for age/expiry rules
    parallelism: int = 4
    fetch: FetchConfig = field(default_factory=FetchConfig)
    web_traffic_literal: bool = False


@dataclass
class ExtractReport:
    total: int = 0
    parse_failures: int = 0
    fetch_errors: Counter = field(default_factory=Counter)  # by error kind
    missing_snapshots: int = 0
    feature_folds: Counter = field(default_factory=Counter)  # by feature name

    def __post_init__(self):
        self._lock = threading.Lock()

    def note_parse_failure(self) -> None:
        with self._lock:
            self.parse_failures += 1

    def note_missing_snapshot(self) -> None:
        with self._lock:
            self.missing_snapshots += 1

    def note_fetch_error(self, kind: str) -> None:
        with self._lock:
            self.fetch_errors[kind] += 1

    def note_folds(self, names) -> None:
        with self._lock:
            for name in names:
                self.feature_folds[name] += 1

    def summary(self) -> str:
        errors = ",".join(f"{k}={v}" for k, v in sorted(self.fetch_errors.items())) or "none"
        folds = " ".join(f"{name}={self.feature_folds[name]}"
                         for name in FEATURE_NAMES if self.feature_folds[name])
        return (f"extracted {self.total} rows: parse_failures={self.parse_failures} "
                f"fetch_errors[{errors}] missing_snapshots={self.missing_snapshots} "
                f"folds[{folds or 'none'}]")


@dataclass
class ExtractResult:
    rows: list[FeatureRow]
    report: ExtractReport


class Extractor:
    """Resolves evidence providers once, then extracts rows one URL at a time."""

    def __init__(self, cfg: ExtractConfig):
        self.cfg = cfg
        self.psl: PublicSuffixList = (
            PublicSuffixList.from_file(cfg.psl_file) if cfg.psl_file else default_psl()
        )
        self.shorteners: ShortenerList = (
            ShortenerList.from_file(cfg.shortener_file) if cfg.shortener_file
            else default_shorteners()
        )
        self.snapshots: SnapshotStore | None = None
        if cfg.offline:
            if not cfg.evidence_dir:
                raise FileNotFoundError("offline extraction requires an evidence directory")
            self.snapshots = SnapshotStore(cfg.evidence_dir)
        self.whois_provider: WhoisProvider = (
            FixtureWhoisProvider(cfg.whois_dir) if cfg.whois_dir else NetworkWhoisProvider()
        )
        self.rank_provider: RankProvider = (
            SnapshotRankProvider(cfg.rank_snapshot) if cfg.rank_snapshot else NullRankProvider()
        )
        self.cache = DiskCache(cfg.cache_dir) if cfg.cache_dir else None
        self.now: date = cfg.now or datetime.now(timezone.utc).date()

    def _snapshot_for(self, url: str, report: ExtractReport) -> PageSnapshot:
        if self.snapshots is not None:
            snap = self.snapshots.get(url)
            if snap is None:
                report.note_missing_snapshot()
                snap = PageSnapshot(requested_url=url, final_url=url, fetch_error="dns_failure")
            return snap
        return fetch_page(url, self.cfg.fetch)

    def extract_row(self, url: str, label: int | None = None,
                    report: ExtractReport | None = None) -> FeatureRow:
        report = report if report is not None else ExtractReport()
        try:
            p = parse_url(url, self.psl)
        except Exception as exc:
            log.warning("unparseable url %s: %s", url, exc)
            report.note_parse_failure()
            return FeatureRow(url=url, values=_UNPARSEABLE_VALUES, label=label)

        snap = self._snapshot_for(url, report)
        folds = []
        if snap.fetch_error:
            report.note_fetch_error(snap.fetch_error)
            folds += ["iFrame", "Mouse_Over", "Right_Click", "Web_Forwards", "email"]
        cen = census(p, snap.body or "", self.psl)

        whois = lookup_whois(p.registrable_domain, self.whois_provider, self.cache)
        rank = lookup_rank(p.registrable_domain, self.rank_provider)
        if not whois.found:
            folds.append("DNS_Record")
        if whois.creation_date is None:
            folds.append("Domain_Age")
        if whois.expiration_date is None:
            folds.append("Domain_End")
        if rank.rank is None:
            folds.append("Web_Traffic")
        if p.scheme == "https" and snap.tls is None:
            folds.append("SSL")
        report.note_folds(folds)

        values = (
            lexical.feat_have_at(p),
            lexical.feat_url_length(p),
            lexical.feat_url_depth(p),
            lexical.feat_redirection(p),
            lexical.feat_https_domain(p),
            lexical.feat_tinyurl(p, self.shorteners),
            lexical.feat_prefix_suffix(p),
            reputation.feat_dns_record(whois),
            reputation.feat_web_traffic(rank, self.cfg.web_traffic_literal),
            reputation.feat_domain_age(whois, self.now),
            reputation.feat_domain_end(whois, self.now),
            content.feat_iframe(snap),
            content.feat_mouse_over(snap),
            content.feat_right_click(snap),
            content.feat_web_forwards(snap),
            lexical.feat_having_ip(p),
            content.feat_ssl(p, snap),
            lexical.feat_https_token(p),
            lexical.feat_sub_domain(p),
            content.feat_request_url(cen),
            content.feat_url_anchor(cen),
            content.feat_links(cen),
            content.feat_email(snap),
        )
        return FeatureRow(url=url, values=values, label=label)


def extract_all(items: list[LabeledUrl], cfg: ExtractConfig) -> ExtractResult:
    """Extract one FeatureRow per input; per-URL failures fold, never abort.

    Work fans out across cfg.parallelism threads; output order matches
    input order.
    """
    extractor = Extractor(cfg)
    report = ExtractReport(total=len(items))
    if not items:
        return ExtractResult(rows=[], report=report)

    def work(item: LabeledUrl) -> FeatureRow:
        return extractor.extract_row(item.url, item.label, report)

    if cfg.parallelism <= 1:
        rows = [work(item) for item in items]
    else:
        with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
            rows = list(pool.map(work, items))
    return ExtractResult(rows=rows, report=report)

"""Page-evidence features: iframe/script tricks, TLS facts, link census.

All feature functions here are pure over a PageSnapshot, so stored
snapshots replay deterministically. A failed fetch drives each feature to
its phishing-direction value (the "no response" fold); the three
percentage features run on an all-zero census instead, which lands them
on 0 by the zero-denominator rule.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from html.parser import HTMLParser
from pathlib import Path

from . import config
from .urls import ParsedUrl, PublicSuffixList, default_psl, parse_url

FETCH_ERRORS = ("timeout", "dns_failure", "connection_refused", "too_many_redirects", "non_html")


@dataclass(frozen=True)
class TlsFacts:
    issuer_organization: str
    issuer_trusted: bool
    not_before: date
    not_after: date
    certificate_age_days: int  # fetch time minus not_before, never negative


@dataclass
class PageSnapshot:
    requested_url: str
    redirect_chain: list[str] = field(default_factory=list)
    final_url: str = ""
    status: int | None = None
    body: str | None = None
    fetched_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))
    tls: TlsFacts | None = None
    fetch_error: str | None = None

    @property
    def failed(self) -> bool:
        return self.fetch_error is not None


@dataclass(frozen=True)
class LinkCensus:
    total_request_objects: int = 0
    external_request_objects: int = 0
    total_anchors: int = 0
    suspicious_anchors: int = 0
    total_msl_links: int = 0
    external_msl_links: int = 0


# --- snapshot fixture files -------------------------------------------------
#
# One file per snapshot: key:value header lines (redirect hops as repeated
# "redirect:" lines), then a blank line, then the raw body. A snapshot with
# no blank-line separator has no body (a failed fetch).

def save_snapshot(snap: PageSnapshot, path: str | Path) -> None:
    lines = [f"requested_url: {snap.requested_url}"]
    lines.append(f"final_url: {snap.final_url}")
    if snap.status is not None:
        lines.append(f"status: {snap.status}")
    for hop in snap.redirect_chain:
        lines.append(f"redirect: {hop}")
    lines.append(f"fetched_at: {snap.fetched_at.isoformat()}")
    if snap.fetch_error:
        lines.append(f"fetch_error: {snap.fetch_error}")
    if snap.tls:
        lines.append(f"tls_issuer_organization: {snap.tls.issuer_organization}")
        lines.append(f"tls_issuer_trusted: {'true' if snap.tls.issuer_trusted else 'false'}")
        lines.append(f"tls_not_before: {snap.tls.not_before.isoformat()}")
        lines.append(f"tls_not_after: {snap.tls.not_after.isoformat()}")
        lines.append(f"tls_certificate_age_days: {snap.tls.certificate_age_days}")
    text = "\n".join(lines) + "\n"
    if snap.body is not None:
        text += "\n" + snap.body
    Path(path).write_text(text, encoding="utf-8")


def load_snapshot(path: str | Path) -> PageSnapshot:
    raw = Path(path).read_text(encoding="utf-8")
    header, sep, body = raw.partition("\n\n")
    fields: dict[str, str] = {}
    chain: list[str] = []
    for line in header.splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if key == "redirect":
            chain.append(value)
        else:
            fields[key] = value

    tls = None
    if "tls_issuer_organization" in fields:
        tls = TlsFacts(
            issuer_organization=fields["tls_issuer_organization"],
            issuer_trusted=fields["tls_issuer_trusted"] == "true",
            not_before=date.fromisoformat(fields["tls_not_before"]),
            not_after=date.fromisoformat(fields["tls_not_after"]),
            certificate_age_days=int(fields["tls_certificate_age_days"]),
        )
    return PageSnapshot(
        requested_url=fields["requested_url"],
        redirect_chain=chain,
        final_url=fields.get("final_url", fields["requested_url"]),
        status=int(fields["status"]) if "status" in fields else None,
        body=body if sep else None,
        fetched_at=datetime.fromisoformat(fields["fetched_at"]),
        tls=tls,
        fetch_error=fields.get("fetch_error") or None,
    )


class SnapshotStore:
    """Directory of *.snap fixture files indexed by requested URL."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self._index: dict[str, Path] = {}
        for path in sorted(self.directory.glob("*.snap")):
            with open(path, encoding="utf-8") as fh:
                first = fh.readline().strip()
            if first.startswith("requested_url:"):
                self._index[first.split(":", 1)[1].strip()] = path

    def __len__(self) -> int:
        return len(self._index)

    def urls(self) -> list[str]:
        return sorted(self._index)

    def get(self, url: str) -> PageSnapshot | None:
        path = self._index.get(url)
        return load_snapshot(path) if path else None


# --- link census -------------------------------------------------------------

_REQUEST_TAGS = {"img", "video", "audio", "embed"}
_URL_IN_TEXT_RE = re.compile(r"https?://[^\s'\";>]+", re.IGNORECASE)


class _TagCollector(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.request_srcs: list[str | None] = []
        self.anchor_hrefs: list[str | None] = []
        self.msl_urls: list[str] = []

    def handle_starttag(self, tag, attrs):
        attrs = dict(attrs)
        if tag in _REQUEST_TAGS:
            self.request_srcs.append(attrs.get("src"))
        elif tag == "a":
            self.anchor_hrefs.append(attrs.get("href"))
        elif tag == "script":
            if attrs.get("src"):
                self.msl_urls.append(attrs["src"])
        elif tag == "link":
            if attrs.get("href"):
                self.msl_urls.append(attrs["href"])
        elif tag == "meta":
            content = attrs.get("content") or ""
            m = _URL_IN_TEXT_RE.search(content)
            if m:
                self.msl_urls.append(m.group(0))

    def handle_startendtag(self, tag, attrs):
        self.handle_starttag(tag, attrs)


def _registrable_of(url: str, psl: PublicSuffixList) -> str | None:
    try:
        return parse_url(url, psl).registrable_domain
    except Exception:
        return None


def _is_external(href: str, page_domain: str, psl: PublicSuffixList) -> bool:
    href = href.strip()
    if href.startswith("//"):
        href = "http:" + href
    if not re.match(r"^https?://", href, re.IGNORECASE):
        return False  # relative URLs and other schemes are not external
    domain = _registrable_of(href, psl)
    return domain is not None and domain != page_domain


def _is_suspicious_anchor(href: str | None, page_domain: str, psl: PublicSuffixList) -> bool:
    if href is None or href.strip() == "":
        return True
    href = href.strip()
    if href.startswith("#"):
        return True
    low = href.lower()
    if low.startswith("javascript:"):
        return True
    if href.startswith("//"):
        href = "http:" + href
        low = "http:" + low
    if re.match(r"^https?://", low):
        domain = _registrable_of(href, psl)
        return domain is None or domain != page_domain
    if ":" in href.split("/", 1)[0] and re.match(r"^[a-zA-Z][a-zA-Z0-9+.\-]*:", href):
        return True  # mailto:, tel:, data: point away from the page domain
    return False  # relative link within the page's own domain


def census(p: ParsedUrl, body: str, psl: PublicSuffixList | None = None) -> LinkCensus:
    """Count embedded objects, anchors and meta/script/link URLs in a body.

    Scanning is tolerant: malformed markup never raises, a URL is external
    iff its registrable domain differs from the page's, and relative URLs
    are internal.
    """
    psl = psl or default_psl()
    collector = _TagCollector()
    try:
        collector.feed(body)
        collector.close()
    except Exception:
        pass  # keep whatever was collected before the parser gave up

    page_domain = p.registrable_domain
    total_req = len(collector.request_srcs)
    ext_req = sum(
        1 for src in collector.request_srcs
        if src and _is_external(src, page_domain, psl)
    )
    total_anchor = len(collector.anchor_hrefs)
    sus_anchor = sum(
        1 for href in collector.anchor_hrefs
        if _is_suspicious_anchor(href, page_domain, psl)
    )
    total_msl = len(collector.msl_urls)
    ext_msl = sum(1 for url in collector.msl_urls if _is_external(url, page_domain, psl))
    return LinkCensus(
        total_request_objects=total_req,
        external_request_objects=ext_req,
        total_anchors=total_anchor,
        suspicious_anchors=sus_anchor,
        total_msl_links=total_msl,
        external_msl_links=ext_msl,
    )


# --- features ----------------------------------------------------------------

_MOUSE_OVER_RE = re.compile(r"onmouseover", re.IGNORECASE)
_WINDOW_STATUS_RE = re.compile(r"window\.status", re.IGNORECASE)
_RIGHT_CLICK_RE = re.compile(r"event\.button\s*==\s*2")
_IFRAME_RE = re.compile(r"<iframe|frameborder", re.IGNORECASE)
_EMAIL_RE = re.compile(r"mail\(|mailto:", re.IGNORECASE)


def feat_iframe(s: PageSnapshot) -> int:
    """1 when the fetch failed or the body carries an iframe/frameborder."""
    if s.failed or s.body is None:
        return 1
    return 1 if _IFRAME_RE.search(s.body) else 0


def feat_mouse_over(s: PageSnapshot) -> int:
    """1 when the fetch failed or an onmouseover handler touches window.status."""
    if s.failed or s.body is None:
        return 1
    return 1 if _MOUSE_OVER_RE.search(s.body) and _WINDOW_STATUS_RE.search(s.body) else 0


def feat_right_click(s: PageSnapshot) -> int:
    """1 when the fetch failed or the body tests event.button==2."""
    if s.failed or s.body is None:
        return 1
    return 1 if _RIGHT_CLICK_RE.search(s.body) else 0


def feat_web_forwards(s: PageSnapshot) -> int:
    """1 when the fetch failed or the URL was redirected more than 3 times."""
    if s.failed:
        return 1
    return 1 if len(s.redirect_chain) > config.REDIRECT_LIMIT else 0


def feat_ssl(p: ParsedUrl, s: PageSnapshot) -> int:
    """Trusted-and-aged https is 0, untrusted https is -1, everything else 1."""
    if p.scheme != "https" or s.tls is None:
        return 1
    if not s.tls.issuer_trusted:
        return -1
    return 0 if s.tls.certificate_age_days >= config.CERT_MIN_AGE_DAYS else 1


def _band(pct: float, bands: tuple[float, float]) -> int:
    low, high = bands
    if pct < low:
        return 0
    if pct <= high:
        return -1
    return 1


def _pct(part: int, total: int) -> float:
    return 100.0 * part / total if total else 0.0


def feat_request_url(c: LinkCensus) -> int:
    """Band of the external embedded-object percentage (22/61 cut points)."""
    return _band(_pct(c.external_request_objects, c.total_request_objects), config.REQUEST_URL_BANDS)


def feat_url_anchor(c: LinkCensus) -> int:
    """Band of the suspicious-anchor percentage (31/67 cut points)."""
    return _band(_pct(c.suspicious_anchors, c.total_anchors), config.URL_ANCHOR_BANDS)


def feat_links(c: LinkCensus) -> int:
    """Band of the external meta/script/link percentage (17/81 cut points)."""
    return _band(_pct(c.external_msl_links, c.total_msl_links), config.LINKS_BANDS)


def feat_email(s: PageSnapshot) -> int:
    """1 when the fetch failed or the body wires data to mail()/mailto:."""
    if s.failed or s.body is None:
        return 1
    return 1 if _EMAIL_RE.search(s.body) else 0

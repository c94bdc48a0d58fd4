"""Features computable from the URL string alone. No I/O happens here.

Value convention across the toolkit: 1 = phishing, 0 = legitimate,
-1 = suspicious. URL depth is the one count-valued feature.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from . import config
from .urls import ParsedUrl, strip_www


@dataclass(frozen=True)
class ShortenerList:
    """Registrable domains of known URL-shortening services."""

    domains: frozenset[str]

    @classmethod
    def from_lines(cls, lines) -> "ShortenerList":
        domains = set()
        for line in lines:
            line = line.strip().lower()
            if line and not line.startswith("#"):
                domains.add(line)
        if not domains:
            raise ValueError("shortener list is empty")
        return cls(frozenset(domains))

    @classmethod
    def from_file(cls, path: str | Path) -> "ShortenerList":
        with open(path, encoding="utf-8") as fh:
            return cls.from_lines(fh)


@lru_cache(maxsize=1)
def default_shorteners() -> ShortenerList:
    text = resources.files("phishlens.data").joinpath("shorteners.txt").read_text("utf-8")
    return ShortenerList.from_lines(text.splitlines())


def feat_have_at(p: ParsedUrl) -> int:
    """1 when "@" appears anywhere in the raw URL."""
    return 1 if "@" in p.raw else 0


def feat_url_length(p: ParsedUrl) -> int:
    """1 when the raw URL is 54 characters or longer."""
    return 1 if len(p.raw) >= config.URL_LENGTH_THRESHOLD else 0


def feat_url_depth(p: ParsedUrl) -> int:
    """Number of non-empty path segments."""
    return len(p.path_segments)


def feat_redirection(p: ParsedUrl) -> int:
    """1 when "//" appears past the scheme separator.

    The separator of "http://" ends at index 7, of "https://" at index 8,
    so any "//" starting beyond that index signals an embedded redirect.
    """
    threshold = 8 if p.scheme == "https" else 7
    return 1 if p.raw.rfind("//") > threshold else 0


def feat_https_domain(p: ParsedUrl) -> int:
    """1 when an "http"/"https" token appears inside the full host."""
    return 1 if "http" in p.host else 0


def feat_tinyurl(p: ParsedUrl, shorteners: ShortenerList | None = None) -> int:
    """1 when the registrable domain is a known shortening service."""
    shorteners = shorteners or default_shorteners()
    return 1 if p.registrable_domain in shorteners.domains else 0


def feat_prefix_suffix(p: ParsedUrl) -> int:
    """1 when the registrable domain contains a dash."""
    return 1 if "-" in p.registrable_domain else 0


def feat_having_ip(p: ParsedUrl) -> int:
    """1 when the host is an IP address instead of a domain name."""
    return 1 if p.is_ip_host else 0


def feat_https_token(p: ParsedUrl) -> int:
    """1 when an "http"/"https" token appears inside the subdomain."""
    return 1 if "http" in p.subdomain else 0


def feat_sub_domain(p: ParsedUrl) -> int:
    """Dot count of the host once a leading "www" label is dropped.

    One dot or fewer is legitimate (0), exactly two is suspicious (-1),
    three or more is phishing (1).
    """
    host = strip_www(p).host
    dots = host.count(".")
    if dots <= 1:
        return 0
    if dots == 2:
        return -1
    return 1

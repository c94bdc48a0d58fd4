"""URL decomposition: scheme, host, subdomain / registrable-domain split, path.

The subdomain vs registrable-domain boundary comes from a bundled public
suffix snapshot, so rules like "dash in the domain part" have a principled
notion of "domain part" even for multi-label suffixes (example.co.uk).
"""

from __future__ import annotations

import ipaddress
import re
from dataclasses import dataclass, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import EmptyInput, MalformedUrl

_SCHEME_RE = re.compile(r"^([a-zA-Z][a-zA-Z0-9+.\-]*)://")
# IDN labels pass through unconverted, so any word character is legal.
_HOST_LABEL_RE = re.compile(r"^[\w\-]+$", re.UNICODE)


class PublicSuffixList:
    """Longest-match lookup over a public-suffix snapshot.

    Supports plain rules, one-label wildcards (*.ck) and exceptions (!www.ck).
    Unknown TLDs fall back to the implicit "*" rule: the rightmost label is
    treated as the public suffix.
    """

    def __init__(self, rules: set[str], wildcards: set[str], exceptions: set[str]):
        self.rules = rules
        self.wildcards = wildcards  # stored without the leading "*."
        self.exceptions = exceptions

    @classmethod
    def from_lines(cls, lines) -> "PublicSuffixList":
        rules: set[str] = set()
        wildcards: set[str] = set()
        exceptions: set[str] = set()
        for line in lines:
            line = line.strip()
            if not line or line.startswith("//"):
                continue
            if line.startswith("!"):
                exceptions.add(line[1:])
            elif line.startswith("*."):
                wildcards.add(line[2:])
            else:
                rules.add(line)
        return cls(rules, wildcards, exceptions)

    @classmethod
    def from_file(cls, path: str | Path) -> "PublicSuffixList":
        with open(path, encoding="utf-8") as fh:
            return cls.from_lines(fh)

    def public_suffix(self, host: str) -> str:
        labels = host.split(".")
        # Exception rules win over everything: the suffix is the rule minus
        # its leftmost label.
        for i in range(len(labels)):
            candidate = ".".join(labels[i:])
            if candidate in self.exceptions:
                return ".".join(labels[i + 1:])
        best = labels[-1]  # implicit "*" rule
        for i in range(len(labels) - 1, -1, -1):
            candidate = ".".join(labels[i:])
            if candidate in self.rules and len(candidate) > len(best):
                best = candidate
            # "*.foo" makes "<anything>.foo" a public suffix
            if i > 0 and candidate in self.wildcards:
                wild = ".".join(labels[i - 1:])
                if len(wild) > len(best):
                    best = wild
        return best

    def split(self, host: str) -> tuple[str, str, str]:
        """Return (subdomain, registrable_domain, public_suffix) for a host.

        When the host itself is a public suffix there is no registrable
        domain one label deeper; the host is returned as its own
        registrable domain with an empty subdomain.
        """
        suffix = self.public_suffix(host)
        if host == suffix:
            return "", host, suffix
        prefix = host[: -(len(suffix) + 1)]
        prefix_labels = prefix.split(".")
        registrable = prefix_labels[-1] + "." + suffix
        subdomain = ".".join(prefix_labels[:-1])
        return subdomain, registrable, suffix


@lru_cache(maxsize=1)
def default_psl() -> PublicSuffixList:
    """The bundled public-suffix snapshot, loaded once."""
    text = resources.files("phishlens.data").joinpath("public_suffix_snapshot.dat").read_text("utf-8")
    return PublicSuffixList.from_lines(text.splitlines())


@dataclass(frozen=True)
class ParsedUrl:
    raw: str
    scheme: str  # "http", "https" or "other"
    host: str  # lowercased, no brackets
    is_ip_host: bool
    subdomain: str
    registrable_domain: str
    public_suffix: str
    path_segments: tuple[str, ...]
    query: str
    port: int | None


def _classify_scheme(scheme: str) -> str:
    if scheme in ("http", "https"):
        return scheme
    return "other"


def _check_host(host: str) -> None:
    if not host:
        raise MalformedUrl("empty host")
    for label in host.split("."):
        if not label:
            raise MalformedUrl(f"empty label in host {host!r}")
        if not _HOST_LABEL_RE.match(label):
            raise MalformedUrl(f"illegal characters in host {host!r}")


def parse_url(raw: str, psl: PublicSuffixList | None = None) -> ParsedUrl:
    """Decompose a raw URL string; scheme-less inputs are assumed http.

    The original string is preserved byte-exactly in ``raw``; the host is
    stored lowercased (host comparisons are case-insensitive).
    """
    if raw is None or raw.strip() == "":
        raise EmptyInput("URL string is empty")
    psl = psl or default_psl()

    m = _SCHEME_RE.match(raw)
    if m:
        scheme = _classify_scheme(m.group(1).lower())
        rest = raw[m.end():]
    else:
        scheme = "http"
        rest = raw

    # authority ends at the first /, ? or #
    authority = re.split(r"[/?#]", rest, maxsplit=1)[0]
    tail = rest[len(authority):]
    if "@" in authority:  # userinfo is dropped from the host
        authority = authority.rsplit("@", 1)[1]
    if not authority:
        raise MalformedUrl(f"no host in {raw!r}")

    port: int | None = None
    if authority.startswith("["):  # bracketed IPv6, optional :port
        end = authority.find("]")
        if end < 0:
            raise MalformedUrl(f"unclosed IPv6 bracket in {raw!r}")
        host = authority[1:end].lower()
        port_part = authority[end + 1:]
        if port_part:
            if not port_part.startswith(":"):
                raise MalformedUrl(f"junk after IPv6 host in {raw!r}")
            port = _parse_port(port_part[1:], raw)
        try:
            ip = ipaddress.ip_address(host)
        except ValueError as exc:
            raise MalformedUrl(f"invalid IPv6 host in {raw!r}") from exc
        if ip.version != 6:
            raise MalformedUrl(f"bracketed host is not IPv6 in {raw!r}")
        is_ip = True
    else:
        host = authority.lower()
        if ":" in host:
            host, port_str = host.rsplit(":", 1)
            port = _parse_port(port_str, raw)
        host = host.rstrip(".")
        is_ip = _is_ipv4(host)
        if not is_ip:
            _check_host(host)

    if is_ip:
        subdomain, registrable, suffix = "", host, ""
    else:
        subdomain, registrable, suffix = psl.split(host)

    path, _, frag_or_query = tail.partition("?")
    if "#" in path:
        path = path.partition("#")[0]
        query = ""
    else:
        query = frag_or_query.partition("#")[0]
    segments = tuple(s for s in path.split("/") if s)

    return ParsedUrl(
        raw=raw,
        scheme=scheme,
        host=host,
        is_ip_host=is_ip,
        subdomain=subdomain,
        registrable_domain=registrable,
        public_suffix=suffix,
        path_segments=segments,
        query=query,
        port=port,
    )


def _parse_port(text: str, raw: str) -> int:
    if not text.isdigit():
        raise MalformedUrl(f"invalid port in {raw!r}")
    port = int(text)
    if not 0 < port < 65536:
        raise MalformedUrl(f"port out of range in {raw!r}")
    return port


def _is_ipv4(host: str) -> bool:
    parts = host.split(".")
    if len(parts) != 4:
        return False
    try:
        return ipaddress.ip_address(host).version == 4
    except ValueError:
        return False


def strip_www(p: ParsedUrl) -> ParsedUrl:
    """Drop a leading exact "www" label from the subdomain; idempotent."""
    labels = p.subdomain.split(".") if p.subdomain else []
    if labels and labels[0] == "www":
        new_sub = ".".join(labels[1:])
        new_host = new_sub + "." + p.registrable_domain if new_sub else p.registrable_domain
        return replace(p, subdomain=new_sub, host=new_host)
    return p

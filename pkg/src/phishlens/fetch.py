"""Live page fetching with manual redirect following and TLS inspection.

fetch_page never raises: every failure mode is folded into the snapshot's
fetch_error so the downstream feature rules can apply their no-response
branches.
"""

from __future__ import annotations

import http.client
import socket
import ssl
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from urllib.parse import urljoin, urlsplit

from cryptography import x509

from .content import PageSnapshot, TlsFacts

DEFAULT_USER_AGENT = "phishlens/0.1 (feature extraction)"
HTML_TYPES = ("text/html", "application/xhtml+xml")


@dataclass
class FetchConfig:
    timeout: float = 10.0
    max_redirects: int = 10
    user_agent: str = DEFAULT_USER_AGENT
    body_cap: int = 2 * 1024 * 1024
    ca_file: str | Path | None = None  # override root store (None = system roots)


def _classify_error(exc: BaseException) -> str:
    seen = set()
    cur: BaseException | None = exc
    while cur is not None and id(cur) not in seen:
        seen.add(id(cur))
        if isinstance(cur, socket.gaierror):
            return "dns_failure"
        if isinstance(cur, ConnectionRefusedError):
            return "connection_refused"
        if isinstance(cur, (socket.timeout, TimeoutError)):
            return "timeout"
        cur = cur.__cause__ or cur.__context__
    return "connection_refused"


def _tls_facts(host: str, port: int, cfg: FetchConfig, now: datetime) -> TlsFacts | None:
    """Inspect the server certificate; a failed verification is evidence
    (untrusted issuer), not an error."""
    trusted = True
    der = None
    try:
        ctx = ssl.create_default_context(cafile=str(cfg.ca_file) if cfg.ca_file else None)
        with socket.create_connection((host, port), timeout=cfg.timeout) as sock:
            with ctx.wrap_socket(sock, server_hostname=host) as tls_sock:
                der = tls_sock.getpeercert(binary_form=True)
    except ssl.SSLCertVerificationError:
        trusted = False
        try:
            ctx = ssl._create_unverified_context()
            with socket.create_connection((host, port), timeout=cfg.timeout) as sock:
                with ctx.wrap_socket(sock, server_hostname=host) as tls_sock:
                    der = tls_sock.getpeercert(binary_form=True)
        except Exception:
            return None
    except Exception:
        return None
    if not der:
        return None

    cert = x509.load_der_x509_certificate(der)
    org = ""
    for oid in (x509.NameOID.ORGANIZATION_NAME, x509.NameOID.COMMON_NAME):
        attrs = cert.issuer.get_attributes_for_oid(oid)
        if attrs:
            org = str(attrs[0].value)
            break
    not_before = cert.not_valid_before_utc if hasattr(cert, "not_valid_before_utc") else cert.not_valid_before.replace(tzinfo=timezone.utc)
    not_after = cert.not_valid_after_utc if hasattr(cert, "not_valid_after_utc") else cert.not_valid_after.replace(tzinfo=timezone.utc)
    age = max(0, (now - not_before).days)
    return TlsFacts(
        issuer_organization=org,
        issuer_trusted=trusted,
        not_before=not_before.date(),
        not_after=not_after.date(),
        certificate_age_days=age,
    )


def _request_once(url: str, cfg: FetchConfig) -> tuple[int, dict[str, str], bytes]:
    parts = urlsplit(url)
    host = parts.hostname or ""
    if parts.scheme == "https":
        port = parts.port or 443
        try:
            ctx = ssl.create_default_context(cafile=str(cfg.ca_file) if cfg.ca_file else None)
            conn = http.client.HTTPSConnection(host, port, timeout=cfg.timeout, context=ctx)
            conn.connect()
        except ssl.SSLCertVerificationError:
            # untrusted cert: still fetch the page for content evidence
            ctx = ssl._create_unverified_context()
            conn = http.client.HTTPSConnection(host, port, timeout=cfg.timeout, context=ctx)
    else:
        port = parts.port or 80
        conn = http.client.HTTPConnection(host, port, timeout=cfg.timeout)
    try:
        path = parts.path or "/"
        if parts.query:
            path += "?" + parts.query
        conn.request("GET", path, headers={"User-Agent": cfg.user_agent, "Accept": "*/*"})
        resp = conn.getresponse()
        headers = {k.lower(): v for k, v in resp.getheaders()}
        body = resp.read(cfg.body_cap)
        return resp.status, headers, body
    finally:
        conn.close()


def fetch_page(url: str, cfg: FetchConfig | None = None) -> PageSnapshot:
    """Follow redirects, capture the final body and (for https) TLS facts."""
    cfg = cfg or FetchConfig()
    now = datetime.now(timezone.utc)
    snap = PageSnapshot(requested_url=url, final_url=url, fetched_at=now)

    if urlsplit(url).scheme == "https":
        parts = urlsplit(url)
        snap.tls = _tls_facts(parts.hostname or "", parts.port or 443, cfg, now)

    current = url
    for _ in range(cfg.max_redirects + 1):
        try:
            status, headers, raw = _request_once(current, cfg)
        except Exception as exc:
            snap.fetch_error = _classify_error(exc)
            snap.final_url = current
            return snap
        location = headers.get("location")
        if status in (301, 302, 303, 307, 308) and location:
            snap.redirect_chain.append(current)
            current = urljoin(current, location)
            continue
        snap.final_url = current
        snap.status = status
        ctype = headers.get("content-type", "").lower()
        if ctype and not any(t in ctype for t in HTML_TYPES):
            snap.fetch_error = "non_html"
            return snap
        charset = "utf-8"
        if "charset=" in ctype:
            charset = ctype.split("charset=")[-1].split(";")[0].strip() or "utf-8"
        try:
            snap.body = raw.decode(charset, errors="replace")
        except LookupError:
            snap.body = raw.decode("utf-8", errors="replace")
        return snap

    snap.fetch_error = "too_many_redirects"
    snap.final_url = current
    return snap

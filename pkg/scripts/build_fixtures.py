#!/usr/bin/env python3
"""Build the offline fixture corpus under fixtures/.

Writes snapshot files, WHOIS fixture texts, the rank snapshot CSV, the
labeled corpus list and the ingest sample feeds. Everything is pinned to a
fixed clock (2025-06-01) so replays are stable.

The golden matrix (fixtures/golden_matrix.csv) is NOT written here: its
values are derived by hand from the feature rules and kept independent of
this script and of the extractor.
"""

from __future__ import annotations

import csv
import sys
from datetime import date, datetime, timedelta, timezone
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from phishlens.content import PageSnapshot, TlsFacts, save_snapshot  # noqa: E402

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
FETCHED_AT = datetime(2025, 6, 1, 0, 0, 0, tzinfo=timezone.utc)
TODAY = FETCHED_AT.date()


# --- body builders -------------------------------------------------------------

def imgs(internal: int, external: int, ext_domain: str = "cdnfarm-assets.com") -> str:
    out = [f'<img src="/assets/i{k}.png" alt="">' for k in range(internal)]
    out += [f'<img src="https://s{k}.{ext_domain}/pic{k}.png" alt="">' for k in range(external)]
    return "\n".join(out)


def anchors(hrefs: list[str]) -> str:
    return "\n".join(f'<a href="{h}">link</a>' if h is not None else "<a>bare</a>"
                     for h in hrefs)


def msl(internal_scripts: int, internal_links: int, external: int,
        ext_domain: str = "widgets-bay.net") -> str:
    out = [f'<script src="/js/s{k}.js"></script>' for k in range(internal_scripts)]
    out += [f'<link rel="stylesheet" href="/css/c{k}.css">' for k in range(internal_links)]
    out += [f'<script src="https://a{k}.{ext_domain}/w{k}.js"></script>' for k in range(external)]
    return "\n".join(out)


IFRAME = '<iframe src="https://frames-depot.net/f" frameborder="0" width="0" height="0"></iframe>'
MOUSE = '<div onmouseover="window.status=\'https://www.trusted-bank.com\';return true;">offer</div>'
RIGHT = "<script>document.oncontextmenu=function(event){if(event.button==2){return false;}};</script>"
MAILER = "<script>function submitLead(){ mail($to, $subject, $body); }</script>"


def page(title: str, *parts: str) -> str:
    body = "\n".join(p for p in parts if p)
    return f"<html><head><title>{title}</title></head><body>\n{body}\n</body></html>"


def clean_body(host: str) -> str:
    return page(
        "Welcome",
        '<meta property="og:image" content="https://%s/og.png">' % host,
        msl(2, 3, 0),
        imgs(4, 1),
        anchors(["/about", "/contact", f"https://{host}/products", "/news", "/login"]),
    )


def heavy_body() -> str:
    # all four script tricks plus fully foreign censuses
    return page(
        "Account Verification",
        IFRAME, MOUSE, RIGHT, MAILER,
        imgs(1, 9, "stealkit-cdn.net"),
        anchors(["#", "javascript:void(0)", "https://other-brand.com/x", "/local"]),
        msl(1, 0, 9, "kit-scripts.com"),
    )


# --- TLS presets ----------------------------------------------------------------

def tls(issuer: str, trusted: bool, age_days: int) -> TlsFacts:
    not_before = TODAY - timedelta(days=age_days)
    return TlsFacts(
        issuer_organization=issuer,
        issuer_trusted=trusted,
        not_before=not_before,
        not_after=TODAY + timedelta(days=400),
        certificate_age_days=age_days,
    )


TRUSTED_OLD = ("DigiCert Inc", True, 517)
TRUSTED_YOUNG = ("Let's Encrypt", True, 61)
UNTRUSTED = ("Self-Signed Web Services", False, 200)
TRUSTED_365 = ("GlobalSign", True, 365)
TRUSTED_364 = ("GlobalSign", True, 364)


# --- WHOIS presets ---------------------------------------------------------------

def whois_good(domain: str, created="2004-01-15", expires="2031-01-15") -> str:
    return (f"Domain Name: {domain.upper()}\n"
            f"Creation Date: {created}T10:22:00Z\n"
            f"Registry Expiry Date: {expires}T10:22:00Z\n"
            f"Registrar: Fixture Registrar LLC\n"
            f"Name Server: NS1.FIXTUREDNS.NET\n")


def whois_uk(domain: str) -> str:
    return (f"    Domain name:\n        {domain}\n\n"
            f"    Registered on: 15-Mar-2005\n"
            f"    Expiry date: 20-Mar-2031\n"
            f"    Registrar: Fixture Networks Ltd\n")


def whois_de(domain: str) -> str:
    return (f"domain name: {domain}\n"
            f"created: 2009-06-20\n"
            f"expires: 2030-06-20\n"
            f"status: connect\n")


def whois_alt(domain: str) -> str:
    return (f"domain name: {domain}\n"
            f"created: 01-Jan-2012\n"
            f"paid-till: 2030-06-01\n")


def whois_dates(domain: str, created: str | None, expires: str | None) -> str:
    lines = [f"Domain Name: {domain.upper()}"]
    if created:
        lines.append(f"Creation Date: {created}T00:00:00Z")
    if expires:
        lines.append(f"Registry Expiry Date: {expires}T00:00:00Z")
    lines.append("Registrar: Fixture Registrar LLC")
    return "\n".join(lines) + "\n"


WHOIS_NOMATCH_VARIANTS = [
    'No match for domain "{domain}".\n>>> Last update of whois database: 2025-06-01T00:00:00Z <<<\n',
    "NOT FOUND\n",
    "No entries found for the selected source(s).\n",
]


# --- the corpus -------------------------------------------------------------------
# (url, label, body|None, redirects, status, tls, fetch_error)

def build_corpus() -> list[dict]:
    rows: list[dict] = []

    def add(url, label, body=None, redirects=(), status=200, tls_preset=None,
            fetch_error=None, final=None):
        rows.append(dict(url=url, label=label, body=body, redirects=list(redirects),
                         status=status, tls_preset=tls_preset,
                         fetch_error=fetch_error, final=final or url))

    # --- legitimate rows
    add("https://acmebank.com/", 0, clean_body("acmebank.com"), tls_preset=TRUSTED_OLD)
    add("https://www.greenfield.org/about", 0, clean_body("www.greenfield.org"), tls_preset=TRUSTED_OLD)
    add("https://mail.nortonpark.co.uk/inbox/main", 0, clean_body("mail.nortonpark.co.uk"), tls_preset=TRUSTED_OLD)
    add("https://shop.balticbooks.de/catalog", 0, clean_body("shop.balticbooks.de"), tls_preset=TRUSTED_OLD)
    add("http://plainsite.net/", 0, clean_body("plainsite.net"))
    add("https://archive-hub.org/a/b/c/d/e", 0, clean_body("archive-hub.org"), tls_preset=TRUSTED_OLD)
    add("https://quietgarden.com/path?q=1", 0,
        page("Garden",
             msl(2, 3, 0),
             '<meta property="og:image" content="https://quietgarden.com/og.png">',
             imgs(6, 4),
             anchors(["/about", "/contact", "https://quietgarden.com/products", "/news", "/login"])),
        tls_preset=TRUSTED_OLD)

    url53 = "https://www.rivertrail.com/docs/archive/2024/repo.htm"
    assert len(url53) == 53, len(url53)
    add(url53, 0, clean_body("www.rivertrail.com"), tls_preset=TRUSTED_OLD)

    url54 = "https://www.lakefield.org/annual/reports/2024/pg5.html"
    assert len(url54) == 54, len(url54)
    add(url54, 0, clean_body("www.lakefield.org"), tls_preset=TRUSTED_OLD)

    add("https://govopendata.gov/datasets", 0,
        page("Data", msl(2, 2, 0), imgs(3, 0), anchors(["/data", "#"])),
        tls_preset=TRUSTED_OLD)
    add("https://unrankedpress.org/", 0, clean_body("unrankedpress.org"), tls_preset=TRUSTED_OLD)
    add("https://freshstartup.io/", 0, clean_body("freshstartup.io"), tls_preset=TRUSTED_YOUNG)
    add("https://www.bluemuseum.org/visit", 0, clean_body("www.bluemuseum.org"), tls_preset=TRUSTED_OLD)
    add("https://docs.polarlibrary.edu/guides", 0, clean_body("docs.polarlibrary.edu"), tls_preset=TRUSTED_OLD)
    add("https://heritagefund.net/grants", 0,
        page("Grants", msl(1, 2, 3), imgs(2, 0), anchors(["/apply", "/faq", "/news"])),
        tls_preset=TRUSTED_OLD)
    add("https://galleryfifty.com/collection", 0,
        page("Gallery", msl(2, 3, 0), imgs(39, 11, "artmirror.net"),
             anchors(["/hours", "/tickets", "/shop", "/visit"])),
        tls_preset=TRUSTED_OLD)
    add("https://openatlas.org/maps", 0,
        page("Atlas", msl(2, 2, 0), imgs(4, 0),
             anchors([f"/maps/m{k}" for k in range(69)] + [f"#layer{k}" for k in range(31)])),
        tls_preset=TRUSTED_OLD)
    add("https://chamberorchestra.com/season", 0,
        page("Season", msl(42, 41, 17, "mapsource-cdn.com"), imgs(3, 0),
             anchors(["/season", "/tickets", "/about"])),
        tls_preset=TRUSTED_OLD)
    add("https://oldredirect.net/start", 0, clean_body("oldredirect.net"),
        redirects=["https://oldredirect.net/start"], final="https://oldredirect.net/home",
        tls_preset=TRUSTED_OLD)
    add("http://tripleredir.org/go", 0, clean_body("tripleredir.org"),
        redirects=["http://tripleredir.org/go", "http://tripleredir.org/hop1",
                   "http://tripleredir.org/hop2"],
        final="http://tripleredir.org/landing")
    add("https://certbridge.org/renew", 0, clean_body("certbridge.org"), tls_preset=TRUSTED_365)

    # --- phishing rows
    add("http://evil.com@paypal-login.com/signin", 1, heavy_body())
    add("http://115.102.3.123/home.html", 1, heavy_body())

    url54p = "https://secure-update-account.com/login/verify/now/x/y"
    assert len(url54p) == 54, len(url54p)
    add(url54p, 1,
        page("Verify", MOUSE, imgs(3, 7, "kit-mirrors.net"), anchors(["#", "/ok"]),
             msl(3, 0, 17, "kit-scripts.com")),
        tls_preset=UNTRUSTED)

    add("http://bit.ly/3xYz", 1, fetch_error="timeout", status=None)
    add("https://tinyurl.com/abc", 1, fetch_error="dns_failure", status=None)
    add("http://login.http.grab-deals.net/account", 1,
        page("Deals", IFRAME, MAILER, imgs(39, 61, "bulkhost-cdn.com"),
             anchors([f"/p{k}" for k in range(33)] + [f"#s{k}" for k in range(67)]),
             msl(10, 9, 81, "traffic-kit.net")))
    add("http://malvertise.biz//http://trap-site.net", 1,
        page("Ads", IFRAME, MAILER, imgs(0, 2, "adnet-zzz.com"), msl(0, 0, 1, "popfarm.net")))
    add("https://www.appleid-verify.co.uk/session", 1,
        page("Session", RIGHT,
             anchors(["#", "javascript:void(0)", "https://brand-spoof.com/l", "#go"]),
             msl(1, 1, 2, "form-hosts.net")),
        tls_preset=UNTRUSTED)
    add("http://hopstart.info", 1,
        page("Start", MAILER, imgs(2, 0), anchors(["/next"]), msl(1, 1, 0)),
        redirects=["http://hopstart.info", "http://hopstart.info/r1",
                   "http://hopstart.info/r2", "http://hopstart.info/r3"],
        final="http://hopstart.info/landing")
    add("http://wwwx.fakemall.com/shop", 1,
        page("Shop", MOUSE, MAILER, imgs(0, 3, "dropzone-img.net"), anchors(["/cart", "/deals"])))
    add("https://https-wallet-access.com/", 1,
        page("Wallet", anchors(["mailto:claims@wincentre-fixture.net", "/faq", "#top"])),
        tls_preset=TRUSTED_YOUNG)
    add("http://secure-billing-alerts.com/account/verify", 1,
        page("Billing", IFRAME, MAILER, imgs(1, 5, "alert-assets.net"),
             anchors(["/a", "/b", "/c", "/d", "/e", "#"]),
             msl(1, 1, 3, "billing-kit.com")))
    add("https://slowhost-link.net/dl", 1, fetch_error="connection_refused", status=None)
    add("http://187.110.22.9:8080/login", 1, heavy_body())
    add("http://[2001:db8::1]/x", 1, page("X", IFRAME, imgs(1, 0)))
    add("http://cheap-meds.ru//deal", 1,
        page("Deal", MOUSE, imgs(1, 9, "pill-imgs.net"), anchors(["/d1", "/d2", "/d3"]),
             msl(1, 0, 1, "med-scripts.net")))
    add("https://account.login.safebank.com.evilhost.org/auth", 1,
        page("Auth", IFRAME, MOUSE, MAILER, imgs(6, 4, "harvest-cdn.net"),
             anchors(["/in", "/help"] + ["#k%d" % k for k in range(6)]),
             msl(1, 0, 9, "drop-scripts.com")),
        tls_preset=UNTRUSTED)
    add("http://downloadz.club/file.exe", 1, fetch_error="non_html", status=200)
    add("http://loopy-hops.net/", 1, fetch_error="too_many_redirects", status=None,
        redirects=["http://loopy-hops.net/"] + [f"http://loopy-hops.net/r{k}" for k in range(10)])
    add("http://freeprizes.xyz/claim?code=9@9", 1,
        page("Prize", MAILER, imgs(0, 2, "prize-pics.net"), anchors(["#"])))
    add("https://renewd-cert.info/pay", 1,
        page("Pay", IFRAME, MAILER, anchors(["#", "https://prizes-external.com/go"]),
             msl(0, 0, 2, "checkout-kit.net")),
        tls_preset=TRUSTED_364)
    add("http://xhttpx.promo-deals.net/win", 1,
        page("Win", MOUSE, RIGHT, imgs(2, 8, "spin-cdn.net"),
             anchors(["/w", "#a", "#b", "#c"]), msl(1, 1, 4, "promo-scripts.com")))

    return rows


WHOIS_FILES = {
    # legitimate domains: old registrations, far expiries
    "acmebank.com": whois_good("acmebank.com"),
    "greenfield.org": whois_good("greenfield.org", "2006-02-01", "2030-02-01"),
    "nortonpark.co.uk": whois_uk("nortonpark.co.uk"),
    "balticbooks.de": whois_de("balticbooks.de"),
    "plainsite.net": whois_good("plainsite.net", "2011-09-12", "2032-09-12"),
    "archive-hub.org": whois_good("archive-hub.org", "2008-03-30", "2030-03-30"),
    "quietgarden.com": whois_good("quietgarden.com", "2013-07-07", "2031-07-07"),
    "rivertrail.com": whois_good("rivertrail.com", "2005-11-20", "2030-11-20"),
    "lakefield.org": whois_good("lakefield.org", "2007-04-18", "2031-04-18"),
    "govopendata.gov": whois_good("govopendata.gov", "2010-01-01", "2030-01-01"),
    "unrankedpress.org": whois_good("unrankedpress.org", "2016-10-02", "2030-10-02"),
    "freshstartup.io": whois_dates("freshstartup.io", "2025-04-15", "2026-09-01"),
    "bluemuseum.org": whois_good("bluemuseum.org", "2003-05-25", "2031-05-25"),
    "polarlibrary.edu": whois_good("polarlibrary.edu", "2001-08-14", "2030-08-14"),
    "heritagefund.net": whois_good("heritagefund.net", "2009-12-01", "2032-12-01"),
    "galleryfifty.com": whois_good("galleryfifty.com", "2012-06-15", "2030-06-15"),
    "openatlas.org": whois_good("openatlas.org", "2014-09-09", "2031-09-09"),
    "chamberorchestra.com": whois_good("chamberorchestra.com", "2002-03-03", "2030-03-03"),
    "oldredirect.net": whois_good("oldredirect.net", "2010-10-10", "2030-10-10"),
    "tripleredir.org": whois_alt("tripleredir.org"),
    "certbridge.org": whois_good("certbridge.org", "2015-01-28", "2031-01-28"),
    # phishing domains
    "paypal-login.com": WHOIS_NOMATCH_VARIANTS[0].format(domain="paypal-login.com"),
    "115.102.3.123": WHOIS_NOMATCH_VARIANTS[1],
    "secure-update-account.com": whois_dates("secure-update-account.com", "2025-03-01", "2025-07-15"),
    "bit.ly": WHOIS_NOMATCH_VARIANTS[2],
    "tinyurl.com": "Domain Name: TINYURL.COM\nRegistrar: Fixture Registrar LLC\nName Server: NS1.FIXTUREDNS.NET\n",
    "grab-deals.net": WHOIS_NOMATCH_VARIANTS[0].format(domain="grab-deals.net"),
    "malvertise.biz": WHOIS_NOMATCH_VARIANTS[1],
    "appleid-verify.co.uk": whois_dates("appleid-verify.co.uk", "2025-03-01", "2025-07-15"),
    "hopstart.info": WHOIS_NOMATCH_VARIANTS[2],
    "fakemall.com": whois_dates("fakemall.com", "2025-03-01", "2025-07-15"),
    "https-wallet-access.com": whois_dates("https-wallet-access.com", "2025-04-15", "2025-11-15"),
    "secure-billing-alerts.com": whois_dates("secure-billing-alerts.com", "2015-02-10", "2025-07-01"),
    "slowhost-link.net": WHOIS_NOMATCH_VARIANTS[0].format(domain="slowhost-link.net"),
    "187.110.22.9": WHOIS_NOMATCH_VARIANTS[1],
    "2001:db8::1": WHOIS_NOMATCH_VARIANTS[1],
    "cheap-meds.ru": whois_dates("cheap-meds.ru", "2018-05-05", "2025-05-01"),
    "evilhost.org": whois_dates("evilhost.org", "2025-03-01", "2025-07-15"),
    "downloadz.club": WHOIS_NOMATCH_VARIANTS[2],
    "loopy-hops.net": WHOIS_NOMATCH_VARIANTS[0].format(domain="loopy-hops.net"),
    "freeprizes.xyz": WHOIS_NOMATCH_VARIANTS[1],
    "renewd-cert.info": whois_dates("renewd-cert.info", "2025-04-15", "2026-09-01"),
    "promo-deals.net": WHOIS_NOMATCH_VARIANTS[2],
}

RANKS = [
    (42, "acmebank.com"), (1500, "greenfield.org"), (2000, "nortonpark.co.uk"),
    (80000, "balticbooks.de"), (100000, "plainsite.net"), (300, "archive-hub.org"),
    (12, "quietgarden.com"), (700, "rivertrail.com"), (900, "lakefield.org"),
    (50, "govopendata.gov"), (9000, "freshstartup.io"), (3000, "bluemuseum.org"),
    (42000, "polarlibrary.edu"), (8, "heritagefund.net"), (900, "galleryfifty.com"),
    (1300, "openatlas.org"), (15000, "chamberorchestra.com"), (60000, "oldredirect.net"),
    (70000, "tripleredir.org"), (21000, "certbridge.org"),
    (5000000, "tinyurl.com"), (5000000, "secure-update-account.com"), (4000000, "fakemall.com"),
]


def main() -> None:
    corpus = build_corpus()

    snap_dir = FIXTURES / "snapshots"
    whois_dir = FIXTURES / "whois"
    feeds_dir = FIXTURES / "feeds"
    for d in (snap_dir, whois_dir, feeds_dir):
        d.mkdir(parents=True, exist_ok=True)

    import hashlib

    for row in corpus:
        preset = row["tls_preset"]
        snap = PageSnapshot(
            requested_url=row["url"],
            redirect_chain=row["redirects"],
            final_url=row["final"],
            status=row["status"] if not row["fetch_error"] or row["fetch_error"] == "non_html" else None,
            body=row["body"],
            fetched_at=FETCHED_AT,
            tls=tls(*preset) if preset else None,
            fetch_error=row["fetch_error"],
        )
        name = hashlib.sha256(row["url"].encode()).hexdigest()[:16] + ".snap"
        save_snapshot(snap, snap_dir / name)

    for domain, text in WHOIS_FILES.items():
        (whois_dir / f"{domain}.txt").write_text(text, encoding="utf-8")

    with open(FIXTURES / "rank.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["rank", "domain"])
        writer.writerows(RANKS)

    with open(FIXTURES / "corpus.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["url", "label", "source"])
        for row in corpus:
            writer.writerow([row["url"], row["label"], "fixture"])

    # ingest samples: a Majestic-shaped feed and a PhishTank-shaped feed
    with open(feeds_dir / "majestic_sample.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["GlobalRank", "TldRank", "Domain", "TLD", "RefSubNets", "RefIPs",
                         "IDN_Domain", "IDN_TLD", "PrevGlobalRank", "PrevTldRank",
                         "PrevRefSubNets", "PrevRefIPs"])
        for i, (rank, domain) in enumerate(RANKS[:12], start=1):
            tld = domain.rsplit(".", 1)[-1]
            writer.writerow([rank, i, domain, tld, 1000 - i, 5000 - i,
                             domain, tld, rank, i, 1000 - i, 5000 - i])

    phish_urls = [row["url"] for row in corpus if row["label"] == 1][:10]
    with open(feeds_dir / "phishtank_sample.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["phish_id", "url", "phish_detail_url", "submission_time",
                         "verified", "verification_time", "online", "target"])
        for i, url in enumerate(phish_urls, start=800001):
            writer.writerow([i, url, f"http://phishtank-fixture.example/detail/{i}",
                             "2025-05-30T12:00:00+00:00", "yes",
                             "2025-05-30T13:00:00+00:00", "yes", "Other"])

    print(f"wrote {len(corpus)} snapshots, {len(WHOIS_FILES)} whois files, "
          f"{len(RANKS)} rank entries")


if __name__ == "__main__":
    main()

"""Synthetic desk-scale matrix: per-class feature distributions.

Expands the fixture corpus to a few hundred labeled rows for classifier
comparison. Rows are sampled from distributions shaped by the same
decision rules the extractor implements, with the correlation structure
real pages show:

* most single marks are weak evidence alone; the strong content signal is
  the kit-built page cluster, where iframe/onmouseover/right-click/mail()
  tricks, redirect chains and foreign-object-heavy censuses all land
  together. A sloppy minority of legitimate pages (old CMS installs with
  deep paths and ancient widget code) fires the same cluster and is
  recognizable by its solid reputation and deep site structure;
* registration facts (unfound, young, expiring, unranked) travel as one
  fact on throwaway domains; a young-startup minority of legitimate sites
  shows the same fresh-registration pattern;
* a low-key phishing minority hides in the suspicious middle (-1) band
  of the ternary features;
* legitimate URLs sit deep inside a site while phishing pages are
  shallow landing pages, so URL depth separates the classes smoothly.

Deterministic under the seed.
"""

from __future__ import annotations

import random

from .dataset import FEATURE_NAMES, FeatureRow

# value distributions: binaries as P(1), ternaries as {value: weight}
_LEGIT_PLAIN = {
    "Have_At": 0.05,
    "URL_Length": 0.15,
    "Redirection": 0.06,
    "https_Domain": 0.02,
    "TinyURL": 0.04,
    "Prefix/Suffix": 0.12,
    "DNS_Record": 0.03,
    "Web_Traffic": 0.18,
    "Domain_Age": 0.08,
    "Domain_End": 0.15,
    "having_ip": 0.03,
    "https_token": 0.02,
    "SSL": {0: 0.75, -1: 0.10, 1: 0.15},
    "sub_domain": {0: 0.65, -1: 0.28, 1: 0.07},
    "request_url": {0: 0.72, -1: 0.23, 1: 0.05},
    "url_anchor": {0: 0.68, -1: 0.27, 1: 0.05},
    "links": {0: 0.62, -1: 0.30, 1: 0.08},
}

# asset-heavy legitimate sites: foreign objects everywhere, reputation solid
_LEGIT_CDN = dict(_LEGIT_PLAIN)
_LEGIT_CDN.update({
    "Web_Traffic": 0.05,
    "Domain_Age": 0.03,
    "Domain_End": 0.08,
    "DNS_Record": 0.01,
    "SSL": {0: 0.90, -1: 0.05, 1: 0.05},
    "request_url": {1: 0.50, -1: 0.40, 0: 0.10},
    "url_anchor": {-1: 0.45, 0: 0.35, 1: 0.20},
    "links": {1: 0.45, -1: 0.45, 0: 0.10},
})

_PHISH_LEXICAL = {
    "Have_At": 0.30,
    "URL_Length": 0.70,
    "Redirection": 0.20,
    "https_Domain": 0.15,
    "TinyURL": 0.15,
    "Prefix/Suffix": 0.60,
    "DNS_Record": 0.40,
    "Web_Traffic": 0.75,
    "Domain_Age": 0.70,
    "Domain_End": 0.50,
    "having_ip": 0.20,
    "https_token": 0.15,
    "SSL": {1: 0.55, -1: 0.30, 0: 0.15},
    "sub_domain": {1: 0.60, -1: 0.28, 0: 0.12},
    "request_url": {0: 0.45, -1: 0.40, 1: 0.15},
    "url_anchor": {0: 0.40, -1: 0.45, 1: 0.15},
    "links": {0: 0.45, -1: 0.40, 1: 0.15},
}

_PHISH_CONTENT = {
    "Have_At": 0.05,
    "URL_Length": 0.30,
    "Redirection": 0.06,
    "https_Domain": 0.02,
    "TinyURL": 0.04,
    "Prefix/Suffix": 0.20,
    "DNS_Record": 0.25,
    "Web_Traffic": 0.60,
    "Domain_Age": 0.50,
    "Domain_End": 0.40,
    "having_ip": 0.03,
    "https_token": 0.02,
    "SSL": {1: 0.45, -1: 0.30, 0: 0.25},
    "sub_domain": {0: 0.40, -1: 0.40, 1: 0.20},
    "request_url": {-1: 0.50, 0: 0.35, 1: 0.15},
    "url_anchor": {-1: 0.50, 0: 0.30, 1: 0.20},
    "links": {-1: 0.50, 0: 0.35, 1: 0.15},
}

# imitation phishing: binaries near legitimate rates, ternaries parked in
# the suspicious middle band
_PHISH_LOWKEY = dict(_LEGIT_PLAIN)
_PHISH_LOWKEY.update({
    "Domain_Age": 0.40,
    "Domain_End": 0.40,
    "Web_Traffic": 0.60,
    "SSL": {-1: 0.55, 0: 0.30, 1: 0.15},
    "sub_domain": {-1: 0.55, 0: 0.30, 1: 0.15},
    "request_url": {-1: 0.55, 0: 0.35, 1: 0.10},
    "url_anchor": {-1: 0.60, 0: 0.30, 1: 0.10},
    "links": {-1: 0.55, 0: 0.35, 1: 0.10},
})

# kit-built page cluster: one underlying fact that reads as eight features
_KIT_ON_BINARY = {"iFrame": 0.97, "Mouse_Over": 0.95, "Right_Click": 0.92,
                  "email": 0.96, "Web_Forwards": 0.90}
_KIT_OFF_BINARY = {"iFrame": 0.04, "Mouse_Over": 0.02, "Right_Click": 0.02,
                   "email": 0.03, "Web_Forwards": 0.03}
_KIT_ON_BANDS = {
    "request_url": {1: 0.90, -1: 0.08, 0: 0.02},
    "url_anchor": {1: 0.92, -1: 0.06, 0: 0.02},
    "links": {1: 0.90, -1: 0.08, 0: 0.02},
}
_KIT_RATE = {"legit_plain": 0.16, "legit_cdn": 0.16, "legit_startup": 0.16,
             "lexical": 0.15, "content": 0.85, "lowkey": 0.12}

# URL depth: legitimate pages live deep inside a site, phishing pages are
# shallow landing pages; low-key phishing imitates moderate depth
_LEGIT_DEPTH = ([0, 1, 2, 3, 4, 5, 6, 7], [4, 10, 16, 20, 19, 10, 6, 3])
_LEGIT_KIT_DEPTH = ([3, 4, 5, 6, 7, 8], [16, 22, 24, 10, 5, 3])
_PHISH_DEPTH = ([0, 1, 2, 3], [42, 38, 15, 5])
_PHISH_LOWKEY_DEPTH = ([1, 2, 3, 4, 5], [20, 30, 25, 15, 10])


def _sample(table: dict, name: str, rng: random.Random) -> int:
    spec = table[name]
    if isinstance(spec, dict):
        values = list(spec)
        return rng.choices(values, weights=[spec[v] for v in values], k=1)[0]
    return 1 if rng.random() < spec else 0


def _apply_kit_cluster(values: dict, profile: str, rng: random.Random) -> bool:
    on = rng.random() < _KIT_RATE[profile]
    binary_rates = _KIT_ON_BINARY if on else _KIT_OFF_BINARY
    for name, rate in binary_rates.items():
        values[name] = 1 if rng.random() < rate else 0
    if on:
        for name, dist in _KIT_ON_BANDS.items():
            values[name] = _sample({name: dist}, name, rng)
    return on


def _row_from(table: dict, rng: random.Random) -> dict:
    return {name: _sample(table, name, rng)
            for name in table if name in FEATURE_NAMES}


def _legit_row(rng: random.Random) -> tuple[int, ...]:
    if rng.random() < 0.16:
        profile, table = "legit_cdn", _LEGIT_CDN
    else:
        profile, table = "legit_plain", _LEGIT_PLAIN
    values = _row_from(table, rng)
    if profile == "legit_plain" and rng.random() < 0.15:
        # young startup: fresh registration facts all at once
        profile = "legit_startup"
        values["Domain_Age"] = 1
        values["Domain_End"] = 1 if rng.random() < 0.85 else 0
        values["Web_Traffic"] = 1 if rng.random() < 0.75 else 0
        if rng.random() < 0.55:
            values["SSL"] = 1  # young site, young certificate
    kit_on = _apply_kit_cluster(values, profile, rng)
    depth_table = _LEGIT_KIT_DEPTH if kit_on else _LEGIT_DEPTH
    values["URL_Depth"] = rng.choices(*depth_table, k=1)[0]
    return tuple(values[name] for name in FEATURE_NAMES)


def _phish_row(rng: random.Random) -> tuple[int, ...]:
    roll = rng.random()
    if roll < 0.42:
        profile, table = "lexical", _PHISH_LEXICAL
    elif roll < 0.90:
        profile, table = "content", _PHISH_CONTENT
    else:
        profile, table = "lowkey", _PHISH_LOWKEY
    values = _row_from(table, rng)
    _apply_kit_cluster(values, profile, rng)
    # registration facts travel together on throwaway domains
    if values["Domain_Age"] == 1 and rng.random() < 0.85:
        values["Domain_End"] = 1
    if values["DNS_Record"] == 1:
        values["Domain_Age"] = 1
        values["Domain_End"] = 1
        values["Web_Traffic"] = 1
    depth_table = _PHISH_LOWKEY_DEPTH if profile == "lowkey" else _PHISH_DEPTH
    values["URL_Depth"] = rng.choices(*depth_table, k=1)[0]
    return tuple(values[name] for name in FEATURE_NAMES)


def synthesize_rows(n: int = 400, seed: int = 7, phish_fraction: float = 0.5) -> list[FeatureRow]:
    """Generate n labeled rows, class-balanced by default, shuffled."""
    rng = random.Random(seed)
    n_phish = round(n * phish_fraction)
    rows = []
    for i in range(n):
        label = 1 if i < n_phish else 0
        values = _phish_row(rng) if label else _legit_row(rng)
        rows.append(FeatureRow(url=f"synthetic://{'phish' if label else 'legit'}/{i}",
                               values=values, label=label))
    rng.shuffle(rows)
    return rows

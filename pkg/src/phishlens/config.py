"""Tunable thresholds for the feature rules.

Values mirror the decision rules the features implement; they are named
constants so experiments can vary them without touching feature code.
"""

# URL string length at or above which the URL counts as phishing-direction.
URL_LENGTH_THRESHOLD = 54

# More than this many redirect hops counts as phishing-direction.
REDIRECT_LIMIT = 3

# Minimum age of a trusted certificate, in days, to count as legitimate.
CERT_MIN_AGE_DAYS = 365

# "12 months" and "6 months" as fixed day counts for domain age / expiry rules.
DOMAIN_MIN_AGE_DAYS = 365
DOMAIN_MIN_REMAINING_DAYS = 183

# Traffic rank at or below which a domain counts as popular (legitimate).
RANK_POPULAR_MAX = 100_000

# Percentage bands for the three link-census features. Values inside
# [low, high] inclusive are suspicious (-1); below low is 0; above high is 1.
REQUEST_URL_BANDS = (22.0, 61.0)
URL_ANCHOR_BANDS = (31.0, 67.0)
LINKS_BANDS = (17.0, 81.0)

# Default local verdict service port.
DEFAULT_SERVICE_PORT = 8970

# Wire protocol version carried in every service response.
PROTOCOL_VERSION = 1

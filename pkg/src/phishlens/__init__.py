"""Phishing URL detection toolkit: feature extraction, classifiers, verdict service."""

__version__ = "0.1.0"

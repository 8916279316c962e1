"""Grad-SAM core - gradient-weighted self-attention token attribution.

This package provides both a high-level SDK (GradSamClient) and the
lower-level tape, encoder, attribution and evaluation modules.
"""

__version__ = "0.1.0"

from gradsam_core.client import GradSamClient

__all__ = ["GradSamClient"]

"""Utilities for Grad-SAM core."""

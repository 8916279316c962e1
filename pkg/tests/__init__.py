"""Tests for the Grad-SAM toolkit."""

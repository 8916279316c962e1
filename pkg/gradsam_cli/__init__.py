"""Command-line surface for the Grad-SAM toolkit."""

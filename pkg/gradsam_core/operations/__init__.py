"""Dict-returning operations behind the CLI and the client."""

from gradsam_core.operations.data import generate_data
from gradsam_core.operations.evaluate import evaluate_model
from gradsam_core.operations.explain import explain_inputs
from gradsam_core.operations.report import render_attributions
from gradsam_core.operations.training import train_model

__all__ = [
    "generate_data",
    "train_model",
    "explain_inputs",
    "evaluate_model",
    "render_attributions",
]

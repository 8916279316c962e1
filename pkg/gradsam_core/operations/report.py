"""HTML report from saved attribution results."""

import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

from gradsam_core.errors import ConfigError
from gradsam_core.models.results import AttributionResult
from gradsam_core.reporting.html import write_report
from gradsam_core.store.reports import load_attributions
from gradsam_core.utils.responses import exception_response, success_response

logger = logging.getLogger(__name__)


def render_attributions(
    attributions: Sequence[Union[str, Path]],
    out: Union[str, Path],
    title: str = "Token importance",
) -> Dict[str, Any]:
    """Write a static HTML page for one or more attribution JSON files.

    Results of several methods on the same sentence share a row.

    Returns:
        Dictionary with either:
        - success: True, sentences, methods, outputs
        - success: False, error, error_kind
    """
    try:
        if not attributions:
            raise ConfigError("No attribution files given")
        results: List[AttributionResult] = []
        for path in attributions:
            results.extend(load_attributions(path))
        out_path = write_report(results, out, title)
        methods = sorted({r.method for r in results})
        logger.info(f"Wrote HTML report for {len(results)} attributions to {out_path}")
        return success_response(
            f"Rendered {len(results)} attributions",
            outputs=[out_path],
            attributions=len(results),
            methods=methods,
        )
    except Exception as e:
        logger.error(f"report failed: {e}")
        return exception_response(e)

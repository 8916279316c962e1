"""Static HTML token-highlight reports.

Each sentence is a table row and each method a column. A token's background
intensity is its score min-max normalized over the finite scores of that
sentence and method; when all finite scores are equal every token is drawn
at 0.5. Specials are drawn dim and [PAD] positions are left out. Output
depends only on the input, so a fixed input renders byte-identical HTML.
"""

import html
import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from gradsam_core.encoder.tokenizer import PAD
from gradsam_core.models.results import AttributionResult, TokenScore

STYLE = """body { font-family: sans-serif; margin: 2em; }
table { border-collapse: collapse; }
th, td { border: 1px solid #ccc; padding: 0.5em; vertical-align: top; text-align: left; }
.tok { display: inline-block; padding: 0 2px; margin: 1px; border-radius: 3px; }
.special { color: #999; }
.top { outline: 1px solid #333; }
.meta { color: #666; font-size: 0.85em; margin-top: 0.5em; }"""


def normalize_scores(scores: Sequence[float]) -> List[Optional[float]]:
    """Min-max normalize finite scores to [0, 1]; non-finite entries map to None."""
    finite = [s for s in scores if math.isfinite(s)]
    if not finite:
        return [None] * len(scores)
    low, high = min(finite), max(finite)
    out: List[Optional[float]] = []
    for s in scores:
        if not math.isfinite(s):
            out.append(None)
        elif high == low:
            out.append(0.5)
        else:
            out.append((s - low) / (high - low))
    return out


def _token_html(token: TokenScore, intensity: Optional[float], top: bool) -> str:
    text = html.escape(token.text)
    if intensity is None:
        return f'<span class="tok special">{text}</span>'
    classes = "tok top" if top else "tok"
    return (
        f'<span class="{classes}" style="background-color: rgba(255, 140, 0, {intensity:.3f})" '
        f'title="{token.score:.6g}">{text}</span>'
    )


def render_cell(result: AttributionResult) -> str:
    intensities = normalize_scores([t.score for t in result.tokens])
    top = set(result.top_k or [])
    spans = [
        _token_html(token, value, token.index in top)
        for token, value in zip(result.tokens, intensities)
        if token.text != PAD
    ]
    cell = " ".join(spans)
    meta = []
    if result.prediction is not None:
        meta.append(f"prediction {result.prediction}")
    if result.masked_prediction is not None:
        meta.append(f"top {len(result.top_k or [])} kept: prediction {result.masked_prediction}")
    if meta:
        cell += f'<div class="meta">{html.escape(", ".join(meta))}</div>'
    return cell


def _sentence_key(result: AttributionResult) -> Tuple:
    return (result.record_id, tuple(t.text for t in result.tokens))


def _sentence_label(result: AttributionResult, position: int) -> str:
    if result.record_id:
        return result.record_id
    if result.text:
        return result.text
    return f"#{position}"


def render_report(results: Sequence[AttributionResult], title: str = "Token importance") -> str:
    """HTML document with one row per sentence and one column per method."""
    methods: List[str] = []
    rows: Dict[Tuple, Dict[str, AttributionResult]] = {}
    for result in results:
        if result.method not in methods:
            methods.append(result.method)
        rows.setdefault(_sentence_key(result), {})[result.method] = result

    title = html.escape(title)
    lines = [
        "<!DOCTYPE html>",
        '<html lang="en">',
        "<head>",
        '<meta charset="UTF-8">',
        f"<title>{title}</title>",
        "<style>",
        STYLE,
        "</style>",
        "</head>",
        "<body>",
        f"<h1>{title}</h1>",
        "<table>",
        "<thead>",
        "<tr><th>Sentence</th>" + "".join(f"<th>{html.escape(m)}</th>" for m in methods) + "</tr>",
        "</thead>",
        "<tbody>",
    ]
    for position, by_method in enumerate(rows.values(), start=1):
        first = next(iter(by_method.values()))
        cells = [f"<td>{html.escape(_sentence_label(first, position))}</td>"]
        for method in methods:
            result = by_method.get(method)
            cells.append(f"<td>{render_cell(result)}</td>" if result is not None else "<td></td>")
        lines.append("<tr>" + "".join(cells) + "</tr>")
    lines += ["</tbody>", "</table>", "</body>", "</html>", ""]
    return "\n".join(lines)


def write_report(
    results: Sequence[AttributionResult], path: Union[str, Path], title: str = "Token importance"
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(render_report(results, title))
    return path

"""Token-ranking methods centred on gradient-weighted self-attention maps."""

from gradsam_core.attribution.maps import SamMaps, combine_maps
from gradsam_core.attribution.methods import (
    METHODS,
    attribute,
    build_result,
    cls_attention_importance,
    compute_maps,
    importance_vector,
    input_gradient_importance,
    rank_positions,
    token_importance,
)
from gradsam_core.attribution.explain import (
    ALL_METHODS,
    explain,
    parse_method,
    parse_methods,
    suggest_method,
)

__all__ = [
    "SamMaps",
    "combine_maps",
    "METHODS",
    "attribute",
    "build_result",
    "cls_attention_importance",
    "compute_maps",
    "importance_vector",
    "input_gradient_importance",
    "rank_positions",
    "token_importance",
    "ALL_METHODS",
    "explain",
    "parse_method",
    "parse_methods",
    "suggest_method",
]

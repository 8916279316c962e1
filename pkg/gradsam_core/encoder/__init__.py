"""Tokenizer and BERT-style encoder classifier."""

from gradsam_core.encoder.tokenizer import (
    Tokenizer,
    Vocab,
    apply_mask,
    load_vocab,
    select_top_k_count,
)
from gradsam_core.encoder.weights import EncoderWeights, init_weights, parameter_shapes
from gradsam_core.encoder.model import (
    ForwardTrace,
    forward,
    forward_with_injected_attention,
    predict,
    predict_logits,
    target_score,
)
from gradsam_core.encoder.examples import EncodedExample, encode_dataset

__all__ = [
    "Tokenizer",
    "Vocab",
    "apply_mask",
    "load_vocab",
    "select_top_k_count",
    "EncoderWeights",
    "init_weights",
    "parameter_shapes",
    "ForwardTrace",
    "forward",
    "forward_with_injected_attention",
    "predict",
    "predict_logits",
    "target_score",
    "EncodedExample",
    "encode_dataset",
]

"""Shared builders for the test suite: toy vocabularies, micro-models, FD checks."""

from typing import Callable, List, Optional

import numpy as np

from gradsam_core.encoder.tokenizer import RESERVED_TOKENS, Tokenizer, Vocab
from gradsam_core.encoder.weights import EncoderWeights, parameter_shapes
from gradsam_core.models.config import ModelConfig

TOY_WORDS = [
    ".", ",", "!",
    "the", "a", "movie", "film", "was", "is", "today", "plot", "it", "and",
    "good", "great", "bad", "awful", "not",
    "goal", "vote", "chip", "stock",
    "un", "##aff", "##able", "##s", "##ing", "play",
]


def toy_vocab(words: Optional[List[str]] = None) -> Vocab:
    return Vocab.from_tokens(list(RESERVED_TOKENS) + list(words or TOY_WORDS))


def toy_tokenizer(words: Optional[List[str]] = None) -> Tokenizer:
    return Tokenizer(toy_vocab(words))


def micro_config(**overrides) -> ModelConfig:
    """A 64-bit model small enough for finite-difference checks."""
    fields = dict(
        L=1, M=1, d=4, d_a=4, N=6, n=1, vocab_size=len(RESERVED_TOKENS) + len(TOY_WORDS),
        precision="float64",
    )
    fields.update(overrides)
    return ModelConfig(**fields)


def random_weights(cfg: ModelConfig, seed: int = 0, scale: float = 0.5) -> EncoderWeights:
    """Gaussian weights with non-trivial biases and norm gains."""
    rng = np.random.default_rng(seed)
    arrays = {}
    for name, shape in parameter_shapes(cfg).items():
        if name.endswith(".gamma"):
            arrays[name] = 1.0 + 0.1 * rng.standard_normal(shape)
        else:
            arrays[name] = scale * rng.standard_normal(shape)
    return EncoderWeights.from_arrays(cfg, arrays)


def central_difference(f: Callable[[np.ndarray], float], x: np.ndarray) -> np.ndarray:
    """Numerical gradient of scalar ``f`` at ``x`` with step 1e-4 scaled by |x|."""
    x = np.array(x, dtype=np.float64)
    grad = np.zeros_like(x)
    for index in np.ndindex(x.shape):
        h = 1e-4 * max(abs(x[index]), 0.1)
        original = x[index]
        x[index] = original + h
        upper = f(x)
        x[index] = original - h
        lower = f(x)
        x[index] = original
        grad[index] = (upper - lower) / (2 * h)
    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """Largest absolute difference relative to the largest magnitude involved."""
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    scale = max(np.abs(analytic).max(), np.abs(numeric).max(), 1e-12)
    return float(np.abs(analytic - numeric).max() / scale)


def trigger_detector(
    tokenizer: Tokenizer, positive: List[str], negative: List[str], N: int = 8
) -> EncoderWeights:
    """Hand-set one-head encoder whose logit sign is the sign of the planted trigger.

    Channel 0 of the embedding carries +1/-1 for positive/negative triggers and
    0 for every other token. Uniform attention averages it into [CLS], and the
    rest of the stack passes it to the logit unchanged in sign, so a sentence
    with no trigger left scores exactly 0 (class 0).
    """
    cfg = micro_config(N=N)
    arrays = {name: np.zeros(shape) for name, shape in parameter_shapes(cfg).items()}
    for name in arrays:
        if name.endswith(".gamma"):
            arrays[name] = np.ones_like(arrays[name])

    table = np.tile([0.0, 1.0, -1.0, 0.0], (cfg.vocab_size, 1))
    for word in positive:
        table[tokenizer.vocab.id_of(word)] = [1.5, -0.5, -0.5, -0.5]
    for word in negative:
        table[tokenizer.vocab.id_of(word)] = [-1.5, 0.5, 0.5, 0.5]
    arrays["embeddings.token"] = table

    arrays["layers.0.heads.0.value"][0, 0] = 1.0
    arrays["layers.0.attention.output"][0, 0] = 10.0
    arrays["pooler.weight"][0, 0] = 1.0
    arrays["classifier.weight"][0, 0] = 1.0
    return EncoderWeights.from_arrays(cfg, arrays)

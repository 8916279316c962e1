"""BERT-style encoder classifier on the differentiation tape.

Layout is row-major: the representation ``U`` is N×d with one token per row,
so head ``m`` of layer ``l`` computes

    A^{lm} = softmax((U W_q^{lm})(U W_k^{lm})ᵀ / sqrt(d_a))

with [PAD] key columns forced to zero probability. Each A^{lm} is registered
as a tape tap under ``("attention", l, m)`` (0-based) and the summed input
embedding under ``"embeddings"``.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike

from gradsam_core.autodiff import ops
from gradsam_core.autodiff.tape import Node, Tape
from gradsam_core.encoder.weights import EncoderWeights, head_prefix
from gradsam_core.errors import ContractError, DimensionError
from gradsam_core.models.config import ModelConfig
from gradsam_core.models.records import TokenSequence

EMBEDDINGS_TAP = "embeddings"


def attention_tap(layer: int, head: int) -> tuple:
    return ("attention", layer, head)


@dataclass
class ForwardTrace:
    """Everything one forward pass produced, still attached to its tape."""

    config: ModelConfig
    sequence: TokenSequence
    tape: Tape
    embeddings: Node
    layers: List[Node]
    attention: List[List[Node]]
    pooled: Node
    logits: Node

    @property
    def tap_ids(self) -> List[tuple]:
        return [attention_tap(l, m) for l in range(self.config.L) for m in range(self.config.M)]

    def logits_array(self) -> np.ndarray:
        return self.logits.value[0].copy()

    def attention_array(self) -> np.ndarray:
        """All captured attention matrices, shape (L, M, N, N)."""
        return np.stack([np.stack([a.value for a in heads]) for heads in self.attention])

    def attention_grad_array(self) -> np.ndarray:
        """∂s_x/∂A^{lm} for every head, shape (L, M, N, N)."""
        return np.stack(
            [
                np.stack([self.tape.tap_grad(attention_tap(l, m)) for m in range(self.config.M)])
                for l in range(self.config.L)
            ]
        )

    def embedding_grad(self) -> np.ndarray:
        return self.tape.tap_grad(EMBEDDINGS_TAP)


def _resolve_config(weights: EncoderWeights, cfg: Optional[ModelConfig]) -> ModelConfig:
    """Run-time config: the weights' config, optionally at a different N."""
    if cfg is None:
        return weights.config
    base = weights.config
    fixed = ("L", "M", "d", "d_a", "n", "vocab_size", "num_segments", "precision")
    for name in fixed:
        if getattr(cfg, name) != getattr(base, name):
            raise ContractError(
                f"Config field '{name}'={getattr(cfg, name)} does not match weights ({getattr(base, name)})"
            )
    if cfg.hidden_ffn != base.hidden_ffn:
        raise ContractError("Config feed-forward width does not match weights")
    if cfg.N > base.positions:
        raise ContractError(
            f"Sequence length {cfg.N} exceeds the position table ({base.positions})"
        )
    return cfg


AttentionOverride = Union[ArrayLike, Mapping[Tuple[int, int], ArrayLike]]


def _override_heads(
    attention_override: Optional[AttentionOverride], cfg: ModelConfig
) -> Dict[Tuple[int, int], np.ndarray]:
    """Normalize an attention override to ``{(l, m): N×N array}``."""
    if attention_override is None:
        return {}
    N = cfg.N
    if isinstance(attention_override, Mapping):
        heads = {}
        for key, matrix in attention_override.items():
            l, m = key
            if not (0 <= l < cfg.L and 0 <= m < cfg.M):
                raise DimensionError(f"Attention override names head {key} outside the model")
            matrix = np.asarray(matrix)
            if matrix.shape != (N, N):
                raise DimensionError(
                    f"Attention override for head {key} has shape {matrix.shape}, expected {(N, N)}"
                )
            heads[(int(l), int(m))] = matrix
        return heads
    stacked = np.asarray(attention_override)
    if stacked.shape != (cfg.L, cfg.M, N, N):
        raise DimensionError(
            f"Attention override has shape {stacked.shape}, expected {(cfg.L, cfg.M, N, N)}"
        )
    return {(l, m): stacked[l, m] for l in range(cfg.L) for m in range(cfg.M)}


def forward(
    seq: TokenSequence,
    weights: EncoderWeights,
    cfg: Optional[ModelConfig] = None,
    *,
    track_gradients: bool = True,
    trainable: bool = False,
    attention_override: Optional[AttentionOverride] = None,
    tape: Optional[Tape] = None,
    parameters: Optional[Mapping[str, Node]] = None,
) -> ForwardTrace:
    """Run the encoder and keep every attention matrix as a differentiable tap.

    Args:
        seq: Encoded sentence of length ``cfg.N``.
        weights: Encoder parameters.
        cfg: Optional run-time config (e.g. a larger N); defaults to the weights' config.
        track_gradients: Make the input embedding (and so every attention map)
            differentiable. Off for pure-attention methods and prediction.
        trainable: Also make every weight a differentiable leaf (training).
        attention_override: Either an (L, M, N, N) array substituted for every
            softmax output, or a mapping ``{(l, m): N×N array}`` replacing only
            the named heads while the rest still compute their softmax.
        tape: Tape to record on; a fresh one by default.
        parameters: Weight leaves already on ``tape``, shared across the
            sentences of a training batch.

    Raises:
        DimensionError: If the sequence or override shape disagrees with the config.
    """
    cfg = _resolve_config(weights, cfg)
    N = cfg.N
    if len(seq.ids) != N:
        raise DimensionError(f"Sequence length {len(seq.ids)} does not match N={N}")
    if not seq.attention_mask[0]:
        raise ContractError("Position 0 must be an attended [CLS] token")
    if max(seq.ids) >= cfg.vocab_size or min(seq.ids) < 0:
        raise DimensionError("Token id outside the embedding table")

    override = _override_heads(attention_override, cfg)

    tape = tape if tape is not None else Tape(cfg.precision.value)
    if parameters is not None:
        params = parameters
    else:
        params = {name: tape.leaf(weights[name], requires_grad=trainable) for name in weights}

    tok = ops.take_rows(params["embeddings.token"], seq.ids)
    pos = ops.take_rows(params["embeddings.position"], range(N))
    seg = ops.take_rows(params["embeddings.segment"], [0] * N)
    embeddings = ops.add(ops.add(tok, pos), seg)
    if not trainable:
        # Re-root the graph at the input embedding so input gradients exist.
        embeddings = tape.leaf(embeddings.value, requires_grad=track_gradients)
    tape.tap(embeddings, EMBEDDINGS_TAP)

    eps = cfg.layer_norm_eps
    U = ops.layer_norm(
        embeddings, params["embeddings.norm.gamma"], params["embeddings.norm.beta"], eps
    )
    layers = [U]
    attention: List[List[Node]] = []
    scale = 1.0 / math.sqrt(cfg.d_a)
    key_mask = seq.attention_mask

    for l in range(cfg.L):
        heads_out = []
        layer_attention = []
        for m in range(cfg.M):
            prefix = head_prefix(l, m)
            q = ops.matmul(U, params[f"{prefix}.query"])
            k = ops.matmul(U, params[f"{prefix}.key"])
            v = ops.add(ops.matmul(U, params[f"{prefix}.value"]), params[f"{prefix}.value_bias"])
            scores = ops.scalar_scale(ops.matmul(q, ops.transpose(k)), scale)
            A = ops.softmax_rows(scores, key_mask)
            if (l, m) in override:
                A = tape.leaf(override[(l, m)], requires_grad=track_gradients or trainable)
            tape.tap(A, attention_tap(l, m))
            layer_attention.append(A)
            heads_out.append(ops.matmul(A, v))
        attention.append(layer_attention)

        attended = ops.add(
            ops.matmul(ops.concat_cols(heads_out), params[f"layers.{l}.attention.output"]),
            params[f"layers.{l}.attention.output_bias"],
        )
        U = ops.layer_norm(
            ops.add(U, attended),
            params[f"layers.{l}.attention.norm.gamma"],
            params[f"layers.{l}.attention.norm.beta"],
            eps,
        )
        inner = ops.gelu(
            ops.add(ops.matmul(U, params[f"layers.{l}.ffn.inner"]), params[f"layers.{l}.ffn.inner_bias"])
        )
        outer = ops.add(
            ops.matmul(inner, params[f"layers.{l}.ffn.outer"]), params[f"layers.{l}.ffn.outer_bias"]
        )
        U = ops.layer_norm(
            ops.add(U, outer),
            params[f"layers.{l}.ffn.norm.gamma"],
            params[f"layers.{l}.ffn.norm.beta"],
            eps,
        )
        layers.append(U)

    cls_row = ops.take_rows(U, [0])
    pooled = ops.tanh(ops.add(ops.matmul(cls_row, params["pooler.weight"]), params["pooler.bias"]))
    logits = ops.add(ops.matmul(pooled, params["classifier.weight"]), params["classifier.bias"])

    return ForwardTrace(
        config=cfg,
        sequence=seq,
        tape=tape,
        embeddings=embeddings,
        layers=layers,
        attention=attention,
        pooled=pooled,
        logits=logits,
    )


def forward_with_injected_attention(
    seq: TokenSequence,
    weights: EncoderWeights,
    attention_override: AttentionOverride,
    cfg: Optional[ModelConfig] = None,
) -> np.ndarray:
    """Logits of the same computation with A^{lm} replaced downstream of softmax.

    A full (L, M, N, N) array replaces every head. A ``{(l, m): matrix}``
    mapping replaces only those heads, and later layers still recompute their
    attention from the perturbed representation, so finite differences over
    one head give the total derivative ∂s_x/∂A^{lm} the tape reports.
    Override rows need not sum to one.
    """
    trace = forward(
        seq, weights, cfg, track_gradients=False, attention_override=attention_override
    )
    return trace.logits_array()


def target_score(trace: ForwardTrace, class_id: Optional[int] = None) -> Node:
    """The scalar s_x to differentiate.

    Binary models (n == 1) explain their single logit and take no class id;
    multiclass models require the class whose logit is explained.
    """
    n = trace.config.n
    if n == 1:
        if class_id is not None:
            raise ContractError("Binary models explain their single logit; class_id must be omitted")
        return ops.element(trace.logits, 0, 0)
    if class_id is None:
        raise ContractError("Multiclass models require a class_id to explain")
    if not 0 <= class_id < n:
        raise ContractError(f"class_id {class_id} outside 0..{n - 1}")
    return ops.element(trace.logits, 0, class_id)


def predict_from_logits(logits: np.ndarray) -> int:
    """Class decision: logit > 0 for binary models, argmax otherwise."""
    logits = np.asarray(logits).reshape(-1)
    if logits.size == 1:
        return int(logits[0] > 0)
    return int(np.argmax(logits))


def predict_logits(seq: TokenSequence, weights: EncoderWeights, cfg: Optional[ModelConfig] = None) -> np.ndarray:
    return forward(seq, weights, cfg, track_gradients=False).logits_array()


def predict(seq: TokenSequence, weights: EncoderWeights, cfg: Optional[ModelConfig] = None) -> int:
    """Predicted class id of one sentence."""
    return predict_from_logits(predict_logits(seq, weights, cfg))

"""Plain SGD and Adam over named numpy parameter arrays."""

from typing import Dict, Mapping, Optional

import numpy as np

from gradsam_core.models.config import OptimizerKind, TrainConfig


def global_norm(grads: Mapping[str, np.ndarray]) -> float:
    return float(np.sqrt(sum(float(np.sum(np.square(g, dtype=np.float64))) for g in grads.values())))


def clip_by_global_norm(
    grads: Dict[str, np.ndarray], max_norm: Optional[float]
) -> float:
    """Scale ``grads`` in place so their joint L2 norm is at most ``max_norm``.

    Returns the norm before clipping.
    """
    norm = global_norm(grads)
    if max_norm is not None and norm > max_norm:
        scale = max_norm / (norm + 1e-12)
        for name in grads:
            grads[name] *= scale
    return norm


class Optimizer:
    """Updates a dict of parameter arrays in place."""

    def __init__(self, params: Dict[str, np.ndarray], learning_rate: float):
        self.params = params
        self.learning_rate = learning_rate
        self.steps = 0

    def step(self, grads: Mapping[str, np.ndarray]) -> None:
        self.steps += 1
        for name, param in self.params.items():
            grad = grads.get(name)
            if grad is not None:
                self._update(name, param, grad)

    def _update(self, name: str, param: np.ndarray, grad: np.ndarray) -> None:
        raise NotImplementedError


class SGD(Optimizer):
    def _update(self, name: str, param: np.ndarray, grad: np.ndarray) -> None:
        param -= self.learning_rate * grad


class Adam(Optimizer):
    """Adaptive-moment optimizer with bias correction."""

    def __init__(
        self,
        params: Dict[str, np.ndarray],
        learning_rate: float,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
    ):
        super().__init__(params, learning_rate)
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.m = {name: np.zeros_like(p) for name, p in params.items()}
        self.v = {name: np.zeros_like(p) for name, p in params.items()}

    def _update(self, name: str, param: np.ndarray, grad: np.ndarray) -> None:
        m, v = self.m[name], self.v[name]
        m *= self.beta1
        m += (1 - self.beta1) * grad
        v *= self.beta2
        v += (1 - self.beta2) * np.square(grad)
        m_hat = m / (1 - self.beta1 ** self.steps)
        v_hat = v / (1 - self.beta2 ** self.steps)
        param -= self.learning_rate * m_hat / (np.sqrt(v_hat) + self.eps)


def make_optimizer(cfg: TrainConfig, params: Dict[str, np.ndarray]) -> Optimizer:
    if cfg.optimizer == OptimizerKind.SGD:
        return SGD(params, cfg.learning_rate)
    return Adam(params, cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.adam_eps)

"""Optimizers and learning-rate schedules for the toy model."""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from core.linalg import ArgumentError, DenseMatrix

@dataclass
class Parameter:
    """A trainable array updated in place, and its learning-rate multiplier."""

    name: str
    value: DenseMatrix
    lr_scale: float = 1.0

class Optimizer(ABC):
    """Updates parameters in place from gradients keyed by parameter name."""

    def step(self, params: list[Parameter], grads: dict[str, DenseMatrix], base_lr: float) -> None:
        """
        Apply one update.

        :param params: Parameters to update; ones without a gradient are left alone.
        :param grads: Gradients by parameter name.
        :param base_lr: Learning rate before each parameter's `lr_scale`.
        """
        self._begin_step()
        for param in params:
            grad = grads.get(param.name)
            if grad is None:
                continue
            if grad.shape != param.value.shape:
                raise ArgumentError(f"Gradient shape {grad.shape} does not match {param.name} "
                                    f"{param.value.shape}", "Optimizer.step")
            update = self._update(param.name, grad.astype(param.value.dtype, copy=False))
            param.value -= (base_lr * param.lr_scale) * update

    def _begin_step(self):
        pass

    @abstractmethod
    def _update(self, name: str, grad: DenseMatrix) -> DenseMatrix:
        """Direction to subtract, before scaling by the learning rate."""

class SGD(Optimizer):
    """Plain gradient descent."""

    def _update(self, name: str, grad: DenseMatrix) -> DenseMatrix:
        return grad

class Adam(Optimizer):
    """Adam with bias-corrected moment estimates."""

    def __init__(self, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self._m: dict[str, DenseMatrix] = {}
        self._v: dict[str, DenseMatrix] = {}

    def _begin_step(self):
        self.t += 1

    def _update(self, name: str, grad: DenseMatrix) -> DenseMatrix:
        m = self._m.get(name, np.zeros_like(grad))
        v = self._v.get(name, np.zeros_like(grad))
        m = self.beta1 * m + (1 - self.beta1) * grad
        v = self.beta2 * v + (1 - self.beta2) * grad * grad
        self._m[name] = m
        self._v[name] = v

        m_hat = m / (1 - self.beta1 ** self.t)
        v_hat = v / (1 - self.beta2 ** self.t)
        return m_hat / (np.sqrt(v_hat) + self.eps)

class OptimizerKind(StrEnum):
    SGD = "sgd"
    ADAM = "adam"

def make_optimizer(kind: str) -> Optimizer:
    """Optimizer by name."""
    try:
        kind = OptimizerKind(kind.lower())
    except ValueError as e:
        raise ArgumentError(f"Unknown optimizer: {kind}", "make_optimizer") from e
    return SGD() if kind == OptimizerKind.SGD else Adam()

class ScheduleKind(StrEnum):
    CONSTANT = "constant"
    WARMUP_COSINE = "warmup_cosine"

@dataclass
class LearningRateSchedule:
    """
    Learning rate per step.

    `warmup_cosine` rises linearly over the first `warmup_fraction` of the steps, then
    follows a cosine down to `min_ratio` of the base rate.
    """

    base_lr: float
    total_steps: int
    kind: ScheduleKind = ScheduleKind.CONSTANT
    warmup_fraction: float = 0.1
    min_ratio: float = 0.1

    def __post_init__(self):
        self.kind = ScheduleKind(self.kind)
        if self.base_lr <= 0:
            raise ArgumentError(f"Learning rate must be positive, got {self.base_lr}", "LearningRateSchedule")
        if self.total_steps < 1:
            raise ArgumentError(f"Need at least one step, got {self.total_steps}", "LearningRateSchedule")

    def rate(self, step: int) -> float:
        """Learning rate for a zero-based step index."""
        if self.kind == ScheduleKind.CONSTANT:
            return self.base_lr

        warmup = max(1, round(self.warmup_fraction * self.total_steps))
        if step < warmup:
            return self.base_lr * (step + 1) / warmup

        decay_steps = max(1, self.total_steps - warmup)
        progress = min(1.0, (step - warmup) / decay_steps)
        cosine = 0.5 * (1 + math.cos(math.pi * progress))
        return self.base_lr * (self.min_ratio + (1 - self.min_ratio) * cosine)

"""
Minimal reverse-mode tape.

Every recorded operation appends a closure that pushes the output gradient back to its
inputs; `Tape.backward` runs them newest first. Only the handful of operations the toy
attention model needs are provided.
"""

from collections.abc import Callable

import numpy as np
import numpy.typing as npt

from core.linalg import DenseMatrix, ShapeError
from core.pamm import CompressedActivation
from .linear import PammLinearLayer

class Variable:
    """A value on the tape plus the gradient accumulated into it."""

    __slots__ = ("value", "grad")

    def __init__(self, value: DenseMatrix):
        self.value = value
        self.grad: DenseMatrix | None = None

    def accumulate(self, grad: DenseMatrix):
        """Add a gradient contribution."""
        self.grad = grad if self.grad is None else self.grad + grad

    @property
    def shape(self) -> tuple[int, ...]:
        return self.value.shape

class Tape:
    """Records operations during the forward pass and replays them backward."""

    def __init__(self, keep_activations: bool = True):
        self.keep_activations = keep_activations
        self._steps: list[Callable[[], None]] = []
        self.parameter_grads: dict[str, DenseMatrix] = {}
        self.loss: float | None = None

    def _accumulate_parameter(self, name: str, grad: DenseMatrix):
        if name in self.parameter_grads:
            self.parameter_grads[name] = self.parameter_grads[name] + grad
        else:
            self.parameter_grads[name] = grad

    def embedding(self, table: DenseMatrix, indices: npt.NDArray[np.int64], name: str) -> Variable:
        """Rows of a parameter table, one per index."""
        out = Variable(table[indices])

        def backward():
            if out.grad is None:
                return
            grad = np.zeros_like(table)
            np.add.at(grad, indices, out.grad)
            self._accumulate_parameter(name, grad)

        self._steps.append(backward)
        return out

    def add(self, a: Variable, b: Variable) -> Variable:
        """Elementwise sum of two same-shaped values."""
        if a.shape != b.shape:
            raise ShapeError("Operands differ in shape", "add", (a.shape, b.shape))
        out = Variable(a.value + b.value)

        def backward():
            if out.grad is None:
                return
            a.accumulate(out.grad)
            b.accumulate(out.grad)

        self._steps.append(backward)
        return out

    def linear(self, layer: PammLinearLayer, x: Variable,
               shared: CompressedActivation | None = None) -> Variable:
        """XW through a layer; the weight gradient is stored under the layer name."""
        out = Variable(layer.forward(x.value, shared, self.keep_activations))

        def backward():
            if out.grad is None:
                layer.release()
                return
            grad_x, grad_w = layer.backward(out.grad)
            x.accumulate(grad_x)
            self._accumulate_parameter(layer.name, grad_w)

        self._steps.append(backward)
        return out

    def attention(self, q: Variable, k: Variable, v: Variable, batch: int, seq_len: int) -> Variable:
        """
        Single-head scaled dot-product attention inside every sequence.

        Inputs are flattened to (batch × seq_len, d); the score matrices are materialized.
        """
        d = q.shape[1]
        for operand in (k, v):
            if operand.shape != q.shape:
                raise ShapeError("Attention operands differ in shape", "attention", (q.shape, operand.shape))
        if q.shape[0] != batch * seq_len:
            raise ShapeError("Rows are not batch × seq_len", "attention", (q.shape, (batch, seq_len)))

        scale = q.value.dtype.type(1.0 / np.sqrt(d))
        qs = q.value.reshape(batch, seq_len, d)
        ks = k.value.reshape(batch, seq_len, d)
        vs = v.value.reshape(batch, seq_len, d)

        scores = np.matmul(qs, ks.transpose(0, 2, 1)) * scale
        scores -= scores.max(axis=-1, keepdims=True)
        probs = np.exp(scores)
        probs /= probs.sum(axis=-1, keepdims=True)
        out = Variable(np.matmul(probs, vs).reshape(batch * seq_len, d))

        def backward():
            if out.grad is None:
                return
            grad_h = out.grad.reshape(batch, seq_len, d)
            grad_p = np.matmul(grad_h, vs.transpose(0, 2, 1))
            grad_v = np.matmul(probs.transpose(0, 2, 1), grad_h)
            grad_s = probs * (grad_p - np.sum(grad_p * probs, axis=-1, keepdims=True)) * scale
            grad_q = np.matmul(grad_s, ks)
            grad_k = np.matmul(grad_s.transpose(0, 2, 1), qs)
            q.accumulate(grad_q.reshape(batch * seq_len, d))
            k.accumulate(grad_k.reshape(batch * seq_len, d))
            v.accumulate(grad_v.reshape(batch * seq_len, d))

        self._steps.append(backward)
        return out

    def softmax_cross_entropy(self, logits: Variable, targets: npt.NDArray[np.int64]) -> float:
        """Mean cross-entropy of integer targets; seeds the backward pass."""
        rows = logits.shape[0]
        if targets.shape != (rows,):
            raise ShapeError("One target per row expected", "softmax_cross_entropy",
                             (logits.shape, targets.shape))

        shifted = logits.value - logits.value.max(axis=1, keepdims=True)
        log_norm = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
        log_probs = shifted - log_norm
        picked = np.arange(rows)
        loss = float(-np.mean(log_probs[picked, targets]))

        def backward():
            grad = np.exp(log_probs)
            grad[picked, targets] -= 1
            logits.accumulate(grad / rows)

        self._steps.append(backward)
        self.loss = loss
        return loss

    def backward(self) -> dict[str, DenseMatrix]:
        """Run the recorded steps newest first and return parameter gradients by name."""
        for step in reversed(self._steps):
            step()
        self._steps.clear()
        return self.parameter_grads

    def discard(self, layers: list[PammLinearLayer]):
        """Forget the recording and free what the layers saved."""
        self._steps.clear()
        for layer in layers:
            layer.release()

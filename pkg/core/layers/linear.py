"""Linear layer whose weight gradient can come from a compressed activation."""

import dataclasses

import numpy as np

from core.linalg import DenseMatrix, ShapeError, as_matrix
from core.logger import get_logger
from core.pamm import CompressedActivation, PammConfig, approx_matmul, compress
from .exceptions import LayerStateError

# Learning-rate multiplier for layers trained with approximate weight gradients.
DEFAULT_PAMM_LR_SCALE = 0.25

class PammLinearLayer:
    """
    Z = XW with an optional compressed backward pass.

    With a PAMM config the forward pass keeps only compress(X) for backward and the
    weight gradient becomes approx_matmul(compress(X), ∇Z). Without one, X itself is kept
    and the gradient is exact. The forward output and ∇X are the same either way.
    """

    def __init__(self, weight: DenseMatrix, pamm_cfg: PammConfig | None = None,
                 lr_scale: float | None = None, name: str = "linear"):
        self.weight = as_matrix(weight, name=name)
        self.pamm_cfg = pamm_cfg
        self.name = name
        if lr_scale is None:
            lr_scale = DEFAULT_PAMM_LR_SCALE if pamm_cfg is not None else 1.0
        self.lr_scale = lr_scale

        self._saved: CompressedActivation | DenseMatrix | None = None
        self._forward_calls = 0
        self.retained_scalars = 0
        self.peak_retained_scalars = 0

    @property
    def enabled(self) -> bool:
        """Whether the backward pass uses a compressed activation."""
        return self.pamm_cfg is not None

    @property
    def saved(self) -> CompressedActivation | DenseMatrix | None:
        """What the last forward pass kept for backward."""
        return self._saved

    def _step_config(self) -> PammConfig:
        # Fresh generators every step, reproducible from the configured seed.
        seed = (self.pamm_cfg.seed + self._forward_calls) % 2**64
        return dataclasses.replace(self.pamm_cfg, seed=seed)

    def forward(self, x: DenseMatrix, shared: CompressedActivation | None = None,
                keep: bool = True) -> DenseMatrix:
        """
        Compute XW and keep what backward needs.

        :param x: Flattened input of shape (b, n), b = batch × sequence.
        :param shared: Compression of this same X made by another layer. A compressed layer
            keeps it instead of compressing again and counts none of its scalars as its own.
        :param keep: False computes XW only; nothing is compressed or saved.
        :return: Output of shape (b, m).
        """
        x = as_matrix(x, dtype=self.weight.dtype, name="X")
        if x.shape[1] != self.weight.shape[0]:
            raise ShapeError("Input width does not match weight", self.name, (x.shape, self.weight.shape))

        z = x @ self.weight
        if not keep:
            return z
        if self.enabled and shared is not None:
            if (shared.b, shared.n) != x.shape:
                raise ShapeError("Shared compression does not match the input", self.name,
                                 ((shared.b, shared.n), x.shape))
            self._saved = shared
            self.retained_scalars = 0
        elif self.enabled:
            self._saved = compress(x, self._step_config())
            self.retained_scalars = self._saved.stored_scalars
        else:
            self._saved = x
            self.retained_scalars = x.size
        self.peak_retained_scalars = max(self.peak_retained_scalars, self.retained_scalars)
        self._forward_calls += 1
        return z

    def backward(self, grad_z: DenseMatrix) -> tuple[DenseMatrix, DenseMatrix]:
        """
        Gradients with respect to the input and the weight.

        :param grad_z: Upstream gradient of shape (b, m).
        :return: ∇X = ∇Z·Wᵀ and ∇W (approximate when compressed).
        """
        if self._saved is None:
            raise LayerStateError("backward called before forward", self.name)

        grad_z = as_matrix(grad_z, dtype=self.weight.dtype, name="gradZ")
        if grad_z.shape[1] != self.weight.shape[1]:
            raise ShapeError("Gradient width does not match weight", self.name,
                             (grad_z.shape, self.weight.shape))

        grad_x = grad_z @ self.weight.T
        if isinstance(self._saved, CompressedActivation):
            grad_w = approx_matmul(self._saved, grad_z).astype(self.weight.dtype, copy=False)
            get_logger().debug("%s: approximate weight gradient, eta=%d", self.name, self._saved.eta)
        else:
            grad_w = self._saved.T @ grad_z

        self.release()
        return grad_x, grad_w

    def release(self) -> None:
        """Drop the saved activation."""
        self._saved = None
        self.retained_scalars = 0

    def __repr__(self) -> str:
        mode = f"pamm={self.pamm_cfg}" if self.enabled else "exact"
        return f"PammLinearLayer(name='{self.name}', shape={self.weight.shape}, {mode}, lr_scale={self.lr_scale})"

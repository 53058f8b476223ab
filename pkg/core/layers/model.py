"""Toy attention model: embeddings, single-head attention blocks and a classifier head."""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from core.linalg import ArgumentError, NumericError, ShapeError
from core.logger import get_logger
from core.pamm import PammConfig
from .linear import PammLinearLayer
from .optim import Optimizer, Parameter, SGD
from .tape import Tape

@dataclass
class AttentionBlock:
    """Query, key and value projections (PAMM-capable), plain output projection, residual."""

    query: PammLinearLayer
    key: PammLinearLayer
    value: PammLinearLayer
    output: PammLinearLayer

    @property
    def layers(self) -> list[PammLinearLayer]:
        return [self.query, self.key, self.value, self.output]

@dataclass
class ToyModelState:
    """Parameters, optimizer state and step counter of the toy model."""

    token_embedding: np.ndarray
    position_embedding: np.ndarray
    blocks: list[AttentionBlock]
    head: PammLinearLayer
    optimizer: Optimizer = field(default_factory=SGD)
    step: int = 0

    @property
    def vocab_size(self) -> int:
        return self.token_embedding.shape[0]

    @property
    def seq_len(self) -> int:
        return self.position_embedding.shape[0]

    @property
    def dtype(self) -> np.dtype:
        return self.token_embedding.dtype

    @property
    def layers(self) -> list[PammLinearLayer]:
        """Every linear layer, head last."""
        return [layer for block in self.blocks for layer in block.layers] + [self.head]

    @property
    def pamm_enabled(self) -> bool:
        return any(layer.enabled for layer in self.layers)

    def parameters(self) -> list[Parameter]:
        """Trainable arrays in a fixed order."""
        params = [
            Parameter("token_embedding", self.token_embedding),
            Parameter("position_embedding", self.position_embedding),
        ]
        params += [Parameter(layer.name, layer.weight, layer.lr_scale) for layer in self.layers]
        return params

    def retained_scalars(self) -> int:
        """Peak number of scalars the linear layers kept for backward."""
        return sum(layer.peak_retained_scalars for layer in self.layers)

def build_toy_model(vocab_size: int, seq_len: int, width: int, num_blocks: int = 1,
                    pamm_cfg: PammConfig | None = None, lr_scale: float | None = None,
                    optimizer: Optimizer | None = None, seed: int = 0,
                    dtype: npt.DTypeLike = np.float32, zero_head: bool = False) -> ToyModelState:
    """
    Build a randomly initialized toy model.

    :param vocab_size: Number of token classes (inputs and outputs).
    :param seq_len: Sequence length.
    :param width: Model width d.
    :param num_blocks: Attention blocks, 0 gives an embedding + head model.
    :param pamm_cfg: Compression for the query, key and value projections; None trains exactly.
    :param lr_scale: Learning-rate multiplier of the PAMM projections.
    :param optimizer: Defaults to SGD.
    :param seed: Initialization seed.
    :param dtype: float32 for training, float64 for gradient checking.
    :param zero_head: Start the classifier at zero so the first loss is ln(vocab_size).
    """
    if min(vocab_size, seq_len, width) < 1 or num_blocks < 0:
        raise ArgumentError("Model sizes must be positive", "build_toy_model")

    rng = np.random.default_rng(seed)
    dtype = np.dtype(dtype)

    def weight(rows: int, cols: int) -> np.ndarray:
        return (rng.standard_normal((rows, cols)) / np.sqrt(rows)).astype(dtype)

    token_embedding = (0.5 * rng.standard_normal((vocab_size, width))).astype(dtype)
    position_embedding = (0.5 * rng.standard_normal((seq_len, width))).astype(dtype)

    blocks = []
    for i in range(num_blocks):
        prefix = f"blocks.{i}"
        blocks.append(AttentionBlock(
            query=PammLinearLayer(weight(width, width), pamm_cfg, lr_scale, f"{prefix}.query"),
            key=PammLinearLayer(weight(width, width), pamm_cfg, lr_scale, f"{prefix}.key"),
            value=PammLinearLayer(weight(width, width), pamm_cfg, lr_scale, f"{prefix}.value"),
            output=PammLinearLayer(weight(width, width), name=f"{prefix}.output"),
        ))

    head_weight = np.zeros((width, vocab_size), dtype=dtype) if zero_head else weight(width, vocab_size)
    head = PammLinearLayer(head_weight, name="head")

    return ToyModelState(token_embedding, position_embedding, blocks, head, optimizer or SGD())

def _check_batch(state: ToyModelState, tokens: np.ndarray, targets: np.ndarray):
    if tokens.ndim != 2 or tokens.shape[1] != state.seq_len:
        raise ShapeError("Tokens must be (batch, seq_len)", "toy_model", (tokens.shape, (state.seq_len,)))
    if targets.shape != tokens.shape:
        raise ShapeError("Targets must match tokens", "toy_model", (tokens.shape, targets.shape))
    for name, values in (("tokens", tokens), ("targets", targets)):
        if values.min() < 0 or values.max() >= state.vocab_size:
            raise ArgumentError(f"{name} outside [0, {state.vocab_size})", "toy_model")

def _record_forward(state: ToyModelState, tokens: np.ndarray, targets: np.ndarray,
                    keep_activations: bool = True) -> Tape:
    tokens = np.asarray(tokens, dtype=np.int64)
    targets = np.asarray(targets, dtype=np.int64)
    _check_batch(state, tokens, targets)
    batch, seq_len = tokens.shape

    tape = Tape(keep_activations)
    x = tape.add(
        tape.embedding(state.token_embedding, tokens.reshape(-1), "token_embedding"),
        tape.embedding(state.position_embedding, np.tile(np.arange(seq_len), batch), "position_embedding"),
    )
    for block in state.blocks:
        query = tape.linear(block.query, x)
        # Key and value read the same X, so they reuse the compression made for the query.
        shared = block.query.saved if block.query.enabled else None
        key = tape.linear(block.key, x, shared)
        value = tape.linear(block.value, x, shared)
        attended = tape.attention(query, key, value, batch, seq_len)
        x = tape.add(x, tape.linear(block.output, attended))
    tape.softmax_cross_entropy(tape.linear(state.head, x), targets.reshape(-1))
    return tape

def model_loss(state: ToyModelState, tokens: np.ndarray, targets: np.ndarray) -> float:
    """Forward pass only; no layer compresses or saves its input."""
    tape = _record_forward(state, tokens, targets, keep_activations=False)
    tape.discard(state.layers)
    return tape.loss

def loss_and_gradients(state: ToyModelState, tokens: np.ndarray,
                       targets: np.ndarray) -> tuple[float, dict[str, np.ndarray]]:
    """Loss and parameter gradients by name, without updating anything."""
    tape = _record_forward(state, tokens, targets)
    return tape.loss, tape.backward()

def optimizer_step(state: ToyModelState, grads: dict[str, np.ndarray], base_lr: float) -> ToyModelState:
    """Apply one optimizer update in place and advance the step counter."""
    state.optimizer.step(state.parameters(), grads, base_lr)
    state.step += 1
    return state

def toy_attention_step(state: ToyModelState, tokens: np.ndarray, targets: np.ndarray,
                       base_lr: float) -> tuple[float, ToyModelState]:
    """
    One training step: forward, backward through PAMM-capable layers, update.

    :param state: Model to update in place.
    :param tokens: Integer inputs of shape (batch, seq_len).
    :param targets: Integer labels of the same shape.
    :param base_lr: Learning rate for this step, before per-layer scaling.
    :return: The loss before the update, and the updated state.
    :raises NumericError: If the loss is not finite; no parameter is updated.
    """
    tape = _record_forward(state, tokens, targets)
    loss = tape.loss
    if not np.isfinite(loss):
        tape.discard(state.layers)
        raise NumericError("Training loss is not finite", "toy_attention_step", step=state.step)

    grads = tape.backward()
    optimizer_step(state, grads, base_lr)
    get_logger().debug("step %d: loss=%.6f lr=%.3g", state.step, loss, base_lr)
    return loss, state

def finite_difference_check(state: ToyModelState, tokens: np.ndarray, targets: np.ndarray,
                            selector: str | Sequence[str] | None = None, probes: int = 16,
                            h: float = 1e-4, seed: int = 0, floor: float = 1e-4) -> float:
    """
    Compare analytic gradients with central differences at random coordinates.

    :param state: Model with PAMM disabled everywhere.
    :param selector: Parameter name(s) to probe; all parameters when None.
    :param probes: Number of probed coordinates.
    :param h: Perturbation size.
    :param floor: Lower limit of the denominator, so tiny gradients are compared in absolute terms.
    :return: The largest deviation |num − ana| / max(|num|, |ana|, floor).
    """
    if state.pamm_enabled:
        raise ArgumentError("Gradient checking needs PAMM disabled", "finite_difference_check")
    if probes < 1 or h <= 0:
        raise ArgumentError("Need at least one probe and a positive step", "finite_difference_check")

    params = {param.name: param for param in state.parameters()}
    if selector is None:
        names = list(params)
    else:
        names = [selector] if isinstance(selector, str) else list(selector)
    unknown = [name for name in names if name not in params]
    if unknown:
        raise ArgumentError(f"Unknown parameters: {', '.join(unknown)}", "finite_difference_check")

    _, grads = loss_and_gradients(state, tokens, targets)
    rng = np.random.default_rng(seed)

    worst = 0.0
    for _ in range(probes):
        param = params[names[rng.integers(len(names))]]
        index = np.unravel_index(rng.integers(param.value.size), param.value.shape)
        grad = grads.get(param.name)
        analytic = 0.0 if grad is None else float(grad[index])

        original = param.value[index]
        param.value[index] = original + h
        loss_plus = model_loss(state, tokens, targets)
        param.value[index] = original - h
        loss_minus = model_loss(state, tokens, targets)
        param.value[index] = original
        numeric = (loss_plus - loss_minus) / (2 * h)

        deviation = abs(numeric - analytic) / max(abs(numeric), abs(analytic), floor)
        worst = max(worst, deviation)

    get_logger().debug("Finite-difference check over %d probes: max deviation %.3g", probes, worst)
    return worst

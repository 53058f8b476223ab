"""Toy training comparison: the same model and data trained with and without PAMM."""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from core.config import TrainingConfig
from core.linalg import NumericError
from core.logger import get_logger
from core.layers import LearningRateSchedule, build_toy_model, make_optimizer, model_loss, toy_attention_step

BASELINE = "baseline"
PAMM = "pamm"
PARITY_THRESHOLD = 0.10
# Seed of the held-out batch every run is evaluated on.
EVAL_SEED = 2**32

class LossRow(NamedTuple):
    """One logged training step."""

    method: str
    seed: int
    step: int
    loss: float

@dataclass
class TrainingRun:
    """Per-step losses of one (method, seed) run."""

    method: str
    seed: int
    losses: list[float] = field(default_factory=list)
    failed_step: int | None = None
    retained_scalars: int = 0
    eval_loss: float | None = None

    @property
    def failed(self) -> bool:
        return self.failed_step is not None

    @property
    def final_loss(self) -> float | None:
        if self.failed or not self.losses:
            return None
        return self.losses[-1]

class TrainingParity(NamedTuple):
    """Final-loss gap between the methods next to the seed-to-seed spread of each."""

    baseline_loss: float | None
    pamm_loss: float | None
    relative_gap: float | None
    baseline_spread: float | None
    pamm_spread: float | None
    threshold: float

    @property
    def resolvable(self) -> bool:
        """True when the baseline varies less across seeds than the threshold allows."""
        return self.baseline_spread is not None and self.baseline_spread < self.threshold

    @property
    def within_threshold(self) -> bool:
        return self.relative_gap is not None and self.relative_gap < self.threshold

@dataclass
class TrainingComparison:
    """Runs of both methods for every seed, in (method, seed) order."""

    config: TrainingConfig
    runs: list[TrainingRun]

    def rows(self) -> list[LossRow]:
        return [LossRow(run.method, run.seed, step, loss)
                for run in self.runs for step, loss in enumerate(run.losses)]

    def _final_losses(self, method: str) -> list[float]:
        return [run.final_loss for run in self.runs if run.method == method and not run.failed]

    def _eval_losses(self, method: str) -> list[float]:
        return [run.eval_loss for run in self.runs if run.method == method and run.eval_loss is not None]

    def mean_final_loss(self, method: str) -> float | None:
        """Mean final loss over the runs of a method that did not diverge."""
        finals = self._final_losses(method)
        return float(np.mean(finals)) if finals else None

    def mean_eval_loss(self, method: str) -> float | None:
        """Mean held-out loss over the runs of a method that did not diverge."""
        losses = self._eval_losses(method)
        return float(np.mean(losses)) if losses else None

    def seed_spread(self, method: str) -> float | None:
        """(max - min) / mean of the held-out losses of a method, None with fewer than two runs."""
        losses = self._eval_losses(method)
        if len(losses) < 2 or np.mean(losses) <= 0:
            return None
        return float(np.ptp(losses) / np.mean(losses))

    def parity(self, threshold: float = PARITY_THRESHOLD) -> TrainingParity:
        """Compare mean held-out losses; the gap is relative to the baseline."""
        baseline = self.mean_eval_loss(BASELINE)
        pamm = self.mean_eval_loss(PAMM)
        gap = None
        if baseline is not None and pamm is not None and baseline > 0:
            gap = abs(pamm - baseline) / baseline
        return TrainingParity(baseline, pamm, gap, self.seed_spread(BASELINE), self.seed_spread(PAMM),
                              threshold)

def _copy_batches(cfg: TrainingConfig, rng: np.random.Generator,
                  shape: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    tokens = rng.integers(0, cfg.vocab_size, size=shape)
    targets = tokens[..., ::-1].copy()
    noisy = rng.random(shape) < cfg.label_noise
    targets[noisy] = rng.integers(0, cfg.vocab_size, size=int(noisy.sum()))
    return tokens, targets

def reverse_copy_task(cfg: TrainingConfig, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Token batches for every step: the target is the input sequence reversed.

    A `label_noise` fraction of targets is replaced by random tokens, so the loss
    cannot reach zero.

    :return: Tokens and targets, both of shape (steps, batch, seq_len).
    """
    rng = np.random.default_rng([seed, 2])
    return _copy_batches(cfg, rng, (cfg.steps, cfg.batch_size, cfg.seq_len))

def evaluation_batch(cfg: TrainingConfig) -> tuple[np.ndarray, np.ndarray]:
    """Held-out batch of shape (eval_batch_size, seq_len), identical for every seed and method."""
    rng = np.random.default_rng([EVAL_SEED, 2])
    return _copy_batches(cfg, rng, (cfg.eval_batch_size, cfg.seq_len))

def train_run(cfg: TrainingConfig, seed: int, use_pamm: bool) -> TrainingRun:
    """Train one model; a non-finite loss ends the run and marks it failed."""
    method = PAMM if use_pamm else BASELINE
    state = build_toy_model(
        cfg.vocab_size, cfg.seq_len, cfg.width, cfg.num_blocks,
        pamm_cfg=cfg.pamm_config(seed) if use_pamm else None,
        lr_scale=cfg.lr_scale if use_pamm else None,
        optimizer=make_optimizer(cfg.optimizer),
        seed=seed,
        dtype=cfg.numpy_dtype,
        zero_head=cfg.zero_head,
    )
    schedule = LearningRateSchedule(cfg.base_lr, cfg.steps, cfg.schedule)
    tokens, targets = reverse_copy_task(cfg, seed)

    run = TrainingRun(method, seed)
    for step in range(cfg.steps):
        try:
            loss, state = toy_attention_step(state, tokens[step], targets[step], schedule.rate(step))
        except NumericError as e:
            get_logger().warning("%s run with seed %d diverged: %s", method, seed, e)
            run.failed_step = step
            break
        run.losses.append(loss)

    run.retained_scalars = state.retained_scalars()
    if not run.failed:
        eval_loss = model_loss(state, *evaluation_batch(cfg))
        if np.isfinite(eval_loss):
            run.eval_loss = eval_loss
        else:
            get_logger().warning("%s run with seed %d has a non-finite held-out loss", method, seed)
    return run

def train_toy_comparison(cfg: TrainingConfig) -> TrainingComparison:
    """
    Train the toy model twice per seed, with and without PAMM, on the same data order.

    Diverged runs are recorded as failed and the comparison carries on.
    """
    logger = get_logger()
    runs = []
    for seed in cfg.seeds:
        for use_pamm in (False, True):
            run = train_run(cfg, seed, use_pamm)
            logger.info("%s seed=%d: final loss %s, held-out loss %s after %d steps", run.method, seed,
                        "diverged" if run.failed else f"{run.final_loss:.4f}",
                        "n/a" if run.eval_loss is None else f"{run.eval_loss:.4f}", len(run.losses))
            runs.append(run)
    return TrainingComparison(cfg, runs)

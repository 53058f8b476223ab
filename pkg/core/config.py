"""Provides training config utilities."""

from dataclasses import dataclass, field
import json
from typing import Any

import numpy as np

from core.layers import OptimizerKind, ScheduleKind
from core.linalg import ArgumentError
from core.pamm import INFINITY, PammConfig, format_epsilon, parse_epsilon

@dataclass
class TrainingConfig:
    """Represents a toy training comparison: model size, task, optimizer and PAMM settings."""

    vocab_size: int = 16
    seq_len: int = 8
    batch_size: int = 8
    width: int = 16
    num_blocks: int = 1
    steps: int = 200
    seeds: list[int] = field(default_factory=lambda: [0])
    base_lr: float = 0.01
    optimizer: str = "adam"
    schedule: str = "constant"
    ratio: float | None = 0.125
    k: int | None = None
    epsilon: float = INFINITY
    lr_scale: float = 0.25
    label_noise: float = 0.2
    eval_batch_size: int = 256
    dtype: str = "float32"
    zero_head: bool = False

    def __post_init__(self):
        """Post-initialization to normalise and validate values read from JSON."""
        self.epsilon = parse_epsilon(self.epsilon)
        self.seeds = [int(seed) for seed in self.seeds]

        if min(self.vocab_size, self.seq_len, self.batch_size, self.width, self.steps,
               self.eval_batch_size) < 1:
            raise ArgumentError("Sizes and step count must be positive", "TrainingConfig")
        if self.num_blocks not in (0, 1, 2):
            raise ArgumentError(f"num_blocks must be 0, 1 or 2, got {self.num_blocks}", "TrainingConfig")
        if not self.seeds:
            raise ArgumentError("At least one seed is required", "TrainingConfig")
        if self.base_lr <= 0 or self.lr_scale <= 0:
            raise ArgumentError("Learning rate and lr_scale must be positive", "TrainingConfig")
        if not 0 <= self.label_noise < 1:
            raise ArgumentError(f"label_noise must be in [0, 1), got {self.label_noise}", "TrainingConfig")
        if self.dtype not in ("float32", "float64"):
            raise ArgumentError(f"dtype must be float32 or float64, got {self.dtype}", "TrainingConfig")
        if self.optimizer not in tuple(OptimizerKind) or self.schedule not in tuple(ScheduleKind):
            raise ArgumentError(f"Unknown optimizer {self.optimizer!r} or schedule {self.schedule!r}",
                                "TrainingConfig")
        # Fails early on an inconsistent ratio / k pair.
        self.pamm_config(0)

    @property
    def rows(self) -> int:
        """Rows every PAMM layer compresses: batch × sequence."""
        return self.batch_size * self.seq_len

    @property
    def numpy_dtype(self) -> np.dtype:
        return np.dtype(self.dtype)

    def pamm_config(self, seed: int) -> PammConfig:
        """Compression settings of the PAMM run for one seed."""
        return PammConfig(ratio=self.ratio if self.k is None else None, k=self.k,
                          epsilon=self.epsilon, seed=seed)

    def to_dict(self) -> dict[str, Any]:
        """JSON-friendly form."""
        data = dict(self.__dict__)
        data["epsilon"] = format_epsilon(self.epsilon)
        return data

    @staticmethod
    def from_dict(data: dict[str, Any]) -> 'TrainingConfig':
        """Creates a config from a dictionary."""
        return TrainingConfig(**data)

    @staticmethod
    def from_file(path: str) -> 'TrainingConfig':
        """Creates a config from file."""
        with open(path, "r", encoding="utf-8") as config_file:
            data: dict[str, Any] = json.load(config_file)
        try:
            return TrainingConfig.from_dict(data)
        except TypeError as e:
            raise ArgumentError(f"Invalid training config {path}: {e}", "TrainingConfig") from e

"""
Layers Module

A linear layer that can keep a compressed activation instead of its input, a minimal
reverse-mode tape, optimizers and a toy attention model for training comparisons.
"""

from .exceptions import LayerStateError
from .linear import DEFAULT_PAMM_LR_SCALE, PammLinearLayer
from .model import (
    AttentionBlock,
    ToyModelState,
    build_toy_model,
    finite_difference_check,
    loss_and_gradients,
    model_loss,
    optimizer_step,
    toy_attention_step,
)
from .optim import (
    SGD,
    Adam,
    LearningRateSchedule,
    Optimizer,
    OptimizerKind,
    Parameter,
    ScheduleKind,
    make_optimizer,
)
from .tape import Tape, Variable

__all__ = [
    'Adam',
    'AttentionBlock',
    'DEFAULT_PAMM_LR_SCALE',
    'LayerStateError',
    'LearningRateSchedule',
    'Optimizer',
    'OptimizerKind',
    'Parameter',
    'PammLinearLayer',
    'SGD',
    'ScheduleKind',
    'Tape',
    'ToyModelState',
    'Variable',
    'build_toy_model',
    'finite_difference_check',
    'loss_and_gradients',
    'make_optimizer',
    'model_loss',
    'optimizer_step',
    'toy_attention_step',
]

import json
import math
from pathlib import Path

import numpy as np
import pytest

from core.config import TrainingConfig
from core.linalg import ArgumentError

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def test_shipped_config_loads():
    cfg = TrainingConfig.from_file(str(CONFIG_DIR / "toy_attention.json"))
    assert cfg.seeds == [0, 1, 2]
    assert math.isinf(cfg.epsilon)
    assert cfg.rows == 64
    assert cfg.pamm_config(1).effective_k(cfg.rows) == 8
    assert cfg.numpy_dtype == np.float32


def test_round_trip_through_json(tmp_path):
    cfg = TrainingConfig(epsilon=0.25, k=4, ratio=None, seeds=[3, 4])
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_dict()))
    assert TrainingConfig.from_file(str(path)) == cfg


@pytest.mark.parametrize("overrides", [
    {"steps": 0},
    {"num_blocks": 3},
    {"seeds": []},
    {"base_lr": 0.0},
    {"label_noise": 1.0},
    {"eval_batch_size": 0},
    {"dtype": "float16"},
    {"optimizer": "rmsprop"},
    {"schedule": "linear"},
    {"epsilon": -0.5},
    {"ratio": 1.5},
])
def test_invalid_values(overrides):
    with pytest.raises(ArgumentError):
        TrainingConfig(**overrides)


def test_unknown_key_in_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"vocab_size": 8, "hidden": 3}))
    with pytest.raises(ArgumentError):
        TrainingConfig.from_file(str(path))

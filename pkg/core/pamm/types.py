"""Types for PAMM compression."""

import json
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from core.linalg import DEFAULT_NORM_GUARD, ArgumentError, DenseMatrix

INFINITY = math.inf

def parse_epsilon(value: str | float | int) -> float:
    """
    Parse a tolerance: a non-negative real or `inf`.

    :param value: Number or text such as "0.5", "inf", "Infinity".
    :return: The tolerance, `math.inf` when the neighborhood condition is disabled.
    """
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "infinity", "+inf"):
            return INFINITY
        try:
            value = float(text)
        except ValueError as e:
            raise ArgumentError(f"Invalid epsilon: {value!r}", "parse_epsilon") from e

    epsilon = float(value)
    if math.isnan(epsilon) or epsilon < 0:
        raise ArgumentError(f"Epsilon must be non-negative or inf, got {value!r}", "parse_epsilon")
    return epsilon

def format_epsilon(epsilon: float) -> str:
    """Text form used on the command line and in CSV files."""
    return "inf" if math.isinf(epsilon) else repr(float(epsilon))

@dataclass
class PammConfig:
    """Compression settings: how many generators, which tolerance, which seed."""

    ratio: float | None = None
    k: int | None = None
    epsilon: float = INFINITY
    seed: int = 0
    norm_guard: float = DEFAULT_NORM_GUARD
    use_beta: bool = True

    def __post_init__(self):
        if (self.ratio is None) == (self.k is None):
            raise ArgumentError("Exactly one of ratio and k must be set", "PammConfig")
        if self.ratio is not None and not 0 < self.ratio <= 1:
            raise ArgumentError(f"Compression ratio must be in (0, 1], got {self.ratio}", "PammConfig")
        if self.k is not None and self.k < 1:
            raise ArgumentError(f"k must be at least 1, got {self.k}", "PammConfig")
        self.epsilon = parse_epsilon(self.epsilon)
        if self.norm_guard < 0:
            raise ArgumentError(f"norm_guard must be non-negative, got {self.norm_guard}", "PammConfig")

    def effective_k(self, b: int) -> int:
        """Number of generators for a matrix with b rows, k = ⌈r·b⌉ when a ratio is set."""
        if self.k is not None:
            return self.k
        # Rounding first keeps exact products such as 0.1 * 30 from ceiling to 4.
        return max(1, math.ceil(round(self.ratio * b, 9)))

    def to_dict(self) -> dict[str, Any]:
        """JSON-friendly form; epsilon uses its text spelling."""
        return {
            "ratio": self.ratio,
            "k": self.k,
            "epsilon": format_epsilon(self.epsilon),
            "seed": self.seed,
            "norm_guard": self.norm_guard,
            "use_beta": self.use_beta,
        }

    @staticmethod
    def from_dict(data: dict[str, Any]) -> 'PammConfig':
        """Creates a config from a dictionary."""
        return PammConfig(**data)

    @staticmethod
    def from_file(path: str) -> 'PammConfig':
        """Creates a config from a JSON file."""
        with open(path, "r", encoding="utf-8") as config_file:
            data: dict[str, Any] = json.load(config_file)
            return PammConfig.from_dict(data)

@dataclass(frozen=True, eq=False)
class CompressedActivation:
    """
    Compressed form of a b×n matrix A.

    Row i of A is represented by alpha[i] * generators[assignments[i]]; a dropped row has
    alpha[i] == 0. `beta` rescales the approximate product and is None when every row was
    dropped.
    """

    generators: DenseMatrix
    assignments: npt.NDArray[np.int64]
    alpha: npt.NDArray[np.floating]
    beta: float | None
    b: int
    n: int
    k: int
    eta: int
    epsilon: float
    seed: int
    norm_guard: float = DEFAULT_NORM_GUARD

    def __post_init__(self):
        for array in (self.generators, self.assignments, self.alpha):
            array.setflags(write=False)

    @property
    def coverage(self) -> float:
        """Fraction of rows with a surviving representative."""
        return (self.b - self.eta) / self.b

    @property
    def kept_mask(self) -> npt.NDArray[np.bool_]:
        """Rows whose representative is non-zero."""
        return self.alpha != 0

    @property
    def stored_scalars(self) -> int:
        """Scalars held by this object: generators, coefficients and assignments."""
        return self.k * self.n + 2 * self.b

    def __repr__(self) -> str:
        beta = "undefined" if self.beta is None else f"{self.beta:.6g}"
        return (
            f"CompressedActivation(b={self.b}, n={self.n}, k={self.k}, "
            f"eta={self.eta}, beta={beta}, epsilon={format_epsilon(self.epsilon)})"
        )

@dataclass
class PammErrorReport:
    """Quality of one approximate product."""

    relative_error: float
    coverage: float
    eta: int
    bound_rhs: float | None
    exact_norm: float

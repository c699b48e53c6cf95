"""Types for the fixed-topology feedforward network."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class Topology(BaseModel):
    """Layer widths of the single-hidden-layer network."""

    model_config = ConfigDict(frozen=True)

    input_len: int = Field(ge=1)
    hidden_len: int = Field(ge=1)
    output_len: int = Field(default=1, ge=1)

    @property
    def dimension(self) -> int:
        """Length D of the flattened parameter vector."""
        return (
            self.input_len * self.hidden_len
            + self.hidden_len
            + self.hidden_len * self.output_len
            + self.output_len
        )


class BPConfig(BaseModel):
    """Full-batch momentum gradient descent settings.

    ``learning_rate`` and ``momentum`` default to the published alpha=0.07
    and eta=0.80.
    """

    model_config = ConfigDict(frozen=True)

    learning_rate: float = Field(default=0.07, gt=0)
    momentum: float = Field(default=0.8, ge=0, lt=1)
    max_epochs: int = Field(default=5000, ge=0)
    target_loss: float = Field(default=0.005, gt=0)
    init_range: float = Field(default=0.5, gt=0, description="Symmetric bound for uniform weight init")


@dataclass(frozen=True)
class NetworkParams:
    """Weights and biases: hidden = sigmoid(w1 @ x + b1), output = w2 @ hidden + b2."""

    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    def __post_init__(self) -> None:
        hidden, _ = self.w1.shape
        output = self.w2.shape[0]
        if self.b1.shape != (hidden,) or self.w2.shape != (output, hidden) or self.b2.shape != (output,):
            raise ValueError(
                f"inconsistent layer shapes: w1 {self.w1.shape}, b1 {self.b1.shape}, "
                f"w2 {self.w2.shape}, b2 {self.b2.shape}"
            )
        for array in (self.w1, self.b1, self.w2, self.b2):
            if not np.all(np.isfinite(array)):
                raise ValueError("network parameters must be finite")
            array.setflags(write=False)

    @property
    def topology(self) -> Topology:
        return Topology(input_len=self.w1.shape[1], hidden_len=self.w1.shape[0], output_len=self.w2.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NetworkParams):
            return NotImplemented
        return all(
            np.array_equal(a, b)
            for a, b in ((self.w1, other.w1), (self.b1, other.b1), (self.w2, other.w2), (self.b2, other.b2))
        )


class Gradient(NetworkParams):
    """Partial derivatives of the loss, shaped like :class:`NetworkParams`."""

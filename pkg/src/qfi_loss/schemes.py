"""Estimation schemes: channel, input state, ancilla count and loss pattern."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import ChannelFamily
from .states import equatorial_state, ghz_state, bell_state, w_state, basis_state
from .linalg import tensor_product

CHANNELS = ("depolarizing", "phase-flip")
INPUTS = ("ghz", "w", "sep", "bell")

_CHANNEL_ALIASES = {
    "dep": "depolarizing",
    "depolarizing": "depolarizing",
    "ph": "phase-flip",
    "phase-flip": "phase-flip",
    "phaseflip": "phase-flip",
}
_INPUT_ALIASES = {
    "ghz": "ghz",
    "w": "w",
    "sep": "sep",
    "separable": "sep",
    "separable-optimal": "sep",
    "bell": "bell",
    "bell-optimal": "bell",
}
SHORT_CHANNEL = {"depolarizing": "dep", "phase-flip": "ph"}


def channel_name(name: str) -> str:
    try:
        return _CHANNEL_ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown channel {name!r}") from None


def input_name(name: str) -> str:
    try:
        return _INPUT_ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown input state {name!r}") from None


@dataclass(frozen=True, order=True)
class Scheme:
    """A probe + ``n`` ancilla register fed with ``input`` and sent through ``channel``.

    After the channel the last ``l`` ancillas are discarded, plus the probe
    itself when ``probe_lost`` is set. ``sep`` feeds the equatorial state on
    the probe with ancillas in ``|0>``; ``bell`` pairs the probe with the
    first ancilla in ``phi+`` and leaves the rest in ``|0>``.
    """

    channel: str
    input: str
    n: int
    l: int = 0
    probe_lost: bool = False

    def __post_init__(self):
        object.__setattr__(self, "channel", channel_name(self.channel))
        object.__setattr__(self, "input", input_name(self.input))
        if self.n < 0:
            raise ValueError(f"number of ancillas must be nonnegative, got {self.n}")
        if not 0 <= self.l <= self.n:
            raise ValueError(f"lost ancillas l={self.l} must satisfy 0 <= l <= n={self.n}")
        if self.input in ("ghz", "bell") and self.n < 1:
            raise ValueError(f"{self.input} input needs at least one ancilla")
        if self.probe_lost and self.l == self.n:
            raise ValueError("losing the probe and every ancilla leaves nothing to measure")

    @property
    def label(self) -> str:
        tag = {"ghz": "GHZ", "w": "W", "sep": "sep", "bell": "Bell"}[self.input]
        s = f"{SHORT_CHANNEL[self.channel]}/{tag}-{self.n} l={self.l}"
        return s + " probe-lost" if self.probe_lost else s

    def family(self) -> ChannelFamily:
        return ChannelFamily(self.channel, self.n)

    def input_state(self) -> np.ndarray:
        if self.input == "ghz":
            return ghz_state(self.n)
        if self.input == "w":
            return w_state(self.n)
        if self.input == "sep":
            psi = equatorial_state(0.0)
            return tensor_product(psi, basis_state("0" * self.n)) if self.n else psi
        psi = bell_state("phi+")
        return tensor_product(psi, basis_state("0" * (self.n - 1))) if self.n > 1 else psi

    def loss_pattern(self) -> tuple[int, ...]:
        lost = tuple(range(self.n + 1 - self.l, self.n + 1))
        return (0,) + lost if self.probe_lost else lost

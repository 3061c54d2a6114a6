"""Pure input states: basis products, Bell, GHZ, W and equatorial states.

Amplitude vectors use the probe-as-most-significant-bit convention of
:mod:`qfi_loss.linalg`. Every constructor returns a real nonnegative
amplitude on the first nonzero basis component.
"""

from __future__ import annotations

import numpy as np

from .linalg import check_dense_dim


def _register(n: int) -> int:
    if n < 0:
        raise ValueError(f"number of ancillas must be nonnegative, got {n}")
    dim = 2 ** (n + 1)
    check_dense_dim(dim)
    return dim


def basis_state(bits: str) -> np.ndarray:
    """Computational basis ket from a bit string, e.g. ``"010"``."""
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"invalid bit string {bits!r}")
    check_dense_dim(2 ** len(bits))
    psi = np.zeros(2 ** len(bits), dtype=complex)
    psi[int(bits, 2)] = 1.0
    return psi


def ghz_state(n: int) -> np.ndarray:
    """``(|0,0_n> + |1,1_n>)/sqrt(2)`` on ``n + 1`` qubits."""
    dim = _register(n)
    psi = np.zeros(dim, dtype=complex)
    psi[0] = psi[dim - 1] = 1 / np.sqrt(2)
    return psi


def w_state(n: int) -> np.ndarray:
    """Single excitation spread evenly over ``n + 1`` qubits."""
    dim = _register(n)
    psi = np.zeros(dim, dtype=complex)
    for q in range(n + 1):
        psi[1 << (n - q)] = 1 / np.sqrt(n + 1)
    return psi


_BELL = {
    "phi+": (0b00, 0b11, 1),
    "phi-": (0b00, 0b11, -1),
    "psi+": (0b01, 0b10, 1),
    "psi-": (0b01, 0b10, -1),
}


def bell_state(which: str) -> np.ndarray:
    """One of the four Bell states: ``phi+``, ``phi-``, ``psi+``, ``psi-``."""
    key = which.replace("−", "-")
    try:
        i, j, sign = _BELL[key]
    except KeyError:
        raise ValueError(f"unknown Bell state {which!r}; expected one of {sorted(_BELL)}") from None
    psi = np.zeros(4, dtype=complex)
    psi[i] = 1 / np.sqrt(2)
    psi[j] = sign / np.sqrt(2)
    return psi


def equatorial_state(phi: float = 0.0) -> np.ndarray:
    """``(|0> + exp(-i phi)|1>)/sqrt(2)``, a Bloch vector in the xy-plane."""
    return np.array([1.0, np.exp(-1j * phi)], dtype=complex) / np.sqrt(2)


def density_of(psi: np.ndarray) -> np.ndarray:
    """Projector ``|psi><psi|``."""
    psi = np.asarray(psi, dtype=complex).ravel()
    return np.outer(psi, psi.conj())

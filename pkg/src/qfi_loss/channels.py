"""Qubit channels as Kraus sets, their identity extensions, and exact p-derivatives."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import check_dense_dim, num_qubits, tensor_product

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)

COMPLETENESS_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """CPTP map ``rho -> sum_i K_i rho K_i^dagger`` with ``K_i = E_i (x) I^(x)n``.

    ``ops`` holds the local operators ``E_i`` acting on the leading qubits of
    the register; ``n_ancillas`` trailing qubits are left untouched. Zero
    weight operators are kept so that the set size depends only on the family.
    """

    ops: tuple[np.ndarray, ...]
    n_ancillas: int = 0

    def __post_init__(self):
        if not self.ops:
            raise ValueError("a Kraus set needs at least one operator")
        ops = tuple(np.asarray(e, dtype=complex) for e in self.ops)
        d = ops[0].shape[0]
        if any(e.shape != (d, d) for e in ops):
            raise ValueError("Kraus operators must share one square shape")
        if self.n_ancillas < 0:
            raise ValueError("n_ancillas must be nonnegative")
        check_dense_dim(d * 2**self.n_ancillas)
        gram = sum(e.conj().T @ e for e in ops)
        if np.max(np.abs(gram - np.eye(d))) > COMPLETENESS_TOL:
            raise ValueError("Kraus operators violate completeness sum_i E_i^dag E_i = I")
        object.__setattr__(self, "ops", ops)

    @property
    def local_dim(self) -> int:
        return self.ops[0].shape[0]

    @property
    def dim(self) -> int:
        return self.local_dim * 2**self.n_ancillas

    @property
    def kraus_ops(self) -> list[np.ndarray]:
        """The full-register Kraus operators ``E_i (x) I^(x)n``."""
        eye = np.eye(2**self.n_ancillas, dtype=complex)
        return [tensor_product(e, eye) for e in self.ops]


def depolarizing(p: float) -> KrausChannel:
    """``rho -> p I/2 + (1 - p) rho``."""
    _check_prob(p)
    return KrausChannel(
        (np.sqrt(1 - 3 * p / 4) * I2, np.sqrt(p / 4) * X, np.sqrt(p / 4) * Y, np.sqrt(p / 4) * Z)
    )


def phase_flip(p: float) -> KrausChannel:
    """Apply ``Z`` with probability ``p``."""
    _check_prob(p)
    return KrausChannel((np.sqrt(1 - p) * I2, np.sqrt(p) * Z))


def pauli_channel(p1: float, p2: float, p3: float) -> KrausChannel:
    """``(1 - p1 - p2 - p3) rho + p1 X rho X + p2 Y rho Y + p3 Z rho Z``."""
    total = p1 + p2 + p3
    if min(p1, p2, p3) < 0 or total > 1 + 1e-15:
        raise ValueError(f"invalid Pauli weights ({p1}, {p2}, {p3})")
    p0 = max(1.0 - total, 0.0)
    return KrausChannel(
        (np.sqrt(p0) * I2, np.sqrt(p1) * X, np.sqrt(p2) * Y, np.sqrt(p3) * Z)
    )


def unitary_channel(u: np.ndarray) -> KrausChannel:
    return KrausChannel((np.asarray(u, dtype=complex),))


def extend(ch: KrausChannel, n: int) -> KrausChannel:
    """Extend ``ch`` by the identity on ``n`` further ancilla qubits."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return KrausChannel(ch.ops, ch.n_ancillas + n)


def apply(ch: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """``sum_i K_i rho K_i^dagger``; also valid for non-state operators such as derivatives."""
    rho = np.asarray(rho)
    if rho.shape != (ch.dim, ch.dim):
        raise ValueError(f"dimension mismatch: channel acts on {ch.dim}, operator is {rho.shape}")
    d, a = ch.local_dim, 2**ch.n_ancillas
    t = rho.reshape(d, a, d, a)
    out = np.zeros_like(t, dtype=complex)
    for e in ch.ops:
        out += np.einsum("ab,bjcl,dc->ajdl", e, t, e.conj(), optimize=True)
    return out.reshape(ch.dim, ch.dim)


def _check_prob(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"parameter p must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class ChannelFamily:
    """One-parameter channel family ``p -> E_p (x) Id^(x)n``.

    ``kind`` is ``"depolarizing"``, ``"phase-flip"`` or ``"pauli"``. A Pauli
    family moves along the ray ``(p1, p2, p3) = p * weights`` of the simplex,
    so ``weights`` must be nonnegative with sum at most 1.
    """

    kind: str
    n_ancillas: int = 0
    weights: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown channel family {self.kind!r}")
        if self.kind == "pauli":
            w = self.weights
            if min(w) < 0 or sum(w) > 1 + 1e-15:
                raise ValueError(f"invalid Pauli direction {w}")

    @property
    def dim(self) -> int:
        return 2 ** (self.n_ancillas + 1)

    def local(self, p: float) -> KrausChannel:
        if self.kind == "depolarizing":
            return depolarizing(p)
        if self.kind == "phase-flip":
            return phase_flip(p)
        _check_prob(p)
        return pauli_channel(*(p * w for w in self.weights))

    def at(self, p: float) -> KrausChannel:
        return extend(self.local(p), self.n_ancillas)


FAMILY_KINDS = ("depolarizing", "phase-flip", "pauli")


def output_derivative(fam: ChannelFamily, rho_in: np.ndarray) -> np.ndarray:
    """Exact ``d rho_out / d p``.

    All families are affine in ``p``, so the derivative is the constant
    ``rho_out(1) - rho_out(0)``.
    """
    if num_qubits(rho_in) != fam.n_ancillas + 1:
        raise ValueError("input state does not match the family register")
    return apply(fam.at(1.0), rho_in) - apply(fam.at(0.0), rho_in)

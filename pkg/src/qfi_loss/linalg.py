"""Dense complex linear algebra on qubit registers.

Qubit 0 (the probe) is the most significant bit of a computational-basis
index, so ``|q0 q1 ... q_n>`` maps to ``int("q0q1...q_n", 2)``.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from .errors import DimensionError

#: Largest dense Hilbert-space dimension (12 qubits: probe + 11 ancillas).
DENSE_DIM_CAP = 2**12

HERMITIAN_TOL = 1e-10
PSD_CLIP_TOL = 1e-10


def num_qubits(mat: np.ndarray) -> int:
    """Number of qubits of a square ``2**k`` operator."""
    dim = mat.shape[0]
    if mat.ndim != 2 or mat.shape[1] != dim or dim < 1 or dim & (dim - 1):
        raise ValueError(f"expected a square 2^k x 2^k matrix, got shape {mat.shape}")
    return dim.bit_length() - 1


def check_dense_dim(dim: int) -> None:
    if dim > DENSE_DIM_CAP:
        raise DimensionError(
            f"dense dimension {dim} exceeds cap {DENSE_DIM_CAP}; use the compressed path"
        )


def tensor_product(*mats: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices (or vectors)."""
    if not mats:
        raise ValueError("tensor_product needs at least one operand")
    out = np.asarray(mats[0])
    for m in mats[1:]:
        m = np.asarray(m)
        rows = out.shape[0] * m.shape[0]
        cols = out.shape[1] * m.shape[1] if out.ndim == 2 else 1
        check_dense_dim(max(rows, cols))
        out = np.kron(out, m)
    if not np.all(np.isfinite(out)):
        raise ValueError("non-finite entries in tensor product")
    return out


def partial_trace(rho: np.ndarray, traced: Iterable[int]) -> np.ndarray:
    """Trace out the qubits listed in ``traced``.

    The remaining qubits keep their relative order. Works for any square
    ``2**k`` operator, not only density matrices (the derivative of a state
    goes through the same map).
    """
    nq = num_qubits(rho)
    traced = sorted(set(int(q) for q in traced))
    if any(q < 0 or q >= nq for q in traced):
        raise ValueError(f"qubit index out of range for a {nq}-qubit register: {traced}")
    if len(traced) == nq:
        raise ValueError("cannot trace out the whole register")
    if not traced:
        return np.array(rho, copy=True)
    keep = [q for q in range(nq) if q not in traced]
    dk, dt = 2 ** len(keep), 2 ** len(traced)
    t = rho.reshape([2] * (2 * nq))
    perm = keep + traced + [nq + q for q in keep] + [nq + q for q in traced]
    t = t.transpose(perm).reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return m.shape[0] == m.shape[1] and float(np.max(np.abs(m - m.conj().T), initial=0.0)) <= tol


def herm_eig(m: np.ndarray, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending and orthonormal
    eigenvectors in the columns of ``v``.

    Raises:
        ValueError: if ``m`` deviates from Hermitian by more than ``tol``.
    """
    m = np.asarray(m)
    if not is_hermitian(m, tol):
        raise ValueError("matrix is not Hermitian")
    # symmetrize so LAPACK sees an exactly Hermitian input
    return np.linalg.eigh(0.5 * (m + m.conj().T))


def psd_sqrt(m: np.ndarray, tol: float = PSD_CLIP_TOL) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix.

    Eigenvalues in ``[-tol, 0)`` are clipped to zero; anything more negative
    is an error.
    """
    w, v = herm_eig(m)
    if w.size and w[0] < -tol:
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {w[0]:.3e})")
    s = np.sqrt(np.clip(w, 0.0, None))
    return (v * s) @ v.conj().T


def trace_norm(m: np.ndarray) -> float:
    """Sum of singular values, ``tr sqrt(m m^dagger)``."""
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def validate_density(rho: np.ndarray, tol: float = 1e-12) -> None:
    """Raise ``ValueError`` unless ``rho`` is Hermitian, unit-trace and PSD within ``tol``."""
    num_qubits(rho)
    if not np.all(np.isfinite(rho)):
        raise ValueError("density operator has non-finite entries")
    if not is_hermitian(rho, tol):
        raise ValueError("density operator is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise ValueError(f"density operator has trace {tr.real:.15g}, expected 1")
    if np.linalg.eigvalsh(rho)[0] < -tol:
        raise ValueError("density operator is not positive semidefinite")


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    r"""Uhlmann fidelity :math:`F = \|\sqrt\rho\sqrt\sigma\|_1^2`."""
    if rho.shape != sigma.shape:
        raise ValueError(f"layout mismatch: {rho.shape} vs {sigma.shape}")
    f = trace_norm(psd_sqrt(rho) @ psd_sqrt(sigma)) ** 2
    return float(min(max(f, 0.0), 1.0))


def bures_distance_sq(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Squared Bures distance ``2 (1 - sqrt(F))``."""
    return 2.0 * (1.0 - np.sqrt(fidelity(rho, sigma)))

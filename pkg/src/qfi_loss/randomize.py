"""Random states, unitaries and channels for the property suites."""

from __future__ import annotations

import numpy as np

from .channels import ChannelFamily, KrausChannel
from .qfi import StateFamily, channel_state_family


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_pure(dim: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return psi / np.linalg.norm(psi)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random density operator of the given rank (full rank by default)."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    h = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (h + h.conj().T)


def random_channel(dim: int, rng: np.random.Generator, n_kraus: int = 3) -> KrausChannel:
    """Random CPTP map from a Haar isometry ``C^dim -> C^dim (x) C^n_kraus``."""
    v = random_unitary(dim * n_kraus, rng)[:, :dim]
    ops = tuple(v[k * dim:(k + 1) * dim, :] for k in range(n_kraus))
    # re-orthonormalize against rounding so completeness holds to 1e-12
    gram = sum(e.conj().T @ e for e in ops)
    w, u = np.linalg.eigh(gram)
    fix = (u / np.sqrt(w)) @ u.conj().T
    return KrausChannel(tuple(e @ fix for e in ops))


def random_family(rng: np.random.Generator, n_ancillas: int | None = None, mixed: bool | None = None) -> StateFamily:
    """A random channel-generated state family ``p -> (rho(p), d rho/dp)``."""
    n = int(rng.integers(0, 3)) if n_ancillas is None else n_ancillas
    kind = ("depolarizing", "phase-flip", "pauli")[int(rng.integers(0, 3))]
    weights = (0.0, 0.0, 0.0)
    if kind == "pauli":
        w = rng.random(3)
        weights = tuple(float(x) for x in w / w.sum())
    fam = ChannelFamily(kind, n, weights)
    dim = 2 ** (n + 1)
    mixed = bool(rng.integers(0, 2)) if mixed is None else mixed
    if mixed:
        rho_in = random_density(dim, rng)
    else:
        psi = random_pure(dim, rng)
        rho_in = np.outer(psi, psi.conj())
    return channel_state_family(fam, rho_in)

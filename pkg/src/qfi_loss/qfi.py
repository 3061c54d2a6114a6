"""Quantum Fisher information: pure-state, spectral (SLD) and Bures finite-difference routes.

Also hosts the property checkers (monotonicity, unitary invariance,
convexity, additivity) used by the test suite and ``verify``.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .channels import ChannelFamily, KrausChannel, apply, output_derivative
from .errors import DomainError
from .linalg import fidelity, herm_eig, is_hermitian, partial_trace, tensor_product
from .states import density_of

#: cutoff on p_i + p_j below which an eigenpair term is dropped
DEGENERACY_TOL = 1e-12
FD_STEP = 1e-3
ORACLE_DOMAIN = (0.02, 0.98)

METHODS = ("pure", "sld", "fidelity-fd", "closed-form", "compressed")

#: a parametrized state source; returns ``(rho(p), d rho / d p)``
StateFamily = Callable[[float], "tuple[np.ndarray, np.ndarray]"]


@dataclass
class QfiEvaluation:
    value: float
    method: str
    p: float = float("nan")
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown QFI method tag {self.method!r}")

    def __float__(self) -> float:
        return float(self.value)


def check_open_unit(p: float, what: str = "p") -> None:
    if not 0.0 < p < 1.0:
        raise DomainError(f"{what} must lie strictly inside (0, 1), got {p}")


def qfi_pure(psi: np.ndarray, dpsi: np.ndarray, p: float = float("nan")) -> QfiEvaluation:
    """``4 (<dpsi|dpsi> - |<dpsi|psi>|^2)`` for a normalized pure-state family."""
    psi = np.asarray(psi, dtype=complex).ravel()
    dpsi = np.asarray(dpsi, dtype=complex).ravel()
    if psi.shape != dpsi.shape:
        raise ValueError(f"dimension mismatch: {psi.shape} vs {dpsi.shape}")
    val = 4.0 * (np.vdot(dpsi, dpsi).real - abs(np.vdot(dpsi, psi)) ** 2)
    return QfiEvaluation(max(float(val), 0.0), "pure", p)


def qfi_sld(
    rho: np.ndarray, drho: np.ndarray, p: float = float("nan"), tol: float = DEGENERACY_TOL
) -> QfiEvaluation:
    r"""Spectral QFI :math:`\sum_{p_i + p_j > \tau} 2 |\langle i|\partial\rho|j\rangle|^2 / (p_i + p_j)`.

    Diagonal terms reproduce the classical part :math:`\sum (\partial p_i)^2/p_i`,
    off-diagonal terms the quantum part. Pairs whose eigenvalue sum does not
    exceed ``tol`` are skipped and counted in ``diagnostics["dropped_pairs"]``.
    """
    drho = np.asarray(drho)
    if drho.shape != rho.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {drho.shape}")
    if not is_hermitian(drho):
        raise ValueError("state derivative is not Hermitian")
    if abs(np.trace(drho)) > 1e-10:
        raise ValueError("state derivative is not traceless")
    w, v = herm_eig(rho)
    d = v.conj().T @ drho @ v
    s = w[:, None] + w[None, :]
    keep = s > tol
    val = float(np.sum(2.0 * np.abs(d[keep]) ** 2 / s[keep]))
    diag = {"rank": int(np.sum(w > tol)), "dropped_pairs": int(keep.size - keep.sum())}
    return QfiEvaluation(val, "sld", p, diag)


def _lossy_output(fam: ChannelFamily, rho_in: np.ndarray, loss: Sequence[int], p: float) -> np.ndarray:
    return partial_trace(apply(fam.at(p), rho_in), loss)


def state_qfi(fam: ChannelFamily, rho_in: np.ndarray, loss: Iterable[int], p: float) -> QfiEvaluation:
    """SLD route for an arbitrary (possibly mixed) input density operator."""
    check_open_unit(p)
    loss = tuple(loss)
    rho = _lossy_output(fam, rho_in, loss, p)
    # partial trace is linear, so it carries the exact derivative through
    drho = partial_trace(output_derivative(fam, rho_in), loss)
    return qfi_sld(rho, drho, p)


def qfi_for_scheme(fam: ChannelFamily, psi: np.ndarray, loss: Iterable[int], p: float) -> QfiEvaluation:
    """QFI of ``tr_loss[(E_p (x) Id)(|psi><psi|)]`` with respect to ``p``."""
    return state_qfi(fam, density_of(psi), loss, p)


def qfi_fidelity_fd(
    fam: ChannelFamily,
    rho_in: np.ndarray,
    loss: Iterable[int],
    p: float,
    step: float = FD_STEP,
) -> QfiEvaluation:
    """Bures-distance oracle ``8 (1 - sqrt(F(rho(p - h/2), rho(p + h/2)))) / h^2``."""
    if step <= 0:
        raise DomainError(f"finite-difference step must be positive, got {step}")
    lo, hi = p - step / 2, p + step / 2
    if not (0.0 < lo and hi < 1.0):
        raise DomainError(f"step {step} at p={p} leaves the open interval (0, 1)")
    if not ORACLE_DOMAIN[0] <= p <= ORACLE_DOMAIN[1]:
        raise DomainError(f"finite-difference oracle is restricted to p in {list(ORACLE_DOMAIN)}")
    loss = tuple(loss)
    rho_in = np.asarray(rho_in)
    if rho_in.ndim == 1:
        rho_in = density_of(rho_in)
    f = fidelity(_lossy_output(fam, rho_in, loss, lo), _lossy_output(fam, rho_in, loss, hi))
    val = 8.0 * (1.0 - np.sqrt(f)) / step**2
    return QfiEvaluation(max(float(val), 0.0), "fidelity-fd", p, {"step": step})


def qcrb_bound(qfi: float, m: int = 1) -> float:
    """Cramer-Rao variance bound ``1 / (m I)`` for ``m`` independent repetitions.

    Raises:
        DomainError: if ``qfi <= 0`` (the bound is unbounded) or ``m < 1``.
    """
    if m < 1:
        raise DomainError(f"number of measurements must be >= 1, got {m}")
    if not qfi > 0:
        raise DomainError("QFI vanishes: the Cramer-Rao bound is unbounded")
    return 1.0 / (m * qfi)


# -- property checks --------------------------------------------------------


@dataclass
class PropertyReport:
    name: str
    passed: bool
    lhs: float
    rhs: float
    detail: str = ""

    @property
    def gap(self) -> float:
        return self.lhs - self.rhs


def _is_unitary_channel(ch: KrausChannel) -> bool:
    ops = ch.kraus_ops
    nonzero = [k for k in ops if np.max(np.abs(k)) > 1e-14]
    if len(nonzero) != 1:
        return False
    u = nonzero[0]
    return bool(np.allclose(u @ u.conj().T, np.eye(u.shape[0]), atol=1e-12))


def check_monotonicity(
    family: StateFamily, post_channel: KrausChannel, p: float, tol: float = 1e-8
) -> PropertyReport:
    """``I(E(rho)) <= I(rho)`` for a p-independent channel ``E``; equality if ``E`` is unitary."""
    rho, drho = family(p)
    before = qfi_sld(rho, drho).value
    after = qfi_sld(apply(post_channel, rho), apply(post_channel, drho)).value
    unitary = _is_unitary_channel(post_channel)
    if unitary:
        ok = abs(after - before) <= tol
        detail = "unitary: equality expected"
    else:
        ok = after <= before + tol
        detail = "non-unitary: decrease expected"
    return PropertyReport("monotonicity", ok, after, before, detail)


def mixture_family(a: StateFamily, b: StateFamily, lam: float) -> StateFamily:
    def fam(p):
        ra, da = a(p)
        rb, db = b(p)
        return lam * ra + (1 - lam) * rb, lam * da + (1 - lam) * db

    return fam


def product_family(a: StateFamily, b: StateFamily) -> StateFamily:
    def fam(p):
        ra, da = a(p)
        rb, db = b(p)
        return tensor_product(ra, rb), tensor_product(da, rb) + tensor_product(ra, db)

    return fam


def check_convexity(a: StateFamily, b: StateFamily, lam: float, p: float, tol: float = 1e-8) -> PropertyReport:
    """``I(lam rho + (1-lam) sigma) <= lam I(rho) + (1-lam) I(sigma)``."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError("mixing weight must lie in [0, 1]")
    mixed = qfi_sld(*mixture_family(a, b, lam)(p)).value
    bound = lam * qfi_sld(*a(p)).value + (1 - lam) * qfi_sld(*b(p)).value
    return PropertyReport("convexity", mixed <= bound + tol, mixed, bound, f"lambda={lam}")


def check_additivity(a: StateFamily, b: StateFamily, p: float, tol: float = 1e-8) -> PropertyReport:
    """``I(rho (x) sigma) = I(rho) + I(sigma)``."""
    joint = qfi_sld(*product_family(a, b)(p)).value
    total = qfi_sld(*a(p)).value + qfi_sld(*b(p)).value
    return PropertyReport("additivity", abs(joint - total) <= tol, joint, total)


def check_convexity_additivity(
    a: StateFamily,
    b: StateFamily,
    p: float,
    lambdas: Iterable[float] = (0.0, 0.25, 0.5, 0.75, 1.0),
    tol: float = 1e-8,
) -> list[PropertyReport]:
    reports = [check_convexity(a, b, lam, p, tol) for lam in lambdas]
    reports.append(check_additivity(a, b, p, tol))
    return reports


def channel_state_family(fam: ChannelFamily, rho_in: np.ndarray, loss: Iterable[int] = ()) -> StateFamily:
    """State source ``p -> (tr_loss E_p(rho_in), exact derivative)``."""
    loss = tuple(loss)
    drho = partial_trace(output_derivative(fam, rho_in), loss)

    def source(p):
        return _lossy_output(fam, rho_in, loss, p), drho

    return source

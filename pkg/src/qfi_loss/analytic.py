"""Closed-form QFIs, K/G block spectra, the compressed block path and optimal ancilla counts.

The post-channel, post-loss GHZ and W states are direct sums of constant
blocks: ``G(m, a)`` (all entries ``a``) and ``K(m, a, b, c)`` (an
``(m-1) x (m-1)`` constant block ``a``, a border of ``b`` and a corner ``c``).
Both blocks, and the matching derivative blocks, act nontrivially only on
``span{(1,...,1,0), (0,...,0,1)}``, so each contributes a 2 x 2 problem
whatever ``m`` is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .qfi import DEGENERACY_TOL, QfiEvaluation, check_open_unit
from .schemes import Scheme

COMPRESSED_CAP = 10**7


@dataclass(frozen=True)
class KBlock:
    m: int
    a: float
    b: float
    c: float

    def dense(self) -> np.ndarray:
        k = np.full((self.m, self.m), self.a, dtype=float)
        k[-1, :] = self.b
        k[:, -1] = self.b
        k[-1, -1] = self.c
        return k

    def reduced(self) -> np.ndarray:
        """Action on the orthonormal pair ``(1,...,1,0)/sqrt(m-1)``, ``(0,...,0,1)``."""
        r = math.sqrt(self.m - 1)
        return np.array([[self.a * (self.m - 1), self.b * r], [self.b * r, self.c]])


@dataclass(frozen=True)
class GBlock:
    m: int
    a: float

    def dense(self) -> np.ndarray:
        return np.full((self.m, self.m), self.a, dtype=float)


@dataclass
class KSpectrum:
    eigenvalues: tuple[float, float]  # (lambda_+, lambda_-)
    eigenvectors: tuple[np.ndarray, np.ndarray]  # unnormalized, length m
    kernel_dim: int
    reduced_vectors: np.ndarray  # columns: normalized (+, -) in the reduced pair basis


def k_block_spectrum(k: KBlock) -> KSpectrum:
    """The two eigenpairs of ``K(m, a, b, c)`` outside its ``m - 2`` dimensional kernel.

    ``lambda_pm = (c + a(m-1) +- R)/2`` with ``R = sqrt((c - a(m-1))^2 + 4 b^2 (m-1))``
    and eigenvectors ``(2b, ..., 2b, Y_pm)``, ``Y_pm = c - a(m-1) +- R``.
    Numerically, one eigenvector is formed from the cancellation-free ``Y``
    and the other is its orthogonal partner in the 2-plane; this also covers
    ``b = 0``, where one printed vector vanishes.
    """
    if k.m < 2:
        raise ValueError(f"K block needs m >= 2, got {k.m}")
    m1 = k.m - 1
    delta = k.c - k.a * m1
    trace = k.c + k.a * m1
    root = math.hypot(delta, 2 * k.b * math.sqrt(m1))
    det = m1 * (k.a * k.c - k.b * k.b)
    if trace >= 0:
        lam_p = 0.5 * (trace + root)
        lam_m = det / lam_p if lam_p != 0 else 0.0
    else:
        lam_m = 0.5 * (trace - root)
        lam_p = det / lam_m
    y_p, y_m = delta + root, delta - root
    u = 2 * k.b * math.sqrt(m1)
    if root == 0.0:
        red = np.eye(2)
    elif delta >= 0:
        v = np.array([u, y_p]) / math.hypot(u, y_p)
        red = np.column_stack([v, [-v[1], v[0]]])
    else:
        v = np.array([u, y_m]) / math.hypot(u, y_m)
        red = np.column_stack([[v[1], -v[0]], v])
    vecs = tuple(np.concatenate([np.full(m1, 2 * k.b), [y]]) for y in (y_p, y_m))
    return KSpectrum((lam_p, lam_m), vecs, k.m - 2, red)


def g_block_spectrum(g: GBlock) -> tuple[float, np.ndarray, int]:
    """Only nonzero eigenvalue ``m a`` with eigenvector ``(1, ..., 1)``; kernel dimension ``m - 1``."""
    if g.m < 1:
        raise ValueError(f"G block needs m >= 1, got {g.m}")
    return g.m * g.a, np.ones(g.m), g.m - 1


# -- block decompositions -----------------------------------------------------


def _blocks(s: Scheme, p: float) -> list[tuple[str, KBlock | GBlock]]:
    """Nonzero blocks of the lossy output state, each entry affine in ``p``.

    Roles: ``vacuum`` = ``|0,0>``; ``single`` = K block over ``|1_i>`` (i >= 2)
    with ``|1_1>`` (probe excited) as corner; ``double`` = G block over
    ``|1,1_i>``. GHZ uses ``pair`` (over ``|0,0>, |1,1>``) and the two
    cross terms ``|1,0>``, ``|0,1>``.
    """
    n, l = s.n, s.l
    m = n - l  # ancillas left
    dep = s.channel == "depolarizing"
    if s.input == "w":
        N = n + 1
        if dep:
            vac = (2 * l - p * (l - 1)) / (2 * N)
            a, b, c = (2 - p) / (2 * N), (1 - p) / N, (2 + p * (l - 1)) / (2 * N)
        else:
            vac = l / N
            a, b, c = 1 / N, (1 - 2 * p) / N, 1 / N
        out = [("vacuum", GBlock(1, vac))]
        out.append(("single", KBlock(m + 1, a, b, c) if m else GBlock(1, c)))
        if dep and m:
            out.append(("double", GBlock(m, p / (2 * N))))
        return out
    if s.input == "ghz":
        if l == 0:
            if dep:
                return [
                    ("pair", KBlock(2, (2 - p) / 4, (1 - p) / 2, (2 - p) / 4)),
                    ("cross10", GBlock(1, p / 4)),
                    ("cross01", GBlock(1, p / 4)),
                ]
            return [("pair", KBlock(2, 0.5, (1 - 2 * p) / 2, 0.5))]
        if l == n:
            return [("zero", GBlock(1, 0.5)), ("one", GBlock(1, 0.5))]
        if dep:
            return [
                ("vacuum", GBlock(1, (2 - p) / 4)),
                ("full", GBlock(1, (2 - p) / 4)),
                ("cross10", GBlock(1, p / 4)),
                ("cross01", GBlock(1, p / 4)),
            ]
        return [("vacuum", GBlock(1, 0.5)), ("full", GBlock(1, 0.5))]
    raise DomainError(f"compressed path supports GHZ and W inputs only, not {s.input!r}")


def _diff(b1, b0):
    if isinstance(b1, KBlock):
        return KBlock(b1.m, b1.a - b0.a, b1.b - b0.b, b1.c - b0.c)
    return GBlock(b1.m, b1.a - b0.a)


def compressed_blocks(s: Scheme, p: float) -> list[tuple[str, KBlock | GBlock, KBlock | GBlock]]:
    """``(role, block, derivative block)`` triples of the lossy output state."""
    at, one, zero = _blocks(s, p), _blocks(s, 1.0), _blocks(s, 0.0)
    return [(role, blk, _diff(b1, b0)) for (role, blk), (_, b1), (_, b0) in zip(at, one, zero)]


def compressed_basis(s: Scheme) -> tuple[list[str], list[int]]:
    """Labels and remaining-register basis indices of the compressed basis.

    W order: ``|0,0>``, ``|1_1>``, ``|1_i>`` (i = 2..), ``|1,1_i>`` (i = 2..);
    GHZ order: ``|0,0>``, ``|1,1>``, ``|1,0>``, ``|0,1>`` (or ``|0>``, ``|1>`` if
    every ancilla is lost).
    """
    r = s.n + 1 - s.l  # qubits left, probe included
    top = 1 << (r - 1)
    if s.input == "w":
        labels = ["0,0", "1_1"] + [f"1_{i}" for i in range(2, r + 1)]
        idx = [0, top] + [1 << (r - i) for i in range(2, r + 1)]
        if s.channel == "depolarizing":
            labels += [f"1,1_{i}" for i in range(2, r + 1)]
            idx += [top | (1 << (r - i)) for i in range(2, r + 1)]
        return labels, idx
    if s.input == "ghz":
        if r == 1:
            return ["0", "1"], [0, 1]
        labels, idx = ["0,0", "1,1"], [0, 2**r - 1]
        if s.channel == "depolarizing" or s.l == 0:
            labels += ["1,0", "0,1"]
            idx += [top, top - 1]
        return labels, idx
    raise DomainError(f"compressed path supports GHZ and W inputs only, not {s.input!r}")


def compressed_state(s: Scheme, p: float) -> tuple[np.ndarray, np.ndarray]:
    """Dense ``(rho, d rho / d p)`` in the compressed basis (small ``n`` only)."""
    labels, _ = compressed_basis(s)
    dim = len(labels)
    if dim > 4096:
        raise DomainError("compressed_state materializes a dense matrix; use compressed_qfi for large n")
    pos = {lab: i for i, lab in enumerate(labels)}
    r = s.n + 1 - s.l
    rho = np.zeros((dim, dim))
    drho = np.zeros((dim, dim))
    singles = [pos[f"1_{i}"] for i in range(2, r + 1)] + [pos["1_1"]] if s.input == "w" else []
    doubles = [pos[f"1,1_{i}"] for i in range(2, r + 1)] if "1,1_2" in pos else []
    support = {
        "vacuum": [pos.get("0,0", 0)],
        "single": singles,
        "double": doubles,
        "pair": [pos.get("0,0", 0), pos.get("1,1", 1)],
        "cross10": [pos.get("1,0", 2)],
        "cross01": [pos.get("0,1", 3)],
        "full": [pos.get("1,1", 1)],
        "zero": [0],
        "one": [1],
    }
    for role, blk, dblk in compressed_blocks(s, p):
        ix = np.array(support[role])
        rho[np.ix_(ix, ix)] += blk.dense()
        drho[np.ix_(ix, ix)] += dblk.dense()
    return rho, drho


def _block_qfi(blk, dblk, tol: float) -> tuple[float, int]:
    """QFI contribution and rank of one block."""
    if isinstance(blk, GBlock):
        lam = blk.m * blk.a
        dlam = dblk.m * dblk.a
        if lam <= tol / 2:
            return 0.0, 0
        return dlam * dlam / lam, 1
    spec = k_block_spectrum(blk)
    lam = np.array(spec.eigenvalues)
    d = spec.reduced_vectors.T @ dblk.reduced() @ spec.reduced_vectors
    s = lam[:, None] + lam[None, :]
    keep = s > tol
    return float(np.sum(2.0 * d[keep] ** 2 / s[keep])), int(np.sum(lam > tol / 2))


def compressed_qfi(s: Scheme, p: float, tol: float = DEGENERACY_TOL) -> QfiEvaluation:
    """Block-wise spectral QFI; cost is independent of ``n``."""
    check_open_unit(p)
    if s.n > COMPRESSED_CAP:
        raise DomainError(f"n={s.n} exceeds the compressed cap {COMPRESSED_CAP}")
    if s.probe_lost:
        _blocks(s, p)  # rejects unsupported inputs
        return QfiEvaluation(0.0, "compressed", p, {"rank": None, "blocks": 0, "probe_lost": True})
    total, rank, nblocks = 0.0, 0, 0
    for _, blk, dblk in compressed_blocks(s, p):
        val, r = _block_qfi(blk, dblk, tol)
        total += val
        rank += r
        nblocks += 1
    return QfiEvaluation(total, "compressed", p, {"rank": rank, "blocks": nblocks})


# -- closed forms -------------------------------------------------------------


def qfi_sep(channel: str, p: float) -> float:
    return 1 / (p * (2 - p)) if channel == "depolarizing" else 1 / (p * (1 - p))


def qfi_opt(channel: str, p: float) -> float:
    return 3 / (p * (4 - 3 * p)) if channel == "depolarizing" else 1 / (p * (1 - p))


def w_dep_no_loss(n: int, p: float) -> float:
    return (3 * p - 4 * (1 + n * (n + 4)) / (1 + n) ** 2) / (3 * p - 4) / (p * (2 - p))


def w_dep_lost_one(n: int, p: float) -> float:
    return (n - 1) / (n + 1) * (n * (2 * p - 3) - 9) / (p * (2 * p - 3) * (2 * n - p * (n - 1)))


def w_dep_lost_all(n: int, p: float) -> float:
    return (n - 1) ** 2 / ((2 + (n - 1) * p) * (p + n * (2 - p)))


def w_dep_lost(n: int, l: int, p: float) -> float:
    """W-n through the depolarizing channel with ``l`` ancillas lost, general ``l``."""
    lin = -2 * p * (
        -2 * (l * (l + 2) - 1) * n**2
        + l * (l * (3 * l + 2) - 9) * n
        + l * (l * (3 * l + 4) - 9)
        + 8 * n
        + 2
    )
    quad = (l - 1) * (l + 3) * (n + 1) * p**2 * (2 * l - n - 1)
    const = 4 * l * (l + 2) * (n + 3) * (l - n)
    den = (n + 1) * p * ((l - 1) * p - 2 * l) * ((l + 3) * p - 2 * (l + 2)) * (
        l * (2 - 2 * p) + (n + 1) * (p - 2)
    )
    return (lin + quad + const) / den


def w_ph_lost(n: int, l: int, p: float) -> float:
    return 4 * (n - l) / ((n + 1) * (n + 1 - l)) / (p * (1 - p))


def closed_form_qfi(s: Scheme, p: float) -> float:
    """Analytic QFI of scheme ``s`` at ``p``."""
    check_open_unit(p)
    if s.probe_lost:
        return 0.0
    ch, n, l = s.channel, s.n, s.l
    if s.input == "sep":
        return qfi_sep(ch, p)
    if s.input == "bell":
        return qfi_opt(ch, p) if l < n else 0.0
    if s.input == "ghz":
        if l == 0:
            return qfi_opt(ch, p)
        if ch == "phase-flip" or l == n:
            return 0.0
        return qfi_sep(ch, p)
    # W input
    if ch == "phase-flip":
        return w_ph_lost(n, l, p)
    if l == 0:
        return w_dep_no_loss(n, p)
    if l == 1:
        return w_dep_lost_one(n, p)
    if l == n:
        return w_dep_lost_all(n, p)
    return w_dep_lost(n, l, p)


# -- optimal ancilla numbers --------------------------------------------------


def n_opt_dep_leading(l: int, p: float) -> float:
    """Asymptotic ``(2 + 2/sqrt(2 - p)) l``."""
    return (2 + 2 / math.sqrt(2 - p)) * l


def n_opt_dep(l: int, p: float) -> int:
    """Exact argmax over ``n >= l`` of the W/depolarizing QFI with ``l`` ancillas lost.

    Ties go to the smaller ``n``.
    """
    if l < 1:
        raise DomainError(f"need at least one lost ancilla, got l={l}")
    check_open_unit(p)
    hi = max(math.ceil(4 * n_opt_dep_leading(l, p)), l + 8)
    best_n, best = l, -math.inf
    for n in range(l, hi + 1):
        v = closed_form_qfi(Scheme("depolarizing", "w", n, l), p)
        if v > best:
            best_n, best = n, v
    return best_n


def _ph_weight(n: int, l: int) -> tuple[int, int]:
    # W/phase-flip QFI up to the p-dependent factor, as an exact ratio
    return 4 * (n - l), (n + 1) * (n + 1 - l)


def n_opt_ph(l: int) -> tuple[int, ...]:
    """Optimal initial ancilla count(s) for the phase-flip channel with ``l`` ancillas lost.

    Compares the floor and ceiling of ``l + sqrt(1 + l)`` exactly; returns
    both when they tie.
    """
    if l < 1:
        raise DomainError(f"need at least one lost ancilla, got l={l}")
    r = math.isqrt(l + 1)
    lf = l + r
    lc = lf if r * r == l + 1 else lf + 1
    if lf == lc:
        return (lf,)
    nf, df = _ph_weight(lf, l)
    nc, dc = _ph_weight(lc, l)
    lhs, rhs = nf * dc, nc * df
    if lhs > rhs:
        return (lf,)
    if lhs < rhs:
        return (lc,)
    return (lf, lc)


def half_loss_threshold(n: int, p: float) -> int:
    """Largest ``l`` for which W-n still beats the separable strategy (depolarizing)."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    check_open_unit(p)
    sep = qfi_sep("depolarizing", p)
    best = -1
    for l in range(n + 1):
        if closed_form_qfi(Scheme("depolarizing", "w", n, l), p) > sep:
            best = l
    return best

"""Cross-validation and property suites behind ``qfi-loss verify``."""

from __future__ import annotations

import math
import time
from collections.abc import Callable, Iterator
from dataclasses import dataclass

import numpy as np

from . import analytic
from .analytic import GBlock, KBlock, g_block_spectrum, k_block_spectrum
from .linalg import herm_eig
from .qfi import (
    check_additivity,
    check_convexity,
    check_monotonicity,
    qfi_pure,
    qfi_sld,
)
from .randomize import random_channel, random_family, random_hermitian, random_pure, random_unitary
from .channels import unitary_channel
from .schemes import Scheme
from .sweep import evaluate

P_FULL = tuple(round(0.05 * k, 2) for k in range(1, 20))
P_FAST = tuple(round(0.1 * k, 1) for k in range(1, 10))
SEED = 20170314


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name}: {status}" + (f" ({self.detail})" if self.detail else "")


def grid_schemes(n_max: int, channels=("depolarizing", "phase-flip"), inputs=("ghz", "w")) -> Iterator[Scheme]:
    for ch in channels:
        for inp in inputs:
            for n in range(1, n_max + 1):
                for l in range(n + 1):
                    yield Scheme(ch, inp, n, l)


def _compare(name, pairs, rel_tol, zero_tol) -> CheckResult:
    """``pairs`` yields ``(label, value, reference)``; zero references use ``zero_tol`` absolute."""
    worst, worst_label, count = 0.0, "", 0
    for label, value, ref in pairs:
        count += 1
        err = abs(value - ref) / abs(ref) if ref != 0 else abs(value)
        tol = rel_tol if ref != 0 else zero_tol
        if err > tol:
            return CheckResult(name, False, f"{label}: got {value:.12g}, expected {ref:.12g}")
        if ref != 0 and err > worst:
            worst, worst_label = err, label
    return CheckResult(name, True, f"{count} points, max rel err {worst:.2e}" + (f" at {worst_label}" if worst_label else ""))


def check_sld_vs_closed(n_max=8, ps=P_FULL, rel_tol=1e-8) -> CheckResult:
    def pairs():
        for s in grid_schemes(n_max):
            for p in ps:
                yield f"{s.label} p={p}", evaluate(s, p, "sld").value, analytic.closed_form_qfi(s, p)

    return _compare(f"sld vs closed-form (n<={n_max})", pairs(), rel_tol, 1e-10)


def check_fd_vs_closed(n_max=6, ps=P_FULL, rel_tol=1e-3, step=1e-3) -> CheckResult:
    def pairs():
        for s in grid_schemes(n_max):
            for p in ps:
                yield f"{s.label} p={p}", evaluate(s, p, "fd", step).value, analytic.closed_form_qfi(s, p)

    return _compare(f"fidelity-fd vs closed-form (n<={n_max}, step={step})", pairs(), rel_tol, 1e-6)


def check_compressed_vs_dense(n_max=8, ps=P_FAST, rel_tol=1e-10) -> CheckResult:
    def pairs():
        for s in grid_schemes(n_max):
            for p in ps:
                yield f"{s.label} p={p}", analytic.compressed_qfi(s, p).value, evaluate(s, p, "sld").value

    return _compare(f"compressed vs dense (n<={n_max})", pairs(), rel_tol, 1e-10)


def check_compressed_large(n_values=(50, 1000, 10**4), ps=(0.2, 0.5, 0.8), rel_tol=1e-10) -> CheckResult:
    def pairs():
        for n in n_values:
            for l in sorted({0, 1, n // 10, n // 2, n - 1, n}):
                for ch in ("depolarizing", "phase-flip"):
                    for inp in ("ghz", "w"):
                        s = Scheme(ch, inp, n, l)
                        for p in ps:
                            yield f"{s.label} p={p}", analytic.compressed_qfi(s, p).value, analytic.closed_form_qfi(s, p)

    return _compare(f"compressed vs closed-form (n up to {max(n_values)})", pairs(), rel_tol, 1e-10)


def check_compressed_speed(n=1000, budget_s=1.0) -> CheckResult:
    t0 = time.perf_counter()
    analytic.compressed_qfi(Scheme("depolarizing", "w", n, n // 10), 0.2)
    dt = time.perf_counter() - t0
    return CheckResult(f"compressed W/dep n={n} runtime", dt <= budget_s, f"{dt * 1e3:.2f} ms")


def check_reference_points() -> list[CheckResult]:
    p = 0.2
    cf = analytic.closed_form_qfi
    opt = cf(Scheme("depolarizing", "bell", 1), p)
    sep = cf(Scheme("depolarizing", "sep", 0), p)
    w55 = cf(Scheme("depolarizing", "w", 55, 15), p)
    nopt = analytic.n_opt_dep(15, p)
    lead = analytic.n_opt_dep_leading(15, p)
    return [
        CheckResult("I_opt_dep(0.2) = 4.41176", abs(opt - 4.41176) <= 1e-5 and abs(opt - 3 / (p * (4 - 3 * p))) <= 1e-10, f"{opt:.6f}"),
        CheckResult("I_sep_dep(0.2) = 2.77", abs(sep - 2.77) <= 0.01 and abs(sep - 1 / (p * (2 - p))) <= 1e-10, f"{sep:.6f}"),
        CheckResult("I_W-55_dep,15(0.2) = 2.81", abs(w55 - 2.81) <= 0.01, f"{w55:.6f}"),
        CheckResult(f"n_opt_dep(15, 0.2) = 55", nopt == 55, f"got {nopt}"),
        CheckResult("leading term n_opt_dep(15, 0.2) in {52, 53}", {math.floor(lead), math.ceil(lead)} <= {52, 53}, f"{lead:.4f}"),
    ]


def check_structural(n_max=8, ps=P_FULL) -> CheckResult:
    cf = analytic.closed_form_qfi
    for p in ps:
        targets = {
            "opt": {ch: analytic.qfi_opt(ch, p) for ch in ("depolarizing", "phase-flip")},
            "sep": {ch: analytic.qfi_sep(ch, p) for ch in ("depolarizing", "phase-flip")},
        }
        for n in range(1, n_max + 1):
            for l in range(n + 1):
                for ch in ("depolarizing", "phase-flip"):
                    s = Scheme(ch, "ghz", n, l)
                    got = evaluate(s, p, "sld").value
                    if l == 0:
                        want = targets["opt"][ch]
                    elif ch == "depolarizing" and l < n:
                        want = targets["sep"][ch]
                    else:
                        want = 0.0
                    if abs(got - want) > 1e-10 * max(1.0, want):
                        return CheckResult("structural identities", False, f"{s.label} p={p}: {got:.12g} vs {want:.12g}")
                    if l < n:
                        for inp in ("ghz", "w", "sep", "bell"):
                            lost = Scheme(ch, inp, n, l, probe_lost=True)
                            if abs(evaluate(lost, p, "sld").value) > 1e-10 or cf(lost, p) != 0.0:
                                return CheckResult("structural identities", False, f"{lost.label} p={p} is not 0")
        for ch in ("depolarizing", "phase-flip"):
            w1 = evaluate(Scheme(ch, "w", 1), p, "sld").value
            bell = evaluate(Scheme(ch, "bell", 1), p, "sld").value
            if abs(w1 - bell) > 1e-10 * bell:
                return CheckResult("structural identities", False, f"W-1 vs Bell, {ch} p={p}")
    return CheckResult("structural identities", True, f"n<={n_max}, {len(ps)} p values")


def check_crossing() -> CheckResult:
    p = 0.2
    cf = analytic.closed_form_qfi
    w2 = cf(Scheme("depolarizing", "w", 2, 1), p)
    w5 = cf(Scheme("depolarizing", "w", 5, 1), p)
    sep = analytic.qfi_sep("depolarizing", p)
    ok = abs(w2 - 2.3954) <= 1e-3 and abs(w5 - 3.0658) <= 1e-3 and abs(sep - 2.7778) <= 1e-3 and w2 < sep < w5
    return CheckResult("figure-2 crossing W-2 < sep < W-5 (one lost, p=0.2)", ok, f"{w2:.4f} < {sep:.4f} < {w5:.4f}")


def check_half_loss() -> CheckResult:
    ratios = {n: analytic.half_loss_threshold(n, 0.2) / n for n in (10, 20, 40)}
    ok = all(0.35 <= r <= 0.65 for r in ratios.values())
    return CheckResult("half-loss threshold slope ~0.5", ok, ", ".join(f"n={n}: {r:.3f}" for n, r in ratios.items()))


def check_asymptotics() -> CheckResult:
    n, p = 10**4, 0.2
    wdep = analytic.closed_form_qfi(Scheme("depolarizing", "w", n), p)
    wph = analytic.closed_form_qfi(Scheme("phase-flip", "w", n), p)
    ok = abs(wdep - 1 / (p * (2 - p))) <= 1e-3 and wph <= 3e-3
    return CheckResult("asymptotics n=1e4", ok, f"W/dep={wdep:.6f}, W/ph={wph:.2e}")


def check_transcription(n_max=40, ps=P_FULL) -> CheckResult:
    """General-l W/depolarizing expression against its l = 0, 1, n reductions."""
    for n in range(1, n_max + 1):
        for p in ps:
            pairs = [
                (analytic.w_dep_lost(n, 0, p), analytic.w_dep_no_loss(n, p)),
                (analytic.w_dep_lost(n, 1, p), analytic.w_dep_lost_one(n, p)),
                (analytic.w_dep_lost(n, n, p), analytic.w_dep_lost_all(n, p)),
            ]
            for a, b in pairs:
                if abs(a - b) > 1e-10 * max(1.0, abs(b)):
                    return CheckResult("general-l W/dep reductions", False, f"n={n} p={p}: {a} vs {b}")
    return CheckResult("general-l W/dep reductions", True, f"n<={n_max}")


def n_opt_ph_bruteforce(l: int, span: int | None = None) -> tuple[int, ...]:
    """All maximizers over n of ``(n - l)/((n + 1)(n + 1 - l))``, compared exactly."""
    hi = 3 * l + 10 if span is None else l + span
    ns = np.arange(l, hi + 1, dtype=np.int64)
    num, den = ns - l, (ns + 1) * (ns + 1 - l)
    approx = num / den
    cand = ns[approx >= approx.max() * (1 - 1e-9)]
    best = max(cand, key=lambda n: ((n - l) / ((n + 1) * (n + 1 - l))))
    bn, bd = best - l, (best + 1) * (best + 1 - l)
    return tuple(int(n) for n in cand if (n - l) * bd == bn * (n + 1) * (n + 1 - l))


def check_n_opt_ph(l_max: int) -> CheckResult:
    for l in range(1, l_max + 1):
        got, want = analytic.n_opt_ph(l), n_opt_ph_bruteforce(l)
        if got != want:
            return CheckResult(f"n_opt_ph vs brute force (l<={l_max})", False, f"l={l}: {got} vs {want}")
    return CheckResult(f"n_opt_ph vs brute force (l<={l_max})", True)


def check_n_opt_dep_scan(l_max: int = 6, p: float = 0.2) -> CheckResult:
    for l in range(1, l_max + 1):
        ns = range(l, 20 * l + 20)
        vals = [analytic.closed_form_qfi(Scheme("depolarizing", "w", n, l), p) for n in ns]
        want = ns[int(np.argmax(vals))]
        if analytic.n_opt_dep(l, p) != want:
            return CheckResult("n_opt_dep vs wide scan", False, f"l={l}: {analytic.n_opt_dep(l, p)} vs {want}")
    return CheckResult("n_opt_dep vs wide scan", True, f"l<={l_max}")


# -- randomized properties ----------------------------------------------------


def _trials(name: str, trials: int, body: Callable[[np.random.Generator], tuple[bool, float]], tol: float) -> CheckResult:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for t in range(trials):
        ok, gap = body(rng)
        worst = max(worst, gap)
        if not ok:
            return CheckResult(name, False, f"trial {t}: violation {gap:.3e} > {tol:g}")
    return CheckResult(name, True, f"{trials} trials, worst {worst:.2e}")


def prop_monotonicity(rng, tol=1e-8):
    fam = random_family(rng)
    p = float(rng.uniform(0.05, 0.95))
    dim = fam(p)[0].shape[0]
    ch = random_channel(dim, rng, int(rng.integers(1, 4)) + 1)
    rep = check_monotonicity(fam, ch, p, tol)
    return rep.passed, max(rep.lhs - rep.rhs, 0.0)


def prop_unitary(rng, tol=1e-8):
    fam = random_family(rng)
    p = float(rng.uniform(0.05, 0.95))
    dim = fam(p)[0].shape[0]
    rep = check_monotonicity(fam, unitary_channel(random_unitary(dim, rng)), p, tol)
    return rep.passed, abs(rep.lhs - rep.rhs)


def prop_convexity(rng, tol=1e-8):
    n = int(rng.integers(0, 3))
    a, b = random_family(rng, n), random_family(rng, n)
    rep = check_convexity(a, b, float(rng.random()), float(rng.uniform(0.05, 0.95)), tol)
    return rep.passed, max(rep.lhs - rep.rhs, 0.0)


def prop_additivity(rng, tol=1e-8):
    a, b = random_family(rng, int(rng.integers(0, 2))), random_family(rng, int(rng.integers(0, 2)))
    rep = check_additivity(a, b, float(rng.uniform(0.05, 0.95)), tol)
    return rep.passed, abs(rep.lhs - rep.rhs)


def prop_pure_vs_sld(rng, tol=1e-10):
    dim = 2 ** int(rng.integers(1, 5))
    h = random_hermitian(dim, rng)
    w, v = herm_eig(h)
    theta = float(rng.uniform(-np.pi, np.pi))
    psi = (v * np.exp(-1j * theta * w)) @ v.conj().T @ random_pure(dim, rng)
    dpsi = -1j * h @ psi
    rho = np.outer(psi, psi.conj())
    drho = np.outer(dpsi, psi.conj()) + np.outer(psi, dpsi.conj())
    gap = abs(qfi_pure(psi, dpsi).value - qfi_sld(rho, drho).value)
    return gap <= tol, gap


def prop_block_spectra(rng, tol=1e-12):
    m = int(rng.integers(2, 65))
    a, b, c = (float(x) for x in rng.uniform(-1, 1, 3))
    k = KBlock(m, a, b, c)
    spec = k_block_spectrum(k)
    want = np.sort(np.concatenate([spec.eigenvalues, np.zeros(m - 2)]))
    gap = float(np.max(np.abs(np.linalg.eigvalsh(k.dense()) - want)))
    g = GBlock(m, a)
    lam, _, kern = g_block_spectrum(g)
    gwant = np.sort(np.concatenate([[lam], np.zeros(kern)]))
    gap = max(gap, float(np.max(np.abs(np.linalg.eigvalsh(g.dense()) - gwant))))
    return gap <= tol, gap


def property_suites(trials: int) -> list[CheckResult]:
    return [
        _trials("monotonicity under random channels", trials, prop_monotonicity, 1e-8),
        _trials("equality under random unitaries", trials, prop_unitary, 1e-8),
        _trials("convexity", trials, prop_convexity, 1e-8),
        _trials("additivity", trials, prop_additivity, 1e-8),
        _trials("pure vs sld on rank-1 states", trials, prop_pure_vs_sld, 1e-10),
        _trials("K/G analytic vs dense spectra", trials, prop_block_spectra, 1e-12),
    ]


def run_checks(level: str = "fast") -> Iterator[CheckResult]:
    """Yield results suite by suite; ``full`` runs the complete acceptance grids."""
    if level not in ("fast", "full"):
        raise ValueError(f"level must be 'fast' or 'full', got {level!r}")
    full = level == "full"
    yield check_sld_vs_closed(8 if full else 6, P_FULL if full else P_FAST)
    yield check_fd_vs_closed(6 if full else 4, P_FULL if full else P_FAST)
    yield check_compressed_vs_dense(8 if full else 6, P_FAST)
    yield check_compressed_large((50, 1000, 10**4) if full else (50, 1000))
    yield check_compressed_speed()
    yield from check_reference_points()
    yield check_structural(8 if full else 5, P_FULL if full else P_FAST)
    yield check_crossing()
    yield check_half_loss()
    yield check_asymptotics()
    yield check_transcription()
    yield check_n_opt_dep_scan(6 if full else 3)
    yield check_n_opt_ph(10**4 if full else 500)
    yield from property_suites(200 if full else 25)


def run_verify(level: str = "fast", out=print) -> int:
    """Print one line per check; return 0 iff every check passed."""
    t0 = time.perf_counter()
    first_failure = None
    for res in run_checks(level):
        out(res.line())
        if not res.passed and first_failure is None:
            first_failure = res
    out(f"verify --level {level}: {time.perf_counter() - t0:.1f} s")
    if first_failure is not None:
        out(f"FAILED: {first_failure.name}: {first_failure.detail}")
        return 1
    out("all checks passed")
    return 0

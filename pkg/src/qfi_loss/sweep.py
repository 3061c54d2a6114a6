"""Point evaluation, (p, n, l) grid sweeps and deterministic CSV output."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analytic
from .errors import DomainError
from .qfi import FD_STEP, QfiEvaluation, qfi_fidelity_fd, qfi_for_scheme
from .schemes import SHORT_CHANNEL, Scheme, channel_name, input_name
from .states import density_of

CSV_HEADER = ("channel", "input", "n", "l", "p", "method", "qfi", "ref_method", "abs_err", "rel_err", "wall_time_ms")

METHOD_ALIASES = {
    "sld": "sld",
    "fd": "fidelity-fd",
    "fidelity-fd": "fidelity-fd",
    "closed": "closed-form",
    "closed-form": "closed-form",
    "compressed": "compressed",
}
METHOD_ORDER = ("closed-form", "sld", "compressed", "fidelity-fd")
DEFAULT_GRID = (0.02, 0.98, 49)


def method_name(name: str) -> str:
    try:
        return METHOD_ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown method {name!r}; expected one of sld, fd, closed, compressed") from None


def fmt(x) -> str:
    """Locale-independent 12-significant-digit formatting; blank for None."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(x).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


def evaluate(s: Scheme, p: float, method: str = "sld", step: float = FD_STEP) -> QfiEvaluation:
    """QFI of scheme ``s`` at ``p`` by the named method."""
    method = method_name(method)
    if method == "closed-form":
        return QfiEvaluation(analytic.closed_form_qfi(s, p), "closed-form", p)
    if method == "compressed":
        return analytic.compressed_qfi(s, p)
    if method == "sld":
        return qfi_for_scheme(s.family(), s.input_state(), s.loss_pattern(), p)
    return qfi_fidelity_fd(s.family(), density_of(s.input_state()), s.loss_pattern(), p, step)


def p_grid(start: float, stop: float, count: int) -> list[float]:
    if count < 1:
        raise DomainError("p-grid needs at least one point")
    ps = [float(x) for x in np.linspace(start, stop, count)]
    if any(not 0.0 < x < 1.0 for x in ps):
        raise DomainError(f"p-grid {start}:{stop}:{count} must lie strictly inside (0, 1)")
    return ps


def parse_grid(text: str) -> tuple[float, float, int]:
    try:
        a, b, c = text.split(":")
        return float(a), float(b), int(c)
    except ValueError:
        raise ValueError(f"grid must be START:STOP:COUNT, got {text!r}") from None


def parse_int_list(text: str) -> list[int]:
    """``"1,3,5"``, ``"1-6"`` or a mix such as ``"1-3,8"``."""
    out: list[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


@dataclass
class SweepConfig:
    channels: list[str] = field(default_factory=lambda: ["depolarizing"])
    inputs: list[str] = field(default_factory=lambda: ["w"])
    grid: tuple[float, float, int] = DEFAULT_GRID
    n_list: list[int] = field(default_factory=lambda: [1])
    l_list: list[int] | None = None  # empty or None means l = 0 only
    all_l: bool = False  # every l in 0..n, overrides l_list
    methods: list[str] = field(default_factory=lambda: ["sld"])
    out: str | None = None
    jobs: int = 1
    step: float = FD_STEP
    probe_lost: bool = False
    timing: bool = False

    def __post_init__(self):
        self.channels = [channel_name(c) for c in self.channels]
        self.inputs = [input_name(i) for i in self.inputs]
        self.methods = sorted({method_name(m) for m in self.methods}, key=METHOD_ORDER.index)
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        p_grid(*self.grid)

    def points(self) -> list[tuple[Scheme, float]]:
        """Valid (scheme, p) pairs in deterministic sorted order."""
        ps = p_grid(*self.grid)
        schemes = set()
        for ch in self.channels:
            for inp in self.inputs:
                for n in self.n_list:
                    ls = range(n + 1) if self.all_l else (self.l_list if self.l_list else [0])
                    for l in ls:
                        try:
                            schemes.add(Scheme(ch, inp, n, l, self.probe_lost))
                        except ValueError:
                            continue  # e.g. l > n or a GHZ register without ancillas
        return [(s, p) for s in sorted(schemes, key=_scheme_key) for p in ps]

    def reference_method(self) -> str | None:
        if len(self.methods) < 2:
            return None
        for m in ("closed-form", "sld"):
            if m in self.methods:
                return m
        return self.methods[0]


def _scheme_key(s: Scheme):
    return (SHORT_CHANNEL[s.channel], s.input, s.n, s.l, s.probe_lost)


def _evaluate_point(args) -> list[dict]:
    s, p, methods, ref, step, timing = args
    values, times = {}, {}
    for m in methods:
        t0 = time.perf_counter()
        values[m] = evaluate(s, p, m, step).value
        times[m] = (time.perf_counter() - t0) * 1e3
    rows = []
    for m in methods:
        row = {
            "channel": SHORT_CHANNEL[s.channel],
            "input": s.input,
            "n": s.n,
            "l": s.l,
            "p": p,
            "method": m,
            "qfi": values[m],
            "ref_method": None,
            "abs_err": None,
            "rel_err": None,
            "wall_time_ms": times[m] if timing else None,
        }
        if ref is not None and m != ref:
            err = abs(values[m] - values[ref])
            row["ref_method"] = ref
            row["abs_err"] = err
            row["rel_err"] = err / abs(values[ref]) if values[ref] != 0 else None
        rows.append(row)
    return rows


def run_sweep(cfg: SweepConfig) -> list[dict]:
    ref = cfg.reference_method()
    tasks = [(s, p, cfg.methods, ref, cfg.step, cfg.timing) for s, p in cfg.points()]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            chunks = list(pool.map(_evaluate_point, tasks, chunksize=max(1, len(tasks) // (4 * cfg.jobs))))
    else:
        chunks = [_evaluate_point(t) for t in tasks]
    return [row for chunk in chunks for row in chunk]


def records_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([r["channel"], r["input"], r["n"], r["l"], fmt(r["p"]), r["method"], fmt(r["qfi"]),
                    r["ref_method"] or "", fmt(r["abs_err"]), fmt(r["rel_err"]), fmt(r["wall_time_ms"])])
    return buf.getvalue()


def write_text(path: str | Path | None, text: str) -> None:
    if path is None or str(path) == "-":
        print(text, end="")
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="")


def read_config(path: str | Path) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, value = (x.strip() for x in line.split("=", 1))
        out[key.replace("_", "-").lower()] = value
    return out


def _truthy(v) -> bool:
    return str(v).strip().lower() in ("1", "true", "yes", "on")


def config_from_mapping(values: dict) -> SweepConfig:
    """Build a config from string-valued keys as found in a config file or on the command line."""
    kw: dict = {}
    if "channel" in values:
        kw["channels"] = [c.strip() for c in str(values["channel"]).split(",") if c.strip()]
    if "input" in values:
        kw["inputs"] = [c.strip() for c in str(values["input"]).split(",") if c.strip()]
    if "grid" in values:
        kw["grid"] = parse_grid(str(values["grid"]))
    if "n" in values:
        kw["n_list"] = parse_int_list(values["n"])
    if "l" in values:
        text = str(values["l"]).strip().lower()
        if text == "all":
            kw["all_l"] = True
        else:
            kw["l_list"] = parse_int_list(text) or None
    if "method" in values:
        kw["methods"] = [m.strip() for m in str(values["method"]).split(",") if m.strip()]
    if "out" in values:
        kw["out"] = str(values["out"])
    if "jobs" in values:
        kw["jobs"] = int(values["jobs"])
    if "step" in values:
        kw["step"] = float(values["step"])
    if "probe-lost" in values:
        kw["probe_lost"] = _truthy(values["probe-lost"])
    if "timing" in values:
        kw["timing"] = _truthy(values["timing"])
    return SweepConfig(**kw)


__all__ = [
    "CSV_HEADER",
    "SweepConfig",
    "config_from_mapping",
    "evaluate",
    "read_config",
    "records_to_csv",
    "run_sweep",
]

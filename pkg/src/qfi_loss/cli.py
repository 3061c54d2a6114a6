"""Command-line front end: ``qfi``, ``sweep``, ``figure`` and ``verify``.

Exit codes: 0 success, 1 internal or verification failure, 2 usage or
domain error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import DimensionError, DomainError
from .figures import FIGURE_IDS, write_figure
from .schemes import Scheme
from .sweep import (
    DEFAULT_GRID,
    config_from_mapping,
    evaluate,
    fmt,
    parse_grid,
    read_config,
    records_to_csv,
    run_sweep,
    write_text,
)
from .verify import run_verify

log = logging.getLogger("qfi_loss")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _add_scheme_flags(p: argparse.ArgumentParser, lists: bool = False) -> None:
    p.add_argument("--channel", help="dep or ph" + (" (comma list)" if lists else ""))
    p.add_argument("--input", help="ghz, w, sep or bell" + (" (comma list)" if lists else ""))
    p.add_argument("--n", help="number of ancillas" + (" (e.g. 1-6 or 1,3,5)" if lists else ""))
    p.add_argument("--l", help="ancillas lost" + (" (list or 'all')" if lists else ""))
    p.add_argument("--probe-lost", action="store_true", default=None, help="also trace out the probe")
    p.add_argument("--step", type=float, help="finite-difference step for the fd method")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qfi-loss", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("qfi", help="QFI of a single scheme at one p")
    _add_scheme_flags(q)
    q.add_argument("--p", type=float, required=True)
    q.add_argument("--method", default="sld", choices=["sld", "fd", "closed", "compressed"])

    s = sub.add_parser("sweep", help="grid sweep to CSV")
    _add_scheme_flags(s, lists=True)
    s.add_argument("--grid", help="START:STOP:COUNT p-grid")
    s.add_argument("--method", action="append", help="sld, fd, closed, compressed (repeatable or comma list)")
    s.add_argument("--out", help="output CSV path ('-' for stdout)")
    s.add_argument("--jobs", type=int)
    s.add_argument("--timing", action="store_true", default=None, help="record wall_time_ms (breaks byte determinism)")
    s.add_argument("--config", help="flat key = value config file; flags override it")

    f = sub.add_parser("figure", help="figure data as CSV files")
    f.add_argument("which", type=int, choices=FIGURE_IDS)
    f.add_argument("--grid", default=":".join(map(str, DEFAULT_GRID)), help="p-grid for the left plots")
    f.add_argument("--p", type=float, default=0.2, help="p for the right-hand plots")
    f.add_argument("--method", default="closed", choices=["closed", "compressed"])
    f.add_argument("--out", default=".", help="output directory")

    v = sub.add_parser("verify", help="run the cross-validation and property suites")
    v.add_argument("--level", choices=["fast", "full"], default="fast")
    return parser


def _cmd_qfi(args) -> int:
    if args.channel is None or args.input is None or args.n is None:
        raise DomainError("qfi needs --channel, --input and --n")
    scheme = Scheme(args.channel, args.input, int(args.n), int(args.l or 0), bool(args.probe_lost))
    kw = {"step": args.step} if args.step is not None else {}
    res = evaluate(scheme, args.p, args.method, **kw)
    print(fmt(res.value))
    print(f"method: {res.method}")
    print(f"scheme: {scheme.label}")
    print(f"p: {fmt(res.p)}")
    for key, val in res.diagnostics.items():
        print(f"{key}: {val}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    values: dict = read_config(args.config) if args.config else {}
    flags = {
        "channel": args.channel,
        "input": args.input,
        "n": args.n,
        "l": args.l,
        "grid": args.grid,
        "method": ",".join(args.method) if args.method else None,
        "out": args.out,
        "jobs": args.jobs,
        "step": args.step,
        "probe-lost": args.probe_lost,
        "timing": args.timing,
    }
    values.update({k: v for k, v in flags.items() if v is not None})
    cfg = config_from_mapping(values)
    rows = run_sweep(cfg)
    try:
        write_text(cfg.out, records_to_csv(rows))
    except OSError as exc:
        raise DomainError(f"cannot write {cfg.out}: {exc}") from exc
    if cfg.out not in (None, "-"):
        log.info("wrote %d records to %s", len(rows), cfg.out)
    return EXIT_OK


def _cmd_figure(args) -> int:
    method = "closed-form" if args.method == "closed" else "compressed"
    paths = write_figure(args.which, args.out, grid=parse_grid(args.grid), p0=args.p, method=method)
    for path in paths:
        print(path)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "qfi":
            return _cmd_qfi(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "figure":
            return _cmd_figure(args)
        return run_verify(args.level)
    except (DomainError, DimensionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        log.exception("internal failure")
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

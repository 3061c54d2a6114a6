import csv
import io

import pytest

from qfi_loss.sweep import (
    CSV_HEADER,
    SweepConfig,
    config_from_mapping,
    method_name,
    p_grid,
    parse_grid,
    parse_int_list,
    read_config,
    records_to_csv,
    run_sweep,
)


def _csv(cfg):
    return records_to_csv(run_sweep(cfg))


def test_parsers():
    assert parse_grid("0.1:0.9:9") == (0.1, 0.9, 9)
    assert p_grid(0.1, 0.9, 9) == pytest.approx([0.1 * k for k in range(1, 10)])
    assert parse_int_list("1-3,8") == [1, 2, 3, 8]
    assert parse_int_list("") == []
    assert method_name("fd") == "fidelity-fd"
    assert method_name("closed") == "closed-form"
    assert p_grid(0.5, 0.1, 3) == pytest.approx([0.5, 0.3, 0.1])
    for bad in ("0.1:0.9", "0:0.5:3", "0.5:1:3", "0.1:0.5:0"):
        with pytest.raises(ValueError):
            p_grid(*parse_grid(bad))
    with pytest.raises(ValueError):
        method_name("magic")


def test_header_and_columns():
    text = _csv(SweepConfig(n_list=[2], grid=(0.2, 0.4, 2), methods=["sld"]))
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 2
    assert rows[0]["ref_method"] == "" and rows[0]["wall_time_ms"] == ""


def test_cross_validation_grid():
    cfg = SweepConfig(channels=["dep", "ph"], inputs=["ghz", "w"], grid=(0.1, 0.9, 9),
                      n_list=list(range(1, 7)), all_l=True, methods=["sld", "closed"])
    rows = run_sweep(cfg)
    errs = [float(r["rel_err"]) for r in rows if r["method"] == "sld" and r["rel_err"] is not None]
    assert errs and max(errs) <= 1e-8


def test_fd_grid():
    cfg = SweepConfig(channels=["dep", "ph"], inputs=["ghz", "w"], grid=(0.1, 0.9, 5),
                      n_list=[1, 2, 3], all_l=True, methods=["fd", "closed"], step=1e-3)
    rows = run_sweep(cfg)
    errs = [float(r["rel_err"]) for r in rows if r["method"] == "fidelity-fd" and r["rel_err"] is not None]
    assert errs and max(errs) <= 1e-3


def test_empty_l_defaults_to_zero():
    cfg = config_from_mapping({"n": "3", "l": ""})
    assert {s.l for s, _ in cfg.points()} == {0}
    assert {s.l for s, _ in SweepConfig(n_list=[3]).points()} == {0}


def test_invalid_l_skipped():
    cfg = SweepConfig(n_list=[1, 3], l_list=[2], grid=(0.5, 0.5, 1))
    assert [(s.n, s.l) for s, _ in cfg.points()] == [(3, 2)]


def test_deterministic_and_parallel_equals_serial():
    base = dict(channels=["dep", "ph"], inputs=["w", "ghz"], n_list=[1, 2, 3], all_l=True,
                grid=(0.1, 0.9, 4), methods=["sld", "compressed", "closed"])
    a = _csv(SweepConfig(**base))
    b = _csv(SweepConfig(**base))
    c = _csv(SweepConfig(**base, jobs=2))
    assert a == b == c


def test_timing_column():
    rows = run_sweep(SweepConfig(grid=(0.5, 0.5, 1), timing=True))
    assert float(rows[0]["wall_time_ms"]) >= 0


def test_config_file(tmp_path):
    cfg_path = tmp_path / "sweep.cfg"
    cfg_path.write_text("# example\nchannel = ph\ninput = w\nn = 2-3\nl = all\ngrid = 0.2:0.8:3\n"
                        "method = sld, closed   # two methods\nprobe_lost = no\n")
    values = read_config(cfg_path)
    assert values["probe-lost"] == "no"
    cfg = config_from_mapping(values)
    assert cfg.channels == ["phase-flip"] and cfg.methods == ["closed-form", "sld"]
    assert len(cfg.points()) == (3 + 4) * 3
    bad = tmp_path / "bad.cfg"
    bad.write_text("channel dep\n")
    with pytest.raises(ValueError):
        read_config(bad)


def test_cli_flags_override_config(tmp_path, capsys):
    from qfi_loss.cli import main

    cfg_path = tmp_path / "sweep.cfg"
    out = tmp_path / "out.csv"
    cfg_path.write_text(f"channel = ph\ninput = w\nn = 2\ngrid = 0.2:0.8:3\nout = {out}\n")
    assert main(["sweep", "--config", str(cfg_path), "--channel", "dep"]) == 0
    rows = list(csv.DictReader(out.open()))
    assert {r["channel"] for r in rows} == {"dep"} or {r["channel"] for r in rows} == {"depolarizing"}
    assert len(rows) == 3
    capsys.readouterr()


def test_reference_method_fallback():
    assert SweepConfig(methods=["sld"]).reference_method() is None
    assert SweepConfig(methods=["fd", "sld"]).reference_method() == "sld"
    assert SweepConfig(methods=["fd", "compressed"]).reference_method() == "compressed"

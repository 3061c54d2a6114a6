import csv
import io
import subprocess
import sys

import pytest

from qfi_loss.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_qfi_examples(capsys):
    code, out, _ = run(capsys, "qfi", "--channel", "dep", "--input", "ghz", "--n", "3", "--l", "0", "--p", "0.2")
    assert code == 0
    assert float(out.splitlines()[0]) == pytest.approx(3 / (0.2 * 3.4), rel=1e-10)
    assert out.splitlines()[0].startswith("4.411764")
    code, out, _ = run(capsys, "qfi", "--channel", "ph", "--input", "w", "--n", "5", "--l", "1", "--p", "0.2")
    assert code == 0
    assert out.splitlines()[0].startswith("3.333333")


@pytest.mark.parametrize("method", ["sld", "closed", "compressed", "fd"])
def test_qfi_methods_agree(capsys, method):
    code, out, _ = run(capsys, "qfi", "--channel", "dep", "--input", "w", "--n", "3", "--l", "1", "--p", "0.3",
                       "--method", method)
    assert code == 0
    code, ref, _ = run(capsys, "qfi", "--channel", "dep", "--input", "w", "--n", "3", "--l", "1", "--p", "0.3",
                       "--method", "closed")
    assert float(out.splitlines()[0]) == pytest.approx(float(ref.splitlines()[0]), rel=1e-3)


@pytest.mark.parametrize(
    "argv",
    [
        ["qfi", "--channel", "dep", "--input", "w", "--n", "2", "--l", "3", "--p", "0.2"],
        ["qfi", "--channel", "dep", "--input", "w", "--n", "2", "--p", "1.0"],
        ["qfi", "--channel", "dep", "--input", "w", "--n", "2", "--p", "0"],
        ["qfi", "--channel", "amp", "--input", "w", "--n", "2", "--p", "0.2"],
        ["qfi", "--channel", "dep", "--input", "w", "--n", "20", "--p", "0.2"],
        ["qfi", "--channel", "dep", "--input", "sep", "--n", "2", "--p", "0.2", "--method", "compressed"],
        ["sweep", "--grid", "0.2:1.0:3"],
        ["sweep", "--grid", "0.2:0.4"],
        ["sweep", "--channel", "dep", "--input", "w", "--n", "1-3", "--method", "fd", "--grid", "0.01:0.5:3"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["qfi"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_compressed_large_n(capsys):
    code, out, _ = run(capsys, "qfi", "--channel", "ph", "--input", "w", "--n", "1000", "--l", "100", "--p", "0.2",
                       "--method", "compressed")
    assert code == 0
    assert float(out.splitlines()[0]) == pytest.approx(4 * 900 / (1001 * 901) / 0.16, rel=1e-10)


def test_sweep_to_stdout(capsys):
    code, out, _ = run(capsys, "sweep", "--channel", "dep,ph", "--input", "ghz,w", "--n", "1-2", "--l", "all",
                       "--grid", "0.1:0.9:5", "--method", "sld,closed", "--out", "-")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    # (ghz + w) x (dep + ph) x [(1,0),(1,1),(2,0),(2,1),(2,2)] x 5 p values x 2 methods
    assert len(rows) == 2 * 2 * 5 * 5 * 2
    for r in rows:
        if r["method"] == "sld":
            assert r["ref_method"] == "closed-form"
            assert float(r["abs_err"]) <= 1e-10


def test_figure_command(tmp_path, capsys):
    code, out, _ = run(capsys, "figure", "2", "--out", str(tmp_path))
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["fig2_left.csv", "fig2_right.csv"]
    assert out.split() == [str(tmp_path / n) for n in ("fig2_left.csv", "fig2_right.csv")]


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "qfi_loss", "qfi", "--channel", "dep", "--input", "w", "--n", "2", "--l", "3", "--p", "0.2"],
        capture_output=True, text=True,
    )
    assert res.returncode == 2


def test_verify_fast_command(capsys):
    code, out, _ = run(capsys, "verify", "--level", "fast")
    assert code == 0
    assert "all checks passed" in out

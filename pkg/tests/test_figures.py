import csv

import numpy as np
import pytest

from qfi_loss.analytic import qfi_opt, qfi_sep
from qfi_loss.figures import FIGURE_HEADER, FIGURE_IDS, figure_data, write_figure

GRID = (0.05, 0.95, 19)


def _series(rows, name):
    return [r for r in rows if r[0] == name]


@pytest.fixture(scope="module")
def figs():
    return {k: figure_data(k, grid=GRID) for k in FIGURE_IDS}


def test_figure1_w1_coincides_with_ghz(figs):
    left = figs[1]["left"]
    ghz = [r[4] for r in _series(left, "GHZ (optimal strategy)")]
    w1 = [r[4] for r in _series(left, "W-1")]
    np.testing.assert_allclose(w1, ghz, rtol=1e-12)
    np.testing.assert_allclose(ghz, [qfi_opt("depolarizing", p) for p in np.linspace(*GRID)], rtol=1e-12)


def test_figure2_right_converges_to_separable(figs):
    right = figs[2]["right"]
    sep = qfi_sep("depolarizing", 0.2)
    for name in ("W states with no loss", "W states with one ancilla lost"):
        vals = [r[4] for r in _series(right, name)]
        gaps = [abs(v - sep) for v in vals[5:]]  # past the crossing at small n
        assert all(a > b for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 0.5 * gaps[0]
    from qfi_loss.analytic import w_dep_lost_one, w_dep_no_loss

    assert w_dep_no_loss(10**5, 0.2) == pytest.approx(sep, abs=1e-4)
    assert w_dep_lost_one(10**5, 0.2) == pytest.approx(sep, abs=1e-4)


def test_figure3_right_w_decreasing_to_zero(figs):
    vals = [r[4] for r in _series(figs[3]["right"], "W states with one ancilla lost")]
    tail = vals[2:]
    assert all(a > b for a, b in zip(tail, tail[1:]))
    assert tail[-1] < 0.5 * tail[0]
    no_loss = [r[4] for r in _series(figs[3]["right"], "W states with no loss")]
    assert all(a > b for a, b in zip(no_loss, no_loss[1:]))


def test_figure4_loss_curves_decrease_in_l(figs):
    for n in (15, 20, 25):
        vals = [r[4] for r in _series(figs[4]["right"], f"W-{n} with loss")]
        assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert {"left", "right", "surface"} <= set(figs[4])


def test_figure6_insets(figs):
    dep = figs[6]["left_inset"]
    assert (("n_opt", 0.2, 55, 15, 55) in dep)
    ph = _series(figs[6]["right_inset"], "n_opt")
    assert [r[2] for r in ph if r[3] == 1] == [2, 3]


def test_write_figure(tmp_path):
    paths = write_figure(5, tmp_path, grid=(0.1, 0.9, 3))
    assert {p.name for p in paths} == {"fig5_left.csv", "fig5_right.csv"}
    with paths[0].open() as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == FIGURE_HEADER
    assert len(rows) > 1


def test_compressed_method_matches_closed():
    a = figure_data(2, grid=(0.1, 0.9, 5), method="closed-form")
    b = figure_data(2, grid=(0.1, 0.9, 5), method="compressed")
    for key in a:
        np.testing.assert_allclose([r[4] for r in a[key]], [r[4] for r in b[key]], rtol=1e-10, atol=1e-12)


def test_bad_figure_id():
    with pytest.raises(ValueError):
        figure_data(7)

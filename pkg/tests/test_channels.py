import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qfi_loss.channels import (
    X,
    Y,
    Z,
    ChannelFamily,
    KrausChannel,
    apply,
    depolarizing,
    extend,
    output_derivative,
    pauli_channel,
    phase_flip,
    unitary_channel,
)
from qfi_loss.errors import DimensionError
from qfi_loss.linalg import partial_trace, tensor_product
from qfi_loss.states import bell_state, density_of, equatorial_state, ghz_state, w_state

from conftest import random_density

I2 = np.eye(2)
RHO0 = np.diag([1.0, 0.0])
PLUS = density_of(equatorial_state())
BELL = {k: density_of(bell_state(k)) for k in ("phi+", "phi-", "psi+", "psi-")}


def _brute_apply(ops, rho):
    return sum(k @ rho @ k.conj().T for k in ops)


def test_depolarizing_examples(rng):
    ops = depolarizing(0.0).ops
    np.testing.assert_allclose(ops[0], I2)
    assert all(np.max(np.abs(k)) == 0 for k in ops[1:])
    rho = random_density(2, rng)
    np.testing.assert_allclose(apply(depolarizing(1.0), rho), I2 / 2, atol=1e-15)
    np.testing.assert_allclose(apply(depolarizing(0.5), RHO0), np.diag([0.75, 0.25]), atol=1e-15)


def test_phase_flip_examples(rng):
    rho = random_density(2, rng)
    np.testing.assert_allclose(apply(phase_flip(0.0), rho), rho)
    np.testing.assert_allclose(apply(phase_flip(0.5), PLUS), I2 / 2, atol=1e-15)
    out = apply(phase_flip(0.2), PLUS)
    assert out[0, 1] == pytest.approx(0.3)
    assert out[1, 0] == pytest.approx(0.3)


@pytest.mark.parametrize("bad", [-0.1, 1.1, float("nan")])
def test_probability_domain(bad):
    with pytest.raises(ValueError):
        depolarizing(bad)
    with pytest.raises(ValueError):
        phase_flip(bad)


def test_pauli_channel_special_cases(rng):
    rho = random_density(2, rng)
    p = 0.37
    np.testing.assert_allclose(apply(pauli_channel(p / 4, p / 4, p / 4), rho), apply(depolarizing(p), rho), atol=1e-15)
    np.testing.assert_allclose(apply(pauli_channel(0, 0, p), rho), apply(phase_flip(p), rho), atol=1e-15)
    np.testing.assert_allclose(apply(pauli_channel(0, 0, 0), rho), rho, atol=1e-15)
    with pytest.raises(ValueError):
        pauli_channel(0.5, 0.4, 0.2)


def test_incomplete_kraus_rejected():
    with pytest.raises(ValueError):
        KrausChannel((0.5 * I2,))


def test_extend_examples(rng):
    ch = depolarizing(0.3)
    assert extend(ch, 0) == ch or extend(ch, 0).n_ancillas == 0
    p = 0.3
    got = apply(extend(depolarizing(p), 1), BELL["phi+"])
    want = (1 - 3 * p / 4) * BELL["phi+"] + p / 4 * (BELL["phi-"] + BELL["psi+"] + BELL["psi-"])
    np.testing.assert_allclose(got, want, atol=1e-15)
    for n in (1, 2, 3):
        out = apply(extend(phase_flip(p), n), density_of(ghz_state(n)))
        assert out[0, -1] == pytest.approx((1 - 2 * p) / 2)
        assert out[-1, 0] == pytest.approx((1 - 2 * p) / 2)


def test_extend_cap():
    with pytest.raises(DimensionError):
        extend(depolarizing(0.1), 12)


def test_apply_identity_and_total_depolarization(rng):
    rho = random_density(8, rng)
    np.testing.assert_allclose(apply(unitary_channel(np.eye(8)), rho), rho)
    out = apply(extend(depolarizing(1.0), 2), rho)
    np.testing.assert_allclose(out, tensor_product(I2 / 2, partial_trace(rho, [0])), atol=1e-15)


def test_apply_w_dense_blocks():
    """Output of W-n under the extended depolarizing channel, built entry by entry."""
    n, p = 3, 0.2
    N = n + 1
    out = apply(extend(depolarizing(p), n), density_of(w_state(n)))
    d = 2**N
    want = np.zeros((d, d))
    anc = [1 << (n - q) for q in range(1, n + 1)]  # probe |0>, one ancilla excited
    probe1 = 1 << n  # probe |1>, ancillas vacuum
    shifted = [probe1 | a for a in anc]  # probe |1>, one ancilla excited
    for i in anc:
        for j in anc:
            want[i, j] = (1 - p / 2) / N
        want[i, probe1] = want[probe1, i] = (1 - p) / N
    for i in shifted:
        for j in shifted:
            want[i, j] = p / (2 * N)
    want[probe1, probe1] = (1 - p / 2) / N
    want[0, 0] = p / (2 * N)
    np.testing.assert_allclose(out, want, atol=1e-15)


def test_apply_matches_kraus_sum(rng):
    rho = random_density(16, rng)
    ch = extend(pauli_channel(0.1, 0.2, 0.3), 3)
    np.testing.assert_allclose(apply(ch, rho), _brute_apply(ch.kraus_ops, rho), atol=1e-14)


def test_apply_dimension_mismatch():
    with pytest.raises(ValueError):
        apply(extend(depolarizing(0.1), 1), np.eye(2) / 2)


def test_output_derivative_examples(rng):
    rho = random_density(2, rng)
    np.testing.assert_allclose(output_derivative(ChannelFamily("depolarizing"), rho), I2 / 2 - rho, atol=1e-15)
    d = output_derivative(ChannelFamily("phase-flip"), PLUS)
    np.testing.assert_allclose(d, Z @ PLUS @ Z - PLUS, atol=1e-15)
    np.testing.assert_allclose(d, [[0, -1], [-1, 0]], atol=1e-15)
    np.testing.assert_allclose(output_derivative(ChannelFamily("depolarizing"), I2 / 2), 0, atol=1e-15)


@pytest.mark.parametrize("kind,weights", [("depolarizing", (0, 0, 0)), ("phase-flip", (0, 0, 0)), ("pauli", (0.2, 0.5, 0.3))])
def test_output_derivative_matches_central_difference(kind, weights, rng):
    fam = ChannelFamily(kind, n_ancillas=2, weights=weights)
    rho = random_density(8, rng)
    h, p = 1e-5, 0.4
    fd = (apply(fam.at(p + h), rho) - apply(fam.at(p - h), rho)) / (2 * h)
    np.testing.assert_allclose(output_derivative(fam, rho), fd, atol=1e-9)


def test_family_rejects_bad_kind():
    with pytest.raises(ValueError):
        ChannelFamily("amplitude-damping")


@settings(max_examples=40, deadline=None)
@given(p=st.floats(0, 1), q=st.floats(0, 1), n=st.integers(0, 3))
def test_kraus_completeness(p, q, n):
    for ch in (depolarizing(p), phase_flip(p), pauli_channel(p / 3, q / 3, (1 - p) / 3)):
        ops = extend(ch, n).kraus_ops
        total = sum(k.conj().T @ k for k in ops)
        assert np.max(np.abs(total - np.eye(2 ** (n + 1)))) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), p=st.floats(0, 1), n=st.integers(1, 3), data=st.data())
def test_loss_commutes_with_extension(seed, p, n, data):
    """Tracing out ancillas after the extended channel equals acting on the reduced state."""
    rho = random_density(2 ** (n + 1), np.random.default_rng(seed))
    l = data.draw(st.integers(0, n))
    lost = list(range(n + 1 - l, n + 1))
    ch = data.draw(st.sampled_from([depolarizing, phase_flip]))(p)
    lhs = partial_trace(apply(extend(ch, n), rho), lost) if lost else apply(extend(ch, n), rho)
    reduced = partial_trace(rho, lost) if lost else rho
    rhs = apply(extend(ch, n - l), reduced)
    np.testing.assert_allclose(lhs, rhs, atol=1e-13)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), p=st.floats(0, 1))
def test_depolarizing_is_unitarily_covariant(seed, p):
    r = np.random.default_rng(seed)
    rho = random_density(2, r)
    z = r.standard_normal((2, 2)) + 1j * r.standard_normal((2, 2))
    u, _ = np.linalg.qr(z)
    lhs = apply(depolarizing(p), u @ rho @ u.conj().T)
    rhs = u @ apply(depolarizing(p), rho) @ u.conj().T
    np.testing.assert_allclose(lhs, rhs, atol=1e-13)


def test_pauli_weights_are_consistent():
    """X, Y, Z are Hermitian involutions, as the Kraus constructions assume."""
    for s in (X, Y, Z):
        np.testing.assert_allclose(s @ s, I2)
        np.testing.assert_allclose(s, s.conj().T)

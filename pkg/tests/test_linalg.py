import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardy_lab import linalg
from hardy_lab.state import TransformCoefficients, uv_amplitudes

from conftest import random_state, random_unitary
from oracles import dense_negativity, dense_reduced

BELL = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


def test_ry_pi_flips_zero_to_one():
    out = linalg.apply_single_qubit_gate(linalg.basis_state("0"), 1, linalg.ry(np.pi))
    np.testing.assert_allclose(out, [0, 1], atol=1e-15)


def test_identity_gate_keeps_amplitudes(rng):
    psi = random_state(rng, 4)
    for site in range(1, 5):
        assert np.array_equal(linalg.apply_single_qubit_gate(psi, site, np.eye(2)), psi)


def test_ry_for_A_09_gives_B_then_A():
    out = linalg.apply_single_qubit_gate(linalg.basis_state("0"), 1, linalg.ry(0.713 * np.pi))
    B, A = np.sqrt(1 - 0.81), 0.9
    assert abs(out[0] - B) < 1e-3 and abs(out[1] - A) < 1e-3
    assert out[0].real == pytest.approx(0.4357, abs=1e-4)
    assert out[1].real == pytest.approx(0.9001, abs=1e-4)


def test_gate_acts_on_leftmost_site_first():
    out = linalg.apply_single_qubit_gate(linalg.basis_state("000"), 1, linalg.ry(np.pi))
    assert abs(out[int("100", 2)]) == pytest.approx(1.0)


def test_gate_errors():
    psi = linalg.basis_state("00")
    with pytest.raises(IndexError):
        linalg.apply_single_qubit_gate(psi, 3, np.eye(2))
    with pytest.raises(IndexError):
        linalg.apply_single_qubit_gate(psi, 0, np.eye(2))
    with pytest.raises(ValueError, match="unitary"):
        linalg.apply_single_qubit_gate(psi, 1, np.array([[1, 1], [0, 1]]))
    with pytest.raises(ValueError):
        linalg.apply_single_qubit_gate(np.ones(3), 1, np.eye(2))


def test_gates_preserve_norm_over_many_random_pairs(rng):
    worst = 0.0
    for _ in range(10_000):
        m = int(rng.integers(1, 6))
        psi = random_state(rng, m)
        out = linalg.apply_single_qubit_gate(psi, int(rng.integers(1, m + 1)), random_unitary(rng))
        worst = max(worst, abs(np.vdot(out, out).real - 1.0))
    assert worst < 1e-12


def test_input_not_modified(rng):
    psi = random_state(rng, 3)
    before = psi.copy()
    linalg.apply_single_qubit_gate(psi, 2, linalg.ry(0.3))
    linalg.apply_multi_controlled_x(psi, [1, 2], 3)
    assert np.array_equal(psi, before)


def test_toffoli_examples():
    out = linalg.apply_multi_controlled_x(linalg.basis_state("110"), {1, 2}, 3)
    assert np.array_equal(out, linalg.basis_state("111"))
    out = linalg.apply_multi_controlled_x(linalg.basis_state("100"), {1, 2}, 3)
    assert np.array_equal(out, linalg.basis_state("100"))


def test_mcx_rejects_overlap():
    with pytest.raises(ValueError, match="control"):
        linalg.apply_multi_controlled_x(linalg.basis_state("000"), [1, 2], 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 7), st.data())
def test_mcx_is_bitwise_involution(m, data):
    seed = data.draw(st.integers(0, 2**32 - 1))
    target = data.draw(st.integers(1, m))
    others = [s for s in range(1, m + 1) if s != target]
    controls = data.draw(st.lists(st.sampled_from(others), min_size=1, unique=True))
    psi = random_state(np.random.default_rng(seed), m)
    twice = linalg.apply_multi_controlled_x(linalg.apply_multi_controlled_x(psi, controls, target), controls, target)
    assert np.array_equal(twice, psi)


def test_spectrum_examples():
    np.testing.assert_allclose(linalg.schmidt_spectrum(linalg.basis_state("01"), [1]), [1, 0])
    np.testing.assert_allclose(linalg.schmidt_spectrum(BELL, [1]), [0.5, 0.5], atol=1e-15)


def test_spectrum_matches_explicit_partial_trace_for_two_sites():
    psi = uv_amplitudes(TransformCoefficients.equal(2, 0.9)).vector
    expected = np.sort(np.linalg.eigvalsh(dense_reduced(psi, 2, [1])))[::-1]
    np.testing.assert_allclose(linalg.schmidt_spectrum(psi, [1]), expected, atol=1e-10)


def test_spectrum_errors():
    psi = linalg.basis_state("00")
    with pytest.raises(ValueError):
        linalg.schmidt_spectrum(psi, [])
    with pytest.raises(ValueError):
        linalg.schmidt_spectrum(psi, [1, 2])
    with pytest.raises(ValueError, match="normalized"):
        linalg.schmidt_spectrum(2 * psi, [1])


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 8), st.data())
def test_schmidt_symmetry_and_sum(m, data):
    seed = data.draw(st.integers(0, 2**32 - 1))
    left = data.draw(st.lists(st.integers(1, m), min_size=1, max_size=m - 1, unique=True))
    psi = random_state(np.random.default_rng(seed), m)
    rest = [s for s in range(1, m + 1) if s not in left]
    a = linalg.schmidt_spectrum(psi, left)
    b = linalg.schmidt_spectrum(psi, rest)
    k = min(a.size, b.size)
    np.testing.assert_allclose(a[:k], b[:k], atol=1e-10)
    assert np.all(a >= 0) and abs(a.sum() - 1) < 1e-10


def test_negativity_examples():
    assert linalg.negativity(linalg.basis_state("01"), [1]) == 0.0
    assert linalg.negativity(BELL, [1]) == pytest.approx(0.5, abs=1e-12)


def test_negativity_of_hardy_three_sites_matches_partial_transpose():
    psi = uv_amplitudes(TransformCoefficients.equal(3, 0.9)).vector
    assert linalg.negativity(psi, [1]) == pytest.approx(dense_negativity(psi, 3, [1]), abs=1e-9)


def test_negativity_matches_partial_transpose_random(rng):
    for m in range(2, 9):
        psi = random_state(rng, m)
        left = list(range(1, m // 2 + 1))
        assert linalg.negativity(psi, left) == pytest.approx(dense_negativity(psi, m, left), abs=1e-9)


def test_partial_transpose_helper_agrees_with_oracle(rng):
    psi = random_state(rng, 3)
    rho = np.outer(psi, psi.conj())
    ev = np.linalg.eigvalsh(linalg.partial_transpose(rho, 3, [2]))
    assert (np.abs(ev).sum() - 1) / 2 == pytest.approx(dense_negativity(psi, 3, [2]), abs=1e-12)


def test_entropy_of_bell_is_one_bit():
    assert linalg.von_neumann_entropy(linalg.schmidt_spectrum(BELL, [1])) == pytest.approx(1.0)
    assert linalg.von_neumann_entropy(np.array([1.0, 0.0])) == 0.0


def test_reduced_density_matrix_matches_oracle(rng):
    psi = random_state(rng, 4)
    np.testing.assert_allclose(linalg.reduced_density_matrix(psi, [1, 3]), dense_reduced(psi, 4, [1, 3]),
                               atol=1e-14)

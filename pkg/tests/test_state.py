import numpy as np
import pytest

from hardy_lab.state import (DegenerateTransformError, TransformCoefficients, bits_for, cd_amplitudes,
                             change_frame, mixed_amplitudes, product_state, subsets, transform_matrices,
                             uv_amplitudes)
from hardy_lab import linalg

from conftest import random_coeffs
from oracles import cd_enumeration, hardy_vector

C3 = TransformCoefficients.equal(3, 0.9)


def test_coefficients_validate_normalization():
    with pytest.raises(ValueError):
        TransformCoefficients([0.5, 0.5], [0.5, 0.5])
    with pytest.raises(ValueError):
        TransformCoefficients.from_A([0.5])


def test_degenerate_coefficients_rejected():
    for A in ([1.0, 0.5], [0.0, 0.5]):
        c = TransformCoefficients.from_A(A)
        with pytest.raises(DegenerateTransformError):
            uv_amplitudes(c)
        with pytest.raises(DegenerateTransformError):
            cd_amplitudes(c)


def test_product_state_allows_degenerate():
    psi = product_state(TransformCoefficients.from_A([1.0, 1.0]))
    assert abs(psi[-1]) == pytest.approx(1.0)


@pytest.mark.parametrize("A", [1.0, 1 / np.sqrt(2), 0.9, 0.3 + 0.4j])
def test_transform_matrices_unitary_and_inverse(A):
    c = TransformCoefficients.from_A([A, 0.5])
    to_uv, to_cd = transform_matrices(c, 1)
    np.testing.assert_allclose(to_uv @ to_uv.conj().T, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(to_uv @ to_cd, np.eye(2), atol=1e-12)


def test_transform_degenerate_is_identity_like():
    to_uv, _ = transform_matrices(TransformCoefficients.from_A([1.0, 0.5]), 1)
    np.testing.assert_allclose(np.abs(to_uv), [[0, 1], [1, 0]], atol=1e-15)  # c = u, d = v up to phase


def test_transform_balanced():
    to_uv, _ = transform_matrices(TransformCoefficients.equal(2, 1 / np.sqrt(2)), 2)
    np.testing.assert_allclose(np.abs(to_uv), np.full((2, 2), 1 / np.sqrt(2)), atol=1e-15)


def test_transform_is_ry_with_sign_convention():
    to_uv, _ = transform_matrices(C3, 1)
    np.testing.assert_allclose(to_uv, linalg.ry(2 * np.arcsin(0.9)) @ np.diag([1, -1]), atol=1e-14)
    np.testing.assert_allclose(np.abs(to_uv), np.abs(linalg.ry(0.713 * np.pi)), atol=1e-3)


def test_transform_site_range():
    with pytest.raises(IndexError):
        transform_matrices(C3, 4)


def test_normalization_constant():
    assert C3.normalization == pytest.approx((1 - 0.9**6) ** -0.5, abs=1e-12)
    assert C3.normalization == pytest.approx(1.46088, abs=2e-5)


def test_uv_examples():
    s = uv_amplitudes(C3)
    assert s.amplitude("111") == 0
    B = np.sqrt(1 - 0.81)
    assert s.amplitude("000").real == pytest.approx(C3.normalization * B**3, abs=1e-14)
    assert s.amplitude("000").real == pytest.approx(0.12100, abs=2e-5)
    # N A^2 B = 1.460891 * 0.81 * 0.435890 = 0.515798
    assert s.amplitude("110").real == pytest.approx(0.515798, abs=1e-6)
    assert s.probabilities().sum() == pytest.approx(1.0, abs=1e-12)


def test_uv_matches_direct_construction(rng):
    for n in range(2, 7):
        c = random_coeffs(rng, n)
        ref = hardy_vector(c)
        np.testing.assert_allclose(uv_amplitudes(c).vector, ref, atol=1e-13)


def test_mixed_examples():
    s = mixed_amplitudes(C3, 2)
    assert s.probability("111") == pytest.approx(0.2155, abs=5e-5)
    N2, B2 = C3.normalization**2, 1 - 0.81
    assert s.probability("111") == pytest.approx(N2 * B2 * 0.9**6, abs=1e-14)
    for bits in ("011", "110", "010"):
        assert s.probability(bits) == 0.0
    assert s.probabilities().sum() == pytest.approx(1.0, abs=1e-12)


def test_mixed_coefficients_match_formula(rng):
    n, k = 4, 3
    c = random_coeffs(rng, n)
    s = mixed_amplitudes(c, k)
    N = c.normalization
    rest = [j for j in range(1, n + 1) if j != k]
    all_u_c = bits_for(n, rest)
    all_u_d = bits_for(n, range(1, n + 1))
    assert s.amplitude(all_u_c) == pytest.approx(N * abs(c.B[k - 1]) ** 2 * c.a_prod(rest), abs=1e-14)
    assert abs(s.amplitude(all_u_d)) == pytest.approx(N * abs(c.B[k - 1] * c.a_omega), abs=1e-14)
    for alpha in subsets(n - 1):
        alpha = tuple(rest[i - 1] for i in alpha)
        if set(alpha) == set(rest):
            continue
        vset = [j for j in rest if j not in alpha]
        assert s.amplitude(bits_for(n, alpha)) == pytest.approx(N * c.a_prod(alpha) * c.b_prod(vset), abs=1e-14)


@pytest.mark.parametrize("n", range(2, 9))
def test_mixed_conditional_identity(rng, n):
    c = random_coeffs(rng, n)
    for k in range(1, n + 1):
        s = mixed_amplitudes(c, k)
        idx = np.arange(1 << n)
        dk = ((idx >> (n - k)) & 1) == 1
        probs = s.probabilities()
        assert np.all(probs[dk][:-1] == 0.0)  # only the all-u outcome survives with d_k
        expected = c.normalization**2 * abs(c.B[k - 1]) ** 2 * abs(c.a_omega) ** 2
        assert probs[dk].sum() == pytest.approx(expected, abs=1e-14)
        assert probs.sum() == pytest.approx(1.0, abs=1e-12)


def test_cd_examples():
    p = cd_amplitudes(C3).probabilities()
    assert p[0] == pytest.approx(1 - 0.9**6, abs=1e-14)
    assert p[0] == pytest.approx(0.4686, abs=1e-4)
    total = sum(p[int(b, 2)] for b in ("110", "101", "011", "111"))
    assert total == pytest.approx(0.107, abs=5e-4)


def test_cd_separable_limit():
    p = cd_amplitudes(TransformCoefficients.equal(4, 1e-6)).probabilities()
    assert p[0] == pytest.approx(1.0, abs=1e-6)


def test_cd_matches_enumeration_and_formula(rng):
    for n in range(2, 6):
        c = random_coeffs(rng, n)
        ref = cd_enumeration(c)
        s = cd_amplitudes(c)
        N = c.normalization
        for bits, p in ref.items():
            key = "".join(map(str, bits))
            assert s.probability(key) == pytest.approx(p, abs=1e-13)
            beta = [k + 1 for k, b in enumerate(bits) if b]
            rest = [k + 1 for k, b in enumerate(bits) if not b]
            if beta:
                amp = (-1) ** (len(beta) + 1) * N * c.a_omega * np.conj(c.a_prod(rest)) * c.b_prod(beta)
            else:
                amp = N * (1 - abs(c.a_omega) ** 2)
            assert s.amplitude(key) == pytest.approx(amp, abs=1e-13)


@pytest.mark.parametrize("n", range(2, 11))
def test_frame_change_consistency(rng, n):
    for _ in range(100):
        c = random_coeffs(rng, n)
        uv = uv_amplitudes(c).vector
        from_cd = change_frame(cd_amplitudes(c).vector, c, range(1, n + 1), "UV")
        j = int(np.argmax(np.abs(uv)))
        phase = from_cd[j] / uv[j]
        assert abs(abs(phase) - 1) < 1e-10
        assert np.abs(from_cd - phase * uv).max() < 1e-10


def test_mixed_frame_is_one_site_change(rng):
    c = random_coeffs(rng, 5)
    uv = uv_amplitudes(c).vector
    for k in range(1, 6):
        np.testing.assert_allclose(change_frame(uv, c, [k], "CD"), mixed_amplitudes(c, k).vector, atol=1e-13)


@pytest.mark.parametrize("n", range(2, 13))
def test_count_of_nonzero_multi_d_outcomes(rng, n):
    c = random_coeffs(rng, n, complex_phase=False)
    p = cd_amplitudes(c).probabilities()
    ones = np.array([bin(i).count("1") for i in range(1 << n)])
    assert int(np.count_nonzero(p[ones >= 2])) == 2**n - n - 1


def test_subsets_and_bits():
    assert list(subsets(3, 2)) == [(1, 2), (1, 3), (2, 3), (1, 2, 3)]
    assert bits_for(4, (1, 3)) == "1010"

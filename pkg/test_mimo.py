# Pruebas MIMO: MFD, determinantes, ceros de transmisión y ganancia K
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modules.errors import (
    DegenerateClosedLoop, ImproperEntry, NonSquare, SingularSystem
)
from modules.lti import RationalSystem, complementary, sensitivity
from modules.mimo import (
    PolynomialMatrix, RightMfd, TransferMatrix, build_right_mfd, char_polynomials,
    controller_form_realization, det_complementary, det_poly_matrix, det_sensitivity,
    mimo_gain, transmission_zeros
)
from modules.polynomial import Polynomial

PHI_CL = Polynomial([-0.43, 1.74, -2.3, 1.0])
SAMPLE_POINTS = [0.3 + 0.4j, -0.2 + 1.3j, 1.7, np.exp(0.8j)]

IDENTITY_OVER_Z = [
    [([1.0], [0.0, 1.0]), ([0.0], [1.0])],
    [([0.0], [1.0]), ([1.0], [0.0, 1.0])],
]


def test_example3_mfd(example3):
    mfd = build_right_mfd(example3)
    assert mfd.D[0, 0].allclose(Polynomial([-0.9, 1.0]), tol=1e-9)
    assert mfd.D[1, 1].allclose(Polynomial([0.63, -1.6, 1.0]), tol=1e-9)
    assert mfd.D[0, 1].is_zero and mfd.D[1, 0].is_zero
    assert mfd.N[0, 1].allclose(Polynomial([-0.18, 0.2]), tol=1e-9)
    assert mfd.N[1, 1].allclose(Polynomial([-0.07, 0.1]), tol=1e-9)


def test_example3_mfd_reconstructs_loop(example3):
    mfd = build_right_mfd(example3)
    for z in SAMPLE_POINTS:
        assert np.allclose(mfd.evaluate(z), example3.evaluate(z), atol=1e-10)


def _random_loop(rng, size):
    rows = []
    for _ in range(size):
        row = []
        for _ in range(size):
            n_poles = int(rng.integers(1, 3))
            poles = rng.uniform(-0.9, 0.9, size=n_poles)
            zeros = rng.uniform(-2.0, 2.0, size=int(rng.integers(0, n_poles)))
            row.append(RationalSystem.from_zpk(zeros, poles, rng.uniform(0.1, 1.0)))
        rows.append(row)
    return TransferMatrix(rows)


@pytest.mark.parametrize("size", [2, 3])
def test_mfd_reconstructs_random_loops(size):
    rng = np.random.default_rng(size)
    for _ in range(20):
        L = _random_loop(rng, size)
        mfd = build_right_mfd(L)
        points = rng.uniform(0.95, 1.5, size=32) * np.exp(1j * rng.uniform(0, 2 * np.pi, size=32))
        for z in points:
            expected = L.evaluate(z)
            error = np.linalg.norm(mfd.evaluate(z) - expected) / np.linalg.norm(expected)
            assert error < 1e-8


def test_example3_characteristic_polynomials(example3):
    phi_ol, phi_cl = char_polynomials(build_right_mfd(example3))
    assert phi_cl.allclose(PHI_CL, tol=1e-9)
    assert phi_ol.allclose(Polynomial([-0.567, 2.07, -2.5, 1.0]), tol=1e-9)


def test_example3_det_n_and_transmission_zero(example3):
    mfd = build_right_mfd(example3)
    assert det_poly_matrix(mfd.N).allclose(Polynomial([0.011, -0.01]), tol=1e-10)
    zeros = transmission_zeros(mfd)
    assert len(zeros) == 1
    assert zeros.roots[0] == pytest.approx(1.1, abs=1e-9)


def test_example3_gain_from_coefficients(example3):
    assert mimo_gain(build_right_mfd(example3)).value == pytest.approx(-0.01)


def test_example3_gain_agrees_with_realization(example3):
    mfd = build_right_mfd(example3)
    realization = controller_form_realization(mfd)
    assert np.allclose(realization.C @ realization.B, [[0.1, 0.2], [0.1, 0.1]])
    gain = mimo_gain(mfd, realization)
    assert gain.agrees is True
    assert gain.state_space_value == pytest.approx(-0.01)


def test_realization_reproduces_transfer_matrix(example3):
    realization = controller_form_realization(build_right_mfd(example3))
    rebuilt = TransferMatrix.from_state_space(realization)
    for z in SAMPLE_POINTS:
        assert np.allclose(rebuilt.evaluate(z), example3.evaluate(z), atol=1e-8)


def test_det_sensitivity_inverts_return_difference(example3):
    det_S = det_sensitivity(build_right_mfd(example3))
    for z in SAMPLE_POINTS:
        return_difference = np.linalg.det(np.eye(2) + example3.evaluate(z))
        assert det_S(z) * return_difference == pytest.approx(1.0, abs=1e-9)


def test_det_complementary_matches_direct_evaluation(example3):
    det_T = det_complementary(build_right_mfd(example3))
    for z in SAMPLE_POINTS:
        L = example3.evaluate(z)
        direct = np.linalg.det(L @ np.linalg.inv(np.eye(2) + L))
        assert det_T(z) == pytest.approx(direct, abs=1e-9)


def test_diagonal_loop_factorizes():
    L1 = RationalSystem([0.5], [-0.2, 1.0])
    L2 = RationalSystem([0.3], [0.4, 1.0])
    zero = RationalSystem.constant(0.0)
    mfd = build_right_mfd(TransferMatrix([[L1, zero], [zero, L2]]))
    det_S, det_T = det_sensitivity(mfd), det_complementary(mfd)
    for z in SAMPLE_POINTS:
        assert det_S(z) == pytest.approx(sensitivity(L1)(z) * sensitivity(L2)(z), abs=1e-10)
        assert det_T(z) == pytest.approx(complementary(L1)(z) * complementary(L2)(z), abs=1e-10)


def test_one_by_one_matches_siso(example1, example2):
    for L in (example1, example2):
        mfd = build_right_mfd(TransferMatrix.from_siso(L))
        for z in SAMPLE_POINTS:
            assert det_sensitivity(mfd)(z) == pytest.approx(sensitivity(L)(z), abs=1e-8)
            assert det_complementary(mfd)(z) == pytest.approx(complementary(L)(z), abs=1e-8)
    zeros = transmission_zeros(build_right_mfd(TransferMatrix.from_siso(example2)))
    assert sorted(r.real for r in zeros) == pytest.approx([-1.0, 0.7], abs=1e-9)


def test_identity_loop_gain():
    mfd = build_right_mfd(TransferMatrix.from_coefficients(IDENTITY_OVER_Z))
    gain = mimo_gain(mfd, controller_form_realization(mfd))
    assert gain.value == pytest.approx(1.0)
    assert gain.agrees is True


def test_gain_without_uniform_relative_degree():
    grid = [
        [([1.0], [0.0, 1.0]), ([0.0], [1.0])],
        [([0.0], [1.0]), ([1.0], [0.0, 0.0, 1.0])],
    ]
    mfd = build_right_mfd(TransferMatrix.from_coefficients(grid))
    gain = mimo_gain(mfd, controller_form_realization(mfd))
    assert gain.value == pytest.approx(1.0)
    assert gain.agrees is None
    assert gain.note


def test_non_square_and_improper_entries():
    with pytest.raises(NonSquare):
        TransferMatrix.from_coefficients([[([1.0], [0.0, 1.0]), ([1.0], [0.0, 1.0])]])
    with pytest.raises(ImproperEntry) as exc:
        TransferMatrix.from_coefficients([[([0.0, 0.0, 1.0], [1.0, 1.0])]])
    assert "(0,0)" in str(exc.value)
    with pytest.raises(NonSquare):
        RightMfd(PolynomialMatrix([[[1.0], [1.0]]]), PolynomialMatrix([[[1.0], [0.0]]]))


def test_singular_denominator_rejected():
    with pytest.raises(SingularSystem):
        RightMfd(PolynomialMatrix([[[1.0]]]), PolynomialMatrix([[[0.0]]]))


def test_singular_numerator():
    grid = [
        [([1.0], [0.0, 1.0]), ([1.0], [0.0, 1.0])],
        [([1.0], [0.0, 1.0]), ([1.0], [0.0, 1.0])],
    ]
    mfd = build_right_mfd(TransferMatrix.from_coefficients(grid))
    with pytest.raises(SingularSystem):
        det_complementary(mfd)
    with pytest.raises(SingularSystem):
        transmission_zeros(mfd)


def test_degenerate_closed_loop():
    grid = [
        [([-1.0], [1.0]), ([0.0], [1.0])],
        [([0.0], [1.0]), ([-1.0], [1.0])],
    ]
    mfd = build_right_mfd(TransferMatrix.from_coefficients(grid))
    with pytest.raises(DegenerateClosedLoop):
        char_polynomials(mfd)


def test_determinant_of_empty_and_constant_matrices():
    assert det_poly_matrix(PolynomialMatrix([])).allclose(Polynomial.constant(1.0))
    assert det_poly_matrix(PolynomialMatrix([[[2.0], [1.0]], [[1.0], [3.0]]])).allclose(
        Polynomial.constant(5.0), tol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.floats(min_value=-2, max_value=2, allow_nan=False), min_size=1, max_size=4),
                min_size=4, max_size=4),
       st.floats(min_value=0, max_value=2 * np.pi))
def test_determinant_interpolation_matches_pointwise(entries, angle):
    M = PolynomialMatrix([entries[:2], entries[2:]])
    z = 0.9 * np.exp(1j * angle)
    assert abs(det_poly_matrix(M)(z) - np.linalg.det(M.evaluate(z))) < 1e-6

# Pruebas de polinomios: evaluación, raíces y cancelación
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from modules.errors import DegreeZero, ZeroPolynomial
from modules.polynomial import (
    ZERO_DEGREE, Polynomial, RootSet, cancel_common_roots, eval_at, from_roots,
    root_multiset_difference, root_multiset_union, roots, to_string
)

PHI_CL = Polynomial([-0.43, 1.74, -2.3, 1.0])


def test_canonical_form_trims_dust():
    p = Polynomial([1.0, 2.0, 1e-15, 0.0])
    assert p.degree == 1
    assert p.leading == 2.0
    assert Polynomial([0.0, 0.0]).is_zero
    assert Polynomial.zero().degree == ZERO_DEGREE


def test_non_finite_coefficients_rejected():
    with pytest.raises(ValueError):
        Polynomial([1.0, np.inf])


def test_eval_at():
    assert eval_at(Polynomial([-1.0, 1.0]), 1.0) == 0
    assert abs(eval_at(PHI_CL, 0.5730)) < 1e-3
    assert abs(eval_at(Polynomial([1.0, 0.0, 1.0]), np.exp(1j * np.pi / 2))) < 1e-15


def test_eval_at_vectorized_matches_scalar():
    xs = np.array([0.3, -1.2 + 0.4j, 2.0])
    values = PHI_CL(xs)
    for x, v in zip(xs, values):
        assert v == pytest.approx(eval_at(PHI_CL, x), abs=1e-14)


def test_arithmetic():
    p = Polynomial([1.0, 1.0])
    q = Polynomial([-1.0, 1.0])
    assert (p * q).allclose(Polynomial([-1.0, 0.0, 1.0]))
    assert (p + q).allclose(Polynomial([0.0, 2.0]))
    assert (p - p).is_zero
    assert (2 * p).allclose(Polynomial([2.0, 2.0]))
    assert (p * Polynomial.zero()).is_zero


def test_roots_of_simple_quadratic():
    rs = roots(Polynomial([1.0, -2.5, 1.0]))
    assert rs.roots == pytest.approx((0.5, 2.0), abs=1e-12)
    assert rs.gain == 1.0


def test_roots_of_closed_loop_polynomial():
    rs = roots(PHI_CL)
    expected = [0.5730, 0.8635 - 0.0692j, 0.8635 + 0.0692j]
    for r, e in zip(rs, expected):
        assert abs(r - e) < 1e-3
        assert abs(PHI_CL(r)) < 1e-6


def test_roots_recover_factored_gain():
    p = from_roots(RootSet([0.7, -0.8752], 0.2628))
    rs = roots(p)
    assert rs.roots == pytest.approx((-0.8752, 0.7), abs=1e-12)
    assert rs.gain == pytest.approx(0.2628)


def test_roots_errors():
    with pytest.raises(ZeroPolynomial):
        roots(Polynomial.zero())
    with pytest.raises(DegreeZero):
        roots(Polynomial.constant(3.0))


def test_real_polynomial_roots_are_conjugate_closed():
    rs = roots(Polynomial([1.0, 0.0, 1.0]))
    assert rs.roots[0] == rs.roots[1].conjugate()
    assert abs(rs.roots[0].imag) == pytest.approx(1.0)


def test_from_roots():
    assert from_roots(RootSet([], 3.0)).allclose(Polynomial.constant(3.0))
    assert from_roots(RootSet([0.5, 2.0])).allclose(Polynomial([1.0, -2.5, 1.0]))
    assert from_roots(RootSet([1.1], -0.01)).allclose(Polynomial([0.011, -0.01]), tol=1e-15)


def test_from_roots_is_real_for_conjugate_pairs():
    p = from_roots(RootSet([0.5 + 0.2j, 0.5 - 0.2j]))
    assert p.coeffs.imag.max() == 0.0


def test_cancel_exact_shared_root():
    num = from_roots(RootSet([0.7, 1.1]))
    den = from_roots(RootSet([0.7, 0.5]))
    new_num, new_den = cancel_common_roots(num, den, 1e-8)
    assert new_num.allclose(Polynomial([-1.1, 1.0]), tol=1e-12)
    assert new_den.allclose(Polynomial([-0.5, 1.0]), tol=1e-12)


def test_cancel_removes_single_shared_factor_of_determinant_ratio():
    num = from_roots(RootSet([0.9, 0.9, 0.7, 0.7]))
    den = from_roots(RootSet([0.7])) * PHI_CL
    new_num, new_den = cancel_common_roots(num, den, 1e-6)
    assert new_num.degree == 3
    assert new_den.degree == 3
    assert new_den.allclose(PHI_CL, tol=1e-8)


def test_cancel_within_tolerance_preserves_gains():
    num = Polynomial([-1.0, 1.0]) * 2.0
    den = Polynomial([-1.0000000001, 1.0]) * 5.0
    new_num, new_den = cancel_common_roots(num, den, 1e-6)
    assert new_num.degree == 0 and new_den.degree == 0
    assert new_num.leading == pytest.approx(2.0)
    assert new_den.leading == pytest.approx(5.0)


def test_cancel_returns_inputs_when_nothing_matches():
    num = Polynomial([-0.2, 1.0])
    den = Polynomial([-0.5, 1.0])
    assert cancel_common_roots(num, den, 1e-6) == (num, den)


def test_root_multisets():
    union = root_multiset_union([0.9, 0.7], [0.9, 0.9, 0.5], 1e-6)
    assert sorted(union, key=lambda r: r.real) == pytest.approx([0.5, 0.7, 0.9, 0.9])
    assert root_multiset_difference([0.9, 0.7, 0.9], [0.9], 1e-6) == pytest.approx([0.7, 0.9])
    with pytest.raises(ValueError):
        root_multiset_difference([0.9], [0.5], 1e-6)


def test_to_string():
    assert to_string(Polynomial([1.0, -2.5, 1.0])) == "1*z^2 - 2.5*z + 1"
    assert str(Polynomial.zero()) == "0"


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(min_value=-3, max_value=3, allow_nan=False), min_size=1, max_size=6),
       st.floats(min_value=0.1, max_value=10))
def test_roots_invert_from_roots(values, gain):
    ordered = sorted(values)
    assume(all(b - a >= 0.5 for a, b in zip(ordered, ordered[1:])))
    rs = roots(from_roots(RootSet(ordered, gain)))
    found = sorted((r.real for r in rs), key=float)
    assert found == pytest.approx(ordered, abs=1e-8)
    assert rs.gain == pytest.approx(gain)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(min_value=-2, max_value=2, allow_nan=False), min_size=2, max_size=8))
def test_real_coefficients_give_conjugate_closed_roots(coeffs):
    p = Polynomial(coeffs)
    assume(p.degree >= 1 and abs(p.leading) > 0.1)
    rs = list(roots(p))
    for r in rs:
        mismatch = min(abs(q - r.conjugate()) for q in rs)
        assert mismatch < 1e-9


@settings(max_examples=100, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=6))
def test_from_roots_vanishes_at_its_roots(values):
    gain = 1.5 + 0.5j
    p = from_roots(RootSet(values, gain))
    for r in values:
        scale = abs(gain) * np.prod([max(1.0, abs(r - q)) for q in values])
        assert abs(p(r)) <= 1e-10 * scale

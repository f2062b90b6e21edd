# Pruebas de integrales: cuadratura, predicciones, restricción ponderada y reportes
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modules.errors import (
    BadZero, EvaluationFailure, NonConvergent, NotOutside, UnstableClosedLoop,
    ValidationError, ZeroGain
)
from modules.integrals import (
    TWO_PI, QuadratureConfig, StabilityVerdict, WeightedIntegralSpec, identity_integral,
    identity_quadrature, log_modulus_integral, predict_complementary_integral,
    predict_sensitivity_integral, random_theorem_check, shift_invariance_gap,
    singular_angles, waterbed_verify, weighted_prediction, weighted_sensitivity_integral,
    weighted_spec_from_loop
)
from modules.lti import RationalSystem, companion_realization, complementary, sensitivity
from modules.mimo import build_right_mfd, det_complementary, det_sensitivity
from modules.polynomial import RootSet, from_roots
from modules.system_file import load_fixture, to_system

# Lazo con cero de fase no mínima en 1.5 y polos inestables en 2 y 6
NMP_LOOP = RationalSystem([-12.0, 8.0], [12.0, -8.0, 1.0])
NMP_LOOP_WEIGHTED = 12.32546390


def test_quadrature_config_validation():
    with pytest.raises(ValidationError):
        QuadratureConfig(abs_tol=0.0)
    with pytest.raises(ValidationError):
        QuadratureConfig(max_subdivisions=0)
    with pytest.raises(ValidationError):
        QuadratureConfig(singular_angles=(7.0,))
    assert QuadratureConfig(singular_angles=(3.0, 1.0)).singular_angles == (1.0, 3.0)


def test_singular_angles():
    angles = singular_angles([1.0, -1.0, 0.5, 1.005j, 3.0])
    assert angles == pytest.approx([0.0, np.pi / 2, np.pi])


def test_identity_integral_closed_form():
    assert identity_integral(0.5) == 0.0
    assert identity_integral(1.0) == 0.0
    assert identity_integral(-1.0) == 0.0
    assert identity_integral(2.0) == pytest.approx(8.710344, abs=1e-6)
    assert identity_integral(-1.5) == pytest.approx(5.095225, abs=1e-6)


@pytest.mark.parametrize("a", [0.0, 0.5, 1.0, -1.0, 2.0, -1.5])
def test_identity_quadrature_known_points(a, quad_cfg):
    assert identity_quadrature(a, quad_cfg).value == pytest.approx(identity_integral(a), abs=1e-6)


def test_identity_quadrature_on_seeded_grid(quad_cfg):
    rng = np.random.default_rng(2024)
    values = list(rng.uniform(-3.0, 3.0, size=190)) + list(1 + rng.uniform(-0.02, 0.02, size=10))
    for a in values:
        result = identity_quadrature(a, quad_cfg)
        tol = 1e-4 if abs(abs(a) - 1) < 0.01 else 1e-6
        assert abs(result.value - identity_integral(a)) < tol, a


def test_single_outside_root(quad_cfg):
    result = log_modulus_integral(lambda z: z - 2.0, quad_cfg)
    assert result.value == pytest.approx(TWO_PI * np.log(2.0), abs=1e-6)
    assert result.value == pytest.approx(4.3552, abs=1e-4)


def test_quadrature_error_estimate_within_tolerance(quad_cfg):
    result = log_modulus_integral(lambda z: z - 0.3, quad_cfg)
    assert result.value == pytest.approx(0.0, abs=1e-8)
    assert result.error_estimate <= quad_cfg.abs_tol
    assert result.subdivisions_used >= 1


def test_tighter_tolerance_needs_more_subdivisions():
    f = lambda z: z - 1.001
    loose = log_modulus_integral(f, QuadratureConfig(abs_tol=1e-4))
    tight = log_modulus_integral(f, QuadratureConfig(abs_tol=1e-10))
    assert tight.subdivisions_used >= loose.subdivisions_used
    assert abs(tight.value - TWO_PI * np.log(1.001)) <= abs(loose.value - TWO_PI * np.log(1.001)) + 1e-9


def test_non_convergence_is_reported():
    with pytest.raises(NonConvergent):
        log_modulus_integral(lambda z: (z - 1.001) ** 2, QuadratureConfig(abs_tol=1e-14, max_subdivisions=1))


def test_break_points_beyond_subdivision_limit():
    cfg = QuadratureConfig(abs_tol=1e-4, max_subdivisions=1, singular_angles=(1.0, np.pi))
    result = log_modulus_integral(lambda z: z - 0.3, cfg)
    assert result.value == pytest.approx(0.0, abs=1e-4)


def _sensitivity_pairs(example1, example2, example3):
    pairs = []
    for L in (example1, example2):
        pairs.extend([sensitivity(L), complementary(L)])
    mfd = build_right_mfd(example3)
    pairs.extend([det_sensitivity(mfd), det_complementary(mfd)])
    return pairs


def test_error_estimate_does_not_grow_with_subdivisions(example1, example2, example3):
    for f in _sensitivity_pairs(example1, example2, example3):
        estimates = []
        for limit in (128, 256, 512, 1024):
            cfg = QuadratureConfig(max_subdivisions=limit).with_singular_angles(singular_angles(f.zeros))
            estimates.append(log_modulus_integral(f, cfg).error_estimate)
        for coarse, fine in zip(estimates, estimates[1:]):
            assert fine <= coarse * (1 + 1e-12)


def test_evaluation_failure_wraps_errors(quad_cfg):
    def broken(z):
        raise RuntimeError("fallo")
    with pytest.raises(EvaluationFailure):
        log_modulus_integral(broken, quad_cfg)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=0.05, max_value=20.0), st.floats(min_value=1.2, max_value=3.0))
def test_scaling_adds_log_constant(c, r):
    cfg = QuadratureConfig()
    base = log_modulus_integral(lambda z: z - r, cfg).value
    scaled = log_modulus_integral(lambda z: c * (z - r), cfg).value
    assert scaled - base == pytest.approx(TWO_PI * np.log(c), abs=1e-7)


@pytest.mark.parametrize("r,phi", [(0.5, 1.0), (2.0, 2.5), (1.3, -0.7)])
def test_shift_invariance(r, phi, quad_cfg):
    assert shift_invariance_gap(r, phi, quad_cfg) < 1e-7


def test_predict_sensitivity_integral():
    assert predict_sensitivity_integral([]) == 0.0
    assert predict_sensitivity_integral([1.2214]) == pytest.approx(1.256623, abs=1e-6)
    assert predict_sensitivity_integral([2.0, 2j]) == pytest.approx(2 * TWO_PI * np.log(2))
    with pytest.raises(NotOutside):
        predict_sensitivity_integral([0.5])


def test_predict_complementary_integral():
    assert predict_complementary_integral([], 0.2628) == pytest.approx(-8.396610, abs=1e-6)
    assert predict_complementary_integral([1.1], -0.01) == pytest.approx(-28.336286, abs=1e-6)
    with pytest.raises(ZeroGain):
        predict_complementary_integral([], 0.0)
    with pytest.raises(NotOutside):
        predict_complementary_integral([0.9], 1.0)


def test_weighted_spec_validation():
    with pytest.raises(NotOutside):
        WeightedIntegralSpec(beta0=0.5)
    with pytest.raises(NotOutside):
        WeightedIntegralSpec(beta0=1.5, alphas=(0.8,))
    spec = WeightedIntegralSpec(beta0=-2.0)
    assert spec.r0 == 2.0
    assert spec.phi0 == pytest.approx(np.pi)


def test_weighted_prediction_single_pole():
    assert weighted_prediction(WeightedIntegralSpec(1.5, (2.0,))) == pytest.approx(8.710344, abs=1e-6)
    assert weighted_prediction(WeightedIntegralSpec(1.5)) == 0.0


def test_weighted_integral_for_unstable_loop(quad_cfg):
    spec = weighted_spec_from_loop(NMP_LOOP, 1.5)
    assert sorted(a.real for a in spec.alphas) == pytest.approx([2.0, 6.0])
    result = weighted_sensitivity_integral(sensitivity(NMP_LOOP), spec, quad_cfg)
    assert result.analytic == pytest.approx(NMP_LOOP_WEIGHTED, abs=1e-7)
    assert result.numeric.value == pytest.approx(NMP_LOOP_WEIGHTED, abs=1e-6)
    assert result.discrepancy < 1e-6
    assert result.warnings == ()


def test_weighted_integral_single_unstable_pole_biproper_loop(quad_cfg):
    L = RationalSystem.from_zpk([1.5], [2.0], -1.5)
    S = sensitivity(L)
    assert [p.real for p in S.poles] == pytest.approx([0.5])
    spec = weighted_spec_from_loop(L, 1.5)
    result = weighted_sensitivity_integral(S, spec, quad_cfg)
    assert result.analytic == pytest.approx(TWO_PI * np.log(4.0), abs=1e-9)
    assert result.numeric.value == pytest.approx(8.710344, abs=1e-6)
    assert result.discrepancy < 2e-3


def test_weighted_integral_for_stable_loop(quad_cfg):
    L = RationalSystem(from_roots(RootSet([1.5], 0.1)), from_roots(RootSet([0.5, 0.2])))
    result = weighted_sensitivity_integral(sensitivity(L), weighted_spec_from_loop(L, 1.5), quad_cfg)
    assert result.analytic == 0.0
    assert result.numeric.value == pytest.approx(0.0, abs=1e-7)


def test_weighted_integral_rejects_non_zero_beta(quad_cfg):
    with pytest.raises(BadZero):
        weighted_sensitivity_integral(sensitivity(NMP_LOOP), WeightedIntegralSpec(3.0, (2.0, 6.0)), quad_cfg)


def test_weighted_integral_requires_stable_closed_loop(quad_cfg):
    L = RationalSystem(from_roots(RootSet([1.5], 3.0)), from_roots(RootSet([0.5])))
    with pytest.raises(UnstableClosedLoop):
        weighted_sensitivity_integral(sensitivity(L), WeightedIntegralSpec(1.5), quad_cfg)


def test_verify_example1(example1, quad_cfg):
    report = waterbed_verify(example1, quad_cfg)
    assert report.stability_verdict is StabilityVerdict.OLS
    assert report.numeric_S_integral.value == pytest.approx(0.0, abs=1e-6)
    assert report.analytic_T == pytest.approx(-8.396610, abs=1e-6)
    assert report.numeric_T_integral.value == pytest.approx(-8.3966, abs=1e-3)
    assert report.interpolation_results == []
    assert report.passed(1e-6)


def test_verify_example2(example2, quad_cfg):
    report = waterbed_verify(example2, quad_cfg)
    assert report.stability_verdict is StabilityVerdict.OLU
    assert report.unstable_poles == pytest.approx((1.2214,))
    assert report.numeric_S_integral.value == pytest.approx(1.2566, abs=1e-3)
    assert report.numeric_T_integral.value == pytest.approx(-7.5439, abs=1e-3)
    assert any("círculo unitario" in w for w in report.boundary_warnings)
    assert [c.kind for c in report.interpolation_results] == ["pole"]
    assert report.passed(1e-6)


def test_verify_example3(example3, quad_cfg):
    report = waterbed_verify(example3, quad_cfg)
    assert report.is_mimo
    assert report.stability_verdict is StabilityVerdict.OLS
    assert report.nmp_zeros == pytest.approx((1.1,))
    assert report.gain == pytest.approx(-0.01)
    assert report.numeric_S_integral.value == pytest.approx(0.0, abs=1e-6)
    assert report.numeric_T_integral.value == pytest.approx(-28.3, abs=0.05)
    assert report.analytic_T == pytest.approx(-28.336286, abs=1e-6)
    assert report.passed(1e-6)


def test_verify_accepts_state_space_and_mfd(example1, example3, quad_cfg):
    siso = waterbed_verify(companion_realization(example1), quad_cfg)
    assert siso.analytic_T == pytest.approx(-8.396610, abs=1e-6)
    mimo = waterbed_verify(build_right_mfd(example3), quad_cfg)
    assert mimo.analytic_T == pytest.approx(-28.336286, abs=1e-6)
    with pytest.raises(ValidationError):
        waterbed_verify("no es un sistema", quad_cfg)


def test_verify_biproper_loop(quad_cfg):
    L = RationalSystem([0.25, 0.5], [-0.5, 1.0])
    report = waterbed_verify(L, quad_cfg)
    assert report.notes
    assert report.discrepancy_S < 1e-6
    assert report.discrepancy_T < 1e-6


def test_verify_closed_loop_unstable_fixture(quad_cfg):
    report = waterbed_verify(to_system(load_fixture("closed_loop_unstable")), quad_cfg)
    assert report.stability_verdict is StabilityVerdict.CLOSED_LOOP_UNSTABLE
    assert report.numeric_S_integral is None
    assert not report.passed(1e-6)


def test_report_is_json_serializable(example2, quad_cfg):
    payload = json.loads(json.dumps(waterbed_verify(example2, quad_cfg).to_dict()))
    assert payload["stability_verdict"] == "OLU"
    assert payload["S"]["analytic"] == pytest.approx(1.256623, abs=1e-6)
    assert payload["gain"] == pytest.approx(0.301)


@pytest.mark.parametrize("kind,count", [("sensitivity", 5), ("complementary", 5), ("mimo", 2)])
def test_random_theorem_check(kind, count):
    summary = random_theorem_check(kind, count=count, seed=11)
    assert summary.count == count
    assert summary.passed, summary.failures


@pytest.mark.parametrize("kind,count", [("sensitivity", 100), ("complementary", 100), ("mimo", 50)])
def test_random_theorem_check_default_counts(kind, count):
    summary = random_theorem_check(kind, seed=0)
    assert summary.count == count
    assert summary.passed, summary.failures


def test_random_theorem_check_rejects_unknown_kind():
    with pytest.raises(ValidationError):
        random_theorem_check("bode", count=1)

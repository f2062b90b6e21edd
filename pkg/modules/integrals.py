"""
Integrales de Sensibilidad - Cuadratura, Predicciones y Reportes
Desarrollado para Su Majestad

Este módulo calcula integrales de ln|f(e^{jw})| sobre el círculo unitario con
una regla abierta adaptativa (QUADPACK) partida en los ángulos singulares,
las predicciones analíticas de las restricciones de sensibilidad y
sensibilidad complementaria (SISO y forma determinante MIMO), la restricción
ponderada de dos lados para un cero de fase no mínima y el reporte completo
de verificación.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
from scipy.integrate import quad

from .errors import (
    BadZero, EvaluationFailure, NonConvergent, NotOutside,
    SingularSystem, UnstableClosedLoop, ValidationError, WaterbedError, ZeroGain
)
from .lti import (
    CANCEL_TOL, INTERPOLATION_TOL, UNIT_CIRCLE_EPS, InterpolationCheck,
    RationalSystem, StateSpaceSystem, classify_roots, complementary,
    crossover_frequencies, interpolation_check, markov_gain, sensitivity,
    state_space_to_rational
)
from .mimo import (
    MimoGain, RightMfd, TransferMatrix, build_right_mfd, controller_form_realization,
    det_complementary, det_sensitivity, mimo_gain
)
from .polynomial import RootSet, from_roots

logger = logging.getLogger("Integrals")

TWO_PI = 2 * np.pi

# Piso del módulo antes del logaritmo
MAGNITUDE_FLOOR = 1e-300

# Raíces a esta distancia del círculo generan puntos de corte
NEAR_CIRCLE_BAND = 1e-2

BAD_ZERO_TOL = 1e-6

# Cercanía beta0 ~ alpha que vuelve mal condicionada la predicción ponderada
CONDITIONING_TOL = 1e-3

DEFAULT_RANDOM_COUNTS = {"sensitivity": 100, "complementary": 100, "mimo": 50}


@dataclass(frozen=True)
class QuadratureConfig:
    """Parámetros de la cuadratura adaptativa"""

    abs_tol: float = 1e-8
    max_subdivisions: int = 2 ** 14
    singular_angles: tuple = ()

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValidationError("abs_tol debe ser positiva", field="abs_tol")
        if int(self.max_subdivisions) < 1:
            raise ValidationError("max_subdivisions debe ser al menos 1", field="max_subdivisions")
        angles = tuple(sorted(float(a) for a in self.singular_angles))
        if any(not 0 <= a < TWO_PI for a in angles):
            raise ValidationError("Los ángulos singulares deben estar en [0, 2*pi)",
                                  field="singular_angles")
        object.__setattr__(self, "singular_angles", angles)
        object.__setattr__(self, "max_subdivisions", int(self.max_subdivisions))

    def with_singular_angles(self, angles):
        return replace(self, singular_angles=tuple(angles))


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    subdivisions_used: int

    def to_dict(self):
        return {
            "value": self.value,
            "error_estimate": self.error_estimate,
            "subdivisions_used": self.subdivisions_used,
        }


@dataclass(frozen=True)
class WeightedIntegralSpec:
    """Cero de fase no mínima beta0 y polos inestables alpha_i del lazo"""

    beta0: complex
    alphas: tuple = ()

    def __post_init__(self):
        beta0 = complex(self.beta0)
        alphas = tuple(complex(a) for a in self.alphas)
        if abs(beta0) <= 1:
            raise NotOutside(f"beta0={beta0} debe estar fuera del círculo unitario")
        inside = [a for a in alphas if abs(a) <= 1]
        if inside:
            raise NotOutside(f"Polos que no son inestables: {inside}")
        object.__setattr__(self, "beta0", beta0)
        object.__setattr__(self, "alphas", alphas)

    @property
    def r0(self):
        return abs(self.beta0)

    @property
    def phi0(self):
        return float(np.angle(self.beta0))

    def weight(self, phi):
        """Núcleo de Poisson exterior W(r0, phi)"""
        r0 = self.r0
        return (r0 ** 2 - 1) / (r0 ** 2 - 2 * r0 * np.cos(phi - self.phi0) + 1)


@dataclass(frozen=True)
class WeightedIntegralResult:
    numeric: IntegralResult
    analytic: float
    warnings: tuple = ()

    @property
    def discrepancy(self):
        return abs(self.numeric.value - self.analytic)


class StabilityVerdict(Enum):
    OLS = "OLS"
    OLU = "OLU"
    CLOSED_LOOP_UNSTABLE = "ClosedLoopUnstable"


@dataclass
class WaterbedReport:
    """Reporte de verificación de las restricciones de sensibilidad"""

    stability_verdict: StabilityVerdict
    is_mimo: bool = False
    numeric_S_integral: IntegralResult = None
    analytic_S: float = None
    numeric_T_integral: IntegralResult = None
    analytic_T: float = None
    discrepancy_S: float = None
    discrepancy_T: float = None
    interpolation_results: list = field(default_factory=list)
    boundary_warnings: list = field(default_factory=list)
    errors: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    closed_loop_poles: tuple = ()
    unstable_poles: tuple = ()
    nmp_zeros: tuple = ()
    gain: object = None
    gain_check: MimoGain = None
    sensitivity_crossovers: list = field(default_factory=list)

    @property
    def discrepancies(self):
        return {"S": self.discrepancy_S, "T": self.discrepancy_T}

    def passed(self, tol):
        """Ambas discrepancias dentro de tol y todas las interpolaciones correctas"""
        if self.stability_verdict is StabilityVerdict.CLOSED_LOOP_UNSTABLE or self.errors:
            return False
        if self.discrepancy_S is None or self.discrepancy_T is None:
            return False
        if self.discrepancy_S > tol or self.discrepancy_T > tol:
            return False
        return all(check.passed for check in self.interpolation_results)

    def to_dict(self):
        return {
            "stability_verdict": self.stability_verdict.value,
            "is_mimo": self.is_mimo,
            "S": {
                "numeric": self.numeric_S_integral.to_dict() if self.numeric_S_integral else None,
                "analytic": self.analytic_S,
                "discrepancy": self.discrepancy_S,
            },
            "T": {
                "numeric": self.numeric_T_integral.to_dict() if self.numeric_T_integral else None,
                "analytic": self.analytic_T,
                "discrepancy": self.discrepancy_T,
            },
            "gain": _json_complex(self.gain),
            "gain_check": self.gain_check.to_dict() if self.gain_check else None,
            "closed_loop_poles": [_json_complex(p) for p in self.closed_loop_poles],
            "unstable_poles": [_json_complex(p) for p in self.unstable_poles],
            "nmp_zeros": [_json_complex(z) for z in self.nmp_zeros],
            "interpolation": [check.to_dict() for check in self.interpolation_results],
            "sensitivity_crossovers": list(self.sensitivity_crossovers),
            "boundary_warnings": list(self.boundary_warnings),
            "errors": dict(self.errors),
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class RandomCheckSummary:
    """Resultado agregado de una verificación aleatoria de los teoremas"""

    kind: str
    count: int
    seed: int
    failures: tuple
    max_error: float

    @property
    def passed(self):
        return not self.failures


def singular_angles(rs, band=NEAR_CIRCLE_BAND):
    """Ángulos en [0, 2*pi) de las raíces a menos de 'band' del círculo unitario"""
    angles = {float(np.angle(r) % TWO_PI) for r in rs if abs(abs(r) - 1) <= band}
    return sorted(a for a in angles if a < TWO_PI)


def log_modulus_integral(f, cfg, lower=0.0, upper=TWO_PI, weight=None):
    """
    Integral de ln|f(e^{jw})| (opcionalmente ponderada) sobre [lower, upper]

    Usa la cuadratura adaptativa de Gauss-Kronrod de QUADPACK, cuyos nodos
    nunca caen en los extremos de los subintervalos, con el intervalo partido
    en cada ángulo singular de la configuración.

    Args:
        f (callable): Función evaluable en el círculo unitario
        cfg (QuadratureConfig): Tolerancia, subdivisiones y ángulos singulares
        lower (float): Extremo inferior
        upper (float): Extremo superior
        weight (callable | None): Peso w(omega) que multiplica al integrando

    Returns:
        IntegralResult
    """
    def integrand(omega):
        try:
            value = f(complex(np.cos(omega), np.sin(omega)))
        except EvaluationFailure:
            raise
        except Exception as e:
            raise EvaluationFailure(f"f falló en omega={omega}: {str(e)}") from e
        result = np.log(max(abs(value), MAGNITUDE_FLOOR))
        if weight is not None:
            result *= weight(omega)
        if not np.isfinite(result):
            raise EvaluationFailure(f"Integrando no finito en omega={omega}")
        return float(result)

    points = _interior_points(cfg.singular_angles, lower, upper)
    # QUADPACK exige más subintervalos que puntos de quiebre
    limit = max(cfg.max_subdivisions, len(points) + 1)
    try:
        output = quad(
            integrand, lower, upper,
            epsabs=cfg.abs_tol, epsrel=0.0, limit=limit,
            points=points or None, full_output=1,
        )
    except ValueError as e:
        raise NonConvergent(f"QUADPACK rechazó la configuración: {str(e)}") from e
    value, error, info = output[0], output[1], output[2]
    message = output[3] if len(output) > 3 else None

    if message and error > cfg.abs_tol:
        raise NonConvergent(
            f"Cuadratura sin converger: error estimado {error:.3e} > {cfg.abs_tol:.1e} ({message})")
    if message:
        logger.debug(f"Aviso de QUADPACK con error aceptable {error:.3e}: {message}")

    return IntegralResult(value=float(value), error_estimate=float(abs(error)),
                          subdivisions_used=int(info.get("last", 0)))


def identity_integral(a):
    """Forma cerrada de la integral de ln(1 - 2a cos x + a^2) sobre [0, 2*pi]"""
    a = float(a)
    if a * a <= 1:
        return 0.0
    return TWO_PI * np.log(a * a)


def identity_quadrature(a, cfg):
    """Cuadratura de ln|e^{jw} - a|^2 para contrastar con identity_integral"""
    a = float(a)
    cfg = cfg.with_singular_angles(singular_angles([a]))
    return log_modulus_integral(lambda z: (z - a) ** 2, cfg)


def predict_sensitivity_integral(unstable_poles):
    """
    Valor predicho de la integral de ln|S|: 2*pi*sum(ln|p_i|)

    Args:
        unstable_poles (RootSet | iterable): Polos de lazo abierto fuera del círculo

    Returns:
        float: 0 para lazo abierto estable
    """
    poles = list(unstable_poles)
    inside = [p for p in poles if abs(p) <= 1]
    if inside:
        raise NotOutside(f"Se esperaban polos inestables, se recibió {inside}")
    return float(TWO_PI * sum(np.log(abs(p)) for p in poles))


def predict_complementary_integral(nmp_zeros, K):
    """Valor predicho de la integral de ln|T|: 2*pi*(sum(ln|z_i|) + ln|K|)"""
    if K == 0:
        raise ZeroGain("La ganancia K no puede ser cero")
    zeros = list(nmp_zeros)
    inside = [z for z in zeros if abs(z) <= 1]
    if inside:
        raise NotOutside(f"Se esperaban ceros de fase no mínima, se recibió {inside}")
    return float(TWO_PI * (sum(np.log(abs(z)) for z in zeros) + np.log(abs(K))))


def weighted_prediction(spec):
    """2*pi*sum(ln|(1 - conj(alpha)*beta0) / (beta0 - alpha)|)"""
    beta0 = spec.beta0
    return float(TWO_PI * sum(
        np.log(abs((1 - np.conj(alpha) * beta0) / (beta0 - alpha))) for alpha in spec.alphas))


def weighted_spec_from_loop(L, beta0, eps=UNIT_CIRCLE_EPS):
    """Construye la especificación ponderada con los polos inestables de L"""
    return WeightedIntegralSpec(beta0=beta0, alphas=tuple(classify_roots(L.poles, eps).outside))


def weighted_sensitivity_integral(S, spec, cfg, eps=UNIT_CIRCLE_EPS):
    """
    Restricción ponderada de dos lados para un cero de fase no mínima

    Args:
        S (RationalSystem): Función de sensibilidad del lazo
        spec (WeightedIntegralSpec): beta0 y polos inestables del lazo
        cfg (QuadratureConfig): Configuración de la cuadratura

    Returns:
        WeightedIntegralResult: integral numérica sobre [-pi, pi] y valor analítico
    """
    deviation = abs(S(spec.beta0) - 1)
    if not deviation < BAD_ZERO_TOL:
        raise BadZero(f"beta0={spec.beta0} no es cero del lazo: |S(beta0) - 1| = {deviation:.3e}")

    unstable = [p for p in S.poles if abs(p) >= 1 - eps]
    if unstable:
        raise UnstableClosedLoop(f"Polos de lazo cerrado no estables: {unstable}")

    warnings = []
    for alpha in spec.alphas:
        if abs(spec.beta0 - alpha) < CONDITIONING_TOL:
            message = (f"beta0={spec.beta0} casi coincide con el polo inestable {alpha}: "
                       f"predicción mal condicionada")
            logger.warning(message)
            warnings.append(message)

    cfg = cfg.with_singular_angles(singular_angles(S.zeros))
    numeric = log_modulus_integral(S, cfg, lower=-np.pi, upper=np.pi, weight=spec.weight)
    return WeightedIntegralResult(numeric=numeric, analytic=weighted_prediction(spec),
                                  warnings=tuple(warnings))


def shift_invariance_gap(r, phi, cfg):
    """
    Diferencia entre la integral de ln|e^{jw} - r e^{j phi}| y la misma con phi = 0

    Sobre el periodo completo la integral no depende de phi.
    """
    def integral(angle):
        root = r * np.exp(1j * angle)
        local = cfg.with_singular_angles(singular_angles([root]))
        return log_modulus_integral(lambda z: z - root, local).value

    return abs(integral(phi) - integral(0.0))


def waterbed_verify(system, cfg, eps=UNIT_CIRCLE_EPS, realization=None,
                    cancel_tol=CANCEL_TOL, interpolation_tol=INTERPOLATION_TOL):
    """
    Verifica las restricciones de sensibilidad de un lazo

    Args:
        system: RationalSystem, StateSpaceSystem, TransferMatrix o RightMfd
        cfg (QuadratureConfig): Configuración de la cuadratura
        eps (float): Tolerancia respecto al círculo unitario
        realization (StateSpaceSystem | None): Realización MIMO para contrastar K

    Returns:
        WaterbedReport
    """
    if isinstance(system, StateSpaceSystem):
        if system.n_inputs == 1 and system.n_outputs == 1:
            system = state_space_to_rational(system)
        else:
            realization = realization or system
            system = TransferMatrix.from_state_space(system)

    if isinstance(system, RationalSystem):
        return _verify_siso(system, cfg, eps, interpolation_tol)
    if isinstance(system, TransferMatrix):
        system = build_right_mfd(system, cancel_tol)
    if isinstance(system, RightMfd):
        return _verify_mimo(system, cfg, eps, realization, cancel_tol, interpolation_tol)

    raise ValidationError(f"Tipo de sistema no soportado: {type(system).__name__}")


def _verify_siso(L, cfg, eps, interpolation_tol):
    S = sensitivity(L)
    T = complementary(L)
    report = _start_report(S, T, eps, is_mimo=False)
    if report.stability_verdict is StabilityVerdict.CLOSED_LOOP_UNSTABLE:
        return report

    if L.is_biproper:
        report.notes.append(
            "L es bipropio: las predicciones incluyen 2*pi*ln|S(inf)| y K = lead(N)/lead(D+N)")

    try:
        report.interpolation_results = interpolation_check(L, eps, interpolation_tol)
    except WaterbedError as e:
        report.errors["interpolation"] = str(e)

    _fill_integrals(report, S, T, cfg)
    return report


def _verify_mimo(mfd, cfg, eps, realization, cancel_tol, interpolation_tol):
    S = det_sensitivity(mfd, cancel_tol)
    try:
        T = det_complementary(mfd, cancel_tol)
    except SingularSystem as e:
        T = None
        singular = str(e)

    report = _start_report(S, T, eps, is_mimo=True)
    if T is None:
        report.errors["T"] = singular
    if report.stability_verdict is StabilityVerdict.CLOSED_LOOP_UNSTABLE:
        return report

    if T is not None:
        if realization is None:
            try:
                realization = controller_form_realization(mfd)
            except WaterbedError as e:
                logger.debug(f"Sin realización para contrastar K: {str(e)}")
        report.gain_check = mimo_gain(mfd, realization, cancel_tol)
        if report.gain_check.note:
            report.notes.append(report.gain_check.note)

    report.interpolation_results = _det_interpolation(S, T, eps, interpolation_tol)
    _fill_integrals(report, S, T, cfg)
    return report


def _start_report(S, T, eps, is_mimo):
    closed_loop = tuple(S.poles)
    open_loop = classify_roots(S.zeros, eps)
    zeros = classify_roots(T.zeros, eps) if T is not None and not T.num.is_zero else None

    verdict = StabilityVerdict.OLU if len(open_loop.outside) else StabilityVerdict.OLS
    unstable_closed = [p for p in closed_loop if abs(p) >= 1 - eps]
    if unstable_closed:
        verdict = StabilityVerdict.CLOSED_LOOP_UNSTABLE

    report = WaterbedReport(
        stability_verdict=verdict,
        is_mimo=is_mimo,
        closed_loop_poles=closed_loop,
        unstable_poles=tuple(open_loop.outside),
        nmp_zeros=tuple(zeros.outside) if zeros else (),
    )

    for p in open_loop.boundary:
        report.boundary_warnings.append(f"Polo de lazo abierto sobre el círculo unitario: z={_format_root(p)}")
    if zeros:
        for z in zeros.boundary:
            report.boundary_warnings.append(f"Cero sobre el círculo unitario: z={_format_root(z)}")
    for warning in report.boundary_warnings:
        logger.warning(warning)

    if unstable_closed:
        logger.warning(f"Lazo cerrado inestable, se omiten las integrales: {unstable_closed}")
    return report


def _fill_integrals(report, S, T, cfg):
    try:
        numeric = log_modulus_integral(S, cfg.with_singular_angles(singular_angles(S.zeros)))
        analytic = predict_sensitivity_integral(report.unstable_poles)
        analytic += float(TWO_PI * np.log(abs(S.gain)))
        report.numeric_S_integral = numeric
        report.analytic_S = analytic
        report.discrepancy_S = abs(numeric.value - analytic)
        report.sensitivity_crossovers = crossover_frequencies(S)
    except WaterbedError as e:
        logger.error(f"Integral de S: {str(e)}")
        report.errors["S"] = str(e)

    if T is None:
        return
    try:
        report.gain = markov_gain(T)
        numeric = log_modulus_integral(T, cfg.with_singular_angles(singular_angles(T.zeros)))
        analytic = predict_complementary_integral(report.nmp_zeros, report.gain)
        report.numeric_T_integral = numeric
        report.analytic_T = analytic
        report.discrepancy_T = abs(numeric.value - analytic)
    except WaterbedError as e:
        logger.error(f"Integral de T: {str(e)}")
        report.errors["T"] = str(e)


def _det_interpolation(S, T, eps, tol):
    """det S se anula en los polos inestables y det T en los ceros de fase no mínima"""
    checks = []
    for p in classify_roots(S.zeros, eps).outside:
        s = abs(S(p))
        t = abs(T(p)) if T is not None else float("nan")
        checks.append(InterpolationCheck(p, "pole", s, t, s, s < tol))
    if T is not None and not T.num.is_zero:
        for z in classify_roots(T.zeros, eps).outside:
            t = abs(T(z))
            checks.append(InterpolationCheck(z, "zero", abs(S(z)), t, t, t < tol))
    return checks


def random_theorem_check(kind, count=None, seed=0, cfg=None, progress=None):
    """
    Contrasta las predicciones con la cuadratura sobre lazos aleatorios

    Args:
        kind (str): "sensitivity", "complementary" o "mimo"
        count (int | None): Número de casos (por defecto 100, 100 y 50)
        seed (int): Semilla del generador
        cfg (QuadratureConfig | None): Configuración de la cuadratura
        progress (callable | None): Envoltorio de iterables, p. ej. tqdm

    Returns:
        RandomCheckSummary
    """
    if kind not in DEFAULT_RANDOM_COUNTS:
        raise ValidationError(f"Tipo de verificación desconocido: {kind}", field="kind")
    count = DEFAULT_RANDOM_COUNTS[kind] if count is None else int(count)
    cfg = cfg or QuadratureConfig()
    rng = np.random.default_rng(seed)
    cases = range(count)
    if progress is not None:
        cases = progress(cases)

    failures = []
    max_error = 0.0
    for index in cases:
        if kind == "mimo":
            errors = _random_mimo_case(rng, cfg)
            tolerance = 1e-3
            checks = [(e, tolerance) for e in errors]
        else:
            numeric, analytic = _random_siso_case(kind, rng, cfg)
            checks = [(abs(numeric - analytic), max(1e-4, 1e-4 * abs(analytic)))]

        for error, tolerance in checks:
            max_error = max(max_error, error)
            if error > tolerance:
                failures.append({"case": index, "error": error, "tolerance": tolerance})

    if failures:
        logger.warning(f"Verificación aleatoria '{kind}': {len(failures)} fallos de {count}")
    else:
        logger.info(f"Verificación aleatoria '{kind}': {count} casos correctos")
    return RandomCheckSummary(kind=kind, count=count, seed=seed,
                              failures=tuple(failures), max_error=max_error)


def random_roots(rng, n, low, high, band=0.05):
    """n raíces cerradas bajo conjugación con módulo en [low, high] lejos del círculo"""
    found = []
    while len(found) < n:
        radius = rng.uniform(low, high)
        if abs(radius - 1) < band:
            continue
        if n - len(found) >= 2 and rng.random() < 0.5:
            angle = rng.uniform(0.1, np.pi - 0.1)
            root = radius * np.exp(1j * angle)
            found.extend([root, np.conj(root)])
        else:
            found.append(radius * rng.choice([-1.0, 1.0]))
    return found


def _random_siso_case(kind, rng, cfg):
    n = int(rng.integers(1, 7))
    closed = random_roots(rng, n, 0.0, 0.95)
    if kind == "sensitivity":
        open_poles = random_roots(rng, n, 0.1, 3.0)
        S = RationalSystem(from_roots(RootSet(open_poles)), from_roots(RootSet(closed)))
        numeric = log_modulus_integral(S, cfg).value
        return numeric, predict_sensitivity_integral([p for p in open_poles if abs(p) > 1])

    m = int(rng.integers(0, n + 1))
    zeros = random_roots(rng, m, 0.1, 3.0)
    K = rng.choice([-1.0, 1.0]) * rng.uniform(0.05, 5.0)
    T = RationalSystem(from_roots(RootSet(zeros, K)), from_roots(RootSet(closed)))
    numeric = log_modulus_integral(T, cfg).value
    return numeric, predict_complementary_integral([z for z in zeros if abs(z) > 1], K)


def _random_mimo_case(rng, cfg, attempts=500):
    for _ in range(attempts):
        L = _random_transfer_matrix(rng)
        try:
            mfd = build_right_mfd(L)
            S = det_sensitivity(mfd)
            T = det_complementary(mfd)
        except WaterbedError:
            continue
        if any(abs(p) >= 0.95 for p in S.poles):
            continue
        if any(abs(abs(r) - 1) < 0.05 for r in list(S.zeros) + list(T.zeros)):
            continue

        analytic_S = predict_sensitivity_integral(
            [p for p in S.zeros if abs(p) > 1]) + TWO_PI * np.log(abs(S.gain))
        analytic_T = predict_complementary_integral([z for z in T.zeros if abs(z) > 1], T.gain)
        numeric_S = log_modulus_integral(S, cfg).value
        numeric_T = log_modulus_integral(T, cfg).value
        return [abs(numeric_S - analytic_S), abs(numeric_T - analytic_T)]

    raise NonConvergent(f"No se generó un lazo 2x2 estable en {attempts} intentos")


def _random_transfer_matrix(rng):
    entries = []
    for _ in range(2):
        row = []
        for _ in range(2):
            degree = int(rng.integers(1, 3))
            poles = random_roots(rng, degree, 0.0, 1.3)
            num = rng.normal(0.0, 0.3, size=degree)
            row.append(RationalSystem(num, from_roots(RootSet(poles))))
        entries.append(row)
    return TransferMatrix(entries)


def _interior_points(angles, lower, upper):
    points = []
    for angle in angles:
        for candidate in (angle, angle - TWO_PI):
            if lower < candidate < upper:
                points.append(candidate)
    return sorted(points)


def _format_root(r):
    r = complex(r)
    if r.imag == 0:
        return f"{r.real:.6g}"
    return f"{r.real:.6g}{r.imag:+.6g}j"


def _json_complex(value):
    if value is None:
        return None
    value = complex(value)
    if value.imag == 0:
        return value.real
    return [value.real, value.imag]

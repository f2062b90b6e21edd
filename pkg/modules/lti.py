"""
Sistemas LTI Discretos - Sensibilidad, Clasificación y Ganancia de Markov
Desarrollado para Su Majestad

Representaciones SISO (racional y espacio de estados), construcción de las
funciones de sensibilidad S y sensibilidad complementaria T, clasificación de
raíces respecto al círculo unitario y verificación de las condiciones de
interpolación.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect
from scipy.signal import ss2tf

from .errors import (
    AllMarkovZero, DegenerateLoop, ImproperSystem, PoleOnCircle,
    UnstableClosedLoop, ValidationError, ZeroPolynomial
)
from .polynomial import Polynomial, RootSet, roots, from_roots, cancel_common_roots

logger = logging.getLogger("LTI")

UNIT_CIRCLE_EPS = 1e-9
CANCEL_TOL = 1e-6
INTERPOLATION_TOL = 1e-8
MARKOV_TOL = 1e-12
POLE_ON_CIRCLE_TOL = 1e-300
CROSSOVER_SWEEP = 4096
CROSSOVER_XTOL = 1e-6
# |ln|sys|| por debajo de este valor en la malla se trata como toque
CROSSOVER_TOUCH_TOL = 1e-12


class RationalSystem:
    """
    Sistema racional propio num(z)/den(z)

    Se guarda cancelado (coprimo dentro de tolerancia) y con denominador mónico.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den, cancel_tol=CANCEL_TOL):
        if not isinstance(num, Polynomial):
            num = Polynomial(num)
        if not isinstance(den, Polynomial):
            den = Polynomial(den)

        if den.is_zero:
            raise ZeroPolynomial("El denominador no puede ser idénticamente nulo")
        if num.degree > den.degree:
            raise ImproperSystem(
                f"Sistema impropio: grado del numerador {num.degree} > "
                f"grado del denominador {den.degree}")

        num, den = cancel_common_roots(num, den, cancel_tol)

        lead = den.leading
        num, den = num * (1 / lead), den * (1 / lead)
        if num.is_real() and den.is_real():
            num, den = num.real_if_close(), den.real_if_close()

        self.num = num
        self.den = den

    @classmethod
    def from_coefficients(cls, num, den):
        """Construye el sistema desde coeficientes ascendentes"""
        return cls(Polynomial(num), Polynomial(den))

    @classmethod
    def from_zpk(cls, zeros, poles, gain):
        """Construye gain * prod(z - z_i) / prod(z - p_i)"""
        return cls(from_roots(RootSet(zeros, gain)), from_roots(RootSet(poles, 1.0)))

    @classmethod
    def constant(cls, value):
        return cls(Polynomial.constant(value), Polynomial.constant(1.0))

    @property
    def poles(self):
        if self.den.degree < 1:
            return RootSet((), 1.0)
        return roots(self.den)

    @property
    def zeros(self):
        if self.num.degree < 1:
            return RootSet((), self.num.leading)
        return roots(self.num)

    @property
    def gain(self):
        """Ganancia de la forma factorizada K*prod(z - z_i)/prod(z - p_i)"""
        return self.num.leading / self.den.leading

    @property
    def is_strictly_proper(self):
        return self.num.degree < self.den.degree

    @property
    def is_biproper(self):
        return self.num.degree == self.den.degree

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def __repr__(self):
        return f"RationalSystem(num={self.num!r}, den={self.den!r})"

    def __str__(self):
        return f"({self.num}) / ({self.den})"


@dataclass(frozen=True)
class StateSpaceSystem:
    """Terna (A, B, C) de x[k+1] = A x[k] + B u[k], y[k] = C x[k]"""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A))
        B = np.atleast_2d(np.asarray(self.B))
        C = np.atleast_2d(np.asarray(self.C))

        if A.shape[0] != A.shape[1]:
            raise ValidationError(f"A debe ser cuadrada, se recibió {A.shape}", field="A")
        if B.shape[0] != A.shape[0]:
            raise ValidationError(
                f"B debe tener {A.shape[0]} filas, se recibió {B.shape}", field="B")
        if C.shape[1] != A.shape[0]:
            raise ValidationError(
                f"C debe tener {A.shape[0]} columnas, se recibió {C.shape}", field="C")
        for name, matrix in (("A", A), ("B", B), ("C", C)):
            if not np.all(np.isfinite(matrix)):
                raise ValidationError("Entradas no finitas", field=name)

        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)

    @property
    def n_states(self):
        return self.A.shape[0]

    @property
    def n_inputs(self):
        return self.B.shape[1]

    @property
    def n_outputs(self):
        return self.C.shape[0]


@dataclass(frozen=True)
class PoleZeroClassification:
    """Partición de raíces: dentro, sobre y fuera del círculo unitario"""

    inside: RootSet
    boundary: RootSet
    outside: RootSet
    eps: float


@dataclass(frozen=True)
class InterpolationCheck:
    """Resultado de una condición de interpolación en un punto exterior"""

    location: complex
    kind: str
    abs_S: float
    abs_T: float
    residual: float
    passed: bool

    def to_dict(self):
        return {
            "location": [self.location.real, self.location.imag],
            "kind": self.kind,
            "abs_S": self.abs_S,
            "abs_T": self.abs_T,
            "residual": self.residual,
            "passed": self.passed,
        }


def closed_loop_polynomial(L):
    """D + N del lazo; falla si es nulo o si 1 + L(inf) = 0"""
    closed = L.den + L.num
    if closed.is_zero:
        raise DegenerateLoop("D + N es idénticamente nulo")
    if closed.degree < L.den.degree:
        raise DegenerateLoop("Lazo mal planteado: 1 + L(z) se anula en el infinito")
    return closed


def sensitivity(L):
    """
    Función de sensibilidad S = 1 / (1 + L) = D / (D + N)

    Args:
        L (RationalSystem): Ganancia de lazo propia

    Returns:
        RationalSystem: S cancelado; sus polos son los polos de lazo cerrado
    """
    return RationalSystem(L.den, closed_loop_polynomial(L))


def complementary(L):
    """Sensibilidad complementaria T = L / (1 + L) = N / (D + N)"""
    return RationalSystem(L.num, closed_loop_polynomial(L))


def classify_roots(rs, eps=UNIT_CIRCLE_EPS):
    """
    Clasifica raíces por su módulo respecto al círculo unitario

    Args:
        rs (RootSet | iterable): Raíces a clasificar
        eps (float): Ancho de la banda de tolerancia alrededor de |z| = 1

    Returns:
        PoleZeroClassification
    """
    if eps < 0:
        raise ValueError("eps debe ser no negativo")

    inside, boundary, outside = [], [], []
    for r in rs:
        magnitude = abs(r)
        if magnitude < 1 - eps:
            inside.append(r)
        elif magnitude > 1 + eps:
            outside.append(r)
        else:
            boundary.append(r)

    return PoleZeroClassification(
        inside=RootSet(inside), boundary=RootSet(boundary), outside=RootSet(outside), eps=eps)


def markov_parameters(ss, count):
    """Genera C * A^(i-1) * B para i = 1..count"""
    power_b = ss.B
    for _ in range(count):
        yield ss.C @ power_b
        power_b = ss.A @ power_b


def markov_gain(sys):
    """
    Primer parámetro de Markov no nulo

    Para sistemas racionales es la ganancia de la forma factorizada (cociente
    de coeficientes principales); para espacio de estados es C*A^(i-1)*B con
    el menor i >= 1 que lo hace no nulo.

    Args:
        sys (RationalSystem | StateSpaceSystem): Sistema no nulo

    Returns:
        Escalar (o matriz para espacio de estados con varias entradas/salidas)
    """
    if isinstance(sys, RationalSystem):
        if sys.num.is_zero:
            raise AllMarkovZero("El sistema es idénticamente nulo")
        return _as_scalar(sys.gain)

    for i, parameter in enumerate(markov_parameters(sys, sys.n_states), start=1):
        if np.max(np.abs(parameter)) > MARKOV_TOL:
            logger.debug(f"Primer parámetro de Markov no nulo en i={i}")
            if parameter.shape == (1, 1):
                return _as_scalar(parameter[0, 0])
            return parameter

    raise AllMarkovZero(
        f"Ningún parámetro de Markov no nulo para i <= {sys.n_states}")


def companion_block(den, dtype=float):
    """Par (A, B) en forma canónica controlable para el denominador dado"""
    n = den.degree
    a = den.coeffs / den.leading
    A = np.zeros((n, n), dtype=dtype)
    A[:-1, 1:] = np.eye(n - 1)
    A[-1, :] = -_cast(a[:n], dtype)
    B = np.zeros((n, 1), dtype=dtype)
    B[-1, 0] = 1.0
    return A, B


def output_row(num, den, dtype=float):
    """Fila de C que acompaña a companion_block para el numerador dado"""
    n = den.degree
    if num.degree >= n:
        raise ImproperSystem("El numerador debe tener grado menor que el denominador")
    row = np.zeros(n, dtype=dtype)
    if not num.is_zero:
        row[:num.degree + 1] = _cast(num.coeffs / den.leading, dtype)
    return row


def companion_realization(sys):
    """
    Realización canónica controlable de un sistema estrictamente propio

    Args:
        sys (RationalSystem): Sistema estrictamente propio

    Returns:
        StateSpaceSystem
    """
    if not sys.is_strictly_proper or sys.den.degree < 1:
        raise ImproperSystem("La realización sin término directo exige un sistema estrictamente propio")

    dtype = float if sys.num.is_real() and sys.den.is_real() else complex
    A, B = companion_block(sys.den, dtype)
    C = output_row(sys.num, sys.den, dtype)[np.newaxis, :]
    return StateSpaceSystem(A, B, C)


def state_space_to_rational(ss):
    """Convierte un sistema SISO en espacio de estados a forma racional"""
    if ss.n_inputs != 1 or ss.n_outputs != 1:
        raise ValidationError("Solo se convierten sistemas de una entrada y una salida")
    num, den = ss2tf(ss.A, ss.B, ss.C, np.zeros((1, 1)))
    return RationalSystem(Polynomial(np.asarray(num)[0][::-1]), Polynomial(np.asarray(den)[::-1]))


def freq_response(sys, omega):
    """
    Respuesta en frecuencia sys(e^{j*omega})

    Args:
        sys (RationalSystem): Sistema a evaluar
        omega (float): Frecuencia normalizada en [0, 2*pi)

    Returns:
        complex
    """
    z = np.exp(1j * omega)
    denominator = sys.den(z)
    if abs(denominator) < POLE_ON_CIRCLE_TOL:
        raise PoleOnCircle(f"Polo sobre el círculo unitario en omega={omega}")
    return sys.num(z) / denominator


def frequency_response(sys, omegas):
    """Versión vectorizada de freq_response"""
    z = np.exp(1j * np.asarray(omegas, dtype=float))
    denominator = sys.den(z)
    if np.any(np.abs(denominator) < POLE_ON_CIRCLE_TOL):
        raise PoleOnCircle("Polo sobre el círculo unitario en la malla de frecuencias")
    return sys.num(z) / denominator


def crossover_frequencies(sys, level=0.0, n_sweep=CROSSOVER_SWEEP, xtol=CROSSOVER_XTOL):
    """
    Frecuencias en (0, 2*pi) donde ln|sys(e^{jw})| cruza 'level'

    Barrido grueso de n_sweep puntos seguido de bisección hasta xtol.
    """
    def excess(omega):
        with np.errstate(divide="ignore"):
            return float(np.log(abs(freq_response(sys, omega)))) - level

    grid = 2 * np.pi * np.arange(1, n_sweep) / n_sweep
    with np.errstate(divide="ignore"):
        values = np.log(np.abs(frequency_response(sys, grid))) - level
    signs = np.where(np.abs(values) <= CROSSOVER_TOUCH_TOL, 0.0, np.sign(values))

    crossings = []
    previous = None
    for k in range(len(grid)):
        if not np.isfinite(values[k]):
            previous = None
            continue
        if signs[k] == 0:
            continue
        # Un toque sin cambio de signo no es cruce
        if previous is not None and signs[previous] != signs[k]:
            if k == previous + 1:
                crossings.append(float(bisect(excess, grid[previous], grid[k], xtol=xtol)))
            else:
                crossings.append(float(grid[(previous + k) // 2]))
        previous = k
    return crossings


def first_crossover(sys, level=0.0, n_sweep=CROSSOVER_SWEEP, xtol=CROSSOVER_XTOL):
    """Menor frecuencia de cruce o None si no hay cruce"""
    crossings = crossover_frequencies(sys, level, n_sweep, xtol)
    return crossings[0] if crossings else None


def interpolation_check(L, eps=UNIT_CIRCLE_EPS, tol=INTERPOLATION_TOL):
    """
    Verifica S(p)=0, T(p)=1 en polos exteriores y T(z)=0, S(z)=1 en ceros exteriores

    Args:
        L (RationalSystem): Ganancia de lazo con lazo cerrado estable
        eps (float): Tolerancia de clasificación respecto al círculo unitario
        tol (float): Tolerancia de cada condición

    Returns:
        list[InterpolationCheck]
    """
    S = sensitivity(L)
    T = complementary(L)

    unstable = [p for p in S.poles if abs(p) >= 1 - eps]
    if unstable:
        raise UnstableClosedLoop(f"Polos de lazo cerrado no estables: {unstable}")

    checks = []
    for p in classify_roots(L.poles, eps).outside:
        s, t = S(p), T(p)
        residual = max(abs(s), abs(1 - t))
        checks.append(InterpolationCheck(p, "pole", abs(s), abs(t), residual, residual < tol))

    for z in classify_roots(L.zeros, eps).outside:
        s, t = S(z), T(z)
        residual = max(abs(t), abs(1 - s))
        checks.append(InterpolationCheck(z, "zero", abs(s), abs(t), residual, residual < tol))

    failed = [c for c in checks if not c.passed]
    if failed:
        logger.warning(f"{len(failed)} condiciones de interpolación fuera de tolerancia")
    return checks


def _as_scalar(value):
    value = complex(value)
    if abs(value.imag) <= 1e-12 * max(1.0, abs(value)):
        return value.real
    return value


def _cast(values, dtype):
    values = np.asarray(values)
    return values.real if dtype is float else values

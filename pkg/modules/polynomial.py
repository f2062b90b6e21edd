"""
Polinomios Complejos - Aritmética, Raíces y Cancelación
Desarrollado para Su Majestad

Este módulo es la base algebraica del sistema: polinomios de coeficientes
complejos en orden ascendente (coeffs[k] multiplica a z^k), cálculo de raíces
por autovalores de la matriz compañera y cancelación de raíces comunes con
tolerancia.
"""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.linalg import companion, eigvals

from .errors import ZeroPolynomial, DegreeZero

logger = logging.getLogger("Polynomial")

# Grado reservado para el polinomio nulo
ZERO_DEGREE = -1

# Umbral relativo para descartar coeficientes residuales ("polvo")
TRIM_TOL = 1e-12

# Una raíz se considera real si |Im| <= REAL_TOL * max(1, |r|)
REAL_TOL = 1e-12

# Tolerancia de emparejamiento de conjugados
PAIRING_TOL = 1e-9

NEWTON_STEPS = 2


class Polynomial:
    """Polinomio de coeficientes complejos en forma canónica recortada"""

    __slots__ = ("_coeffs",)

    # numpy debe delegar en __rmul__ / __radd__
    __array_ufunc__ = None

    def __init__(self, coeffs, trim_tol=TRIM_TOL):
        arr = np.atleast_1d(np.asarray(coeffs, dtype=complex)).ravel()
        if not np.all(np.isfinite(arr)):
            raise ValueError("Los coeficientes deben ser finitos")

        scale = np.max(np.abs(arr)) if arr.size else 0.0
        if scale == 0.0:
            arr = np.zeros(0, dtype=complex)
        else:
            keep = np.nonzero(np.abs(arr) > trim_tol * scale)[0]
            arr = arr[:keep[-1] + 1].copy()

        arr.setflags(write=False)
        self._coeffs = arr

    @classmethod
    def zero(cls):
        return cls([])

    @classmethod
    def constant(cls, value):
        return cls([value])

    @property
    def coeffs(self):
        return self._coeffs

    @property
    def degree(self):
        return len(self._coeffs) - 1 if self._coeffs.size else ZERO_DEGREE

    @property
    def leading(self):
        return self._coeffs[-1] if self._coeffs.size else 0j

    @property
    def is_zero(self):
        return self._coeffs.size == 0

    def is_real(self, tol=REAL_TOL):
        if self.is_zero:
            return True
        scale = max(1.0, float(np.max(np.abs(self._coeffs))))
        return bool(np.max(np.abs(self._coeffs.imag)) <= tol * scale)

    def real_if_close(self, tol=REAL_TOL):
        """Descarta la parte imaginaria residual si el polinomio es real"""
        if self.is_real(tol):
            return Polynomial(self._coeffs.real)
        return self

    def derivative(self):
        if self.degree < 1:
            return Polynomial.zero()
        return Polynomial(npoly.polyder(self._coeffs))

    def allclose(self, other, tol=1e-9):
        """Compara coeficientes con tolerancia absoluta"""
        a, b = _pad(self._coeffs, other.coeffs)
        return bool(np.all(np.abs(a - b) <= tol))

    def __call__(self, x):
        return eval_at(self, x)

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        a, b = _pad(self._coeffs, other.coeffs)
        return Polynomial(a + b)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-self._coeffs)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.is_zero or other.is_zero:
                return Polynomial.zero()
            return Polynomial(npoly.polymul(self._coeffs, other.coeffs))
        return Polynomial(self._coeffs * complex(other))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return np.array_equal(self._coeffs, other.coeffs)

    def __hash__(self):
        return hash(tuple(self._coeffs.tolist()))

    def __repr__(self):
        return f"Polynomial({_format_coeffs(self._coeffs)})"

    def __str__(self):
        return to_string(self)


@dataclass(frozen=True)
class RootSet:
    """Raíces con multiplicidad (entradas repetidas) y ganancia principal"""

    roots: tuple = ()
    gain: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(complex(r) for r in self.roots))
        object.__setattr__(self, "gain", complex(self.gain))

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def as_array(self):
        return np.array(self.roots, dtype=complex)

    def magnitudes(self):
        return np.abs(self.as_array())


def eval_at(p, x):
    """
    Evalúa el polinomio por el esquema de Horner

    Args:
        p (Polynomial): Polinomio a evaluar
        x (complex | np.ndarray): Punto o arreglo de puntos

    Returns:
        complex o np.ndarray con sum(coeffs[k] * x^k)
    """
    if np.ndim(x) == 0:
        result = 0j
        for c in p.coeffs[::-1]:
            result = result * x + c
        return complex(result)

    x = np.asarray(x, dtype=complex)
    result = np.zeros_like(x)
    for c in p.coeffs[::-1]:
        result = result * x + c
    return result


def roots(p):
    """
    Calcula todas las raíces de un polinomio con multiplicidad

    Usa los autovalores de la matriz compañera de la forma mónica y pule cada
    raíz con hasta dos pasos de Newton.

    Args:
        p (Polynomial): Polinomio de grado >= 1

    Returns:
        RootSet: Raíces y coeficiente principal como ganancia
    """
    if p.is_zero:
        raise ZeroPolynomial("No se pueden calcular raíces del polinomio nulo")
    if p.degree == 0:
        raise DegreeZero(f"El polinomio constante {p.leading} no tiene raíces")

    monic = p.coeffs / p.leading
    if p.degree == 1:
        found = np.array([-monic[0]], dtype=complex)
    else:
        found = eigvals(companion(monic[::-1])).astype(complex)

    derivative = p.derivative()
    polished = [_newton_polish(p, derivative, r) for r in found]

    if p.is_real():
        polished = _symmetrize_conjugates(polished)

    return RootSet(tuple(sorted(polished, key=lambda r: (r.real, r.imag))), p.leading)


def root_list(p):
    """Raíces como lista; vacía para constantes no nulas"""
    if p.degree < 1:
        return []
    return list(roots(p).roots)


def from_roots(rs):
    """
    Expande gain * prod(z - r_i) a forma de coeficientes

    Args:
        rs (RootSet): Raíces y ganancia

    Returns:
        Polynomial
    """
    if len(rs) == 0:
        return Polynomial.constant(rs.gain)

    coeffs = npoly.polyfromroots(rs.as_array()) * rs.gain
    poly = Polynomial(coeffs)
    if abs(rs.gain.imag) <= REAL_TOL * max(1.0, abs(rs.gain)) and _is_conjugate_closed(rs.roots):
        poly = Polynomial(coeffs.real)
    return poly


def cancel_common_roots(num, den, tol):
    """
    Elimina pares de raíces comunes entre numerador y denominador

    Empareja vorazmente por distancia mínima (empates por menor índice) y
    reconstruye ambos polinomios conservando sus ganancias.

    Args:
        num (Polynomial): Numerador
        den (Polynomial): Denominador
        tol (float): Distancia absoluta máxima para considerar dos raíces iguales

    Returns:
        tuple: (num, den) sin las raíces comunes
    """
    if tol <= 0:
        raise ValueError("La tolerancia de cancelación debe ser positiva")
    if num.is_zero or den.is_zero:
        return num, den

    num_roots = root_list(num)
    den_roots = root_list(den)
    if not num_roots or not den_roots:
        return num, den

    candidates = sorted(
        (abs(a - b), i, j)
        for i, a in enumerate(num_roots)
        for j, b in enumerate(den_roots)
        if abs(a - b) <= tol
    )

    used_num, used_den = set(), set()
    for _, i, j in candidates:
        if i in used_num or j in used_den:
            continue
        used_num.add(i)
        used_den.add(j)

    if not used_num:
        return num, den

    logger.debug(f"Canceladas {len(used_num)} raíces comunes (tol={tol})")

    new_num = from_roots(RootSet(
        [r for i, r in enumerate(num_roots) if i not in used_num], num.leading))
    new_den = from_roots(RootSet(
        [r for j, r in enumerate(den_roots) if j not in used_den], den.leading))

    if num.is_real() and den.is_real():
        new_num = new_num.real_if_close(PAIRING_TOL)
        new_den = new_den.real_if_close(PAIRING_TOL)

    return new_num, new_den


def root_multiset_union(first, second, tol):
    """Unión de multiconjuntos de raíces (multiplicidad máxima) con tolerancia"""
    result = list(first)
    matched = [False] * len(result)
    for r in second:
        k = _nearest_free(result, matched, r, tol)
        if k is None:
            result.append(r)
            matched.append(True)
        else:
            matched[k] = True
    return result


def root_multiset_difference(first, second, tol):
    """Quita de 'first' cada raíz de 'second'; todas deben estar presentes"""
    result = list(first)
    for r in second:
        k = _nearest_free(result, [False] * len(result), r, tol)
        if k is None:
            raise ValueError(f"La raíz {r} no pertenece al multiconjunto")
        result.pop(k)
    return result


def to_string(p, var="z", digits=6):
    """Representación legible en orden descendente"""
    if p.is_zero:
        return "0"
    terms = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        coeff = _format_scalar(c, digits)
        if k == 0:
            terms.append(coeff)
        elif k == 1:
            terms.append(f"{coeff}*{var}")
        else:
            terms.append(f"{coeff}*{var}^{k}")
    return " + ".join(terms).replace("+ -", "- ")


def _newton_polish(p, derivative, r):
    residual = abs(p(r))
    for _ in range(NEWTON_STEPS):
        slope = derivative(r)
        if slope == 0 or residual == 0:
            break
        candidate = r - p(r) / slope
        candidate_residual = abs(p(candidate))
        if not np.isfinite(candidate_residual) or candidate_residual >= residual:
            break
        r, residual = candidate, candidate_residual
    return complex(r)


def _symmetrize_conjugates(values):
    """Fuerza pares conjugados exactos para polinomios de coeficientes reales"""
    real, upper, lower = [], [], []
    for r in values:
        band = REAL_TOL * max(1.0, abs(r))
        if abs(r.imag) <= band:
            real.append(complex(r.real, 0.0))
        elif r.imag > 0:
            upper.append(r)
        else:
            lower.append(r)

    result = list(real)
    for u in upper:
        if not lower:
            result.append(u)
            continue
        k = int(np.argmin([abs(u - l.conjugate()) for l in lower]))
        partner = lower.pop(k)
        mid = (u + partner.conjugate()) / 2
        result.extend([mid, mid.conjugate()])
    result.extend(lower)
    return result


def _is_conjugate_closed(values, tol=PAIRING_TOL):
    pending = [complex(r) for r in values]
    while pending:
        r = pending.pop()
        if abs(r.imag) <= tol * max(1.0, abs(r)):
            continue
        distances = [abs(q - r.conjugate()) for q in pending]
        if not distances:
            return False
        k = int(np.argmin(distances))
        if distances[k] > tol * max(1.0, abs(r)):
            return False
        pending.pop(k)
    return True


def _nearest_free(values, taken, r, tol):
    best, best_distance = None, None
    for k, v in enumerate(values):
        if taken[k]:
            continue
        distance = abs(v - r)
        if distance <= tol and (best_distance is None or distance < best_distance):
            best, best_distance = k, distance
    return best


def _pad(a, b):
    n = max(len(a), len(b))
    return (np.pad(a, (0, n - len(a))), np.pad(b, (0, n - len(b))))


def _format_scalar(c, digits):
    c = complex(c)
    if c.imag == 0:
        return f"{c.real:.{digits}g}"
    return f"({c.real:.{digits}g}{c.imag:+.{digits}g}j)"


def _format_coeffs(coeffs):
    return "[" + ", ".join(_format_scalar(c, 6) for c in coeffs) + "]"

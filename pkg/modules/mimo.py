"""
Sistemas MIMO - Descripciones Fraccionarias y Determinantes Polinomiales
Desarrollado para Su Majestad

Este módulo trata ganancias de lazo cuadradas como matrices de entradas
racionales, construye descripciones fraccionarias por la derecha
L = N * D^-1, calcula determinantes de matrices polinomiales por
evaluación-interpolación y obtiene las formas determinantes de S y T junto
con los ceros de transmisión.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag
from scipy.signal import ss2tf

from .errors import (
    DegenerateClosedLoop, ImproperEntry, ImproperSystem, NonSquare,
    SingularSystem, ValidationError
)
from .lti import (
    CANCEL_TOL, MARKOV_TOL, RationalSystem, StateSpaceSystem, companion_block,
    markov_gain, markov_parameters, output_row
)
from .polynomial import (
    Polynomial, RootSet, cancel_common_roots, from_roots, root_list,
    root_multiset_difference, root_multiset_union, roots
)

logger = logging.getLogger("MIMO")

# Radio del círculo de puntos de interpolación
DET_RADIUS = 2.0

# Polvo relativo a la cota de Hadamard del determinante
DET_DUST = 1e-11

GAIN_AGREEMENT_TOL = 1e-8


class PolynomialMatrix:
    """Matriz de polinomios con filas de igual longitud"""

    __slots__ = ("entries",)

    def __init__(self, entries):
        rows = tuple(
            tuple(e if isinstance(e, Polynomial) else Polynomial(e) for e in row)
            for row in entries
        )
        if rows and any(len(row) != len(rows[0]) for row in rows):
            raise ValidationError("Las filas de la matriz polinomial tienen longitudes distintas")
        self.entries = rows

    @classmethod
    def diagonal(cls, polys):
        q = len(polys)
        return cls([[polys[i] if i == j else Polynomial.zero() for j in range(q)] for i in range(q)])

    @property
    def shape(self):
        return (len(self.entries), len(self.entries[0]) if self.entries else 0)

    @property
    def is_square(self):
        rows, cols = self.shape
        return rows == cols

    def __getitem__(self, index):
        i, j = index
        return self.entries[i][j]

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValidationError(f"Dimensiones incompatibles {self.shape} y {other.shape}")
        return PolynomialMatrix([
            [a + b for a, b in zip(row_a, row_b)]
            for row_a, row_b in zip(self.entries, other.entries)
        ])

    def evaluate(self, z):
        return np.array([[p(z) for p in row] for row in self.entries], dtype=complex)

    def degree_bound(self):
        """Suma de los grados máximos por fila: cota superior del grado del determinante"""
        return sum(max(max(p.degree for p in row), 0) for row in self.entries)

    def is_real(self):
        return all(p.is_real() for row in self.entries for p in row)


class TransferMatrix:
    """Matriz cuadrada q x q de sistemas racionales propios"""

    __slots__ = ("entries",)

    def __init__(self, entries):
        rows = tuple(tuple(row) for row in entries)
        q = len(rows)
        if q == 0 or any(len(row) != q for row in rows):
            raise NonSquare(f"La matriz de transferencia debe ser cuadrada ({_shape_text(rows)})")
        for i, row in enumerate(rows):
            for j, entry in enumerate(row):
                if not isinstance(entry, RationalSystem):
                    raise ValidationError(f"La entrada ({i},{j}) no es un sistema racional")
        self.entries = rows

    @classmethod
    def from_coefficients(cls, grid):
        """
        Construye la matriz desde pares (num, den) de coeficientes ascendentes

        Args:
            grid (list): Lista de filas con pares (num, den)

        Returns:
            TransferMatrix
        """
        rows = []
        for i, row in enumerate(grid):
            entries = []
            for j, (num, den) in enumerate(row):
                try:
                    entries.append(RationalSystem.from_coefficients(num, den))
                except ImproperSystem as e:
                    raise ImproperEntry(f"Entrada ({i},{j}): {str(e)}")
            rows.append(entries)
        return cls(rows)

    @classmethod
    def from_siso(cls, L):
        return cls([[L]])

    @classmethod
    def from_state_space(cls, ss):
        """Matriz de transferencia de una realización cuadrada (A, B, C)"""
        if ss.n_inputs != ss.n_outputs:
            raise NonSquare(f"Se requieren tantas entradas como salidas ({ss.n_outputs}x{ss.n_inputs})")
        q = ss.n_inputs
        feedthrough = np.zeros((q, q))
        columns = []
        for j in range(q):
            num, den = ss2tf(ss.A, ss.B, ss.C, feedthrough, input=j)
            num = np.atleast_2d(num)
            den_poly = Polynomial(np.asarray(den)[::-1])
            columns.append([RationalSystem(Polynomial(num[i][::-1]), den_poly) for i in range(q)])
        return cls([[columns[j][i] for j in range(q)] for i in range(q)])

    @property
    def size(self):
        return len(self.entries)

    def __getitem__(self, index):
        i, j = index
        return self.entries[i][j]

    def evaluate(self, z):
        return np.array([[entry(z) for entry in row] for row in self.entries], dtype=complex)


@dataclass(frozen=True)
class RightMfd:
    """Descripción fraccionaria por la derecha L = N * D^-1"""

    N: PolynomialMatrix
    D: PolynomialMatrix

    def __post_init__(self):
        if not (self.N.is_square and self.D.is_square) or self.N.shape != self.D.shape:
            raise NonSquare(f"N {self.N.shape} y D {self.D.shape} deben ser cuadradas e iguales")
        if det_poly_matrix(self.D).is_zero:
            raise SingularSystem("det D es idénticamente nulo")

    @property
    def size(self):
        return self.N.shape[0]

    def evaluate(self, z):
        """N(z) * D(z)^-1"""
        return np.linalg.solve(self.D.evaluate(z).T, self.N.evaluate(z).T).T


@dataclass(frozen=True)
class MimoGain:
    """Ganancia K de det T con su verificación opcional en espacio de estados"""

    value: float
    state_space_value: object = None
    agrees: object = None
    note: str = ""

    def to_dict(self):
        return {
            "value": _json_scalar(self.value),
            "state_space_value": _json_scalar(self.state_space_value),
            "agrees": self.agrees,
            "note": self.note,
        }


def build_right_mfd(L, tol=CANCEL_TOL):
    """
    Descripción fraccionaria por columnas

    D = diag(mcm de los denominadores de cada columna) y
    N[i][j] = num(L[i][j]) * D[j][j] / den(L[i][j]). El resultado no tiene por
    qué ser irreducible; los cocientes de determinantes se cancelan después.

    Args:
        L (TransferMatrix): Ganancia de lazo cuadrada y propia
        tol (float): Tolerancia de emparejamiento de raíces para el mcm

    Returns:
        RightMfd
    """
    if not isinstance(L, TransferMatrix):
        raise ValidationError("build_right_mfd requiere una TransferMatrix")

    q = L.size
    diagonal = []
    numerators = [[None] * q for _ in range(q)]

    for j in range(q):
        column = [L[i, j] for i in range(q)]
        lcm = []
        for entry in column:
            lcm = root_multiset_union(lcm, root_list(entry.den), tol)
        diagonal.append(from_roots(RootSet(lcm, 1.0)))

        for i, entry in enumerate(column):
            rest = root_multiset_difference(lcm, root_list(entry.den), tol)
            factor = from_roots(RootSet(rest, 1.0 / entry.den.leading))
            numerators[i][j] = entry.num * factor

    logger.debug(f"MFD construida: grados de columna {[d.degree for d in diagonal]}")
    return RightMfd(PolynomialMatrix(numerators), PolynomialMatrix.diagonal(diagonal))


def det_poly_matrix(M):
    """
    Determinante de una matriz polinomial por evaluación-interpolación

    Evalúa det(M(z)) en d+1 raíces de la unidad escaladas al radio 2 (d es la
    suma de grados máximos por fila) e interpola con la FFT.

    Args:
        M (PolynomialMatrix): Matriz cuadrada

    Returns:
        Polynomial
    """
    if not M.is_square:
        raise NonSquare(f"El determinante exige una matriz cuadrada, se recibió {M.shape}")
    if M.shape[0] == 0:
        return Polynomial.constant(1.0)

    n = M.degree_bound() + 1
    points = DET_RADIUS * np.exp(2j * np.pi * np.arange(n) / n)

    values = np.empty(n, dtype=complex)
    bound = 0.0
    for k, z in enumerate(points):
        matrix = M.evaluate(z)
        values[k] = np.linalg.det(matrix)
        bound = max(bound, float(np.prod(np.linalg.norm(matrix, axis=1))))

    scaled = np.fft.fft(values) / n
    scaled[np.abs(scaled) <= DET_DUST * bound] = 0.0
    coeffs = scaled / DET_RADIUS ** np.arange(n)

    det = Polynomial(coeffs)
    if M.is_real():
        det = det.real_if_close(1e-10)
    return det


def char_polynomials(mfd, tol=CANCEL_TOL):
    """
    Polinomios característicos de lazo abierto y lazo cerrado

    Args:
        mfd (RightMfd): Descripción fraccionaria del lazo
        tol (float): Tolerancia de cancelación conjunta

    Returns:
        tuple: (phi_ol, phi_cl) = (det D, det(D + N)) sin factores comunes
    """
    phi_ol = det_poly_matrix(mfd.D)
    phi_cl = det_poly_matrix(mfd.D + mfd.N)
    if phi_cl.is_zero:
        raise DegenerateClosedLoop("det(D + N) es idénticamente nulo")
    return cancel_common_roots(phi_ol, phi_cl, tol)


def det_sensitivity(mfd, tol=CANCEL_TOL):
    """det S = phi_ol / phi_cl"""
    phi_ol, phi_cl = char_polynomials(mfd, tol)
    try:
        return RationalSystem(phi_ol, phi_cl, tol)
    except ImproperSystem as e:
        raise DegenerateClosedLoop(f"Lazo cerrado mal planteado: {str(e)}")


def det_complementary(mfd, tol=CANCEL_TOL):
    """det T = det N / det(D + N)"""
    phi_z = det_poly_matrix(mfd.N)
    if phi_z.is_zero:
        raise SingularSystem("det N es idénticamente nulo: sistema singular")
    phi_cl = det_poly_matrix(mfd.D + mfd.N)
    if phi_cl.is_zero:
        raise DegenerateClosedLoop("det(D + N) es idénticamente nulo")
    try:
        return RationalSystem(phi_z, phi_cl, tol)
    except ImproperSystem as e:
        raise DegenerateClosedLoop(f"Lazo cerrado mal planteado: {str(e)}")


def transmission_zeros(mfd, tol=CANCEL_TOL):
    """
    Ceros de transmisión: raíces de det N sin los factores compartidos con det D

    Args:
        mfd (RightMfd): Descripción fraccionaria del lazo
        tol (float): Tolerancia de cancelación

    Returns:
        RootSet
    """
    phi_z = det_poly_matrix(mfd.N)
    if phi_z.is_zero:
        raise SingularSystem("det N es idénticamente nulo: sistema singular")
    phi_z, _ = cancel_common_roots(phi_z, det_poly_matrix(mfd.D), tol)
    if phi_z.degree < 1:
        return RootSet((), phi_z.leading)
    return roots(phi_z)


def mimo_gain(mfd, realization=None, tol=CANCEL_TOL):
    """
    Ganancia K de la forma factorizada de det T

    Si se entrega una realización en espacio de estados, se contrasta con
    det(C * A^(i-1) * B) para el menor i que la hace no singular.

    Args:
        mfd (RightMfd): Descripción fraccionaria del lazo
        realization (StateSpaceSystem | None): Realización del mismo lazo

    Returns:
        MimoGain
    """
    value = markov_gain(det_complementary(mfd, tol))
    if realization is None:
        return MimoGain(value=value)

    for i, parameter in enumerate(markov_parameters(realization, realization.n_states), start=1):
        if parameter.shape[0] != parameter.shape[1]:
            raise NonSquare("La realización debe tener tantas entradas como salidas")
        determinant = np.linalg.det(parameter)
        if abs(determinant) > MARKOV_TOL:
            state_value = _as_scalar(determinant)
            agrees = bool(abs(determinant - value) <= GAIN_AGREEMENT_TOL * max(1.0, abs(value)))
            if not agrees:
                logger.warning(
                    f"K por coeficientes ({value}) difiere de det(C A^{i - 1} B) ({state_value})")
            verdict = "coincide" if agrees else "no coincide"
            return MimoGain(value=value, state_space_value=state_value, agrees=agrees,
                            note=f"det(C A^(i-1) B) = {state_value:.6g} en i={i} {verdict} con K")

    note = ("det(C A^(i-1) B) es singular para todo i: grados relativos por canal "
            "no uniformes; se usa solo el cociente de coeficientes")
    logger.warning(note)
    return MimoGain(value=value, note=note)


def controller_form_realization(mfd):
    """
    Realización controlable por columnas de N * D^-1 (D diagonal)

    Cada columna aporta un bloque compañero de D[j][j]; los parámetros de
    Markov coinciden con los de cualquier otra realización del mismo lazo.

    Args:
        mfd (RightMfd): MFD con D diagonal y entradas estrictamente propias

    Returns:
        StateSpaceSystem
    """
    q = mfd.size
    for i in range(q):
        for j in range(q):
            if i != j and not mfd.D[i, j].is_zero:
                raise ValidationError("La realización por columnas exige D diagonal")

    dtype = float if mfd.N.is_real() and mfd.D.is_real() else complex
    a_blocks, b_blocks, c_blocks = [], [], []
    for j in range(q):
        den = mfd.D[j, j]
        if den.degree < 1:
            raise ImproperSystem(f"La columna {j} no es estrictamente propia")
        A_j, B_j = companion_block(den, dtype)
        a_blocks.append(A_j)
        b_blocks.append(B_j)
        c_blocks.append(np.vstack([output_row(mfd.N[i, j], den, dtype) for i in range(q)]))

    return StateSpaceSystem(block_diag(*a_blocks), block_diag(*b_blocks), np.hstack(c_blocks))


def _as_scalar(value):
    value = complex(value)
    if abs(value.imag) <= 1e-12 * max(1.0, abs(value)):
        return value.real
    return value


def _json_scalar(value):
    if value is None:
        return None
    value = complex(value)
    if value.imag == 0:
        return value.real
    return [value.real, value.imag]


def _shape_text(rows):
    return f"{len(rows)} filas, longitudes {[len(row) for row in rows]}"

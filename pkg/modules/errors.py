"""
Excepciones del Sistema de Análisis de Sensibilidad
Desarrollado para Su Majestad

Todas las excepciones del paquete derivan de WaterbedError para que la capa
de comandos pueda capturarlas en un solo punto y traducirlas a códigos de
salida.
"""


class WaterbedError(Exception):
    """Error base del sistema"""


class ConfigError(WaterbedError):
    """Configuración inválida"""


# Polinomios
class ZeroPolynomial(WaterbedError):
    """El polinomio es idénticamente nulo"""


class DegreeZero(WaterbedError):
    """El polinomio es una constante no nula y no tiene raíces"""


# Sistemas SISO
class ImproperSystem(WaterbedError):
    """El grado del numerador supera al del denominador"""


class DegenerateLoop(WaterbedError):
    """D + N es idénticamente nulo o el lazo está mal planteado"""


class AllMarkovZero(WaterbedError):
    """Ningún parámetro de Markov es distinto de cero"""


class UnstableClosedLoop(WaterbedError):
    """El lazo cerrado tiene polos sobre o fuera del círculo unitario"""


class PoleOnCircle(WaterbedError):
    """Evaluación exacta sobre un polo en el círculo unitario"""


# Sistemas MIMO
class NonSquare(WaterbedError):
    """La matriz de transferencia no es cuadrada"""


class ImproperEntry(WaterbedError):
    """Una entrada de la matriz de transferencia no es propia"""


class DegenerateClosedLoop(WaterbedError):
    """det(D + N) es idénticamente nulo"""


class SingularSystem(WaterbedError):
    """det N es idénticamente nulo"""


# Integrales
class NonConvergent(WaterbedError):
    """La cuadratura no alcanzó la tolerancia pedida"""


class EvaluationFailure(WaterbedError):
    """La función integrada falló al evaluarse"""


class NotOutside(WaterbedError):
    """Se esperaban raíces fuera del círculo unitario"""


class ZeroGain(WaterbedError):
    """La ganancia K es cero"""


class BadZero(WaterbedError):
    """beta0 no es un cero del lazo (S(beta0) != 1)"""


# Archivos de sistema
class ParseError(WaterbedError):
    """Texto del archivo de sistema ilegible"""

    def __init__(self, message, line=None, column=None, field=None):
        self.line = line
        self.column = column
        self.field = field
        location = []
        if line is not None:
            location.append(f"línea {line}")
        if column is not None:
            location.append(f"columna {column}")
        if field is not None:
            location.append(f"campo '{field}'")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)


class ValidationError(WaterbedError):
    """Contenido del archivo de sistema inconsistente"""

    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)

"""
Archivos de Sistema - Lectura, Validación y Escritura
Desarrollado para Su Majestad

Formato JSON legible por humanos para describir lazos discretos. Las claves
de primer nivel son "kind", "payload" y, opcionalmente, "label",
"sample_time" y "reference". El esquema completo está en
docs/system_file_schema.md.
"""

import os
import json
import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ParseError, ValidationError
from .lti import RationalSystem, StateSpaceSystem
from .mimo import TransferMatrix
from .polynomial import Polynomial

logger = logging.getLogger("SystemFile")

EXAMPLES_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                            "data", "examples")

TOP_LEVEL_KEYS = {"kind", "label", "payload", "sample_time", "reference"}


class SystemKind(Enum):
    SISO_RATIO = "siso_ratio"
    SISO_ZPK = "siso_zpk"
    STATE_SPACE = "state_space"
    MIMO_MATRIX = "mimo_matrix"


PAYLOAD_KEYS = {
    SystemKind.SISO_RATIO: {"num", "den"},
    SystemKind.SISO_ZPK: {"zeros", "poles", "gain"},
    SystemKind.STATE_SPACE: {"A", "B", "C"},
    SystemKind.MIMO_MATRIX: {"entries"},
}


@dataclass(frozen=True)
class SystemFile:
    """Descripción validada de un lazo; payload conserva los valores leídos"""

    kind: SystemKind
    payload: dict
    label: str = None
    sample_time: float = None
    reference: dict = None

    @property
    def period(self):
        """Periodo de muestreo en segundos (1 si el archivo no lo indica)"""
        return 1.0 if self.sample_time is None else float(self.sample_time)

    def to_dict(self):
        data = {"kind": self.kind.value, "payload": self.payload}
        if self.label is not None:
            data["label"] = self.label
        if self.sample_time is not None:
            data["sample_time"] = self.sample_time
        if self.reference is not None:
            data["reference"] = self.reference
        return data


def parse_system_file(text):
    """
    Lee y valida un archivo de sistema

    Args:
        text (str): Contenido JSON del archivo

    Returns:
        SystemFile

    Raises:
        ParseError: JSON ilegible o campos con tipo incorrecto
        ValidationError: Dimensiones incompatibles, entradas impropias o valores no finitos
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"JSON inválido: {e.msg}", line=e.lineno, column=e.colno)

    if not isinstance(data, dict):
        raise ParseError("El archivo debe contener un objeto JSON")

    unknown = sorted(set(data) - TOP_LEVEL_KEYS)
    if unknown:
        raise ParseError(f"Claves desconocidas: {unknown}", field=unknown[0])

    if "kind" not in data:
        raise ParseError("Falta la clave obligatoria", field="kind")
    try:
        kind = SystemKind(data["kind"])
    except ValueError:
        valid = [k.value for k in SystemKind]
        raise ParseError(f"Tipo '{data['kind']}' desconocido; válidos: {valid}", field="kind")

    payload = data.get("payload")
    if not isinstance(payload, dict):
        raise ParseError("payload debe ser un objeto", field="payload")
    expected = PAYLOAD_KEYS[kind]
    if set(payload) != expected:
        raise ValidationError(
            f"Para '{kind.value}' se esperan exactamente las claves {sorted(expected)}, "
            f"se recibió {sorted(payload)}", field="payload")

    label = data.get("label")
    if label is not None and not isinstance(label, str):
        raise ParseError("label debe ser texto", field="label")

    sample_time = data.get("sample_time")
    if sample_time is not None:
        period = _real(sample_time, "sample_time")
        if not period > 0:
            raise ValidationError("Debe ser positivo", field="sample_time")

    reference = data.get("reference")
    if reference is not None and not isinstance(reference, dict):
        raise ParseError("reference debe ser un objeto", field="reference")

    sf = SystemFile(kind=kind, payload=payload, label=label, sample_time=sample_time,
                    reference=reference)
    _VALIDATORS[kind](payload)
    logger.debug(f"Archivo de sistema '{label}' ({kind.value}) validado")
    return sf


def serialize_system_file(sf):
    """JSON canónico: sangría de 4 espacios y claves ordenadas"""
    return json.dumps(sf.to_dict(), indent=4, sort_keys=True, ensure_ascii=False) + "\n"


def load_system_file(path):
    """Lee un archivo de sistema desde disco (UTF-8)"""
    with open(path, 'r', encoding='utf-8') as f:
        text = f.read()
    return parse_system_file(text)


def load_fixture(name, examples_dir=None):
    """Carga uno de los ejemplos incluidos, p. ej. 'example1'"""
    directory = examples_dir or EXAMPLES_DIR
    return load_system_file(os.path.join(directory, f"{name}.json"))


def to_system(sf):
    """
    Construye el sistema descrito por el archivo

    Returns:
        RationalSystem, StateSpaceSystem o TransferMatrix según el tipo
    """
    payload = sf.payload
    if sf.kind is SystemKind.SISO_RATIO:
        return RationalSystem(_poly(payload["num"], "payload.num"),
                              _poly(payload["den"], "payload.den"))

    if sf.kind is SystemKind.SISO_ZPK:
        zeros = [_complex(z, f"payload.zeros[{k}]") for k, z in enumerate(payload["zeros"])]
        poles = [_complex(p, f"payload.poles[{k}]") for k, p in enumerate(payload["poles"])]
        return RationalSystem.from_zpk(zeros, poles, _complex(payload["gain"], "payload.gain"))

    if sf.kind is SystemKind.STATE_SPACE:
        return StateSpaceSystem(
            _matrix(payload["A"], "payload.A"),
            _matrix(payload["B"], "payload.B"),
            _matrix(payload["C"], "payload.C"),
        )

    return TransferMatrix([
        [RationalSystem(_poly(entry["num"], f"payload.entries[{i}][{j}].num"),
                        _poly(entry["den"], f"payload.entries[{i}][{j}].den"))
         for j, entry in enumerate(row)]
        for i, row in enumerate(payload["entries"])
    ])


def _validate_ratio(payload):
    _check_proper(payload["num"], payload["den"], "payload")


def _validate_zpk(payload):
    zeros = _list(payload["zeros"], "payload.zeros")
    poles = _list(payload["poles"], "payload.poles")
    for k, z in enumerate(zeros):
        _complex(z, f"payload.zeros[{k}]")
    for k, p in enumerate(poles):
        _complex(p, f"payload.poles[{k}]")
    if _complex(payload["gain"], "payload.gain") == 0:
        raise ValidationError("La ganancia no puede ser cero", field="payload.gain")
    if len(zeros) > len(poles):
        raise ValidationError(
            f"Sistema impropio: {len(zeros)} ceros y {len(poles)} polos", field="payload")


def _validate_state_space(payload):
    A = _matrix(payload["A"], "payload.A")
    B = _matrix(payload["B"], "payload.B")
    C = _matrix(payload["C"], "payload.C")
    if A.shape[0] == 0:
        raise ValidationError("A no puede ser vacía", field="payload.A")
    try:
        StateSpaceSystem(A, B, C)
    except ValidationError as e:
        raise ValidationError(str(e), field="payload")


def _validate_mimo(payload):
    rows = _list(payload["entries"], "payload.entries")
    q = len(rows)
    if q == 0:
        raise ValidationError("La matriz no puede ser vacía", field="payload.entries")
    for i, row in enumerate(rows):
        row = _list(row, f"payload.entries[{i}]")
        if len(row) != q:
            raise ValidationError(
                f"Matriz no cuadrada: la fila {i} tiene {len(row)} entradas y hay {q} filas",
                field="payload.entries")
        for j, entry in enumerate(row):
            name = f"payload.entries[{i}][{j}]"
            if not isinstance(entry, dict) or set(entry) != {"num", "den"}:
                raise ParseError("Cada entrada debe ser un objeto {num, den}", field=name)
            _check_proper(entry["num"], entry["den"], name)


_VALIDATORS = {
    SystemKind.SISO_RATIO: _validate_ratio,
    SystemKind.SISO_ZPK: _validate_zpk,
    SystemKind.STATE_SPACE: _validate_state_space,
    SystemKind.MIMO_MATRIX: _validate_mimo,
}


def _check_proper(num, den, name):
    num = _poly(num, f"{name}.num")
    den = _poly(den, f"{name}.den")
    if den.is_zero:
        raise ValidationError("Denominador idénticamente nulo", field=name)
    if num.degree > den.degree:
        raise ValidationError(
            f"Entrada impropia: grado del numerador {num.degree} > grado del denominador {den.degree}",
            field=name)


def _poly(values, name):
    return Polynomial([_complex(v, f"{name}[{k}]") for k, v in enumerate(_list(values, name))])


def _list(value, name):
    if not isinstance(value, list):
        raise ParseError("Se esperaba una lista", field=name)
    return value


def _real(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"Se esperaba un número, se recibió {value!r}", field=name)
    if not np.isfinite(value):
        raise ValidationError("Valor no finito", field=name)
    return float(value)


def _complex(value, name):
    """Número real o par [re, im]"""
    if isinstance(value, list):
        if len(value) != 2:
            raise ParseError("Un complejo se escribe como [re, im]", field=name)
        return complex(_real(value[0], name), _real(value[1], name))
    return complex(_real(value, name))


def _matrix(value, name):
    rows = _list(value, name)
    if not rows:
        return np.zeros((0, 0))
    values = []
    for i, row in enumerate(rows):
        row = _list(row, f"{name}[{i}]")
        values.append([_real(v, f"{name}[{i}][{j}]") for j, v in enumerate(row)])
    if any(len(row) != len(values[0]) for row in values):
        raise ValidationError("Filas de longitud distinta", field=name)
    return np.array(values, dtype=float)

"""
Comandos del Sistema - Análisis, Reproducción de Ejemplos y Barridos
Desarrollado para Su Majestad

Cada comando recibe opciones ya resueltas, escribe su cuerpo en un archivo o
en la salida estándar y devuelve un código de salida:
0 éxito, 1 error operativo, 2 fallo de verificación.
"""

import io
import sys
import json
import logging
from dataclasses import dataclass, replace

import numpy as np
import pandas as pd
from tqdm import tqdm

from .errors import SingularSystem, ValidationError, WaterbedError
from .integrals import (
    DEFAULT_RANDOM_COUNTS, QuadratureConfig, StabilityVerdict, identity_integral,
    identity_quadrature, random_theorem_check, waterbed_verify
)
from .lti import (
    CANCEL_TOL, INTERPOLATION_TOL, UNIT_CIRCLE_EPS, RationalSystem,
    StateSpaceSystem, classify_roots, complementary, sensitivity, state_space_to_rational
)
from .mimo import TransferMatrix, build_right_mfd, det_complementary, det_sensitivity
from .polynomial import roots
from .system_file import EXAMPLES_DIR, load_fixture, load_system_file, to_system

logger = logging.getLogger("Commands")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CHECK_FAILED = 2

REFERENCE_EXAMPLES = ("example1", "example2", "example3")

SWEEP_FLOAT_FORMAT = "%.17g"

# Distancia en z a una raíz del círculo unitario que marca el punto como singular
SINGULAR_ANGLE_TOL = 1e-9


@dataclass(frozen=True)
class AnalysisSettings:
    """Opciones resueltas a partir de la configuración y de la línea de comandos"""

    check_tol: float = 1e-3
    unit_circle_eps: float = UNIT_CIRCLE_EPS
    cancel_tol: float = CANCEL_TOL
    interpolation_tol: float = INTERPOLATION_TOL
    crossover_rel_tol: float = 0.03
    quadrature: QuadratureConfig = QuadratureConfig()
    sweep_points: int = 4096
    singular_token: str = "singular"
    examples_dir: str = EXAMPLES_DIR

    def with_overrides(self, tol=None, quad_tol=None, points=None):
        settings = self
        if tol is not None:
            settings = replace(settings, check_tol=float(tol))
        if quad_tol is not None:
            settings = replace(settings, quadrature=replace(settings.quadrature, abs_tol=float(quad_tol)))
        if points is not None:
            settings = replace(settings, sweep_points=int(points))
        return settings


def cmd_analyze(path, settings, fmt="text", out=None):
    """
    Analiza un archivo de sistema y emite el reporte de verificación

    Returns:
        int: 0 si todas las discrepancias están dentro de la tolerancia,
             2 si alguna falla o el lazo cerrado es inestable, 1 ante errores
    """
    try:
        sf = load_system_file(path)
        report = _verify(to_system(sf), settings)
    except (WaterbedError, OSError) as e:
        logger.error(f"Error al analizar {path}: {str(e)}")
        return EXIT_ERROR

    passed = report.passed(settings.check_tol)
    crossovers = [omega / sf.period for omega in report.sensitivity_crossovers]

    if fmt == "json":
        body = dict(report.to_dict())
        body.update({
            "label": sf.label,
            "kind": sf.kind.value,
            "sample_time": sf.period,
            "sensitivity_crossovers_rad_s": crossovers,
            "tolerance": settings.check_tol,
            "passed": passed,
        })
        text = json.dumps(body, indent=4, sort_keys=True, ensure_ascii=False) + "\n"
    elif fmt == "csv":
        text = _report_frame(report, settings.check_tol).to_csv(
            index=False, float_format=SWEEP_FLOAT_FORMAT, na_rep="")
    else:
        text = _report_text(sf, report, crossovers, settings.check_tol, passed)

    try:
        _emit(text, out)
    except OSError as e:
        logger.error(f"No se pudo escribir el reporte en {out}: {str(e)}")
        return EXIT_ERROR

    if report.stability_verdict is StabilityVerdict.CLOSED_LOOP_UNSTABLE:
        logger.warning(f"{path}: lazo cerrado inestable")
        return EXIT_CHECK_FAILED
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_verify_paper(settings, fmt="text", out=None):
    """
    Reproduce los tres ejemplos de referencia y sus frecuencias de cruce

    Returns:
        int: 0 si todas las filas pasan, 2 si alguna falla, 1 ante errores
    """
    rows = []
    try:
        for name in REFERENCE_EXAMPLES:
            sf = load_fixture(name, settings.examples_dir)
            report = _verify(to_system(sf), settings)
            rows.extend(_reference_rows(name, sf, report, settings))
    except (WaterbedError, OSError) as e:
        logger.error(f"Error al reproducir los ejemplos: {str(e)}")
        return EXIT_ERROR

    frame = pd.DataFrame(rows, columns=["row", "numeric", "reference", "analytic", "tolerance", "passed"])
    if fmt == "json":
        records = frame.astype(object).where(frame.notna(), None).to_dict(orient="records")
        text = json.dumps(records, indent=4, ensure_ascii=False) + "\n"
    elif fmt == "csv":
        text = frame.to_csv(index=False, float_format=SWEEP_FLOAT_FORMAT, na_rep="")
    else:
        text = frame.to_string(index=False, float_format=lambda v: f"{v:.6f}", na_rep="-") + "\n"

    try:
        _emit(text, out)
    except OSError as e:
        logger.error(f"No se pudo escribir la tabla en {out}: {str(e)}")
        return EXIT_ERROR

    failed = int((~frame["passed"]).sum())
    if failed:
        logger.warning(f"{failed} filas de verificación fallaron")
        return EXIT_CHECK_FAILED
    logger.info(f"Las {len(frame)} filas de verificación pasaron")
    return EXIT_OK


def cmd_sweep(path, settings, n_points=None, out=None, plot=None, fmt="csv"):
    """
    Escribe el barrido de ln|S| y ln|T| (o sus determinantes) en CSV o JSON

    Las frecuencias son 2*pi*k/n para k = 0..n-1. En los ángulos singulares el
    valor se reemplaza por el marcador settings.singular_token; la salida JSON
    lo declara en su cabecera.
    """
    n_points = settings.sweep_points if n_points is None else int(n_points)
    try:
        if n_points < 2:
            raise ValidationError(f"Se requieren al menos 2 puntos, se recibió {n_points}",
                                  field="points")
        sf = load_system_file(path)
        frame, is_mimo = sweep_frame(to_system(sf), n_points, settings.cancel_tol)
    except (WaterbedError, OSError) as e:
        logger.error(f"Error al barrer {path}: {str(e)}")
        return EXIT_ERROR

    if fmt == "json":
        text = _sweep_json(frame, settings.singular_token, sf.period)
    else:
        text = frame.to_csv(index=False, float_format=SWEEP_FLOAT_FORMAT, na_rep=settings.singular_token)
    try:
        _emit(text, out)
    except OSError as e:
        logger.error(f"No se pudo escribir el barrido en {out}: {str(e)}")
        return EXIT_ERROR

    if plot:
        try:
            render_sweep_plot(frame, plot, sf.label or str(path), sf.period, is_mimo)
        except OSError as e:
            logger.error(f"No se pudo escribir la figura en {plot}: {str(e)}")
            return EXIT_ERROR

    logger.info(f"Barrido de {n_points} puntos escrito")
    return EXIT_OK


def cmd_identity(a, settings, fmt="text", out=None):
    """Compara la cuadratura de ln(1 - 2a cos w + a^2) con su forma cerrada"""
    try:
        numeric = identity_quadrature(a, settings.quadrature)
    except WaterbedError as e:
        logger.error(f"Error en la cuadratura con a={a}: {str(e)}")
        return EXIT_ERROR

    closed = identity_integral(a)
    difference = abs(numeric.value - closed)

    if fmt == "json":
        text = json.dumps({
            "a": float(a),
            "numeric": numeric.value,
            "error_estimate": numeric.error_estimate,
            "closed_form": closed,
            "difference": difference,
        }, indent=4) + "\n"
    else:
        text = (f"a = {float(a):.10g}\n"
                f"cuadratura   = {numeric.value:.10f}\n"
                f"forma cerrada = {closed:.10f}\n"
                f"diferencia   = {difference:.3e}\n")

    try:
        _emit(text, out)
    except OSError as e:
        logger.error(f"No se pudo escribir el resultado en {out}: {str(e)}")
        return EXIT_ERROR

    return EXIT_OK if difference <= settings.check_tol else EXIT_CHECK_FAILED


def cmd_verify_random(settings, kinds=None, count=None, seed=0, fmt="text", out=None):
    """Ejecuta las verificaciones aleatorias de los teoremas con barra de progreso"""
    kinds = kinds or list(DEFAULT_RANDOM_COUNTS)
    summaries = []
    try:
        for kind in kinds:
            progress = _progress(f"{kind}")
            summaries.append(random_theorem_check(kind, count, seed, settings.quadrature, progress))
    except WaterbedError as e:
        logger.error(f"Error en la verificación aleatoria: {str(e)}")
        return EXIT_ERROR

    rows = [{
        "kind": s.kind,
        "count": s.count,
        "seed": s.seed,
        "failures": len(s.failures),
        "max_error": s.max_error,
    } for s in summaries]

    if fmt == "json":
        text = json.dumps(rows, indent=4) + "\n"
    else:
        text = pd.DataFrame(rows).to_string(index=False) + "\n"

    try:
        _emit(text, out)
    except OSError as e:
        logger.error(f"No se pudo escribir el resultado en {out}: {str(e)}")
        return EXIT_ERROR

    return EXIT_OK if all(s.passed for s in summaries) else EXIT_CHECK_FAILED


def sweep_frame(system, n_points, cancel_tol=CANCEL_TOL):
    """
    Tabla de barrido sobre 2*pi*k/n

    Returns:
        tuple: (DataFrame con NaN en los ángulos singulares, es_mimo)
    """
    omegas = 2 * np.pi * np.arange(n_points) / n_points
    z = np.exp(1j * omegas)

    if isinstance(system, StateSpaceSystem):
        if system.n_inputs == 1 and system.n_outputs == 1:
            system = state_space_to_rational(system)
        else:
            system = TransferMatrix.from_state_space(system)

    if isinstance(system, RationalSystem):
        log_S = _log_magnitude(sensitivity(system), z)
        log_T = _log_magnitude(complementary(system), z)
        columns = ("log_mag_S", "log_mag_T")
        is_mimo = False
    else:
        mfd = build_right_mfd(system, cancel_tol)
        log_S = _log_magnitude(det_sensitivity(mfd, cancel_tol), z)
        try:
            log_T = _log_magnitude(det_complementary(mfd, cancel_tol), z)
        except SingularSystem as e:
            logger.warning(f"det T no disponible: {str(e)}")
            log_T = np.full(n_points, np.nan)
        columns = ("log_mag_det_S", "log_mag_det_T")
        is_mimo = True

    frame = pd.DataFrame({"omega": omegas, columns[0]: log_S, columns[1]: log_T})
    return frame, is_mimo


def _sweep_json(frame, token, period):
    """Barrido como JSON; la cabecera declara el marcador de ángulos singulares"""
    records = frame.astype(object).where(frame.notna(), token).to_dict(orient="records")
    body = {
        "columns": list(frame.columns),
        "singular_token": token,
        "sample_time": period,
        "rows": records,
    }
    return json.dumps(body, indent=4, ensure_ascii=False) + "\n"


def render_sweep_plot(frame, path, title, period=1.0, is_mimo=False):
    """Figura PNG de ln|S| y ln|T| frente a la frecuencia en rad/s"""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    s_column, t_column = frame.columns[1], frame.columns[2]
    omega = frame["omega"] / period
    half = frame["omega"] <= np.pi

    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(omega[half], frame[s_column][half], label="ln|det S|" if is_mimo else "ln|S|")
    ax.plot(omega[half], frame[t_column][half], label="ln|det T|" if is_mimo else "ln|T|")
    ax.axhline(0.0, color="gray", linewidth=0.8)
    ax.set_xlabel("omega [rad/s]" if period != 1.0 else "omega [rad/muestra]")
    ax.set_ylabel("magnitud logarítmica")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    logger.info(f"Figura guardada en {path}")


def _verify(system, settings):
    return waterbed_verify(
        system, settings.quadrature, eps=settings.unit_circle_eps,
        cancel_tol=settings.cancel_tol, interpolation_tol=settings.interpolation_tol)


def _reference_rows(name, sf, report, settings):
    reference = sf.reference or {}
    prefix = name.replace("example", "Ejemplo ")
    symbol = "ln|det S|" if report.is_mimo else "ln|S|"
    rows = []

    for key, label, result, analytic in (
        ("S", symbol, report.numeric_S_integral, report.analytic_S),
        ("T", symbol.replace("S", "T"), report.numeric_T_integral, report.analytic_T),
    ):
        tol = float(reference.get(f"{key}_tol", settings.check_tol))
        published = reference.get(f"{key}_integral")
        numeric = result.value if result is not None else None
        passed = (
            numeric is not None and analytic is not None
            and abs(numeric - analytic) <= settings.check_tol
            and (published is None or abs(numeric - published) <= tol)
        )
        rows.append({"row": f"{prefix} integral {label}", "numeric": numeric, "reference": published,
                     "analytic": analytic, "tolerance": tol, "passed": bool(passed)})

    published_crossover = reference.get("crossover")
    if published_crossover is not None:
        crossover = (report.sensitivity_crossovers[0] / sf.period
                     if report.sensitivity_crossovers else None)
        tol = settings.crossover_rel_tol * published_crossover
        passed = crossover is not None and abs(crossover - published_crossover) <= tol
        abs_tol = reference.get("crossover_abs_tol")
        if abs_tol is not None:
            passed = passed and abs(crossover - published_crossover) <= abs_tol
            tol = min(tol, abs_tol)
        rows.append({"row": f"{prefix} cruce {symbol} = 0 [rad/s]", "numeric": crossover,
                     "reference": published_crossover, "analytic": None, "tolerance": tol,
                     "passed": bool(passed)})
    return rows


def _report_frame(report, tol):
    rows = []
    for key, result, analytic, discrepancy in (
        ("S", report.numeric_S_integral, report.analytic_S, report.discrepancy_S),
        ("T", report.numeric_T_integral, report.analytic_T, report.discrepancy_T),
    ):
        rows.append({
            "quantity": f"{'det ' if report.is_mimo else ''}{key}",
            "numeric": result.value if result else None,
            "error_estimate": result.error_estimate if result else None,
            "analytic": analytic,
            "discrepancy": discrepancy,
            "passed": discrepancy is not None and discrepancy <= tol,
        })
    return pd.DataFrame(rows)


def _report_text(sf, report, crossovers, tol, passed):
    buffer = io.StringIO()
    symbol = "ln|det {}|" if report.is_mimo else "ln|{}|"
    write = buffer.write

    write(f"Sistema: {sf.label or '-'}\n")
    write(f"Tipo: {sf.kind.value}\n")
    write(f"Veredicto: {report.stability_verdict.value}\n")
    write(f"Polos de lazo cerrado: {_roots_text(report.closed_loop_poles)}\n")
    write(f"Polos inestables: {_roots_text(report.unstable_poles)}\n")
    write(f"Ceros de fase no mínima: {_roots_text(report.nmp_zeros)}\n")
    if report.gain is not None:
        write(f"Ganancia K: {_number_text(report.gain)}\n")
    check = report.gain_check
    if check is not None and check.state_space_value is not None:
        status = "coincide" if check.agrees else "NO coincide"
        write(f"K en espacio de estados: {_number_text(check.state_space_value)} ({status})\n")

    for key, result, analytic, discrepancy in (
        ("S", report.numeric_S_integral, report.analytic_S, report.discrepancy_S),
        ("T", report.numeric_T_integral, report.analytic_T, report.discrepancy_T),
    ):
        name = symbol.format(key)
        if result is None:
            write(f"Integral {name}: {report.errors.get(key, 'omitida')}\n")
            continue
        write(f"Integral {name}: numérico {result.value:.6f} "
              f"(error {result.error_estimate:.1e}), analítico {analytic:.6f}, "
              f"discrepancia {discrepancy:.2e}\n")

    for check in report.interpolation_results:
        status = "ok" if check.passed else "FALLA"
        write(f"Interpolación en {check.kind} z={_number_text(check.location)}: "
              f"|S|={check.abs_S:.2e} |T|={check.abs_T:.2e} residuo={check.residual:.2e} {status}\n")

    if crossovers:
        write(f"Cruce {symbol.format('S')} = 0: "
              f"{report.sensitivity_crossovers[0]:.6f} rad/muestra ({crossovers[0]:.6f} rad/s)\n")
    for warning in report.boundary_warnings:
        write(f"Aviso: {warning}\n")
    for note in report.notes:
        write(f"Nota: {note}\n")
    for key, message in sorted(report.errors.items()):
        write(f"Error ({key}): {message}\n")

    write(f"Resultado: {'PASA' if passed else 'FALLA'} (tol={tol:g})\n")
    return buffer.getvalue()


def _log_magnitude(sys, z):
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.log(np.abs(sys.num(z))) - np.log(np.abs(sys.den(z)))
    singular = ~np.isfinite(values)
    for poly in (sys.num, sys.den):
        if poly.degree < 1:
            continue
        # Raíces sobre el círculo: la evaluación da polvo y no cero exacto
        for r in classify_roots(roots(poly)).boundary:
            singular |= np.abs(z - r) <= SINGULAR_ANGLE_TOL
    values[singular] = np.nan
    return values


def _progress(label):
    return lambda iterable: tqdm(iterable, desc=label, file=sys.stderr, leave=False)


def _emit(text, out):
    if out:
        with open(out, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        logger.info(f"Salida escrita en {out}")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _roots_text(values):
    if not values:
        return "-"
    return ", ".join(_number_text(v) for v in values)


def _number_text(value):
    value = complex(value)
    if abs(value.imag) <= 1e-12:
        return f"{value.real:.6g}"
    return f"{value.real:.6g}{value.imag:+.6g}j"

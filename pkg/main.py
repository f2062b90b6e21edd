"""
Analizador de Integrales de Sensibilidad - Controlador Principal
Desarrollado para Su Majestad

Este módulo actúa como punto de entrada de la línea de comandos: configura el
registro, verifica las dependencias, carga la configuración y despacha los
subcomandos analyze, verify-paper, sweep, identity y verify-random.
"""

import os
import sys
import logging
import argparse
import importlib.util
from importlib import metadata

from dotenv import load_dotenv


# Configurar logging
def configure_logging(level="INFO", log_dir="logs"):
    """
    Configura el sistema de registro (logging)

    La salida estándar queda reservada para los reportes; los mensajes van a
    stderr y a logs/waterbed.log.
    """
    numeric_level = getattr(logging, str(level).upper(), None)
    if not isinstance(numeric_level, int):
        raise ValueError(f"Nivel de registro inválido: {level}")

    handlers = [logging.StreamHandler(sys.stderr)]
    try:
        if not os.path.exists(log_dir):
            os.makedirs(log_dir)
        handlers.append(logging.FileHandler(os.path.join(log_dir, 'waterbed.log'), encoding='utf-8'))
    except OSError as e:
        sys.stderr.write(f"No se pudo abrir el archivo de registro en {log_dir}: {str(e)}\n")

    logging.basicConfig(
        level=numeric_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers
    )
    logging.getLogger().setLevel(numeric_level)


# Verificación de dependencias críticas
def check_dependencies():
    """Verifica que las dependencias críticas estén instaladas"""
    required_packages = {
        'numpy': ('numpy', '1.22.0'),
        'scipy': ('scipy', '1.8.0'),
        'pandas': ('pandas', '1.4.0'),
        'matplotlib': ('matplotlib', '3.5.0'),
        'tqdm': ('tqdm', '4.64.0'),
        'dotenv': ('python-dotenv', '0.20.0'),
    }

    missing_packages = []

    for module_name, (distribution, min_version) in required_packages.items():
        if importlib.util.find_spec(module_name) is None:
            missing_packages.append(f"{distribution} (>={min_version})")
            continue

        # Verificar la versión instalada
        try:
            installed_version = metadata.version(distribution)
            if _version_tuple(installed_version) < _version_tuple(min_version):
                missing_packages.append(f"{distribution} (>={min_version}, found {installed_version})")
        except (metadata.PackageNotFoundError, ValueError):
            # Si no podemos verificar la versión, continuamos
            pass

    if missing_packages:
        logging.error("Faltan dependencias requeridas:")
        for package in missing_packages:
            logging.error(f"  - {package}")
        logging.error("Ejecute 'pip install -r requirements.txt' para instalar todas las dependencias")
        return False

    return True


def _version_tuple(version):
    parts = []
    for piece in version.split('.')[:3]:
        digits = ''.join(ch for ch in piece if ch.isdigit())
        if not digits:
            break
        parts.append(int(digits))
    if not parts:
        raise ValueError(f"Versión ilegible: {version}")
    return tuple(parts)


class WaterbedSystem:
    """Orquestador de la configuración y los subcomandos"""

    def __init__(self, config_file=None):
        """Carga la configuración y resuelve las rutas del proyecto"""
        from modules.config_manager import ConfigManager

        self.logger = logging.getLogger("WaterbedSystem")
        self.base_dir = os.path.dirname(os.path.abspath(__file__))

        config_file = (config_file or os.environ.get("WATERBED_CONFIG")
                       or os.path.join(self.base_dir, "config", "settings.json"))
        self.config_manager = ConfigManager(config_file)

    def log_level(self, override=None):
        return override or self.config_manager.log_level()

    def logs_dir(self):
        return self._resolve(self.config_manager.get("system", "logs_path", "logs"))

    def settings(self, tol=None, quad_tol=None, points=None):
        """Opciones de análisis: archivo de configuración y, encima, las banderas"""
        from modules.commands import AnalysisSettings

        cm = self.config_manager
        settings = AnalysisSettings(
            check_tol=cm.tolerance("check_tol"),
            unit_circle_eps=cm.tolerance("unit_circle_eps"),
            cancel_tol=cm.tolerance("cancel_tol"),
            interpolation_tol=cm.tolerance("interpolation_tol"),
            crossover_rel_tol=cm.tolerance("crossover_rel_tol"),
            quadrature=cm.quadrature_config(),
            sweep_points=int(cm.get("sweep", "points", 4096)),
            singular_token=str(cm.get("sweep", "singular_token", "singular")),
            examples_dir=self._resolve(cm.get("paths", "examples_dir", "data/examples")),
        )
        return settings.with_overrides(tol=tol, quad_tol=quad_tol, points=points)

    def run(self, args):
        """Despacha el subcomando y devuelve el código de salida"""
        from modules import commands

        settings = self.settings(tol=args.tol, quad_tol=args.quad_tol,
                                 points=getattr(args, "points", None))
        self.logger.debug(f"Ejecutando subcomando '{args.command}'")

        if args.command == "analyze":
            return commands.cmd_analyze(args.file, settings, fmt=args.format, out=args.out)
        if args.command == "verify-paper":
            return commands.cmd_verify_paper(settings, fmt=args.format, out=args.out)
        if args.command == "sweep":
            return commands.cmd_sweep(args.file, settings, out=args.out, plot=args.plot,
                                      fmt=args.format)
        if args.command == "identity":
            return commands.cmd_identity(args.a, settings, fmt=args.format, out=args.out)
        if args.command == "verify-random":
            return commands.cmd_verify_random(settings, kinds=args.kind, count=args.count,
                                              seed=args.seed, fmt=args.format, out=args.out)

        self.logger.error(f"Subcomando desconocido: {args.command}")
        return 1

    def _resolve(self, path):
        if os.path.isabs(path):
            return path
        return os.path.join(self.base_dir, path)


def build_parser():
    """Analizador de argumentos con las banderas comunes en cada subcomando"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Ruta del archivo de configuración JSON")
    common.add_argument("--log-level", help="Nivel de registro (DEBUG, INFO, WARNING, ERROR)")
    common.add_argument("--tol", type=float, help="Tolerancia de verificación (por defecto 1e-3)")
    common.add_argument("--quad-tol", type=float, help="Tolerancia absoluta de la cuadratura (por defecto 1e-8)")

    parser = argparse.ArgumentParser(
        prog="waterbed",
        description="Verificación numérica de las integrales de sensibilidad de lazos discretos")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", parents=[common], help="Analiza un archivo de sistema")
    analyze.add_argument("file", help="Archivo de sistema JSON")
    analyze.add_argument("--format", choices=["text", "json", "csv"], default="text")
    analyze.add_argument("--out", help="Archivo de salida (por defecto stdout)")

    reference = sub.add_parser("verify-paper", parents=[common],
                               help="Reproduce los ejemplos incluidos y sus frecuencias de cruce")
    reference.add_argument("--format", choices=["text", "json", "csv"], default="text")
    reference.add_argument("--out", help="Archivo de salida (por defecto stdout)")

    sweep = sub.add_parser(
        "sweep", parents=[common],
        help="Barrido CSV de ln|S| y ln|T|; los ángulos singulares se marcan con "
             "sweep.singular_token ('singular' por defecto)")
    sweep.add_argument("file", help="Archivo de sistema JSON")
    sweep.add_argument("--points", type=int, help="Número de frecuencias en [0, 2*pi)")
    sweep.add_argument("--out", help="Archivo CSV de salida (por defecto stdout)")
    sweep.add_argument("--plot", help="Figura PNG opcional del barrido")
    sweep.add_argument("--format", choices=["csv", "json"], default="csv",
                       help="JSON declara el marcador singular en su cabecera")

    identity = sub.add_parser("identity", parents=[common],
                              help="Compara la cuadratura con la identidad integral cerrada")
    identity.add_argument("a", type=float, help="Parámetro real a")
    identity.add_argument("--format", choices=["text", "json"], default="text")
    identity.add_argument("--out", help="Archivo de salida (por defecto stdout)")

    random_check = sub.add_parser("verify-random", parents=[common],
                                  help="Verificación aleatoria de los teoremas")
    random_check.add_argument("--kind", action="append",
                              choices=["sensitivity", "complementary", "mimo"],
                              help="Tipo de verificación (repetible; por defecto todos)")
    random_check.add_argument("--count", type=int, help="Casos por tipo (por defecto 100, 100 y 50)")
    random_check.add_argument("--seed", type=int, default=0, help="Semilla del generador")
    random_check.add_argument("--format", choices=["text", "json"], default="text")
    random_check.add_argument("--out", help="Archivo de salida (por defecto stdout)")

    return parser


# Función principal
def main(argv=None):
    """Función principal: devuelve 0 éxito, 1 error operativo, 2 fallo de verificación"""
    load_dotenv()
    args = build_parser().parse_args(argv)

    try:
        system = WaterbedSystem(args.config)
        configure_logging(system.log_level(args.log_level), system.logs_dir())
    except Exception as e:
        sys.stderr.write(f"Error al inicializar el sistema: {str(e)}\n")
        return 1

    if not check_dependencies():
        return 1

    from modules.errors import WaterbedError

    logger = logging.getLogger("WaterbedSystem")
    logger.info(f"{system.config_manager.get('system', 'name')} "
                f"v{system.config_manager.get('system', 'version')}")
    try:
        return system.run(args)
    except WaterbedError as e:
        logger.error(f"Error: {str(e)}")
        return 1


# Punto de entrada
if __name__ == "__main__":
    sys.exit(main())

"""
Gestor de Configuración - Sistema de Gestión de Ajustes
Desarrollado para Su Majestad
"""

import os
import copy
import json
import logging

from dotenv import load_dotenv

from .errors import ConfigError, ValidationError
from .integrals import QuadratureConfig

DEFAULT_CONFIG = {
    "system": {
        "name": "Analizador de Integrales de Sensibilidad",
        "version": "1.0.0",
        "log_level": "INFO",
        "logs_path": "logs"
    },
    "tolerances": {
        "check_tol": 1e-3,
        "unit_circle_eps": 1e-9,
        "cancel_tol": 1e-6,
        "interpolation_tol": 1e-8,
        "crossover_rel_tol": 0.03
    },
    "quadrature": {
        "abs_tol": 1e-8,
        "max_subdivisions": 16384
    },
    "sweep": {
        "points": 4096,
        "singular_token": "singular"
    },
    "paths": {
        "examples_dir": "data/examples"
    }
}


class ConfigManager:
    """Gestor de configuración del sistema"""

    def __init__(self, config_file=None):
        """
        Inicializa el gestor de configuración

        Args:
            config_file (str | None): Ruta del archivo; si es None se usa la
                variable de entorno WATERBED_CONFIG o config/settings.json
        """
        self.logger = logging.getLogger("ConfigManager")
        load_dotenv()

        self.config_file = config_file or os.environ.get("WATERBED_CONFIG", os.path.join("config", "settings.json"))
        self.config = {}

        # Cargar configuración
        self.load()

        self.logger.debug(f"Gestor de configuración inicializado desde {self.config_file}")

    def load(self):
        """Carga la configuración desde el archivo"""
        try:
            # Verificar si el archivo existe
            if not os.path.exists(self.config_file):
                self.logger.warning(f"Archivo de configuración no encontrado: {self.config_file}")
                self._create_default_config()
                return

            with open(self.config_file, 'r', encoding='utf-8') as f:
                loaded = json.load(f)

            if not isinstance(loaded, dict):
                raise ConfigError("El archivo de configuración debe contener un objeto JSON")
            self.config = _merge(DEFAULT_CONFIG, loaded)
            self.logger.debug(f"Configuración cargada desde {self.config_file}")

        except json.JSONDecodeError:
            self.logger.error(f"Error al parsear archivo de configuración: {self.config_file}")
            self._create_default_config()
        except Exception as e:
            self.logger.error(f"Error al cargar configuración: {str(e)}")
            self._create_default_config()

    def _create_default_config(self):
        """Crea un archivo de configuración por defecto"""
        self.config = copy.deepcopy(DEFAULT_CONFIG)

        try:
            # Crear directorio si no existe
            config_dir = os.path.dirname(self.config_file)
            if config_dir and not os.path.exists(config_dir):
                os.makedirs(config_dir)

            with open(self.config_file, 'w', encoding='utf-8') as f:
                json.dump(self.config, f, indent=4)

            self.logger.info(f"Configuración por defecto creada: {self.config_file}")
        except Exception as e:
            self.logger.error(f"Error al crear configuración por defecto: {str(e)}")

    def save(self):
        """Guarda la configuración actual en el archivo"""
        try:
            with open(self.config_file, 'w', encoding='utf-8') as f:
                json.dump(self.config, f, indent=4)

            self.logger.info(f"Configuración guardada en {self.config_file}")
            return True
        except Exception as e:
            self.logger.error(f"Error al guardar configuración: {str(e)}")
            return False

    def get(self, section, key, default=None):
        """
        Obtiene un valor de configuración

        Args:
            section (str): Sección de configuración
            key (str): Clave de configuración
            default: Valor por defecto si no existe

        Returns:
            Valor de configuración o valor por defecto
        """
        try:
            return self.config.get(section, {}).get(key, default)
        except Exception:
            return default

    def set(self, section, key, value):
        """
        Establece un valor de configuración y lo guarda

        Returns:
            bool: True si se estableció correctamente
        """
        try:
            if section not in self.config:
                self.config[section] = {}

            self.config[section][key] = value
            return self.save()
        except Exception as e:
            self.logger.error(f"Error al establecer configuración: {str(e)}")
            return False

    def log_level(self):
        """Nivel de registro: WATERBED_LOG_LEVEL tiene prioridad sobre el archivo"""
        return os.environ.get("WATERBED_LOG_LEVEL") or self.get("system", "log_level", "INFO")

    def quadrature_config(self):
        """Construye la configuración de cuadratura a partir de los ajustes"""
        try:
            return QuadratureConfig(
                abs_tol=float(self.get("quadrature", "abs_tol", 1e-8)),
                max_subdivisions=int(self.get("quadrature", "max_subdivisions", 2 ** 14)),
            )
        except (TypeError, ValueError, ValidationError) as e:
            raise ConfigError(f"Sección 'quadrature' inválida: {str(e)}")

    def tolerance(self, key):
        value = self.get("tolerances", key, DEFAULT_CONFIG["tolerances"].get(key))
        try:
            value = float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"tolerances.{key} debe ser numérico, se recibió {value!r}")
        if not value > 0:
            raise ConfigError(f"tolerances.{key} debe ser positivo")
        return value


def _merge(defaults, loaded):
    """Completa la configuración leída con los valores por defecto ausentes"""
    merged = copy.deepcopy(defaults)
    for section, values in loaded.items():
        if isinstance(values, dict) and isinstance(merged.get(section), dict):
            merged[section].update(values)
        else:
            merged[section] = values
    return merged

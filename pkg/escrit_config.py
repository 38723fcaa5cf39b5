"""
escrit Configuration
====================

Central configuration for the edge-stability toolkit: default bounds,
the JSON config file loader, and the tagged stderr logging every module uses.

Settings are read from `escrit_config.json` (or the file given with
`--config`); anything missing falls back to the constants below. The
environment variable ESCRIT_MAX_CYCLES overrides the cycle enumeration limit.
"""

import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, Optional

from escrit_errors import ConfigError

# =============================================================================
# Configuration Constants
# =============================================================================

# Cycle enumeration
DEFAULT_MAX_CYCLES = 1_000_000
DEFAULT_ODD_CYCLE_CAP = 5  # odd-cycle threshold of the E characterization

# Exact solvers
EXACT_CHI_BOUND = 16       # vertices
MAX_ES_SEARCH = 4          # largest edge set tried by exact es search

# Exhaustive scan
MAX_EXHAUSTIVE_N = 7
MAX_SCAN_N = 9
CANONICAL_FORM_BOUND = 10
SCAN_CHUNK_SIZE = 1 << 15  # labeled graphs per worker task

# Files and environment
CONFIG_FILE = 'escrit_config.json'
MAX_CYCLES_ENV = 'ESCRIT_MAX_CYCLES'

LOGGER_ROOT = 'escrit'


# =============================================================================
# Logging
# =============================================================================

class TagFormatter(logging.Formatter):
    """Formats records as '[TAG] message', TAG taken from the logger name"""

    def format(self, record):
        tag = record.name.rsplit('.', 1)[-1].upper()
        message = record.getMessage()
        if record.exc_info:
            message = f"{message}\n{self.formatException(record.exc_info)}"
        return f"[{tag}] {message}"


def get_logger(name: str) -> logging.Logger:
    """Logger under the escrit namespace, e.g. get_logger('scan') -> [SCAN]"""
    return logging.getLogger(f"{LOGGER_ROOT}.{name}")


def configure_logging(verbose: bool = False, stream=None) -> None:
    """Send escrit diagnostics to stderr (stdout is reserved for JSON)"""
    root = logging.getLogger(LOGGER_ROOT)
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(TagFormatter())
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.INFO)
    root.propagate = False


logger = get_logger('config')


# =============================================================================
# Configuration Management
# =============================================================================

@dataclass(frozen=True)
class EscritConfig:
    """Every tunable bound in one place"""
    max_cycles: int = DEFAULT_MAX_CYCLES
    odd_cycle_cap: int = DEFAULT_ODD_CYCLE_CAP
    exact_chi_bound: int = EXACT_CHI_BOUND
    max_es_search: int = MAX_ES_SEARCH
    max_exhaustive_n: int = MAX_EXHAUSTIVE_N
    max_scan_n: int = MAX_SCAN_N
    canonical_form_bound: int = CANONICAL_FORM_BOUND
    scan_chunk_size: int = SCAN_CHUNK_SIZE
    scan_workers: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class ConfigManager:
    """Loads EscritConfig from a JSON file plus environment overrides"""

    def __init__(self, config_file: str = CONFIG_FILE, environ=None):
        self.config_file = config_file
        self.environ = os.environ if environ is None else environ
        self.config = EscritConfig()
        self.load_config()

    def load_config(self) -> EscritConfig:
        """Load settings from the JSON file, then apply the environment"""
        values: Dict[str, Any] = {}
        if os.path.exists(self.config_file):
            try:
                with open(self.config_file, 'r') as f:
                    config_data = json.load(f)
            except (OSError, json.JSONDecodeError) as e:
                raise ConfigError(f"cannot read {self.config_file}: {e}") from e
            if not isinstance(config_data, dict):
                raise ConfigError(f"{self.config_file} must hold a JSON object")
            values = self._known_values(config_data)
            logger.debug(f"Loaded {len(values)} settings from {self.config_file}")
        else:
            logger.debug(f"No config file at {self.config_file}, using defaults")

        env_limit = self.environ.get(MAX_CYCLES_ENV)
        if env_limit:
            try:
                values['max_cycles'] = int(env_limit)
            except ValueError as e:
                raise ConfigError(f"{MAX_CYCLES_ENV} must be an integer, got {env_limit!r}") from e
            logger.debug(f"{MAX_CYCLES_ENV} overrides max_cycles={values['max_cycles']}")

        self.config = EscritConfig(**values)
        self._check(self.config)
        return self.config

    def _known_values(self, config_data: Dict[str, Any]) -> Dict[str, Any]:
        known = {f.name for f in fields(EscritConfig)}
        unknown = sorted(set(config_data) - known)
        if unknown:
            logger.warning(f"Ignoring unknown settings in {self.config_file}: {', '.join(unknown)}")
        values = {}
        for key in known & set(config_data):
            value = config_data[key]
            if value is None and key == 'scan_workers':
                values[key] = value
                continue
            if not isinstance(value, int) or isinstance(value, bool):
                raise ConfigError(f"setting {key!r} must be an integer, got {value!r}")
            values[key] = value
        return values

    @staticmethod
    def _check(config: EscritConfig) -> None:
        for f in fields(config):
            value = getattr(config, f.name)
            if value is not None and value < 1 and f.name != 'max_es_search':
                raise ConfigError(f"setting {f.name!r} must be positive, got {value}")
        if config.max_es_search < 0:
            raise ConfigError("setting 'max_es_search' must be non-negative")


_active_config: Optional[EscritConfig] = None


def get_config() -> EscritConfig:
    """Process-wide configuration, loaded on first use"""
    global _active_config
    if _active_config is None:
        _active_config = ConfigManager().config
    return _active_config


def set_config(config: Optional[EscritConfig]) -> None:
    """Install a configuration (None resets to lazy loading)"""
    global _active_config
    _active_config = config

import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from dotenv import load_dotenv
import yaml

from src.framework.logging import get_logger
from src.spectral.camera import CAMERA_PRESETS
from src.spectral.errors import ConfigError
from src.spectral.estimators import (
    EstimatorKind,
    FitParams,
    PolyCombo,
    combo_from_name,
    parse_combo_terms,
)
from src.spectral.training import DEFAULT_FRACTIONS

logger = get_logger(__name__)

THREADS_ENV = 'SPECTRACAST_THREADS'
DEFAULT_CONFIG_PATH = 'config/spectracast.yaml'


def default_threads() -> int:
    """Worker count from SPECTRACAST_THREADS (a .env file works too), else 1"""
    load_dotenv()
    value = os.getenv(THREADS_ENV)
    if not value:
        return 1
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got '{value}'")


class RunConfig:
    """Resolved settings of one CLI run: YAML file, then defaults, then CLI overrides"""

    def __init__(
        self,
        subcommand: str,
        config_path: Optional[str] = None,
        cli_params: Optional[Dict[str, Any]] = None,
    ):
        self.subcommand = subcommand
        self.config_path = config_path
        self.values = self._load_config(config_path) if config_path else {}
        self._set_default_values()
        if cli_params:
            self._apply_cli_params(cli_params)
        self._validate_config()

    def _load_config(self, path: str) -> Dict:
        try:
            with open(path, 'r') as f:
                loaded = yaml.safe_load(f) or {}
        except Exception as e:
            logger.warning(f"Failed to load config from {path}: {e}")
            return {}
        if not isinstance(loaded, dict):
            raise ConfigError(f"{path} must hold a mapping, got {type(loaded).__name__}")
        # a per-subcommand section overrides the shared keys
        section = loaded.pop(self.subcommand.replace('-', '_'), None) or {}
        loaded = {k: v for k, v in loaded.items() if not isinstance(v, dict)}
        loaded.update(section)
        return loaded

    def _set_default_values(self):
        defaults = {
            'method': EstimatorKind.PSEUDOINVERSE.value,
            'combo': 'linear3',
            'combo_terms': None,
            'basis_count': None,
            'search_basis': False,
            'd_range': [4, 8],
            'fractions': list(DEFAULT_FRACTIONS),
            'seed': 0,
            'skip_threshold': None,
            'frame_delay_ms': 0.0,
            'queue_size': 4,
            'bit_depth': 8,
            'camera': None,
            'camspec': None,
            'encoding': 'f64',
            'db_path': None,
        }
        for key, value in defaults.items():
            if key not in self.values:
                self.values[key] = value
        if 'threads' not in self.values:
            self.values['threads'] = default_threads()

    def _apply_cli_params(self, params: Dict[str, Any]):
        for key, value in params.items():
            if value is not None:
                self.values[key] = value

    def _validate_config(self):
        try:
            self._check_values()
        except ConfigError:
            raise
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid {self.subcommand} configuration: {e}")

    def _check_values(self):
        try:
            EstimatorKind.parse(str(self.values['method']))
        except ValueError:
            raise ConfigError(
                f"Unknown method '{self.values['method']}', expected one of {[k.value for k in EstimatorKind]}"
            )
        self.combo  # parses and raises ConfigError on bad input

        fractions = self.fractions
        if not fractions or any(not 0.0 < f <= 1.0 for f in fractions):
            raise ConfigError(f"Fractions must lie in (0, 1], got {fractions}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        if self.bit_depth not in (8, 16):
            raise ConfigError(f"bit_depth must be 8 or 16, got {self.bit_depth}")
        if self.skip_threshold is not None and not 0.0 <= self.skip_threshold <= 1.0:
            raise ConfigError(f"skip_threshold must lie in [0, 1], got {self.skip_threshold}")
        if self.basis_count is not None and self.basis_count < 1:
            raise ConfigError(f"basis_count must be >= 1, got {self.basis_count}")
        low, high = self.d_range
        if low > high:
            raise ConfigError(f"d_range must be ordered, got {self.d_range}")
        if self.frame_delay_ms < 0 or self.queue_size < 1:
            raise ConfigError("frame_delay_ms must be >= 0 and queue_size >= 1")
        if self.camera is not None and self.camera not in CAMERA_PRESETS:
            raise ConfigError(f"Unknown camera preset '{self.camera}', expected one of {sorted(CAMERA_PRESETS)}")
        if self.values['encoding'] not in ('f32', 'f64'):
            raise ConfigError(f"encoding must be f32 or f64, got {self.values['encoding']}")

    @property
    def method(self) -> EstimatorKind:
        """Estimator kind; for fit, bare ``wiener`` is the prior form when a camera is given"""
        prior = self.subcommand == 'fit' and (self.camera is not None or self.camspec is not None)
        return EstimatorKind.parse(str(self.values['method']), prior=prior)

    @property
    def combo(self) -> PolyCombo:
        if self.values.get('combo_terms'):
            return parse_combo_terms(str(self.values['combo_terms']))
        return combo_from_name(str(self.values['combo']))

    @property
    def basis_count(self) -> Optional[int]:
        value = self.values['basis_count']
        return None if value is None else int(value)

    @property
    def search_basis(self) -> bool:
        return bool(self.values['search_basis'])

    @property
    def d_range(self) -> Tuple[int, int]:
        value = self.values['d_range']
        if isinstance(value, str):
            value = value.replace(':', '-').split('-')
        low, high = value
        return int(low), int(high)

    @property
    def fractions(self) -> List[float]:
        value = self.values['fractions']
        if isinstance(value, str):
            try:
                value = [float(part) for part in value.split(',') if part.strip()]
            except ValueError:
                raise ConfigError(f"Cannot parse fractions '{self.values['fractions']}'")
        return [float(f) for f in value]

    @property
    def seed(self) -> int:
        return int(self.values['seed'])

    @property
    def skip_threshold(self) -> Optional[float]:
        value = self.values['skip_threshold']
        return None if value is None else float(value)

    @property
    def threads(self) -> int:
        return int(self.values['threads'])

    @property
    def frame_delay_ms(self) -> float:
        return float(self.values['frame_delay_ms'])

    @property
    def queue_size(self) -> int:
        return int(self.values['queue_size'])

    @property
    def bit_depth(self) -> int:
        return int(self.values['bit_depth'])

    @property
    def camera(self) -> Optional[str]:
        """Camera preset name; a camspec file takes precedence"""
        value = self.values['camera']
        return None if value is None else str(value)

    @property
    def camspec(self) -> Optional[str]:
        value = self.values['camspec']
        return None if value is None else str(value)

    @property
    def encoding(self) -> str:
        return str(self.values['encoding'])

    @property
    def db_path(self) -> Optional[str]:
        return self.values['db_path']

    def get(self, key: str, default: Any = None) -> Any:
        return self.values.get(key, default)

    def fit_params(self) -> FitParams:
        return FitParams(
            combo=self.combo,
            basis_count=self.basis_count,
            search_basis=self.search_basis,
            d_range=self.d_range,
        )

    def to_dict(self) -> Dict[str, Any]:
        resolved = {'subcommand': self.subcommand}
        for key, value in sorted(self.values.items()):
            if isinstance(value, Path):
                value = str(value)
            elif isinstance(value, tuple):
                value = list(value)
            resolved[key] = value
        return resolved

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=True)

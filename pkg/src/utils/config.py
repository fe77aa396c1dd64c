"""
Configuration utility for the agfft encoder
Manages field, oracle, CLI and logging settings
"""

import copy
import json
import os
from typing import Dict, Any, List, Optional

from utils.exceptions import ValidationError
from utils.logger import get_logger

SMOOTH_BOUND_ENV = "AGFFT_SMOOTH_BOUND"

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
DEFAULT_CONFIG_FILE = os.path.join(PROJECT_ROOT, "config", "settings.json")

DEFAULT_CONFIG: Dict[str, Any] = {
    "field": {
        "smooth_bound": 64,
        # constant term first
        "default_moduli": {
            "4": [1, 1, 1],
            "8": [1, 1, 0, 1],
            "9": [2, 2, 1],
            "16": [1, 1, 0, 0, 1],
            "64": [1, 1, 0, 0, 0, 0, 1],
            "81": [2, 0, 0, 2, 1],
            "256": [1, 0, 1, 1, 1, 0, 0, 0, 1],
            "4096": [1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1],
            "65536": [1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1]
        },
        "table_limit": 1048576
    },
    "encoder": {
        "verify_unencode": False
    },
    "oracle": {
        "max_length": 16384,
        "rank_check_limit": 20000000
    },
    "cli": {
        "seed": 0,
        "trials": 100
    },
    "bench": {
        "sizes": [4, 8, 16],
        "repeats": 1
    },
    "logging": {
        "level": "INFO",
        "dir": "logs",
        "max_file_size_mb": 10,
        "backup_count": 5
    }
}


class Config:
    """Configuration manager for the encoder and CLI"""

    def __init__(self, config_file: str = DEFAULT_CONFIG_FILE):
        self.config_file = config_file
        self.logger = get_logger(__name__)
        self.config_data = self.load_config()

    def load_config(self) -> Dict[str, Any]:
        """Load configuration from file"""
        default_config = copy.deepcopy(DEFAULT_CONFIG)

        if os.path.exists(self.config_file):
            try:
                with open(self.config_file, 'r') as f:
                    config = json.load(f)
                    # Merge with default config to ensure all keys exist
                    return self.merge_configs(default_config, config)
            except (OSError, json.JSONDecodeError) as e:
                self.logger.warning(f"Error loading config {self.config_file}: {e}")
                return default_config
        else:
            self.save_config(default_config)
            return default_config

    def merge_configs(self, default: Dict, user: Dict) -> Dict:
        """Merge user config with default config"""
        result = copy.deepcopy(default)

        def merge_dicts(d1, d2):
            for key, value in d2.items():
                if key in d1 and isinstance(d1[key], dict) and isinstance(value, dict):
                    merge_dicts(d1[key], value)
                else:
                    d1[key] = value

        merge_dicts(result, user)
        return result

    def save_config(self, config_data: Optional[Dict] = None):
        """Save configuration to file"""
        if config_data is None:
            config_data = self.config_data

        try:
            directory = os.path.dirname(self.config_file)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(self.config_file, 'w') as f:
                json.dump(config_data, f, indent=4)
        except OSError as e:
            self.logger.warning(f"Error saving config: {e}")

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value by key (supports dot notation)"""
        keys = key.split('.')
        value = self.config_data

        try:
            for k in keys:
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def set(self, key: str, value: Any):
        """Set configuration value by key (supports dot notation)"""
        keys = key.split('.')
        config = self.config_data

        for k in keys[:-1]:
            if k not in config:
                config[k] = {}
            config = config[k]

        config[keys[-1]] = value
        self.save_config()

    def get_smooth_bound(self) -> int:
        """Smoothness bound B, overridable through AGFFT_SMOOTH_BOUND"""
        raw = os.environ.get(SMOOTH_BOUND_ENV)
        if raw is not None and raw.strip():
            try:
                bound = int(raw)
            except ValueError:
                raise ValidationError(f"{SMOOTH_BOUND_ENV} must be an integer, got {raw!r}")
            if bound < 2:
                raise ValidationError(f"{SMOOTH_BOUND_ENV} must be at least 2, got {bound}")
            return bound
        return int(self.get("field.smooth_bound", 64))

    def get_default_modulus(self, q: int) -> Optional[List[int]]:
        """Shipped modulus for GF(q), constant term first"""
        moduli = self.get("field.default_moduli", {})
        modulus = moduli.get(str(q))
        return list(modulus) if modulus is not None else None

    def get_table_limit(self) -> int:
        """Largest field order that gets log/exp tables"""
        return int(self.get("field.table_limit", 1 << 20))

    def get_oracle_max_length(self) -> int:
        """Largest code length the naive oracle runs on"""
        return int(self.get("oracle.max_length", 16384))

    def get_rank_check_limit(self) -> int:
        """Work cap (k*k*N) for exact generator-matrix rank checks"""
        return int(self.get("oracle.rank_check_limit", 20000000))

    def get_default_seed(self) -> int:
        """Seed for random messages"""
        return int(self.get("cli.seed", 0))

    def get_default_trials(self) -> int:
        """Number of verify trials"""
        return int(self.get("cli.trials", 100))

    def get_bench_sizes(self) -> list:
        """Default kappa values for bench runs"""
        return list(self.get("bench.sizes", [4, 8, 16]))

    def get_log_level(self) -> str:
        """Get logging level"""
        return self.get("logging.level", "INFO")

    def get_log_dir(self) -> str:
        """Directory holding rotating log files"""
        return self.get("logging.dir", "logs")

    def reset_to_defaults(self):
        """Reset configuration to default values"""
        self.config_data = copy.deepcopy(DEFAULT_CONFIG)
        self.save_config()


_default_config: Optional[Config] = None


def get_config() -> Config:
    """Process-wide configuration loaded from config/settings.json"""
    global _default_config
    if _default_config is None:
        _default_config = Config()
    return _default_config

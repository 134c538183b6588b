"""
Configuration Management System for the Steinberg character calculator
Handles environment-specific settings, size caps and verification grids
"""

import os
from dataclasses import asdict, dataclass, field
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from loguru import logger

from config import PROJECT_ROOT


class Environment(Enum):
    """Runtime environments"""
    DEVELOPMENT = "development"
    TESTING = "testing"
    PRODUCTION = "production"


@dataclass
class LimitsConfig:
    """Caps that keep enumeration at desk scale"""
    max_rank: int = 6
    bfs_max_radius: int = 14
    bfs_max_rank: int = 2
    table_max_rows: int = 10_000
    max_workers: int = 4


@dataclass
class VerificationConfig:
    """Grids and sample sizes of the verification suites"""
    types: List[str] = field(default_factory=lambda: [
        "A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "G2", "F4"
    ])
    lattices: List[str] = field(default_factory=lambda: ["sc", "adjoint"])
    ymax: int = 3
    length_types: List[str] = field(default_factory=lambda: ["A1", "A2", "C2"])
    radius: int = 12
    dominant_length_samples: int = 50
    hecke_pair_samples: int = 500
    hecke_triple_samples: int = 200
    unipotent_samples: int = 100
    unipotent_max_rank: int = 3
    euler_max_rank: int = 6
    seed: int = 20240101


@dataclass
class OutputConfig:
    """Command output settings"""
    default_format: str = "text"
    output_directory: str = "output"
    json_indent: int = 2


@dataclass
class LoggingConfig:
    """Logging configuration"""
    level: str = "INFO"
    file_path: str = "logs/application.log"
    enable_file_logging: bool = False


@dataclass
class ApplicationConfig:
    """Main application configuration"""
    environment: Environment = Environment.DEVELOPMENT
    debug: bool = False
    version: str = "1.0.0"

    limits: LimitsConfig = field(default_factory=LimitsConfig)
    verification: VerificationConfig = field(default_factory=VerificationConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)


class ConfigManager:
    """Configuration manager for loading and managing application settings"""

    def __init__(self, config_dir: Optional[Path] = None):
        self.config_dir = config_dir or PROJECT_ROOT / "config"
        self._config: Optional[ApplicationConfig] = None
        self._environment = self._detect_environment()

    def _detect_environment(self) -> Environment:
        """Detect current environment from environment variables"""
        env_name = os.getenv("ENVIRONMENT", "development").lower()
        try:
            return Environment(env_name)
        except ValueError:
            logger.warning(f"Unknown environment '{env_name}', defaulting to development")
            return Environment.DEVELOPMENT

    def get_environment_defaults(self, environment: Environment) -> ApplicationConfig:
        """Get default configuration for specific environment"""
        config = ApplicationConfig(environment=environment)

        if environment == Environment.DEVELOPMENT:
            config.debug = True
            config.logging.level = "DEBUG"

        elif environment == Environment.TESTING:
            config.debug = True
            config.logging.level = "WARNING"
            config.limits.max_workers = 1
            config.verification.types = ["A1", "A2", "B2", "G2"]
            config.verification.hecke_pair_samples = 50
            config.verification.hecke_triple_samples = 20
            config.verification.unipotent_samples = 10

        elif environment == Environment.PRODUCTION:
            config.debug = False
            config.logging.level = "WARNING"
            config.logging.enable_file_logging = True

        return config

    def save_config_to_file(self, config: ApplicationConfig, file_path: Path):
        """Save configuration to YAML file"""
        config_dict = asdict(config)
        config_dict['environment'] = config.environment.value

        file_path.parent.mkdir(parents=True, exist_ok=True)
        with open(file_path, 'w') as f:
            yaml.dump(config_dict, f, default_flow_style=False, indent=2)

    def load_config(self, config_file: Optional[Path] = None) -> ApplicationConfig:
        """Load configuration from file"""
        if config_file is None:
            base_config_file = self.config_dir / "config.yaml"
            env_config_file = self.config_dir / f"config.{self._environment.value}.yaml"

            config = self.get_environment_defaults(self._environment)
            if base_config_file.exists():
                config = self._merge_configs(config, self._load_config_dict_from_file(base_config_file))

            # Override with environment-specific configuration
            if env_config_file.exists():
                config = self._merge_configs(config, self._load_config_dict_from_file(env_config_file))
        else:
            config = self._merge_configs(
                self.get_environment_defaults(self._environment),
                self._load_config_dict_from_file(Path(config_file)),
            )

        config = self._apply_environment_overrides(config)

        self._config = config
        return config

    def _load_config_dict_from_file(self, file_path: Path) -> Dict[str, Any]:
        """Load configuration dictionary from YAML file"""
        logger.debug(f"Reading configuration from {file_path}")
        with open(file_path, 'r') as f:
            return yaml.safe_load(f) or {}

    def dict_to_config(self, config_dict: Dict[str, Any]) -> ApplicationConfig:
        """Convert dictionary to ApplicationConfig object"""
        config_dict = dict(config_dict)
        if 'environment' in config_dict:
            config_dict['environment'] = Environment(config_dict['environment'])

        if 'limits' in config_dict:
            config_dict['limits'] = LimitsConfig(**config_dict['limits'])

        if 'verification' in config_dict:
            config_dict['verification'] = VerificationConfig(**config_dict['verification'])

        if 'output' in config_dict:
            config_dict['output'] = OutputConfig(**config_dict['output'])

        if 'logging' in config_dict:
            config_dict['logging'] = LoggingConfig(**config_dict['logging'])

        return ApplicationConfig(**config_dict)

    def _merge_configs(self, base_config: ApplicationConfig, override_dict: Dict[str, Any]) -> ApplicationConfig:
        """Merge base configuration with override dictionary"""
        base_dict = asdict(base_config)
        base_dict['environment'] = base_config.environment.value

        merged_dict = self._deep_merge(base_dict, override_dict)

        return self.dict_to_config(merged_dict)

    def _deep_merge(self, base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
        """Deep merge two dictionaries"""
        result = base.copy()

        for key, value in override.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = self._deep_merge(result[key], value)
            else:
                result[key] = value

        return result

    def _apply_environment_overrides(self, config: ApplicationConfig) -> ApplicationConfig:
        """Apply environment variable overrides to configuration"""
        # Limit overrides
        if os.getenv("MAX_RANK"):
            config.limits.max_rank = int(os.getenv("MAX_RANK"))
        if os.getenv("BFS_MAX_RADIUS"):
            config.limits.bfs_max_radius = int(os.getenv("BFS_MAX_RADIUS"))
        if os.getenv("TABLE_MAX_ROWS"):
            config.limits.table_max_rows = int(os.getenv("TABLE_MAX_ROWS"))
        if os.getenv("MAX_WORKERS"):
            config.limits.max_workers = int(os.getenv("MAX_WORKERS"))

        # Verification overrides
        if os.getenv("VERIFY_SEED"):
            config.verification.seed = int(os.getenv("VERIFY_SEED"))

        # Logging overrides
        if os.getenv("LOG_LEVEL"):
            config.logging.level = os.getenv("LOG_LEVEL")

        if os.getenv("DEBUG"):
            config.debug = os.getenv("DEBUG").lower() == "true"

        return config

    def get_config(self) -> ApplicationConfig:
        """Get current configuration"""
        if self._config is None:
            self._config = self.load_config()
        return self._config

    def export_config(self, file_path: Optional[Path] = None) -> str:
        """Export current configuration to file"""
        config = self.get_config()

        if file_path is None:
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            file_path = self.config_dir / f"config_export_{timestamp}.yaml"

        self.save_config_to_file(config, Path(file_path))
        return str(file_path)

    def validate_config(self, config: Optional[ApplicationConfig] = None) -> Dict[str, Any]:
        """Validate current configuration"""
        config = config or self.get_config()
        validation_results = {
            'valid': True,
            'errors': [],
            'warnings': []
        }

        limits = config.limits
        if limits.max_rank < 1:
            validation_results['errors'].append("Max rank must be at least 1")
            validation_results['valid'] = False
        elif limits.max_rank > 6:
            validation_results['warnings'].append(f"Max rank {limits.max_rank} allows E7/E8 enumeration")

        if limits.bfs_max_radius < 0:
            validation_results['errors'].append("BFS radius cap must be non-negative")
            validation_results['valid'] = False

        if limits.max_workers <= 0:
            validation_results['errors'].append("Max workers must be greater than 0")
            validation_results['valid'] = False

        if limits.table_max_rows <= 0:
            validation_results['errors'].append("Table row cap must be greater than 0")
            validation_results['valid'] = False

        verification = config.verification
        if verification.radius > limits.bfs_max_radius:
            validation_results['errors'].append(
                f"Verification radius {verification.radius} exceeds BFS cap {limits.bfs_max_radius}"
            )
            validation_results['valid'] = False

        if verification.ymax < 0:
            validation_results['errors'].append("ymax must be non-negative")
            validation_results['valid'] = False

        unknown_lattices = set(verification.lattices) - {"sc", "adjoint"}
        if unknown_lattices:
            validation_results['errors'].append(f"Unknown lattices in verification grid: {sorted(unknown_lattices)}")
            validation_results['valid'] = False

        if config.output.default_format not in ("text", "json", "csv"):
            validation_results['errors'].append(f"Unknown output format '{config.output.default_format}'")
            validation_results['valid'] = False

        return validation_results


# Global configuration manager instance
config_manager = ConfigManager()


def get_config() -> ApplicationConfig:
    """Get global configuration instance"""
    return config_manager.get_config()

"""
Tests for configuration loading, overrides and validation
"""

import sys
from pathlib import Path

import pytest
import yaml

# Add project root to path for imports
sys.path.insert(0, str(Path(__file__).parents[1]))

from config_manager import ApplicationConfig, ConfigManager, Environment

OVERRIDE_VARIABLES = ["ENVIRONMENT", "MAX_RANK", "BFS_MAX_RADIUS", "TABLE_MAX_ROWS", "MAX_WORKERS",
                      "VERIFY_SEED", "LOG_LEVEL", "DEBUG"]


@pytest.fixture
def clean_env(monkeypatch):
    for name in OVERRIDE_VARIABLES:
        monkeypatch.delenv(name, raising=False)
    return monkeypatch


@pytest.fixture
def manager(clean_env, tmp_path):
    return ConfigManager(config_dir=tmp_path)


class TestDefaults:

    def test_development_defaults(self, manager):
        config = manager.load_config()
        assert config.environment is Environment.DEVELOPMENT
        assert config.debug
        assert config.limits.max_rank == 6
        assert config.limits.bfs_max_radius == 14
        assert config.verification.lattices == ["sc", "adjoint"]

    def test_testing_environment_shrinks_the_grids(self, clean_env, tmp_path):
        clean_env.setenv("ENVIRONMENT", "testing")
        config = ConfigManager(config_dir=tmp_path).load_config()
        assert config.environment is Environment.TESTING
        assert config.limits.max_workers == 1
        assert config.verification.types == ["A1", "A2", "B2", "G2"]

    def test_unknown_environment_falls_back(self, clean_env, tmp_path):
        clean_env.setenv("ENVIRONMENT", "staging")
        assert ConfigManager(config_dir=tmp_path).load_config().environment is Environment.DEVELOPMENT


class TestFilesAndOverrides:

    def test_yaml_files_are_merged(self, manager, tmp_path):
        (tmp_path / "config.yaml").write_text(yaml.safe_dump({"limits": {"max_rank": 4}, "verification": {"ymax": 2}}))
        (tmp_path / "config.development.yaml").write_text(yaml.safe_dump({"verification": {"ymax": 1}}))
        config = manager.load_config()
        assert config.limits.max_rank == 4
        assert config.limits.bfs_max_radius == 14
        assert config.verification.ymax == 1

    def test_explicit_file(self, manager, tmp_path):
        path = tmp_path / "custom.yaml"
        path.write_text(yaml.safe_dump({"output": {"default_format": "json"}}))
        assert manager.load_config(path).output.default_format == "json"

    def test_environment_variables_win(self, manager, clean_env, tmp_path):
        (tmp_path / "config.yaml").write_text(yaml.safe_dump({"limits": {"max_rank": 4}}))
        clean_env.setenv("MAX_RANK", "3")
        clean_env.setenv("VERIFY_SEED", "7")
        clean_env.setenv("DEBUG", "false")
        config = manager.load_config()
        assert config.limits.max_rank == 3
        assert config.verification.seed == 7
        assert not config.debug

    def test_save_and_export(self, manager, tmp_path):
        config = manager.load_config()
        path = tmp_path / "saved" / "config.yaml"
        manager.save_config_to_file(config, path)
        saved = yaml.safe_load(path.read_text())
        assert saved["environment"] == "development"
        assert saved["limits"]["max_rank"] == 6
        exported = manager.export_config(tmp_path / "export.yaml")
        assert Path(exported).exists()

    def test_dict_to_config(self, manager):
        config = manager.dict_to_config({"environment": "production", "limits": {"max_rank": 2}})
        assert isinstance(config, ApplicationConfig)
        assert config.environment is Environment.PRODUCTION
        assert config.limits.max_rank == 2


class TestValidation:

    def test_defaults_are_valid(self, manager):
        assert manager.validate_config(manager.load_config())["valid"]

    def test_errors(self, manager):
        config = manager.load_config()
        config.limits.max_rank = 0
        config.verification.radius = 20
        config.verification.lattices = ["sc", "simply-laced"]
        config.output.default_format = "xml"
        result = manager.validate_config(config)
        assert not result["valid"]
        assert len(result["errors"]) == 4

    def test_large_rank_is_a_warning(self, manager):
        config = manager.load_config()
        config.limits.max_rank = 8
        result = manager.validate_config(config)
        assert result["valid"]
        assert result["warnings"]

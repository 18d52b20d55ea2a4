"""
Unit tests for core.config module.
"""

import logging
import os
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

from morseframe.core.config import Config
from morseframe.core.exceptions import ConfigurationError


class TestConfig(unittest.TestCase):
    """Test cases for Config class."""

    def test_config_defaults(self):
        """Test Config initialization with default values."""
        config = Config()

        self.assertEqual(config.log_level, "WARNING")
        self.assertEqual(config.seed, 0)
        self.assertEqual(config.tie_tol, 1e-9)
        self.assertEqual(config.tol_kkt, 1e-9)
        self.assertEqual(config.inverse_tol, 1e-12)
        self.assertEqual(config.merge_tol, 1e-12)
        self.assertEqual(config.delta_ext, 0.15)
        self.assertEqual(config.r_capture, 0.05)
        self.assertEqual(config.newton_tol, 1e-10)

    def test_config_initialization(self):
        """Test Config initialization with custom values."""
        config = Config(log_level="WARNING", seed=7, delta_ext=0.2, r_capture=0.1)

        self.assertEqual(config.log_level, "WARNING")
        self.assertEqual(config.seed, 7)
        self.assertEqual(config.delta_ext, 0.2)
        self.assertEqual(config.r_capture, 0.1)

    @patch.dict(os.environ, {}, clear=True)
    def test_from_env_with_no_env_vars(self):
        """Test Config.from_env() with no environment variables."""
        config = Config.from_env()

        self.assertEqual(config.to_dict(), Config().to_dict())

    @patch.dict(
        os.environ,
        {
            "MORSEFRAME_LOG_LEVEL": "DEBUG",
            "MORSEFRAME_SEED": "42",
            "MORSEFRAME_DELTA_EXT": "0.25",
            "MORSEFRAME_NEWTON_MAX_ITER": "80",
        },
    )
    def test_from_env_with_env_vars(self):
        """Test Config.from_env() with environment variables."""
        config = Config.from_env()

        self.assertEqual(config.log_level, "DEBUG")
        self.assertEqual(config.seed, 42)
        self.assertEqual(config.delta_ext, 0.25)
        self.assertEqual(config.newton_max_iter, 80)
        self.assertIsInstance(config.delta_ext, float)
        self.assertIsInstance(config.newton_max_iter, int)

    @patch.dict(os.environ, {"MORSEFRAME_SEED": "-3"})
    def test_from_env_rejects_signed_seed(self):
        """The seed must be a decimal unsigned integer."""
        with self.assertRaises(ConfigurationError) as cm:
            Config.from_env()

        self.assertIn("MORSEFRAME_SEED", str(cm.exception))

    @patch.dict(os.environ, {"MORSEFRAME_TIE_TOL": "invalid"})
    def test_from_env_invalid_float(self):
        """Test Config.from_env() with invalid float values."""
        with self.assertRaises(ValueError):
            Config.from_env()

    def test_from_dotenv_loads_file(self):
        """Test Config.from_dotenv() reading an explicit .env file."""
        with tempfile.TemporaryDirectory() as temp_dir:
            env_file = Path(temp_dir) / ".env"
            env_file.write_text("MORSEFRAME_R_CAPTURE=0.08\n")

            with patch.dict(os.environ, {}, clear=True):
                config = Config.from_dotenv(env_file)

        self.assertEqual(config.r_capture, 0.08)

    def test_find_project_root_with_git(self):
        """Test _find_project_root() finding .git directory."""
        with tempfile.TemporaryDirectory() as temp_dir:
            project_root = Path(temp_dir)
            (project_root / ".git").mkdir()

            sub_dir = project_root / "sub" / "dir"
            sub_dir.mkdir(parents=True)

            with patch("pathlib.Path.cwd", return_value=sub_dir):
                result = Config._find_project_root()
                self.assertEqual(result, project_root)

    def test_find_project_root_with_pyproject_toml(self):
        """Test _find_project_root() finding pyproject.toml file."""
        with tempfile.TemporaryDirectory() as temp_dir:
            project_root = Path(temp_dir)
            (project_root / "pyproject.toml").touch()

            sub_dir = project_root / "sub"
            sub_dir.mkdir()

            with patch("pathlib.Path.cwd", return_value=sub_dir):
                result = Config._find_project_root()
                self.assertEqual(result, project_root)

    def test_find_project_root_fallback_to_cwd(self):
        """Test _find_project_root() fallback to current directory."""
        with tempfile.TemporaryDirectory() as temp_dir:
            current_dir = Path(temp_dir)

            with patch("pathlib.Path.cwd", return_value=current_dir):
                result = Config._find_project_root()
                self.assertEqual(result, current_dir)

    def test_validate_valid_config(self):
        """Test validate() with valid configuration."""
        Config().validate()

    def test_validate_collects_all_errors(self):
        """Every problem is reported in one ConfigurationError."""
        config = Config(delta_ext=0.0, newton_max_iter=0, tie_tol=-1.0)

        with self.assertRaises(ConfigurationError) as cm:
            config.validate()

        message = str(cm.exception)
        self.assertIn("DELTA_EXT must be > 0", message)
        self.assertIn("NEWTON_MAX_ITER must be >= 1", message)
        self.assertIn("TIE_TOL must be >= 0", message)

    def test_validate_launch_offset_inside_capture_radius(self):
        """Test validate() with a launch offset outside the capture disk."""
        config = Config(launch_offset=0.1, r_capture=0.05)

        with self.assertRaises(ConfigurationError) as cm:
            config.validate()

        self.assertIn("LAUNCH_OFFSET", str(cm.exception))

    def test_validate_log_level(self):
        """Test validate() rejects an unknown log level name."""
        with self.assertRaises(ConfigurationError) as cm:
            Config(log_level="CHATTY").validate()

        self.assertIn("LOG_LEVEL must be one of", str(cm.exception))
        Config(log_level="debug").validate()

    def test_with_overrides(self):
        """Overrides replace given fields and skip None."""
        config = Config().with_overrides(delta_ext=0.3, r_capture=None)

        self.assertEqual(config.delta_ext, 0.3)
        self.assertEqual(config.r_capture, 0.05)

    def test_with_overrides_unknown_name(self):
        """Test with_overrides() with an unknown tolerance."""
        with self.assertRaises(ConfigurationError):
            Config().with_overrides(nonsense=1.0)

    def test_to_dict_and_tolerances(self):
        """Test to_dict() excludes private fields; tolerances() drops log_level."""
        config = Config()
        data = config.to_dict()

        self.assertNotIn("_project_root", data)
        self.assertIn("log_level", data)
        self.assertNotIn("log_level", config.tolerances())
        self.assertEqual(config.tolerances()["tie_tol"], 1e-9)

    def test_str_representation(self):
        """Test string representation of Config."""
        self.assertTrue(str(Config()).startswith("Config("))

    def test_setup_logging(self):
        """Test setup_logging() installs a single handler at the level."""
        config = Config(log_level="DEBUG")
        root = logging.getLogger()
        saved = root.handlers[:], root.level
        try:
            config.setup_logging()
            self.assertEqual(root.level, logging.DEBUG)
            self.assertEqual(len(root.handlers), 1)
            self.assertEqual(
                logging.getLogger("matplotlib").level, logging.WARNING
            )
        finally:
            root.handlers[:] = saved[0]
            root.setLevel(saved[1])

    def test_setup_logging_level_overrides_config(self):
        """Test an explicit level wins over log_level."""
        config = Config(log_level="ERROR")
        root = logging.getLogger()
        saved = root.handlers[:], root.level
        try:
            config.setup_logging("INFO")
            self.assertEqual(root.level, logging.INFO)
            config.setup_logging()
            self.assertEqual(root.level, logging.ERROR)
            self.assertEqual(len(root.handlers), 1)
        finally:
            root.handlers[:] = saved[0]
            root.setLevel(saved[1])


if __name__ == "__main__":
    unittest.main()

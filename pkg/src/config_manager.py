"""
Configuration Manager - Handles persistence of the default experiment configuration
"""
import logging
from pathlib import Path
from typing import Optional

from platformdirs import user_config_dir

from .data_models import ExperimentConfig

logger = logging.getLogger(__name__)


class ConfigManager:
    """
    Manages the user-level default experiment configuration

    Config file location: ~/.config/borel_rigidity/global.json (Linux)
                         %APPDATA%/borel_rigidity/global.json (Windows)
    """

    APP_NAME = "borel_rigidity"
    CONFIG_FILENAME = "global.json"

    def __init__(self, config_dir: Optional[Path] = None):
        self.config_dir = Path(config_dir) if config_dir is not None else Path(user_config_dir(self.APP_NAME))
        self.config_file = self.config_dir / self.CONFIG_FILENAME

    def save_config(self, config: ExperimentConfig) -> bool:
        """
        Save configuration to file

        Args:
            config: ExperimentConfig instance

        Returns:
            True on success, False if the file could not be written
        """
        try:
            self.config_dir.mkdir(parents=True, exist_ok=True)
            config.save(self.config_file)
            return True
        except OSError as e:
            logger.error("Error saving config: %s", e)
            return False

    def load_config(self) -> ExperimentConfig:
        """
        Load configuration from file

        Returns:
            ExperimentConfig instance (defaults if the file doesn't exist)
        """
        return ExperimentConfig.load(self.config_file)

    def get_config_path(self) -> Path:
        """Get the full path to the config file"""
        return self.config_file

    def config_exists(self) -> bool:
        """Check if config file exists"""
        return self.config_file.exists()

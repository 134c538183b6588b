"""
Configuration settings for the Steinberg character calculator
"""
import os
from pathlib import Path

from dotenv import load_dotenv

# Project root directory
PROJECT_ROOT = Path(__file__).parent.absolute()

# Pick up a local .env before reading the environment
load_dotenv(PROJECT_ROOT / ".env")

# Environment-specific settings
ENVIRONMENT = os.getenv("ENVIRONMENT", "development")
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
LOG_TO_FILE = os.getenv("LOG_TO_FILE", "false").lower() == "true"
LOG_DIR = PROJECT_ROOT / "logs"

# Rank above which Weyl group enumeration is refused unless raised explicitly
DEFAULT_MAX_RANK = int(os.getenv("MAX_RANK", "6"))

"""Defaults for the command-line flags. Nothing is read from the environment."""
import logging

LOG_FORMAT: str = '%(asctime)s - %(levelname)s - %(message)s'
DEFAULT_LOG_LEVEL: int = logging.WARNING

DEFAULT_WINDOW: str = "-2:2"
DEFAULT_GEN_DEGREE: int = 2
DEFAULT_R_MAX: int = 3
DEFAULT_CANDIDATES: str = "1,-1,2,-2"
DEFAULT_DIM_BOUND: int = 8
DEFAULT_MU: str = "0"

STDIO_PATH: str = "-"

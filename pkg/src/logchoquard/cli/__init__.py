"""Run configuration, run directories and the command line interface."""

from .config import (
    ContinuationConfig,
    NonlinearityConfig,
    RunConfig,
    VerificationConfig,
    parse_config,
    parse_config_text,
)
from .main import build_parser, main
from .run import RunDirectory, config_from_echo, run_verify_all

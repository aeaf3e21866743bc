"""
CLI package: analizador de argumentos, subcomandos y códigos de salida.
"""

from cli.exceptions import CliError, OverwriteRefusedError
from cli.errors import EXIT_OK, EXIT_OVERWRITE, EXIT_RUNTIME, EXIT_VALIDATION, exit_code_for
from cli.parser import COMMANDS, STATS_TESTS, build_parser, config_overrides
from cli.commands import (
    cmd_cv,
    cmd_eval,
    cmd_phantom,
    cmd_prep,
    cmd_report,
    cmd_stats,
    parse_table,
    prepare_output,
    write_run_config,
)

__all__ = [
    # Exceptions
    "CliError",
    "OverwriteRefusedError",
    # Exit codes
    "EXIT_OK",
    "EXIT_VALIDATION",
    "EXIT_OVERWRITE",
    "EXIT_RUNTIME",
    "exit_code_for",
    # Parser
    "COMMANDS",
    "STATS_TESTS",
    "build_parser",
    "config_overrides",
    # Commands
    "cmd_phantom",
    "cmd_prep",
    "cmd_cv",
    "cmd_eval",
    "cmd_stats",
    "cmd_report",
    "parse_table",
    "prepare_output",
    "write_run_config",
]

import logging
import sys
from pathlib import Path
from typing import List, Optional

from cli import (
    EXIT_OK,
    EXIT_RUNTIME,
    build_parser,
    cmd_cv,
    cmd_eval,
    cmd_phantom,
    cmd_prep,
    cmd_report,
    cmd_stats,
    config_overrides,
    exit_code_for,
    prepare_output,
)
from models import RunConfig, load_run_config


LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DEFAULT_LOG_FILE = "jointnet.log"


def setup_logging(config: RunConfig) -> logging.Logger:
    """Configura el sistema de logging según la configuración resuelta."""
    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, config.log_level.value, logging.INFO))

    while root_logger.handlers:
        handler = root_logger.handlers.pop()
        handler.close()

    formatter = logging.Formatter(LOG_FORMAT)

    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    log_path = Path(config.log_file) if config.log_file else Path(config.out) / DEFAULT_LOG_FILE
    log_path.parent.mkdir(parents=True, exist_ok=True)
    file_handler = logging.FileHandler(log_path, encoding="utf-8")
    file_handler.setFormatter(formatter)
    root_logger.addHandler(file_handler)

    return logging.getLogger(__name__)


def dispatch(command: str, config: RunConfig, stats_test: Optional[str] = None) -> None:
    if command == "phantom":
        cmd_phantom(config)
    elif command == "prep":
        cmd_prep(config)
    elif command == "cv":
        cmd_cv(config)
    elif command == "eval":
        cmd_eval(config)
    elif command == "stats":
        cmd_stats(config, stats_test)
    elif command == "report":
        cmd_report(config)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logger = logging.getLogger(__name__)

    try:
        config = load_run_config(getattr(args, "config", None), **config_overrides(args))
        prepare_output(config)
        logger = setup_logging(config)
        logger.info(f"Comando '{args.command}' iniciado con semilla {config.seed}; salida en {config.out}.")
        dispatch(args.command, config, getattr(args, "stats_test", None))
    except Exception as e:
        code = exit_code_for(e)
        logger.error(f"{type(e).__name__}: {e}", exc_info=code == EXIT_RUNTIME)
        print(f"error: {e}", file=sys.stderr)
        return code

    logger.info(f"Comando '{args.command}' finalizado.")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""
Command dispatch and error-to-exit-code mapping
"""

import logging
import sys
from typing import Any, Dict, Optional, TextIO

from rich.console import Console
from rich.markup import escape

from app.cli.handlers import HANDLERS
from app.core.exceptions import LmCostError
from app.core.logging import setup_logging
from app.schemas.run import RunConfig

logger = logging.getLogger(__name__)


def run(config: RunConfig, stream: Optional[TextIO] = None) -> int:
    setup_logging(config.log_level)
    stream = stream or sys.stdout
    logger.debug(f"running {config.command} with {config.model_dump(exclude_none=True)}")
    return HANDLERS[config.command](config, stream)


def execute(options: Dict[str, Any], stream: Optional[TextIO] = None) -> int:
    """Validate options, run the command, and turn toolkit errors into exit codes"""
    try:
        return run(RunConfig.build(**options), stream)
    except LmCostError as exc:
        Console(stderr=True, highlight=False).print(f"[bold red]error:[/bold red] {escape(str(exc))}", markup=True, soft_wrap=True)
        logger.debug("command failed", exc_info=True)
        return exc.exit_code

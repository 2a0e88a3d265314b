#!/usr/bin/env python3
"""
tagmetrics - Main Application Entry Point

Configures logging and runs the command line, turning errors into exit codes:
0 success, 1 usage error, 2 rule or rule-file error, 3 any other domain error.
"""

import sys
from pathlib import Path
from typing import List, Optional

import click
from loguru import logger
from pydantic import ValidationError

# Add the app directory to the Python path
app_dir = Path(__file__).parent
sys.path.insert(0, str(app_dir))

from models.exceptions import RuleError, TagMetricsError
from services.config_service import AppSettings

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RULES = 2
EXIT_DOMAIN = 3


def setup_logging(settings: AppSettings):
    """Configure application logging."""
    # Remove default handler
    logger.remove()

    logger.add(
        sys.stderr,
        level=settings.log_level.upper(),
        format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
    )

    if settings.log_file is not None:
        settings.log_file.parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            settings.log_file,
            level="DEBUG",
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}",
            rotation="10 MB",
            retention="30 days"
        )


def main(argv: Optional[List[str]] = None) -> int:
    """Run the command line and return its exit code."""
    from cli import cli

    try:
        result = cli.main(args=argv, prog_name="tagmetrics", standalone_mode=False)
        return result if isinstance(result, int) else EXIT_OK
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except ValidationError as e:
        click.echo(f"Error: {e}", err=True)
        return EXIT_USAGE
    except RuleError as e:
        logger.error(f"Rule error: {e}")
        click.echo(f"Error: {e}", err=True)
        return EXIT_RULES
    except TagMetricsError as e:
        logger.error(f"{type(e).__name__}: {e}")
        click.echo(f"Error: {e}", err=True)
        return EXIT_DOMAIN
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        click.echo(f"Error: {e}", err=True)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())

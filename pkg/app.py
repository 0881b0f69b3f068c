"""
bvpkit - Two-Point Boundary Value Solvers for the Kerr Beam Profile
Main Command-Line Entry Point
"""

import logging
import sys

from config import get_config
from bvpkit.routes.cli import main


def create_cli():
    """Configure logging from the active configuration and return it"""
    config = get_config()
    logging.basicConfig(
        level=config.LOG_LEVEL,
        format='%(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )
    return config


if __name__ == '__main__':
    config = create_cli()
    sys.exit(main(sys.argv[1:], config))

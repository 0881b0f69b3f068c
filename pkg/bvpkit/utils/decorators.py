"""
Exit Code Decorators
"""

import sys
from enum import IntEnum
from functools import wraps

from bvpkit.models.errors import BvpError, ConfigurationError


class ExitCode(IntEnum):
    CONVERGED = 0
    USAGE = 2
    UNCONVERGED = 3
    SOLVER_ERROR = 4
    IO_ERROR = 5


def report_error(label, error, marker="✗"):
    """One-line diagnostic on the error stream"""
    print(f"{marker} {label}: {error}", file=sys.stderr)


def solver_errors_to_exit_code(f):
    """Decorator turning solver and I/O failures of a command into exit codes"""
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except BvpError as e:
            report_error(f"Solver error ({type(e).__name__})", e)
            return ExitCode.SOLVER_ERROR
        except OSError as e:
            report_error("I/O error", e)
            return ExitCode.IO_ERROR
    return decorated_function


def usage_errors_to_exit_code(f):
    """Decorator turning argument and configuration errors into exit code 2"""
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except ConfigurationError as e:
            report_error("Configuration error", e)
            return ExitCode.USAGE
        except SystemExit as e:
            # argparse has already printed usage and the reason
            return ExitCode.USAGE if e.code else ExitCode.CONVERGED
    return decorated_function

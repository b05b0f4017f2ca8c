# -----------------------------------------------------------------------------
# top-level error reporting for cli commands
# -----------------------------------------------------------------------------
from __future__ import annotations

import os
import signal
import sys
import traceback

from pymonocubic.core.errors import MonoCubicError
from pymonocubic.core.logger import Logger

SIGINT_EXIT_CODE = 130


# noinspection PyMethodMayBeStatic
class ExceptionHandler:
    def __init__(self, logger: Logger|None = None):
        self._logger = logger or Logger.get_instance()
        signal.signal(signal.SIGINT, lambda signum, f: self.on_signal(signum, f))

    def on_signal(self, s, f):
        self._logger.debug('Terminating (SIGINT)')
        sys.exit(SIGINT_EXIT_CODE)

    def report(self, e: Exception) -> int:
        """Log the error (and its traceback if EXCEPTION_TRACE is set), return the exit code."""
        self._logger.error(f'{e.__class__.__name__}: {e!s}')
        if os.environ.get('EXCEPTION_TRACE'):
            self._write_trace(e)
        return e.exit_code if isinstance(e, MonoCubicError) else 1

    def _write_trace(self, e: Exception):
        lines = ''.join(traceback.format_exception(type(e), e, e.__traceback__)).rstrip('\n')
        print(lines, file=sys.stderr)
        for line in lines.splitlines():
            self._logger.log(line, 'trace')

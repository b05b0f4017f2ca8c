# -----------------------------------------------------------------------------
# line logger: optional log file plus colored echo on stderr
# -----------------------------------------------------------------------------
from __future__ import annotations

import re
import sys
from datetime import datetime
from io import TextIOWrapper
from typing import Optional

from pymonocubic.util.io import SGRRegistry


class Logger:
    CR_LF_REGEX = re.compile(r'[\r\n]+')
    PREFIX = 'PYMONOCUBIC'

    _instance: Logger = None

    @classmethod
    def get_instance(cls, require_new: bool = False, *args, **kwargs) -> Logger:
        if cls._instance and not require_new:
            return cls._instance
        instance = cls(*args, **kwargs)
        if not cls._instance or require_new:
            cls._instance = instance
        return instance

    def __init__(self, filename: str|None = None, verbose: bool|None = None):
        if filename is None or verbose is None:
            from pymonocubic.core.config import Config
            from pymonocubic.core.errors import UsageError
            try:
                config = Config.get_instance()
                filename = filename if filename is not None else config.log_file
                verbose = verbose if verbose is not None else config.verbose
            except UsageError:
                # broken settings are reported through this very logger
                pass

        self._verbose = verbose
        self._buf = ''
        self._fileio: Optional[TextIOWrapper] = None

        if filename:
            self._open_io(filename)
        self.debug('Created logger instance')

    def log(self, text: str, level: str = 'info', buffered: bool = False):
        if buffered:
            self._buf += text
            return
        if not self._fileio or self._fileio.closed:
            self._buf = ''
            return

        dt, micro = datetime.now().strftime("%Y-%m-%d %H:%M:%S.%f").rsplit('.', 1)
        line = self.CR_LF_REGEX.sub(' ', self._buf + text)
        print(f'{dt}.{micro:.3s} {self.PREFIX} {level.upper()}: {line}',
              file=self._fileio, end='\n', flush=True)
        self._buf = ''

    def debug(self, text: str, silent: bool = True):
        if not silent or self._verbose:
            print(f'{SGRRegistry.FMT_CYAN!s}{text}{SGRRegistry.FMT_RESET!s}', file=sys.stderr)
        self.log(text, 'debug')

    def info(self, text: str, silent: bool = False):
        if not silent:
            print(text, file=sys.stderr)
        self.log(text, 'info')

    def warn(self, text: str, silent: bool = False):
        if not silent:
            print(f'{SGRRegistry.FMT_YELLOW!s}{text}{SGRRegistry.FMT_RESET!s}', file=sys.stderr)
        self.log(text, 'warn')

    def error(self, text: str, silent: bool = False):
        if not silent:
            print(f'{SGRRegistry.FMT_RED!s}{text}{SGRRegistry.FMT_RESET!s}', file=sys.stderr)
        self.log(text, 'error')

    def _open_io(self, filename: str):
        try:
            self._fileio = open(filename, 'a', encoding='utf-8')
        except OSError as e:
            print(f'WARNING: Opening log file {filename} failed: {e}', file=sys.stderr)
            return
        self.debug(f'Opened log file for appending: {filename}')

    def close_io(self):
        if not self._fileio:
            return
        self._fileio.flush()
        self._fileio.close()
        self._fileio = None

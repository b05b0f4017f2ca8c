# -----------------------------------------------------------------------------
# runtime settings: defaults < .env < environment < command line
# -----------------------------------------------------------------------------
from __future__ import annotations

import os
from argparse import Namespace
from typing import Callable, Tuple

from dotenv import load_dotenv

from pymonocubic.core.errors import UsageError
from pymonocubic.core.singleton import Singleton

ENV_PREFIX = 'PYMONOCUBIC_'
KERNEL_ORDERS = {'1': (1,), '3': (3,), 'both': (1, 3)}


def _parse_bool(raw: str) -> bool:
    return raw.strip().lower() in ('1', 'true', 'yes', 'on')


def _parse_non_negative_int(raw: str) -> int:
    value = int(raw)
    if value < 0:
        raise ValueError('must be non-negative')
    return value


def _parse_kernel_order(raw: str) -> Tuple[int, ...]:
    try:
        return KERNEL_ORDERS[raw.strip().lower()]
    except KeyError:
        raise ValueError(f'expected one of {sorted(KERNEL_ORDERS)}')


# noinspection PyAttributeOutsideInit
class Config(metaclass=Singleton):
    DEFAULTS = {
        'SEARCH_BOUND': '0',
        'INDEX_BOUND': '5',
        'PRIME_BOUND': '1000',
        'KERNEL_ORDER': 'both',
        'WORKERS': '4',
        'LOG_FILE': '',
        'VERBOSE': '',
    }

    def __init__(self, env_file: str|None = None):
        env_file = env_file or os.path.join(os.getcwd(), '.env')
        if os.path.isfile(env_file):
            load_dotenv(env_file)
        self.reload()

    def reload(self):
        self.search_bound: int = self._read('SEARCH_BOUND', _parse_non_negative_int)
        self.index_bound: int = self._read('INDEX_BOUND', _parse_non_negative_int)
        self.prime_bound: int = self._read('PRIME_BOUND', _parse_non_negative_int)
        self.kernel_orders: Tuple[int, ...] = self._read('KERNEL_ORDER', _parse_kernel_order)
        self.workers: int = max(1, self._read('WORKERS', _parse_non_negative_int))
        self.log_file: str|None = self._read('LOG_FILE', str) or None
        self.verbose: bool = self._read('VERBOSE', _parse_bool)

    def apply_app_args(self, args: Namespace):
        for attr in ('search_bound', 'index_bound', 'prime_bound', 'workers'):
            value = getattr(args, attr, None)
            if value is not None:
                setattr(self, attr, value)
        if getattr(args, 'kernel_order', None):
            self.kernel_orders = _parse_kernel_order(args.kernel_order)
        if getattr(args, 'verbose', False):
            self.verbose = True

    def _read(self, key: str, parser: Callable[[str], object]):
        raw = os.environ.get(ENV_PREFIX + key, self.DEFAULTS[key])
        try:
            return parser(raw)
        except ValueError as e:
            raise UsageError(f'Invalid value for {ENV_PREFIX + key}: {raw!r} ({e})')

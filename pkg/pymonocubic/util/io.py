# -----------------------------------------------------------------------------
# i/o helper classes and methods
# -----------------------------------------------------------------------------
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Any, Dict, Iterable, List


@dataclass
class TimeUnit:
    name: str
    in_next: int
    collapsible: bool = False


time_units = [
    TimeUnit('sec', 60),
    TimeUnit('min', 60),
    TimeUnit('hr', 24, collapsible=True),
    TimeUnit('day', 30),
    TimeUnit('mon', 12, collapsible=True),
    TimeUnit('yr', 0),
]


class SGRSequence:
    """ANSI select graphic rendition sequence, ESC [ p1;p2 m"""

    def __init__(self, *params: int):
        self.params = params

    def __format__(self, format_spec: str) -> str:
        return str(self)

    def __str__(self):
        return '\033[' + ';'.join(str(p) for p in self.params) + 'm'


class SGRRegistry:
    FMT_RESET = SGRSequence(0)
    FMT_RED = SGRSequence(31)
    FMT_GREEN = SGRSequence(32)
    FMT_YELLOW = SGRSequence(33)
    FMT_CYAN = SGRSequence(36)

    SGR_REGEX = re.compile(r'\033\[[0-9;]*m')

    @staticmethod
    def remove_sgr_seqs(s: str) -> str:
        # remove all SGR escape sequences, keep the content between
        return SGRRegistry.SGR_REGEX.sub('', s)


def fmt_time_delta(seconds: float) -> str:
    # result max length is 6 for all reasonable values:
    # 13 sec, 17 min, 5h 23m, 11 hr, 23 day, 2 mon, 3m 21d, 11 yr
    # values below one second are printed in milliseconds
    seconds = max(0.0, seconds)
    if seconds < 1:
        return f'{seconds * 1000:>3.0f} ms'
    num = seconds
    unit_idx = 0
    prev_frac = ''

    while unit_idx < len(time_units):
        unit = time_units[unit_idx]
        unit_name = unit.name
        next_unit_ratio = unit.in_next

        if not next_unit_ratio:
            return f'{seconds:>6.0e}'
        elif num < 10 and unit.collapsible:
            return f'{num:1.0f}{unit_name[0]:1s} {prev_frac:<3s}'
        elif num < next_unit_ratio:
            return f'{num:>2.0f} {unit_name:<3s}'
        else:
            next_num = floor(num / next_unit_ratio)
            prev_frac = '{:d}{:1s}'.format(floor(num - (next_num * next_unit_ratio)), unit_name[0])
            num = next_num
            unit_idx += 1
            continue


RATIONAL_REGEX = re.compile(r'^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$')


def parse_rational(raw: str|int) -> Fraction:
    if isinstance(raw, int):
        return Fraction(raw)
    match = RATIONAL_REGEX.match(str(raw))
    if not match:
        raise ValueError(f'Not a rational number: {raw!r}')
    num, den = match.group(1), match.group(2) or '1'
    if int(den) == 0:
        raise ValueError(f'Zero denominator: {raw!r}')
    return Fraction(int(num), int(den))


def fmt_rational(q: Fraction|int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f'{q.numerator}/{q.denominator}'


def dump_json(data: Any) -> str:
    return json.dumps(data, ensure_ascii=False, indent=2, sort_keys=False)


def dump_tsv(rows: Iterable[Dict[str, Any]], columns: List[str]) -> str:
    lines = ['\t'.join(columns)]
    for row in rows:
        lines.append('\t'.join(_tsv_cell(row.get(col)) for col in columns))
    return '\n'.join(lines)


def _tsv_cell(value: Any) -> str:
    if value is None:
        return '-'
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    if isinstance(value, (list, tuple)):
        return ','.join(_tsv_cell(v) for v in value)
    if isinstance(value, dict):
        return json.dumps(value, ensure_ascii=False, separators=(',', ':'))
    return str(value)

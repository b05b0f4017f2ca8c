# -----------------------------------------------------------------------------
# generator files (externally computed points) and table fixtures
# -----------------------------------------------------------------------------
from __future__ import annotations

import enum
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from pymonocubic.core.errors import DomainError, IngestionError
from pymonocubic.engine import GeneratorSet
from pymonocubic.mordell import Model, MordellCurve, MordellPoint, on_curve, preimage_by_phi, preimage_by_phi_hat
from pymonocubic.util.io import fmt_rational, parse_rational

DATA_DIR = os.path.join(os.path.dirname(__file__), 'data')
GENERATORS_DIR = os.path.join(DATA_DIR, 'generators')
BUNDLED_FIXTURES = {
    'table1': os.path.join(DATA_DIR, 'table1.jsonl'),
    'table2': os.path.join(DATA_DIR, 'table2.jsonl'),
    'examples': os.path.join(DATA_DIR, 'examples.jsonl'),
}


def _parse_int(raw: Any, what: str) -> int:
    if isinstance(raw, bool):
        raise IngestionError(f'{what}: expected a decimal integer, got {raw!r}')
    try:
        return int(str(raw).strip())
    except ValueError:
        raise IngestionError(f'{what}: expected a decimal integer, got {raw!r}')


def generator_filename(D: int) -> str:
    return f'D{D}.json'


class GeneratorCurve(str, enum.Enum):
    DUAL = 'E^-27D'
    BASE = 'E^D'


def _lift_from_base(D: int, P: MordellPoint, label: str) -> MordellPoint:
    """Point of E^-27D over a point of E^D, outside phi_D(E^D)."""
    lifted = preimage_by_phi_hat(D, P)
    if lifted is None:
        raise IngestionError(f'{label} is not in the image of phi_hat')
    if preimage_by_phi(D, lifted) is not None:
        raise IngestionError(f'{label} lifts into phi_D(E^D)')
    return lifted


@dataclass(frozen=True)
class GeneratorFile:
    D: int
    model: Model
    points: Tuple[Tuple[Fraction, Fraction], ...]
    source: str = ''
    rank: Optional[int] = None
    curve: GeneratorCurve = GeneratorCurve.DUAL

    @classmethod
    def from_dict(cls, data: Dict[str, Any], origin: str = '<data>') -> GeneratorFile:
        for key in ('D', 'model', 'points', 'source'):
            if key not in data:
                raise IngestionError(f'{origin}: missing key "{key}"')
        D = _parse_int(data['D'], f'{origin}: D')
        try:
            model = Model(data['model'])
        except ValueError:
            raise IngestionError(f'{origin}: unknown model {data["model"]!r}, expected 4X3 or X3Q')
        if not isinstance(data['points'], list):
            raise IngestionError(f'{origin}: "points" must be a list')
        try:
            curve_kind = GeneratorCurve(data.get('curve', GeneratorCurve.DUAL.value))
        except ValueError:
            raise IngestionError(f'{origin}: unknown curve {data["curve"]!r}, expected E^-27D or E^D')

        try:
            c = MordellCurve(D if curve_kind is GeneratorCurve.BASE else -27 * D, model)
        except DomainError as e:
            raise IngestionError(f'{origin}: {e}')
        points = []
        for idx, raw in enumerate(data['points']):
            try:
                x, y = (parse_rational(v) for v in raw)
            except (TypeError, ValueError) as e:
                raise IngestionError(f'{origin}: point #{idx} {raw!r} is malformed ({e})')
            label = f'{origin}: point #{idx} ({fmt_rational(x)}, {fmt_rational(y)})'
            if not on_curve(c, MordellPoint(x, y, model)):
                raise IngestionError(f'{label} is not on {c}')
            if curve_kind is GeneratorCurve.BASE:
                _lift_from_base(D, MordellPoint(x, y, model), label)
            points.append((x, y))

        rank = data.get('rank')
        return cls(D, model, tuple(points), str(data['source']),
                   _parse_int(rank, f'{origin}: rank') if rank is not None else None, curve_kind)

    @classmethod
    def load(cls, path: str) -> GeneratorFile:
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise IngestionError(f'Cannot read generator file {path}: {e}')
        if not isinstance(data, dict):
            raise IngestionError(f'{path}: expected one JSON object')
        return cls.from_dict(data, path)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'D': str(self.D),
            'model': self.model.value,
            'points': [[fmt_rational(x), fmt_rational(y)] for x, y in self.points],
            'source': self.source,
        }
        if self.rank is not None:
            data['rank'] = str(self.rank)
        if self.curve is not GeneratorCurve.DUAL:
            data['curve'] = self.curve.value
        return data

    def dump(self, path: str):
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(self.to_dict(), f, ensure_ascii=False, indent=2)
            f.write('\n')

    def mordell_points(self) -> List[MordellPoint]:
        """Generators as points of E^-27D; points of E^D are lifted through phi_hat."""
        points = [MordellPoint(x, y, self.model) for x, y in self.points]
        if self.curve is GeneratorCurve.DUAL:
            return points
        return [_lift_from_base(self.D, P, f'point #{idx} ({P})') for idx, P in enumerate(points)]

    def to_generator_set(self) -> GeneratorSet:
        try:
            return GeneratorSet.build(self.D, self.mordell_points(), self.rank, self.source)
        except DomainError as e:
            raise IngestionError(str(e))


class FieldStatus(str, enum.Enum):
    KNOWN = 'known'
    BOLD_UNKNOWN = 'bold-unknown'


@dataclass(frozen=True)
class FixtureField:
    m: int
    trivially_monogenic: bool = False
    status: FieldStatus = FieldStatus.KNOWN


@dataclass(frozen=True)
class TableRow:
    D: int
    rank_grh: int
    field_count: int
    fields: Tuple[FixtureField, ...] = field(default_factory=tuple)
    line: int = 0

    @property
    def trivial_fields(self) -> List[FixtureField]:
        return [f for f in self.fields if f.trivially_monogenic]


@dataclass(frozen=True)
class TableFixture:
    name: str
    rows: Tuple[TableRow, ...]

    @classmethod
    def load(cls, path_or_name: str) -> TableFixture:
        path = BUNDLED_FIXTURES.get(path_or_name, path_or_name)
        try:
            with open(path, 'r', encoding='utf-8') as f:
                lines = f.readlines()
        except OSError as e:
            raise IngestionError(f'Cannot read fixture {path}: {e}')

        rows = []
        for line_no, line in enumerate(lines, start=1):
            if not line.strip() or line.lstrip().startswith('#'):
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as e:
                raise IngestionError(f'{path}:{line_no}: malformed row ({e})')
            rows.append(cls._parse_row(data, f'{path}:{line_no}', line_no))
        return cls(os.path.basename(path), tuple(rows))

    @staticmethod
    def _parse_row(data: Any, origin: str, line_no: int) -> TableRow:
        if not isinstance(data, dict):
            raise IngestionError(f'{origin}: expected an object')
        for key in ('D', 'rank_grh', 'field_count', 'fields'):
            if key not in data:
                raise IngestionError(f'{origin}: missing key "{key}"')
        fields = []
        for idx, raw in enumerate(data['fields']):
            if not isinstance(raw, dict) or 'm' not in raw:
                raise IngestionError(f'{origin}: field #{idx} is malformed')
            try:
                status = FieldStatus(raw.get('status', FieldStatus.KNOWN.value))
            except ValueError:
                raise IngestionError(f'{origin}: field #{idx} has unknown status {raw.get("status")!r}')
            fields.append(FixtureField(_parse_int(raw['m'], f'{origin}: field #{idx}'),
                                       bool(raw.get('trivially_monogenic', False)), status))
        return TableRow(
            D=_parse_int(data['D'], f'{origin}: D'),
            rank_grh=_parse_int(data['rank_grh'], f'{origin}: rank_grh'),
            field_count=_parse_int(data['field_count'], f'{origin}: field_count'),
            fields=tuple(fields),
            line=line_no,
        )

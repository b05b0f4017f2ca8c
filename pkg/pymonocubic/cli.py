#!/usr/bin/env python3
# -----------------------------------------------------------------------------
# quasi-monogenity of pure cubic fields through Mordell curves: command line
# -----------------------------------------------------------------------------
from __future__ import annotations

import argparse
import os
import re
import sys
import time
from argparse import Namespace, RawDescriptionHelpFormatter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, TextIO

from pymonocubic.cocycle import AnalysisContext, classify_field, trivially_monogenic
from pymonocubic.core.config import Config
from pymonocubic.core.errors import DomainError, UsageError, VerificationMismatch
from pymonocubic.core.exception_handler import ExceptionHandler
from pymonocubic.core.logger import Logger
from pymonocubic.engine import (GeneratorSet, QuasiMonogenicReport, build_matrix, enumerate_by_points,
                                enumerate_quasimonogenic, select_independent)
from pymonocubic.exactmath import cube_free_class, rational_sqrt
from pymonocubic.fieldkit import MonogenityStatus, certify_monogenic, splitting_consistent
from pymonocubic.ingest import GENERATORS_DIR, GeneratorFile, TableFixture, TableRow, generator_filename
from pymonocubic.mordell import (MordellPoint, curve, dual_curve, naive_search, phi, phi_hat, preimage_by_phi,
                                 preimage_by_phi_hat)
from pymonocubic.util.io import SGRRegistry, dump_json, dump_tsv, fmt_time_delta, parse_rational

ISOGENY_DIRECTIONS = ('phi', 'phihat', 'preimage', 'preimage-hat')
TSV_COLUMNS = ['m', 'h', 'k', 'type', 'disc', 'trivially_monogenic', 'monogenity', 'witness']


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f'{self.prog}: {message}')


@dataclass
class AnalysisResult:
    report: QuasiMonogenicReport
    generators: GeneratorSet
    point_route: tuple
    certificates: Dict[int, Any] = field(default_factory=dict)

    @property
    def routes_agree(self) -> bool:
        return [f.m for f in self.point_route] == self.report.field_values


def collect_generators(ctx: AnalysisContext, generators: str|None, search_bound: int) -> GeneratorSet:
    logger = Logger.get_instance()
    if generators:
        gen_file = GeneratorFile.load(generators)
        if gen_file.D != ctx.D:
            raise UsageError(f'Generator file is for D={gen_file.D}, analysis is for D={ctx.D}')
        logger.debug(f'Loaded {len(gen_file.points)} generators from {generators}')
        return gen_file.to_generator_set()

    if search_bound > 0:
        candidates = list(naive_search(dual_curve(ctx.D), search_bound))
        for Q in naive_search(curve(ctx.D), search_bound):
            lifted = preimage_by_phi_hat(ctx.D, Q)
            if lifted is not None and not lifted.is_infinity:
                candidates.append(lifted)
        independent = select_independent(candidates, ctx)
        logger.info(f'Naive search up to {search_bound}: {len(candidates)} points, '
                    f'{len(independent)} independent modulo phi_D(E^D)')
        return GeneratorSet.build(ctx.D, independent, source=f'naive search, bound {search_bound}')

    logger.warn('No generators given and no search bound: using the dual-kernel point only')
    return GeneratorSet.build(ctx.D, [], source='dual kernel only')


def analyze(ctx: AnalysisContext, gens: GeneratorSet, index_bound: int,
            kernel_orders: Sequence[int] = (1, 3)) -> AnalysisResult:
    M = build_matrix(gens, ctx)
    report = enumerate_quasimonogenic(M, ctx, rank=gens.rank, kernel_orders=kernel_orders)
    result = AnalysisResult(report, gens, enumerate_by_points(gens, ctx))
    if index_bound > 0:
        for descriptor in report.fields:
            result.certificates[descriptor.m] = certify_monogenic(descriptor.m, index_bound)
    return result


def report_dict(result: AnalysisResult) -> Dict[str, Any]:
    report, ctx = result.report, result.report.ctx
    fields = []
    for descriptor in report.fields:
        entry = {
            'm': str(descriptor.m),
            'h': str(descriptor.h),
            'k': str(descriptor.k),
            'type': descriptor.dedekind_type.value,
            'disc': str(descriptor.disc),
            'trivially_monogenic': descriptor.trivially_monogenic,
        }
        certificate = result.certificates.get(descriptor.m)
        if certificate is None:
            entry['monogenity'] = {'status': 'unchecked'}
        else:
            entry['monogenity'] = {'status': certificate.status.value}
            if certificate.status is MonogenityStatus.MONOGENIC:
                entry['monogenity']['witness'] = [str(v) for v in certificate.witness]
                entry['monogenity']['value'] = certificate.value
        fields.append(entry)

    data = {
        'D': str(ctx.D),
        'n': str(ctx.n),
        'type': ctx.dedekind_type.value,
        'support': [str(p) for p in ctx.prime_support],
        'generators': [str(P) for P in result.generators.points],
        'generator_source': result.generators.source,
        'matrix': report.matrix.as_lists(),
        'rho': report.rho,
        'rank_input': report.rank_input,
        'bounds': {
            f'c={b.c}': {
                'N': b.N,
                'algebra_count': b.algebra_count,
                'field_bound': b.field_bound,
                'rank_field_bound': b.rank_field_bound,
                'delta': b.delta,
            } for b in report.bounds
        },
        'routes_agree': result.routes_agree,
        'fields': fields,
    }
    if not result.generators.free_points:
        data['skipped_reason'] = 'no generators of the free part: only the dual-kernel point was used'
    return data


def render_report(data: Dict[str, Any], fmt: str) -> str:
    if fmt == 'json':
        return dump_json(data)
    rows = []
    for entry in data['fields']:
        rows.append({
            **entry,
            'monogenity': entry['monogenity']['status'],
            'witness': entry['monogenity'].get('witness'),
        })
    header = f'# D={data["D"]}\tn={data["n"]}\ttype={data["type"]}\trho={data["rho"]}' \
             f'\troutes_agree={"yes" if data["routes_agree"] else "no"}'
    return header + '\n' + dump_tsv(rows, TSV_COLUMNS)


def context_from_args(args: Namespace) -> AnalysisContext:
    try:
        if args.n is not None:
            return AnalysisContext.from_n(args.n)
        return AnalysisContext.from_discriminant(args.D)
    except DomainError as e:
        raise UsageError(str(e))


def cmd_analyze(args: Namespace, out: TextIO) -> int:
    config = Config.get_instance()
    ctx = context_from_args(args)
    Logger.get_instance().info(f'Analyzing D={ctx.D} (n={ctx.n}, Dedekind type {ctx.dedekind_type.value})')

    gens = collect_generators(ctx, args.generators, config.search_bound)
    result = analyze(ctx, gens, config.index_bound, config.kernel_orders)
    print(render_report(report_dict(result), args.format), file=out)

    if not result.routes_agree:
        raise VerificationMismatch(f'Matrix route {result.report.field_values} and point route '
                                   f'{[f.m for f in result.point_route]} disagree')
    return 0


@dataclass
class RowCheck:
    row: TableRow
    passed: bool = True
    messages: List[str] = field(default_factory=list)
    skipped: bool = False

    def fail(self, message: str):
        self.passed = False
        self.messages.append(message)


def _canonical(m: int) -> int:
    return classify_field(cube_free_class(m).m).m


def check_row(row: TableRow, generators_dir: str|None, prime_bound: int = 1000) -> RowCheck:
    check = RowCheck(row)
    n_prime = rational_sqrt(Fraction(-row.D, 27)) if row.D < 0 and row.D % 27 == 0 else None
    if n_prime is not None:
        ctx = AnalysisContext.from_n(3 * int(n_prime))
    else:
        n = rational_sqrt(Fraction(-row.D, 3)) if row.D % 3 == 0 else None
        if n is None or n.denominator != 1 or row.D >= 0:
            check.fail(f'D={row.D} is neither -27n\'^2 nor -3n^2')
            return check
        ctx = AnalysisContext.from_n(int(n))

    expected_trivial = trivially_monogenic(ctx)
    listed_trivial = row.trivial_fields
    if expected_trivial is None and listed_trivial:
        check.fail(f'(*) entry {listed_trivial[0].m} listed, but n\'={ctx.n_prime} is +-1 mod 9')
    elif expected_trivial is not None:
        if not listed_trivial:
            check.fail(f'missing (*) entry: n\'={ctx.n_prime} gives trivially monogenic {expected_trivial.m}')
        elif _canonical(listed_trivial[0].m) != expected_trivial.m:
            listed = listed_trivial[0].m
            shapes = splitting_consistent([1, 0, 0, -listed], [1, 0, 0, -expected_trivial.m], prime_bound)
            check.fail(f'(*) entry {listed} differs from recomputed {expected_trivial.m}'
                       + ('' if shapes else f' (not isomorphic: splitting differs below {prime_bound})'))

    path = os.path.join(generators_dir, generator_filename(row.D)) if generators_dir else None
    if not path or not os.path.isfile(path):
        check.skipped = True
        check.messages.append('skipped: generators unavailable')
        return check

    gens = GeneratorFile.load(path).to_generator_set()
    result = analyze(ctx, gens, index_bound=0)
    computed = result.report.field_values
    expected = sorted({_canonical(f.m) for f in row.fields})
    if not result.routes_agree:
        check.fail(f'routes disagree: matrix {computed}, points {[f.m for f in result.point_route]}')
    if computed != expected:
        check.fail(f'fields {computed} differ from table {expected}')
    return check


def cmd_verify_tables(args: Namespace, out: TextIO) -> int:
    config = Config.get_instance()
    logger = Logger.get_instance()
    fixture = TableFixture.load(args.fixture)
    generators_dir = args.generators_dir or GENERATORS_DIR
    logger.info(f'Verifying {len(fixture.rows)} rows of {fixture.name} with {config.workers} workers')

    started = time.time()
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        checks = list(pool.map(lambda row: check_row(row, generators_dir, config.prime_bound), fixture.rows))

    failed = 0
    for check in checks:
        if not check.passed:
            failed += 1
        color = SGRRegistry.FMT_GREEN if check.passed else SGRRegistry.FMT_RED
        details = '; '.join(check.messages)
        line = f'{check.row.D}\t{color}{"ok" if check.passed else "FAIL"}{SGRRegistry.FMT_RESET}'
        if details:
            line += f'\t{details}'
        print(line if out.isatty() else SGRRegistry.remove_sgr_seqs(line), file=out)

    logger.info(f'{len(checks) - failed}/{len(checks)} rows passed in {fmt_time_delta(time.time() - started)}')
    if failed:
        raise VerificationMismatch(f'{failed} of {len(checks)} rows of {fixture.name} failed verification')
    return 0


def parse_point(raw: str) -> MordellPoint:
    if raw.strip().lower() == 'infinity':
        return MordellPoint.infinity()
    parts = raw.split(',')
    if len(parts) != 2:
        raise UsageError(f'Point must be "x,y" or "infinity", got {raw!r}')
    try:
        return MordellPoint(parse_rational(parts[0]), parse_rational(parts[1]))
    except ValueError as e:
        raise UsageError(str(e))


def cmd_isogeny(args: Namespace, out: TextIO) -> int:
    try:
        D = parse_rational(args.D)
    except ValueError as e:
        raise UsageError(str(e))
    if D == 0:
        raise UsageError('D must be nonzero')
    P = parse_point(args.point)

    operations = {
        'phi': phi,
        'phihat': phi_hat,
        'preimage': preimage_by_phi,
        'preimage-hat': preimage_by_phi_hat,
    }
    image = operations[args.direction](D, P)
    print('none' if image is None else str(image), file=out)
    return 0


# noinspection PyMethodMayBeStatic
class MonogenityCli:
    COMMANDS = {
        'analyze': cmd_analyze,
        'verify-tables': cmd_verify_tables,
        'isogeny': cmd_isogeny,
    }

    def run(self):
        sys.exit(self.main())

    def main(self, argv: Optional[Sequence[str]] = None, out: TextIO|None = None) -> int:
        out = out or sys.stdout
        handler: ExceptionHandler|None = None
        try:
            config = Config.get_instance()
            args = MonogenityCli.parse_args(argv)
            config.apply_app_args(args)
            logger = Logger.get_instance(require_new=True)
            handler = ExceptionHandler(logger)
            return self._invoke(args, out)
        except Exception as e:
            return (handler or ExceptionHandler()).report(e)
        finally:
            Logger.get_instance().close_io()

    def _invoke(self, args: Namespace, out: TextIO) -> int:
        return self.COMMANDS[args.command](args, out)

    @staticmethod
    def parse_args(argv: Optional[Sequence[str]] = None) -> Namespace:
        parser = _ArgumentParser(
            prog='pymonocubic',
            formatter_class=RawDescriptionHelpFormatter,
            description='Quasi-monogenic pure cubic fields of a discriminant D = -3n^2, '
                        'found through rational points on the Mordell curve Y^2 = 4X^3 - 27D.',
            epilog='\n'.join([
                'SETTINGS',
                'Defaults are read from the environment and from .env in the working directory: '
                'PYMONOCUBIC_SEARCH_BOUND, PYMONOCUBIC_INDEX_BOUND, PYMONOCUBIC_PRIME_BOUND, '
                'PYMONOCUBIC_KERNEL_ORDER, PYMONOCUBIC_WORKERS, PYMONOCUBIC_LOG_FILE, PYMONOCUBIC_VERBOSE. '
                'Set EXCEPTION_TRACE to print tracebacks.',
                '',
                'EXIT CODES',
                '0 success, 1 usage error, 2 data error, 3 verification mismatch.',
            ])
        )
        parser.add_argument(
            '-v', '--verbose', action='store_true', help='Echo debug messages to stderr.'
        )
        commands = parser.add_subparsers(dest='command', metavar='<command>')
        commands.required = True

        analyze_cmd = commands.add_parser('analyze', help='Enumerate quasi-monogenic fields of a discriminant.')
        target = analyze_cmd.add_mutually_exclusive_group(required=True)
        target.add_argument('--n', type=int, metavar='<N>', help='Analyze D = -3n^2.')
        target.add_argument('--D', type=int, metavar='<D>', help='Analyze D (must be of the form -3n^2).')
        analyze_cmd.add_argument(
            '--generators', metavar='<FILE>.json',
            help='Generator file with points of E^-27D, or of E^D with "curve": "E^D" '
                 '(keys D, model, points, source).'
        )
        analyze_cmd.add_argument(
            '--search-bound', type=int, metavar='<B>',
            help='Without a generator file, search points with |numerator| <= B (default from settings).'
        )
        analyze_cmd.add_argument(
            '--index-bound', type=int, metavar='<B>',
            help='Box bound for index form = +-1 solutions (default 5).'
        )
        analyze_cmd.add_argument(
            '--kernel-order', choices=('1', '3', 'both'),
            help='Constant c of the algebra count (default both).'
        )
        analyze_cmd.add_argument('--format', choices=('json', 'tsv'), default='json')

        verify_cmd = commands.add_parser('verify-tables', help='Check table fixtures against recomputation.')
        verify_cmd.add_argument(
            '--fixture', default='table1', metavar='<NAME>|<FILE>.jsonl',
            help='Bundled fixture (table1, table2, examples) or a fixture file.'
        )
        verify_cmd.add_argument(
            '--generators-dir', metavar='<DIR>',
            help='Directory with generator files named D<D>.json (default: bundled).'
        )
        verify_cmd.add_argument('--workers', type=int, metavar='<N>', help='Rows checked in parallel.')

        isogeny_cmd = commands.add_parser('isogeny', help='Apply phi_D, its dual, or compute preimages.')
        isogeny_cmd.add_argument('--D', required=True, metavar='<D>')
        isogeny_cmd.add_argument('--point', required=True, metavar='x,y')
        isogeny_cmd.add_argument('--direction', required=True, choices=ISOGENY_DIRECTIONS)
        # points like -2,7 are values, not options
        isogeny_cmd._negative_number_matcher = re.compile(r'^-\d')

        args = parser.parse_args(argv)
        if getattr(args, 'search_bound', None) is not None and args.search_bound < 0:
            parser.error('--search-bound must be non-negative')
        return args

import io
import json
import os

import pytest

from pymonocubic.cli import MonogenityCli
from pymonocubic.core.logger import Logger
from pymonocubic.ingest import GeneratorCurve, GeneratorFile, generator_filename
from pymonocubic.mordell import Model, phi_hat


def _run(capsys, *argv):
    code = MonogenityCli().main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _generators(generators_dir, D):
    return os.path.join(generators_dir, generator_filename(D))


@pytest.mark.parametrize('argv, expected', [
    (['--D=-3', '--point=1,1', '--direction=phi'], '-2,7'),
    (['--D=-3', '--point=-2,7', '--direction=preimage'], '1,1'),
    (['--D', '-3', '--point', '-2,7', '--direction', 'preimage'], '1,1'),
    (['--D=-3', '--point=-2,7', '--direction=phihat'], '73/36,595/108'),
    (['--D=9', '--point=0,3', '--direction=phi'], 'infinity'),
    (['--D=-300', '--point=-9,72', '--direction=preimage'], 'none'),
    (['--D=-3', '--point=infinity', '--direction=phi'], 'infinity'),
])
def test_isogeny(capsys, argv, expected):
    code, out, _ = _run(capsys, 'isogeny', *argv)
    assert code == 0
    assert out == expected + '\n'


def test_isogeny_preimage_by_dual(capsys):
    code, out, _ = _run(capsys, 'isogeny', '--D=-3', '--point=73/36,595/108', '--direction=preimage-hat')
    assert code == 0
    x, y = out.strip().split(',')
    code, out, _ = _run(capsys, 'isogeny', '--D=-3', f'--point={x},{y}', '--direction=phihat')
    assert out.strip() == '73/36,595/108'


@pytest.mark.parametrize('argv, code', [
    (['isogeny', '--D=-3', '--point=2,2', '--direction=phi'], 2),
    (['isogeny', '--D=-3', '--point=abc', '--direction=phi'], 1),
    (['isogeny', '--D=x', '--point=1,1', '--direction=phi'], 1),
    (['isogeny', '--D=0', '--point=1,1', '--direction=phi'], 1),
    (['isogeny', '--D=-3', '--point=1,1', '--direction=sideways'], 1),
    (['analyze', '--D=-301'], 1),
    (['analyze', '--n=10', '--D=-300'], 1),
    (['analyze', '--n=10', '--search-bound=-1'], 1),
    (['analyze', '--n=10', '--generators=missing.json'], 2),
    ([], 1),
])
def test_exit_codes(capsys, argv, code):
    assert _run(capsys, *argv)[0] == code


def test_analyze_cubic_example(capsys, generators_dir):
    code, out, err = _run(capsys, 'analyze', '--n=90', f'--generators={_generators(generators_dir, -24300)}')
    assert code == 0
    data = json.loads(out)
    assert data['D'] == '-24300'
    assert data['type'] == 'I'
    assert data['support'] == ['2', '3', '5']
    assert data['generators'] == ['0,810', '-54,162', '-45,540']
    assert data['matrix'] == [[1, 1, 1], [1, 2, 0], [0, 0, 1]]
    assert data['rho'] == 3
    assert data['rank_input'] == 2
    assert data['routes_agree'] is True
    assert sorted(data['bounds']) == ['c=1', 'c=3']
    assert data['bounds']['c=1']['field_bound'] == 4
    assert [f['m'] for f in data['fields']] == ['30', '60', '90', '150']
    assert [f['trivially_monogenic'] for f in data['fields']] == [True, False, False, False]
    assert all(f['monogenity']['status'] == 'monogenic' for f in data['fields'])
    assert data['fields'][2]['monogenity']['witness'] == ['3', '2']
    assert 'skipped_reason' not in data
    assert 'Analyzing D=-24300' in err


def test_analyze_is_deterministic(capsys, generators_dir):
    argv = ['analyze', '--D=-24300', f'--generators={_generators(generators_dir, -24300)}']
    first = _run(capsys, *argv)[1]
    assert _run(capsys, *argv)[1] == first


def test_analyze_tsv(capsys, generators_dir):
    code, out, _ = _run(capsys, 'analyze', '--D=-300', f'--generators={_generators(generators_dir, -300)}',
                        '--format=tsv', '--index-bound=0')
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == '# D=-300\tn=10\ttype=II\trho=2\troutes_agree=yes'
    assert lines[1] == 'm\th\tk\ttype\tdisc\ttrivially_monogenic\tmonogenity\twitness'
    assert lines[2] == '10\t10\t1\tII\t-300\tno\tunchecked\t-'


def test_analyze_with_naive_search(capsys):
    code, out, _ = _run(capsys, 'analyze', '--n=10', '--search-bound=20', '--index-bound=0')
    assert code == 0
    data = json.loads(out)
    assert data['generator_source'] == 'naive search, bound 20'
    assert data['generators'][0] == '0,90'
    assert len(data['generators']) == 2
    assert [f['m'] for f in data['fields']] == ['10']
    assert data['routes_agree'] is True


def test_analyze_with_dual_kernel_only(capsys):
    code, out, err = _run(capsys, 'analyze', '--n=90', '--kernel-order=3')
    assert code == 0
    data = json.loads(out)
    assert data['rho'] == 1
    assert [f['m'] for f in data['fields']] == ['30']
    assert list(data['bounds']) == ['c=3']
    assert 'skipped_reason' in data
    assert 'dual-kernel point only' in err


def test_analyze_rejects_generators_for_other_discriminant(capsys, generators_dir):
    code, _, err = _run(capsys, 'analyze', '--n=10', f'--generators={_generators(generators_dir, -24300)}')
    assert code == 1
    assert 'UsageError' in err


def test_analyze_generators_on_the_base_curve(capsys, tmp_path, gens90):
    path = str(tmp_path / 'base.json')
    base_points = [phi_hat(-24300, P) for P in gens90.points if P.x != 0]
    GeneratorFile(-24300, Model.FOUR_X3, tuple((P.x, P.y) for P in base_points), 'phi_hat images', 2,
                  GeneratorCurve.BASE).dump(path)
    code, out, _ = _run(capsys, 'analyze', '--n', '90', '--generators', path, '--index-bound=0')
    assert code == 0
    data = json.loads(out)
    assert data['rho'] == 3
    assert data['routes_agree'] is True
    assert [f['m'] for f in data['fields']] == ['30', '60', '90', '150']


def test_verify_examples(capsys):
    code, out, _ = _run(capsys, 'verify-tables', '--fixture=examples', '--workers=2')
    assert code == 0
    assert out.splitlines() == ['-24300\tok', '-300\tok']


@pytest.mark.parametrize('fixture', ['table1', 'table2'])
def test_verify_bundled_tables_without_generators(capsys, tmp_path, fixture):
    code, out, _ = _run(capsys, 'verify-tables', f'--fixture={fixture}', f'--generators-dir={tmp_path}')
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == (23 if fixture == 'table1' else 4)
    assert all('\tok\tskipped: generators unavailable' in line for line in lines)


def test_verify_reports_wrong_rows(capsys, tmp_path):
    fixture = tmp_path / 'wrong.jsonl'
    fixture.write_text('\n'.join([
        '{"D": "-24300", "rank_grh": "2", "field_count": "4", '
        '"fields": [{"m": "60", "trivially_monogenic": true}]}',
        '{"D": "-301", "rank_grh": "0", "field_count": "0", "fields": []}',
        '{"D": "-300", "rank_grh": "1", "field_count": "1", "fields": [{"m": "10"}]}',
    ]))
    code, out, err = _run(capsys, 'verify-tables', f'--fixture={fixture}')
    assert code == 3
    lines = out.splitlines()
    assert lines[0].startswith('-24300\tFAIL\t(*) entry 60 differs from recomputed 30')
    assert 'fields [30, 60, 90, 150] differ from table [60]' in lines[0]
    assert lines[1].startswith('-301\tFAIL')
    assert lines[2] == '-300\tok'
    assert 'VerificationMismatch' in err


class _Terminal(io.StringIO):
    def isatty(self) -> bool:
        return True


@pytest.mark.parametrize('out, colored', [
    (_Terminal(), True),
    (io.StringIO(), False),
])
def test_verify_colors_only_on_a_terminal(out, colored):
    code = MonogenityCli().main(['verify-tables', '--fixture=examples', '--workers=1'], out=out)
    assert code == 0
    assert ('-300\t\033[32mok\033[0m' in out.getvalue()) is colored
    assert ('\033[' in out.getvalue()) is colored


@pytest.mark.parametrize('point, code, logged', [
    ('1,1', 0, 'DEBUG: Opened log file for appending'),
    ('2,2', 2, 'ERROR: DomainError'),
])
def test_log_file_is_closed_on_exit(capsys, tmp_path, monkeypatch, point, code, logged):
    path = tmp_path / 'run.log'
    monkeypatch.setenv('PYMONOCUBIC_LOG_FILE', str(path))
    assert _run(capsys, 'isogeny', '--D=-3', f'--point={point}', '--direction=phi')[0] == code
    assert Logger.get_instance()._fileio is None
    assert logged in path.read_text(encoding='utf-8')


def test_bad_settings_exit_with_usage_code(capsys, monkeypatch):
    monkeypatch.setenv('PYMONOCUBIC_INDEX_BOUND', 'many')
    code, _, err = _run(capsys, 'isogeny', '--D=-3', '--point=1,1', '--direction=phi')
    assert code == 1
    assert 'PYMONOCUBIC_INDEX_BOUND' in err


def test_exception_trace(capsys, monkeypatch):
    monkeypatch.setenv('EXCEPTION_TRACE', '1')
    code, _, err = _run(capsys, 'isogeny', '--D=-3', '--point=2,2', '--direction=phi')
    assert code == 2
    assert 'Traceback' in err

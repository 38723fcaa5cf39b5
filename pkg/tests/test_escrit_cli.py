"""Command-line entry point: subcommands, input sources and exit codes"""

import io
import json

import pytest

from escrit import EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, execute, parse_seed, run
from escrit_errors import GraphFormatError
from families import FamilySpec, build_family
from graph_core import to_graph6


@pytest.fixture(autouse=True)
def clean_workdir(tmp_path, monkeypatch):
    """Run from an empty directory so no escrit_config.json is picked up"""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv('ESCRIT_MAX_CYCLES', raising=False)


def call(argv, stdin_text=""):
    stdout, stderr = io.StringIO(), io.StringIO()
    code = run(argv, stdin=io.StringIO(stdin_text), stdout=stdout, stderr=stderr)
    payload = json.loads(stdout.getvalue()) if stdout.getvalue() else None
    return code, payload, stderr.getvalue()


# =============================================================================
# analyze / es
# =============================================================================

def test_analyze_bowtie():
    code, payload, _ = call(['analyze', '--g6', 'D{c', '--expect-critical'])
    assert code == EXIT_OK
    assert payload['critical'] is True
    assert payload['k_l'] == [3, 2]
    assert payload['family'] == 'B:3,3'


def test_analyze_expect_critical_unmet():
    code, payload, stderr = call(['analyze', '--g6', 'Bw', '--expect-critical'])
    assert code == EXIT_NEGATIVE
    assert payload['critical'] is False
    assert '[CLI] Graph is not edge-stability critical' in stderr


def test_analyze_with_cap():
    ring = to_graph6(build_family(FamilySpec.parse("E:4,1;4,1;4,1")))
    _, payload, _ = call(['analyze', '--g6', ring, '--cap', '100'])
    assert payload['census'] == {'count': 8, 'cap': 100, 'saturated': False}


def test_es_from_graph6():
    code, payload, _ = call(['es', '--g6', 'C~'])
    assert code == EXIT_OK
    assert payload == {'chi': 4, 'es': 1, 'witness': [[0, 1]], 'method': 'subset-search', 'graph6': 'C~'}


def test_es_from_stdin_edge_list():
    _, payload, _ = call(['es'], "5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n")
    assert (payload['chi'], payload['es'], payload['graph6']) == (3, 1, 'Dhc')


def test_es_from_stdin_graph6():
    _, payload, _ = call(['es'], "EhEG\n")
    assert (payload['chi'], payload['es'], payload['method']) == (2, 6, 'closed-form')


def test_es_from_edge_file(tmp_path):
    path = tmp_path / 'bowtie.txt'
    path.write_text("# bowtie\n5 6\n0 1\n1 2\n0 2\n0 3\n3 4\n0 4\n")
    _, payload, _ = call(['es', '--edges', str(path)])
    assert payload['es'] == 2


def test_es_respects_max_es():
    code, payload, stderr = call(['es', '--g6', 'C~', '--max-es', '0'])
    assert code == EXIT_USAGE
    assert payload is None
    assert '[CLI] error:' in stderr


# =============================================================================
# build / classify / ear
# =============================================================================

def test_build():
    code, payload, _ = call(['build', 'B:3,3'])
    assert code == EXIT_OK
    assert (payload['graph6'], payload['n'], payload['m']) == ('D{c', 5, 6)
    assert payload['spec'] == {'tag': 'B', 'compact': 'B:3,3', 'lengths': [3, 3]}


def test_build_invalid_spec():
    code, _, stderr = call(['build', 'C:1,1,1,1'])
    assert code == EXIT_USAGE
    assert 'at most one path of length one' in stderr


def test_classify_theta():
    theta = to_graph6(build_family(FamilySpec.parse("C:1,2,2,3")))
    code, payload, _ = call(['classify', '--g6', theta])
    assert code == EXIT_OK
    assert (payload['tag'], payload['families']) == ('C', ['C', 'E'])
    assert payload['spec']['compact'] == 'C:1,2,2,3'


def test_classify_non_member():
    _, payload, _ = call(['classify', '--g6', 'C~'])
    assert payload == {'graph6': 'C~', 'tag': None, 'spec': None, 'families': []}


def test_ear():
    _, payload, _ = call(['ear', '--g6', 'C~', '--seed', '0-1,1-2,2-0'])
    assert payload['seed'] == [[0, 1], [0, 2], [1, 2]]
    assert payload['ears'] == [[0, 3, 1], [2, 3]]


def test_parse_seed_errors():
    with pytest.raises(GraphFormatError):
        parse_seed('0-1,12')


# =============================================================================
# scan
# =============================================================================

def test_scan_internal():
    code, payload, stderr = call(['scan', '--n', '5', '--workers', '1', '--summary'])
    assert code == EXIT_OK
    assert payload['critical_counts'] == {'1': 0, '2': 0, '3': 0, '4': 0, '5': 1}
    assert payload['ok'] is True
    assert 'critical' in stderr and 'nonbipartite_examined' in stderr


def test_scan_stream_file(tmp_path):
    path = tmp_path / 'graphs.g6'
    path.write_text(">>graph6<<\nD{c\nEhEG\nnot-a-graph\n")
    code, payload, _ = call(['scan', '--stream', str(path), '--workers', '1'])
    assert code == EXIT_OK
    assert payload['source'] == 'graph6'
    assert [r['spec'] for r in payload['critical']] == ['B:3,3']
    assert [e['graph'] for e in payload['errors']] == ['not-a-graph']


def test_scan_stream_stdin():
    code, payload, _ = call(['scan', '--stream', '-', '--workers', '1'], "D{c\n")
    assert code == EXIT_OK
    assert payload['critical_counts'] == {'5': 1}


def test_scan_beyond_exhaustive_bound():
    code, _, stderr = call(['scan', '--n', '9', '--workers', '1'])
    assert code == EXIT_USAGE
    assert 'n <= 7' in stderr


# =============================================================================
# Usage, configuration and environment
# =============================================================================

@pytest.mark.parametrize("argv, stdin_text", [
    ([], ""),
    (['frobnicate'], ""),
    (['analyze', '--g6', 'A'], ""),
    (['analyze', '--g6', 'B?'], ""),
    (['es'], ""),
    (['es', '--edges', 'missing.txt'], ""),
    (['scan'], ""),
    (['ear', '--g6', 'C~'], ""),
])
def test_usage_and_input_errors(argv, stdin_text):
    code, payload, stderr = call(argv, stdin_text)
    assert code == EXIT_USAGE
    assert payload is None
    assert stderr


def test_missing_config_file():
    code, _, stderr = call(['--config', 'nope.json', 'build', 'B:3,3'])
    assert code == EXIT_USAGE
    assert 'does not exist' in stderr


def test_config_file_is_applied(tmp_path):
    path = tmp_path / 'strict.json'
    path.write_text(json.dumps({'max_es_search': 0}))
    code, _, _ = call(['--config', str(path), 'es', '--g6', 'C~'])
    assert code == EXIT_USAGE
    assert call(['es', '--g6', 'C~'])[0] == EXIT_OK


def test_default_config_file_in_working_directory(tmp_path):
    (tmp_path / 'escrit_config.json').write_text(json.dumps({'odd_cycle_cap': 2}))
    _, payload, _ = call(['analyze', '--g6', 'D{c'])
    assert payload['census'] == {'count': 2, 'cap': 2, 'saturated': True}


def test_cycle_limit_from_environment(monkeypatch):
    monkeypatch.setenv('ESCRIT_MAX_CYCLES', '2')
    ring = to_graph6(build_family(FamilySpec.parse("E:4,1;4,1;4,1")))
    code, _, stderr = call(['analyze', '--g6', ring])
    assert code == EXIT_USAGE
    assert 'undecided after 2 cycles' in stderr


def test_verbose_logs_config():
    _, _, stderr = call(['-v', 'build', 'B:3,3'])
    assert '[CLI] Config:' in stderr


def test_help_exits_cleanly(capsys):
    assert execute(['--help']).exit_code == EXIT_OK
    assert 'escrit' in capsys.readouterr().out

import json
from fractions import Fraction

import pytest

from commands import Report, build_suite_registry, emit_report, find_suite_spec
from commands.registry import get_all_suite_names, resolve_names
from commands.report import CSV_COLUMNS, jsonable, read_csv_report
from core.base import BoundaryDegree, ConfigError, CostGuard, ErrorType, NotChainMap, UnknownName
from main import Workbench, main
from workbench import FAIL, PASS, SKIPPED, CheckResult, RunConfig


# ==================== Registry ====================

def test_aliases_resolve_to_canonical_names():
    assert find_suite_spec('comparison').name == 'prop34'
    assert find_suite_spec('COUNIT').name == 'theorem11'
    assert find_suite_spec('cyclic_grt').name == 'prop52'
    assert find_suite_spec('nope') is None


def test_resolve_names():
    assert resolve_names(['grt', 'comparison', 'grt'], 'verify') == ['grt', 'prop34']
    assert resolve_names(['all'], 'verify') == get_all_suite_names('verify')
    assert resolve_names(['all'], 'compute') == ['bar_homology', 'dims', 'decompose', 'grt_solve']
    with pytest.raises(ValueError):
        resolve_names(['dims'], 'verify')
    with pytest.raises(ValueError):
        resolve_names(['nope'], 'compute')


def test_every_suite_has_a_method():
    registry = build_suite_registry(Workbench())
    for name in get_all_suite_names():
        assert name in registry
    assert registry['comparison'] == registry['prop34']


# ==================== Configuration ====================

def test_flags_override_the_file():
    config = RunConfig.from_sources({'max_arity': 2, 'seed': 5, 'output_format': 'csv'},
                                    {'max_arity': 3, 'seed': None})
    assert config.window.max_arity == 3
    assert config.seed == 5
    assert config.output_format == 'csv'


def test_config_file(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text('max_weight = 2\nsuites = ["pap"]\nformat = "text"\noperads = "lie"\n')
    values = RunConfig.read_file(str(path))
    config = RunConfig.from_sources(values, {})
    assert config.window.max_weight == 2
    assert config.suites == ['pap']
    assert config.output_format == 'text'
    assert config.operads == ['lie']


@pytest.mark.parametrize("text", ['colour = "red"\n', 'max_arity = \n'])
def test_bad_config_file(tmp_path, text):
    path = tmp_path / "run.toml"
    path.write_text(text)
    with pytest.raises(ConfigError):
        RunConfig.read_file(str(path))


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        RunConfig.read_file(str(tmp_path / "none.toml"))


@pytest.mark.parametrize("values", [
    {'output_format': 'xml'},
    {'variant': 'cyclic'},
    {'operads': ['pre_lie']},
    {'jobs': 0},
    {'max_arity': 1},
    {'degree_min': 3, 'degree_max': 2},
    {'seed': 'abc'},
])
def test_invalid_values(values):
    with pytest.raises(ConfigError):
        RunConfig.from_sources({}, values)


def test_cost_guards():
    with pytest.raises(CostGuard):
        RunConfig.from_sources({}, {'max_arity': 6})
    with pytest.raises(CostGuard):
        RunConfig.from_sources({}, {'max_weight': 5})
    assert RunConfig.from_sources({}, {'max_weight': 5, 'unsafe': True}).window.max_weight == 5


# ==================== Checks ====================

def _raise(error):
    def check():
        raise error
    return check


def test_check_statuses():
    workbench = Workbench()
    passed = workbench.run_check("t/pass", "", lambda: (True, "fine", {'n': 1}))
    failed = workbench.run_check("t/fail", "", lambda: (False, "wrong", {}))
    errored = workbench.run_check("t/error", "", _raise(NotChainMap("d f != f d")))
    skipped = workbench.run_check("t/skip", "", _raise(BoundaryDegree("edge")))
    assert [r.status for r in (passed, failed, errored, skipped)] == [PASS, FAIL, FAIL, SKIPPED]
    assert errored.error_type == ErrorType.CHAIN_MAP
    assert workbench.get_check_stats() == {'total': 4, 'passed': 1, 'skipped': 1, 'failed': 2}


def test_unexpected_errors_fail_the_check():
    workbench = Workbench()
    result = workbench.run_check("t/bug", "", _raise(ValueError("bad shape")))
    assert result.status == FAIL
    assert result.error_type == ErrorType.UNKNOWN
    assert result.message == "ValueError: bad shape"
    assert workbench.get_check_stats()['failed'] == 1


def test_task_arities_and_suite_arities_are_separate():
    workbench = Workbench(RunConfig(arity=2))
    assert workbench._task_arities() == [2]
    cyclic = workbench._arities('cyclic')
    assert cyclic == list(range(3, workbench.window.max_arity + 2))
    ok, _, data = workbench._bar_slices('com_cyc', 'cyclic')
    assert ok
    assert sorted(data) == [str(r) for r in cyclic]


def test_seeded_samples_do_not_depend_on_order():
    first = Workbench(RunConfig(seed=3))
    second = Workbench(RunConfig(seed=3))
    second.rng("grt").random()
    assert first.rng("prop52").random() == second.rng("prop52").random()


def test_unknown_suite_is_an_error():
    with pytest.raises(UnknownName):
        Workbench().run_suite("nope")


# ==================== Reports ====================

def _report(timings=False):
    records = [
        CheckResult("a/x", "first", PASS, "ok", {2: {'V_21': 1}, 'ratio': Fraction(1, 2)},
                    seconds=0.5),
        CheckResult("a/y", "second, with a comma", FAIL, "bad \"quote\"", {}, ErrorType.WINDOW),
    ]
    return Report("0.1.0", {'seed': 0}, records, timings=timings)


def test_json_report_is_deterministic():
    data = emit_report(_report())
    assert data == emit_report(_report())
    parsed = json.loads(data)
    assert parsed['schema_version'] == 1
    assert parsed['summary'] == {'total': 2, 'pass': 1, 'fail': 1, 'skipped-boundary': 0}
    assert parsed['records'][0]['data'] == {'2': {'V_21': 1}, 'ratio': '1/2'}
    assert 'seconds' not in parsed['records'][0]
    assert json.loads(emit_report(_report(timings=True)))['records'][0]['seconds'] == 0.5
    assert b"\r\n" not in data


def test_csv_report_round_trip():
    data = emit_report(_report(), 'csv')
    assert data.decode().splitlines()[0] == ",".join(CSV_COLUMNS)
    rows = read_csv_report(data)
    assert [r['id'] for r in rows] == ['a/x', 'a/y']
    assert rows[0]['data'] == {'2': {'V_21': 1}, 'ratio': '1/2'}
    assert rows[0]['error_type'] is None
    assert rows[1]['error_type'] == 'window'
    assert rows[1]['message'] == 'bad "quote"'


def test_text_report():
    text = emit_report(_report(), 'text').decode()
    assert "a/x" in text and "fail" in text
    with pytest.raises(ValueError):
        emit_report(_report(), 'xml')


def test_jsonable():
    assert jsonable({(1, 2): {3}}) == {'(1, 2)': [3]}
    assert jsonable(ErrorType.COST) == 'cost'


# ==================== Entry point ====================

def test_list_exits_cleanly():
    assert main(['--list']) == 0


def test_nothing_to_run():
    assert main([]) == 2


@pytest.mark.parametrize("argv", [
    ['--suite', 'nope'],
    ['--suite', 'pap', '--max-arity', '7'],
    ['--suite', 'pap', '--operad', 'pre_lie'],
])
def test_configuration_errors_exit_with_two(argv):
    assert main(argv) == 2


def test_report_file_is_reproducible(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    argv = ['--suite', 'pap', '--max-arity', '2', '--quiet']
    assert main(argv + ['--output', str(first)]) == 0
    assert main(argv + ['--output', str(second), '--jobs', '2']) == 0
    assert first.read_bytes() == second.read_bytes()
    report = json.loads(first.read_text())
    assert report['config']['suites'] == ['pap']
    assert all(r['status'] == 'pass' for r in report['records'])
    assert [r['id'] for r in report['records']] == ['pap/2/objects', 'pap/3/objects', 'pap/associator']


def test_compute_task_csv(tmp_path):
    out = tmp_path / "dims.csv"
    assert main(['--task', 'dims', '--operad', 'ass_cyc', '--max-arity', '3', '--format', 'csv',
                 '--output', str(out), '--quiet']) == 0
    (row,) = read_csv_report(out.read_bytes())
    assert row['id'] == 'dims/ass_cyc'
    assert row['data']['dims'] == {'1': {'0': 1}, '2': {'0': 2}, '3': {'0': 6}}

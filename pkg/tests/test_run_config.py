"""Tests for command-line parsing"""

import pytest

from src.errors import UsageError
from src.run_config import COMMANDS, parse_config


def test_covolume():
    cfg = parse_config(['covolume', '--spec', 's.json', '--samples', '1000000', '--seed', '7'])
    assert (cfg.command, cfg.samples, cfg.seed) == ('covolume', 1000000, 7)
    assert cfg.spec_path == 's.json'
    assert not cfg.json_output


def test_defaults():
    cfg = parse_config(['tiling', '--spec', 's.json'])
    assert cfg.samples == 100000
    assert cfg.seed == 42
    assert cfg.grid == (256, 256)


def test_missing_spec_names_flag():
    with pytest.raises(UsageError) as info:
        parse_config(['covolume'])
    assert info.value.flag == '--spec'
    assert info.value.exit_code == 2


def test_negative_samples():
    with pytest.raises(UsageError) as info:
        parse_config(['covolume', '--spec', 's.json', '--samples', '-1'])
    assert info.value.flag == '--samples'


def test_non_integer_seed():
    with pytest.raises(UsageError) as info:
        parse_config(['covolume', '--spec', 's.json', '--seed', 'abc'])
    assert info.value.flag == '--seed'


def test_negative_and_large_seeds():
    assert parse_config(['covolume', '--spec', 's.json', '--seed', '-5']).seed == -5
    assert parse_config(['covolume', '--spec', 's.json', '--seed', str(2 ** 64 - 1)]).seed == 2 ** 64 - 1
    with pytest.raises(UsageError):
        parse_config(['covolume', '--spec', 's.json', '--seed', str(2 ** 64)])


def test_grid_forms():
    assert parse_config(['sample', '--spec', 's.json', '--grid', '64x128']).grid == (64, 128)
    assert parse_config(['sample', '--spec', 's.json', '--grid', '32×16']).grid == (32, 16)
    assert parse_config(['sample', '--spec', 's.json', '--grid', '50']).grid == (50, 50)
    with pytest.raises(UsageError) as info:
        parse_config(['sample', '--spec', 's.json', '--grid', '0x4'])
    assert info.value.flag == '--grid'


def test_point_with_negative_values():
    cfg = parse_config(['member', '--spec', 's.json', '--point=-1,2.5'])
    assert cfg.point == (-1.0, 2.5)


def test_malformed_point():
    with pytest.raises(UsageError) as info:
        parse_config(['member', '--spec', 's.json', '--point', '1,x'])
    assert info.value.flag == '--point'


def test_output_format_from_suffix():
    cfg = parse_config(['sample', '--spec', 's.json', '--out', 'points.svg', '--axes', 'x1,x2'])
    assert cfg.fmt == 'svg'
    assert cfg.axes == ('x1', 'x2')


def test_unknown_suffix():
    with pytest.raises(UsageError) as info:
        parse_config(['sample', '--spec', 's.json', '--out', 'points.txt'])
    assert info.value.flag == '--out'


def test_explicit_format():
    cfg = parse_config(['sample', '--spec', 's.json', '--out', 'points.txt', '--format', 'csv'])
    assert cfg.fmt == 'csv'


def test_axes_count():
    with pytest.raises(UsageError):
        parse_config(['sample', '--spec', 's.json', '--axes', 'x1'])


def test_certify_fiber_or_theta():
    cfg = parse_config(['certify', '--ideal', 'i.json', '--fiber', '0,1.0986', '--grid', '128'])
    assert cfg.fiber == (0.0, 1.0986)
    assert cfg.grid[0] == 128
    cfg = parse_config(['certify', '--ideal', 'i.json', '--theta', '2.0944,1.0472'])
    assert cfg.theta == (2.0944, 1.0472)
    with pytest.raises(UsageError):
        parse_config(['certify', '--ideal', 'i.json'])
    with pytest.raises(UsageError):
        parse_config(['certify', '--ideal', 'i.json', '--fiber', '0,0', '--theta', '0,0'])


def test_certify_grid_minimum():
    with pytest.raises(UsageError) as info:
        parse_config(['certify', '--ideal', 'i.json', '--fiber', '0,0', '--grid', '4'])
    assert info.value.flag == '--grid'


def test_fibercount_starts():
    cfg = parse_config(['fibercount', '--spec', 's.json', '--point', '0,0', '--starts', '16'])
    assert cfg.starts == 16
    with pytest.raises(UsageError):
        parse_config(['fibercount', '--spec', 's.json', '--point', '0,0', '--starts', '0'])


def test_no_command():
    with pytest.raises(UsageError):
        parse_config([])


def test_every_command_parses():
    extra = {
        'member': ['--point', '0,0'],
        'fiber': ['--point', '0,0'],
        'coclassify': ['--theta', '0,0'],
        'fibercount': ['--point', '0,0'],
    }
    for command in COMMANDS:
        if command == 'certify':
            argv = [command, '--ideal', 'i.json', '--fiber', '0,0']
        else:
            argv = [command, '--spec', 's.json'] + extra.get(command, [])
        assert parse_config(argv).command == command


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        parse_config(['--version'])
    assert info.value.code == 0
    assert '1.0.0' in capsys.readouterr().out

"""Tests for CLI module."""

import csv
import json

import pytest
from io import StringIO
from unittest.mock import patch

from firecast import cli
from firecast.services.cube_store import write_cube
from tests.conftest import build_cube


def _run(argv):
    """Run the CLI with argv; returns (exit code, stdout)."""
    with patch('sys.argv', ['firecast'] + argv):
        with patch('sys.stdout', new_callable=StringIO) as mock_stdout:
            try:
                cli.main()
                code = 0
            except SystemExit as e:
                code = e.code
    return code, mock_stdout.getvalue()


@pytest.fixture
def cube_dir(tmp_path):
    path = tmp_path / "cube"
    write_cube(build_cube(fire_rate=0.4), path)
    return path


def test_cli_has_main_function():
    """Test that cli module has a main() function."""
    assert callable(cli.main)


def test_main_with_help_shows_available_commands():
    """Test that --help lists every subcommand and exits 0."""
    code, output = _run(['--help'])

    assert code == 0
    for command in ['gen-synthetic', 'cube-info', 'train', 'evaluate', 'ablate', 'predict-map']:
        assert command in output


def test_no_command_prints_help():
    """Test that running without a command shows help."""
    code, output = _run([])

    assert code == 0
    assert 'usage' in output.lower()


def test_train_command_help():
    """Test that 'train --help' shows the sample options."""
    code, output = _run(['train', '--help'])

    assert code == 0
    for flag in ['--ts', '--horizon', '--radius', '--k', '--epochs']:
        assert flag in output


def test_unknown_command_exits_with_usage_error():
    """Test that an unknown subcommand exits with code 1."""
    with patch('sys.stderr', new_callable=StringIO):
        code, _ = _run(['forecast'])

    assert code == 1


def test_bad_argument_type_exits_with_usage_error():
    """Test that a non-integer --ts exits with code 1."""
    with patch('sys.stderr', new_callable=StringIO) as mock_stderr:
        code, _ = _run(['train', '--ts', 'abc'])

    assert code == 1
    assert 'Error' in mock_stderr.getvalue()


def test_evaluate_requires_checkpoint_or_baseline():
    """Test that evaluate without a scorer is a usage error."""
    with patch('sys.stderr', new_callable=StringIO):
        code, _ = _run(['evaluate', '--cube', 'x'])

    assert code == 1


def test_gen_synthetic_writes_cube(tmp_path):
    """Test that gen-synthetic writes a readable cube with its oracle."""
    out = tmp_path / "synthetic"

    code, output = _run(['gen-synthetic', '--seed', '3', '--years', '1', '--lat', '4', '--lon', '8', '--out', str(out)])

    assert code == 0
    assert 'Wrote synthetic cube' in output
    assert 'Cells: 32' in output
    assert (out / 'header.json').is_file()
    assert (out / 'oracle.json').is_file()
    assert json.loads((out / 'header.json').read_text())['lat_len'] == 4


def test_cube_info(cube_dir):
    """Test that cube-info prints the grid summary."""
    code, output = _run(['cube-info', '--cube', str(cube_dir)])

    assert code == 0
    assert 'Grid: 12 steps x 3 lat x 4 lon' in output
    assert 'Cells: 12 (12 on land)' in output
    assert 'Years: 2001-2003 (3)' in output
    assert 'Variables: a, b, gwis_ba' in output


def test_cube_info_missing_directory(tmp_path):
    """Test that a missing cube exits with the data error code."""
    code, output = _run(['cube-info', '--cube', str(tmp_path / 'missing')])

    assert code == 2
    assert 'header.json' in output


def test_baseline_evaluation_appends_row(cube_dir, tmp_path):
    """Test that evaluating a baseline appends one results row."""
    results = tmp_path / 'results.csv'

    code, output = _run([
        'evaluate', '--cube', str(cube_dir), '--baseline', 'naive-any', '--ts', '2', '--results', str(results),
    ])

    assert code == 0
    assert 'naive-any on test: AUPRC' in output
    with results.open() as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 1
    assert rows[0]['model'] == 'naive-any'
    assert rows[0]['ts'] == '2'


def test_baseline_requires_cube(tmp_path):
    """Test that a baseline without --cube is a usage error."""
    code, _ = _run(['evaluate', '--baseline', 'naive-majority', '--results', str(tmp_path / 'r.csv')])

    assert code == 1


def test_train_evaluate_and_map(cube_dir, tmp_path):
    """Test the train -> evaluate -> predict-map workflow."""
    config = tmp_path / 'experiment.json'
    config.write_text(json.dumps({
        'model': 'gru',
        'ts': 2,
        'train': {'epochs': 2, 'sgdr_cycles': [2], 'batch_size': 16},
        'model_options': {'hidden': 3, 'layers': 1},
    }))
    run_dir = tmp_path / 'run'

    code, output = _run(['train', '--config', str(config), '--cube', str(cube_dir), '--out', str(run_dir)])

    assert code == 0
    assert 'Trained gru for 2 epochs' in output
    assert (run_dir / 'checkpoint_best' / 'model.json').is_file()

    results = tmp_path / 'results.csv'
    code, output = _run([
        'evaluate', '--checkpoint', str(run_dir / 'checkpoint_best'), '--split', 'val', '--results', str(results),
    ])

    assert code == 0
    assert 'gru on val: AUPRC' in output
    assert results.is_file()

    maps = tmp_path / 'maps'
    code, output = _run([
        'predict-map', '--checkpoint', str(run_dir / 'checkpoint_final'), '--t-idx', '4', '--out', str(maps),
    ])

    assert code == 0
    assert (maps / 'map.csv').is_file()
    assert (maps / 'map.pgm').read_bytes().startswith(b'P5\n4 3\n255\n')


def test_predict_map_bad_time_index(cube_dir, tmp_path):
    """Test that an out-of-range --t-idx exits with the data error code."""
    run_dir = tmp_path / 'run'
    _run(['train', '--cube', str(cube_dir), '--ts', '2', '--epochs', '1', '--out', str(run_dir)])

    code, _ = _run(['predict-map', '--checkpoint', str(run_dir / 'checkpoint_best'), '--t-idx', '0'])

    assert code == 2


def test_train_without_cube():
    """Test that training without a cube is a usage error."""
    code, output = _run(['train', '--ts', '2'])

    assert code == 1
    assert 'cube' in output


def test_train_gru_with_radius():
    """Test that the gru model rejects a spatial radius."""
    code, _ = _run(['train', '--cube', 'x', '--model', 'gru', '--radius', '1'])

    assert code == 1


def test_train_missing_config_file(tmp_path):
    """Test that a missing config file is a usage error."""
    code, _ = _run(['train', '--config', str(tmp_path / 'none.json'), '--cube', 'x'])

    assert code == 1


def test_ablate_accepts_singular_flags(cube_dir, tmp_path):
    """Test that ablate takes --model/--horizon/--radius as well as the plural spellings."""
    out = tmp_path / 'sweep'

    code, output = _run([
        'ablate', '--cube', str(cube_dir), '--model', 'gru', '--ts', '2', '--horizon', '1', '2',
        '--radius', '0', '--epochs', '1', '--out', str(out),
    ])

    assert code == 0
    assert 'Ran 2 ablation cells' in output
    with (out / 'results.csv').open() as handle:
        rows = list(csv.DictReader(handle))
    assert sorted(row['h'] for row in rows) == ['1', '2']
    assert (out / 'results_pivot.csv').is_file()

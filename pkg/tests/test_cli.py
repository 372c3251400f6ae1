import numpy as np
import pytest

from duomech import EXAMPLE_CONFIG, build_drift, derive, load_config
from duomech.cli import main
from duomech.sweep import CSV_COLUMNS


@pytest.fixture()
def config_file(tmp_path):
    path = tmp_path / "system.cfg"
    path.write_text(EXAMPLE_CONFIG)
    return path


def test_config_sweep_writes_csv(tmp_path, config_file, capsys):
    out = tmp_path / "sweep.csv"
    code = main(["--config", str(config_file), "--sweep", "r=0:1:3",
                 "--output", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    header = next(l for l in lines if not l.startswith("#"))
    assert header == ",".join(CSV_COLUMNS)
    assert sum(1 for l in lines if not l.startswith("#")) == 4


def test_sweep_to_stdout(config_file, capsys):
    code = main(["--config", str(config_file), "--sweep", "r=0:1:2"])
    assert code == 0
    captured = capsys.readouterr().out
    assert ",".join(CSV_COLUMNS) in captured


def test_curves_flag(tmp_path, config_file):
    out = tmp_path / "curves.csv"
    code = main(["--config", str(config_file), "--sweep", "r=0:1:2",
                 "--curves", "xi=0,0.2", "--output", str(out)])
    assert code == 0
    body = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert len(body) == 5


def test_unknown_config_key(tmp_path, capsys):
    path = tmp_path / "bad.cfg"
    path.write_text(EXAMPLE_CONFIG + "\nbogus_key = 3\n")
    code = main(["--config", str(path), "--sweep", "r=0:1:2"])
    assert code == 2
    assert "bogus_key" in capsys.readouterr().err


def test_figure_conflicts_with_sweep(capsys):
    code = main(["--figure", "fig2", "--sweep", "r=0:1:2"])
    assert code == 2
    assert "cannot be combined" in capsys.readouterr().err


def test_curves_requires_sweep(config_file, capsys):
    code = main(["--config", str(config_file), "--curves", "xi=0,0.1"])
    assert code == 2
    assert "requires --sweep" in capsys.readouterr().err


def test_sweep_arg_format_errors(config_file, capsys):
    code = main(["--config", str(config_file), "--sweep", "r=0:1"])
    assert code == 2
    assert "START:STOP:N" in capsys.readouterr().err


def test_bracket_arg_format_errors(config_file, capsys):
    code = main(["--config", str(config_file), "--find-critical-xi", "0-1"])
    assert code == 2
    assert "LO:HI" in capsys.readouterr().err


def test_nothing_to_do(config_file, capsys):
    code = main(["--config", str(config_file)])
    assert code == 2
    assert "nothing to do" in capsys.readouterr().err


def test_invalid_figure_choice(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["--figure", "fig9"])
    assert excinfo.value.code == 2


def test_find_critical_xi_output(config_file, capsys):
    code = main(["--config", str(config_file), "--find-critical-xi", "0:1"])
    assert code == 0
    out = capsys.readouterr().out
    assert "critical_xi = " in out
    assert "bracket = [" in out


def test_dump_matrices(tmp_path, config_file, capsys):
    stem = tmp_path / "point"
    code = main(["--config", str(config_file), "--dump-matrices",
                 "--output", str(stem)])
    assert code == 0
    drift = np.loadtxt(stem.with_suffix(".drift.txt"))
    noise = np.loadtxt(stem.with_suffix(".noise.txt"))
    cov = np.loadtxt(stem.with_suffix(".covariance.txt"))
    params = load_config(config_file)
    assert np.array_equal(drift, build_drift(derive(params)))
    assert noise.shape == (8, 8)
    assert np.max(np.abs(cov - cov.T)) == 0.0


def test_dump_matrices_needs_output(config_file, capsys):
    code = main(["--config", str(config_file), "--dump-matrices"])
    assert code == 2
    assert "requires --output" in capsys.readouterr().err


def test_mc_validate(tmp_path, capsys):
    # fast-relaxing configuration so the ensemble converges in ~a second
    cfg = tmp_path / "fast.cfg"
    cfg.write_text(EXAMPLE_CONFIG.replace("gamma_hz          = 140",
                                          "gamma_hz = 700"))
    out = tmp_path / "val"
    code = main(["--config", str(cfg), "--mc-validate", "--output", str(out),
                 "--mc-burn-in", "250", "--mc-duration", "1200",
                 "--mc-trajectories", "32", "--mc-seed", "11"])
    captured = capsys.readouterr().out
    assert code == 0, captured
    assert "mc-validate: PASS" in captured
    assert out.with_suffix(".mc.csv").exists()

"""figviz CLI exit codes and batch rendering."""

import subprocess
import sys

from figviz.cli import main

from test_render import line_spec, write_sweep_csv


def test_render_via_cli(tmp_path, capsys):
    write_sweep_csv(tmp_path / "sweep.csv")
    spec = line_spec(tmp_path)
    assert main([str(spec)]) == 0
    assert (tmp_path / "fig.png").exists()
    assert "wrote" in capsys.readouterr().out


def test_console_entry_point(tmp_path):
    write_sweep_csv(tmp_path / "sweep.csv")
    spec = line_spec(tmp_path)
    proc = subprocess.run(
        [sys.executable, "-m", "figviz.cli", str(spec)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0


def test_config_error_exit_64(tmp_path, capsys):
    spec = tmp_path / "bad.toml"
    spec.write_text('kind = "nope"\noutput = "f.png"\n[[panels]]\n')
    assert main([str(spec)]) == 64
    assert "config error" in capsys.readouterr().err


def test_schema_error_exit_65(tmp_path, capsys):
    write_sweep_csv(tmp_path / "sweep.csv")
    spec = line_spec(tmp_path, y="missing_column")
    assert main([str(spec)]) == 65
    err = capsys.readouterr().err
    assert "missing_column" in err and "found" in err


def test_missing_file_exit_66(tmp_path, capsys):
    spec = line_spec(tmp_path, csv_name="ghost.csv")
    assert main([str(spec)]) == 66
    assert "ghost.csv" in capsys.readouterr().err


def test_multiple_specs_one_invocation(tmp_path):
    write_sweep_csv(tmp_path / "sweep.csv")
    a = line_spec(tmp_path)
    b = tmp_path / "fig_b.toml"
    b.write_text(
        a.read_text().replace('output = "fig.png"', 'output = "fig_b.png"')
    )
    assert main(["--quiet", str(a), str(b)]) == 0
    assert (tmp_path / "fig.png").exists()
    assert (tmp_path / "fig_b.png").exists()

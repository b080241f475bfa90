from __future__ import annotations

import csv
import os
import subprocess
import sys

import pytest

from anyonchain.cli import float_list, int_list, main, parity_value, read_config


def run(args, tmp_path, name="out.csv"):
    out = tmp_path / name
    code = main(args + ["--output", str(out)])
    assert code == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows, out


def test_value_parsers():
    assert int_list("8:12") == [8, 9, 10, 11, 12]
    assert int_list("8:12:2") == [8, 10, 12]
    assert int_list("3,5") == [3, 5]
    assert float_list("0:1:3") == [0.0, 0.5, 1.0]
    assert parity_value("+1") == 1 and parity_value("both") is None


def test_dims_example(tmp_path):
    rows, out = run(["dims", "--model", "fibonacci", "--L", "4", "--J", "0"], tmp_path)
    assert rows[0] == ["model", "k", "jext", "L", "J", "dim_bruteforce", "dim_verlinde"]
    assert rows[1][5] == "2"
    cfg = (tmp_path / "out.csv.config").read_text()
    assert "model=fibonacci" in cfg and "L=4" in cfg


def test_page_curve_rows(tmp_path):
    rows, _ = run(["page-curve", "--analytic", "--model", "su2k", "--k", "3", "--jext", "1", "--L", "12", "--J", "0"],
                  tmp_path)
    assert [int(r[4]) for r in rows[1:]] == list(range(1, 12))
    assert rows[0][-3:] == ["exact_aee", "asympt_aee", "exact_var"]


def test_montecarlo_columns_and_digits(tmp_path):
    rows, _ = run(["page-curve", "--montecarlo", "--L", "8", "--LA", "4", "--n-samples", "300", "--seed", "2"],
                  tmp_path)
    assert rows[0] == ["model", "k", "jext", "L", "LA", "J", "n_samples", "seed", "mean_aee", "stderr", "sample_var"]
    assert float(rows[1][8]) == float(repr(float(rows[1][8])))  # round-trips


def test_seed_reproducible(tmp_path):
    args = ["page-curve", "--montecarlo", "--L", "7", "--n-samples", "400", "--seed", "9"]
    _, a = run(args, tmp_path, "a.csv")
    _, b = run(args, tmp_path, "b.csv")
    assert a.read_bytes() == b.read_bytes()
    _, c = run(args[:-1] + ["10"], tmp_path, "c.csv")
    assert a.read_bytes() != c.read_bytes()


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nmodel = su2k\nk = 4\nL = 6\nJ = 0\n")
    rows, _ = run(["dims", "--config", str(cfg)], tmp_path)
    assert rows[1][:5] == ["su2k", "4", "1/2", "6", "0"]
    rows, _ = run(["dims", "--config", str(cfg), "--k", "5"], tmp_path)
    assert rows[1][1] == "5"


@pytest.mark.parametrize("text", ["nonsense\n", "unknown_key = 3\n", "k = five\n", "model = ising\n"])
def test_invalid_config(tmp_path, text, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(text)
    out = tmp_path / "never.csv"
    assert main(["dims", "--config", str(cfg), "--L", "3", "--output", str(out)]) != 0
    assert not out.exists()


def test_invalid_arguments(tmp_path):
    out = tmp_path / "x.csv"
    assert main(["dims", "--L", "3", "--J", "sigma", "--output", str(out)]) != 0
    assert main(["page-curve", "--L", "6", "--output", str(out)]) != 0  # neither mode chosen
    assert main(["dims", "--model", "su2k", "--L", "3", "--output", str(out)]) != 0  # missing k
    assert not out.exists()
    assert not [p for p in os.listdir(tmp_path) if p.startswith(".tmp-")]


def test_validate_and_dump(tmp_path):
    dump = tmp_path / "model.json"
    rows, _ = run(["model", "validate", "--model", "su2k", "--k", "3", "--dump", str(dump)], tmp_path)
    assert rows[1][-1] == "true"
    from anyonchain.category import load_model

    assert load_model(dump.read_text()).name.startswith("SU(2)")


def test_remaining_subcommands(tmp_path):
    rows, _ = run(["variance", "--L", "8:12:2"], tmp_path)
    assert len(rows) == 4
    rows, _ = run(["crossover", "--L", "20", "--Lam=-1,0,1"], tmp_path)
    assert len(rows) == 4
    rows, _ = run(["qsree", "--k", "4", "--L", "20", "--f", "0.25"], tmp_path)
    assert {r[5] for r in rows[1:]} == {"integer", "half-integer"}


def test_golden_chain_commands(tmp_path):
    rows, _ = run(["golden-chain", "levels", "--L", "9", "--J", "tau", "--svg", str(tmp_path / "l.svg")], tmp_path)
    assert rows[0] == ["L", "J", "parity", "lambda", "m", "E_m", "r_m"]
    assert (tmp_path / "l.svg").read_text().startswith("<svg")
    rows, _ = run(["golden-chain", "aee-curve", "--L", "8"], tmp_path)
    assert rows[0] == ["L", "J", "parity", "lambda", "LA", "f", "mean_aee", "n_states",
                       "analytic_exact", "analytic_asymptotic"]
    assert len(rows) == 8
    rows, _ = run(["golden-chain", "asymmetry", "--L", "8", "--J", "tau"], tmp_path)
    assert len(rows) == 5
    rows, _ = run(["golden-chain", "spectrum", "--L", "6", "--parity", "both"], tmp_path)
    assert {r[2] for r in rows[1:]} == {"1", "-1"}


def test_console_script_env_threads(tmp_path):
    env = dict(os.environ, ANYONCHAIN_THREADS="2")
    proc = subprocess.run(
        [sys.executable, "-m", "anyonchain.cli", "dims", "--L", "5", "--J", "0"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert proc.stdout.splitlines()[1].split(",")[5] == "3"
    assert "threads=2" in proc.stderr


def test_read_config_missing(tmp_path):
    from anyonchain.cli import ConfigError

    with pytest.raises(ConfigError):
        read_config(str(tmp_path / "absent.cfg"))

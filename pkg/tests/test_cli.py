import csv

import pytest

from wignerlab.cli import EXIT_IDENTITY, EXIT_IO, EXIT_OK, main, read_config, resolve_settings, build_parser
from wignerlab.harness import CSV_COLUMNS, read_records


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def test_sample_and_verify_matrix(tmp_path, capsys):
    m, s = tmp_path / "m.txt", tmp_path / "s.txt"
    code, _ = run(["sample", "--n", "6", "--seed", "4", "--out", str(m), "--spectrum-out", str(s)], capsys)
    assert code == EXIT_OK and m.exists() and s.exists()
    code, out = run(["verify", "--matrix", str(m), "--spectrum", str(s)], capsys)
    assert code == EXIT_OK
    assert "identities: max relative residual" in out.out and "ok" in out.out


def test_verify_detects_broken_matrix(tmp_path, capsys):
    m = tmp_path / "m.txt"
    m.write_text("n=2\n0 1\n2 0\n")
    code, out = run(["verify", "--matrix", str(m)], capsys)
    assert code == EXIT_IO and "symmetric" in out.err


def test_verify_random_suite(capsys):
    code, out = run(["verify", "--identity-n", "4,8", "--seeds", "3"], capsys)
    assert code == EXIT_OK


def test_verify_inequalities_reports_failure(capsys):
    # the stated constant 2 is violated at the lower edge of the region
    code, out = run(["verify", "--identity-n", "4", "--seeds", "1", "--inequalities", "4"], capsys)
    assert "region_nv_sqrt" in out.out
    assert code == EXIT_IDENTITY


def test_sweep_rate_csv(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code, res = run(["sweep-rate", "--n-list", "8,16,32", "--replicates", "5", "--out", str(out)], capsys)
    assert code == EXIT_OK and "slope=" in res.out
    assert next(csv.reader(out.open())) == list(CSV_COLUMNS)
    assert [r.n for r in read_records(out)] == [8, 16, 32]


def test_sweep_stieltjes(tmp_path, capsys):
    out = tmp_path / "st.csv"
    code, res = run(["sweep-stieltjes", "--n-list", "16", "--replicates", "3", "--u-count", "5",
                     "--v-count", "3", "--out", str(out)], capsys)
    assert code == EXIT_OK and "max_envelope_ratio" in res.out
    assert len(out.read_text().splitlines()) == 1 + 15


def test_bound(tmp_path, capsys):
    prof = tmp_path / "b.csv"
    code, res = run(["bound", "--shift", "0.05", "--c1", "2", "--calibrate", "--csv", str(prof)], capsys)
    assert code == EXIT_OK
    vals = dict(line.split(" = ") for line in res.out.splitlines())
    assert float(vals["C1"]) == 2.0
    assert float(vals["total"]) >= float(vals["delta_direct"])
    assert float(vals["calibrated_C"]) == 0.0
    assert len(prof.read_text().splitlines()) == 258


def test_settings_precedence(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# comment\nseed = 11\nthreads = 2\nn-list = 4,8\n")
    args = build_parser().parse_args(["sweep-rate", "--config", str(cfg), "--threads", "3"])
    st = resolve_settings(args, environ={"WIGNERLAB_SEED": "12", "WIGNERLAB_A0": "1.5"})
    assert st["seed"] == 12 and st["threads"] == 3 and st["a0"] == 1.5
    assert st["n_list"] == (4, 8)


def test_config_errors(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = red\n")
    with pytest.raises(ValueError):
        read_config(cfg)
    assert run(["sweep-rate", "--config", str(cfg)], capsys)[0] == EXIT_IO
    assert run(["sweep-rate", "--config", str(tmp_path / "nope")], capsys)[0] == EXIT_IO
    assert run(["sweep-rate", "--n-list", "8,4"], capsys)[0] == EXIT_IO
    assert run(["sweep-rate", "--n-list", "4", "--replicates", "1",
                "--out", str(tmp_path / "no" / "x.csv")], capsys)[0] == EXIT_IO

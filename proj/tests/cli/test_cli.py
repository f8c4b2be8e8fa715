import csv
import io
import json
import os
import subprocess

import pytest

BIN = os.environ.get("CHARPATH_BIN", "charpath")


def run(*args, env=None, cwd=None):
    full_env = dict(os.environ)
    full_env.pop("CHARPATH_SEED", None)
    full_env.pop("CHARPATH_CACHE_DIR", None)
    if env:
        full_env.update(env)
    return subprocess.run([BIN, *args], capture_output=True, text=True, env=full_env, cwd=cwd)


def rows(text):
    return list(csv.reader(io.StringIO(text)))


@pytest.mark.parametrize("sub", ["path", "sample-f", "moment", "verify", "phi", "increment"])
def test_help_exits_zero(sub):
    r = run(sub, "--help")
    assert r.returncode == 0
    assert "--" in r.stdout


def test_path_rejects_composite():
    r = run("path", "--q", "4", "--chi", "1")
    assert r.returncode == 2
    assert "modulus must be an odd prime" in r.stderr


def test_path_rejects_index_out_of_range():
    assert run("path", "--q", "5", "--chi", "4").returncode == 2


def test_path_vertex_csv():
    r = run("path", "--q", "5", "--chi", "1", "--grid", "vertex", "--format", "csv")
    assert r.returncode == 0
    table = rows(r.stdout)
    assert table[0] == ["t", "re", "im"]
    assert len(table) == 7
    assert table[1] == ["0", "0", "0"]
    assert table[-1] == ["1", "0", "0"]


def test_path_svg(tmp_path):
    out = tmp_path / "p.svg"
    r = run("path", "--q", "10007", "--chi", "1", "--grid", "vertex", "--format", "svg", "--out", str(out))
    assert r.returncode == 0
    text = out.read_text()
    assert text.count("<polyline") == 1
    assert "viewBox" in text


def test_sample_f_files_and_determinism(tmp_path):
    args = ["--seed", "42", "sample-f", "--parity", "minus", "--terms", "10007", "--grid", "2048"]
    assert run(*args, "--out", str(tmp_path / "a")).returncode == 0
    assert run(*args, "--out", str(tmp_path / "b")).returncode == 0
    a = (tmp_path / "a.csv").read_bytes()
    assert a == (tmp_path / "b.csv").read_bytes()
    assert len(rows(a.decode())) == 2049
    manifest = json.loads((tmp_path / "a.json").read_text())
    assert manifest["seed"] == 42
    assert manifest["streams"] == [0]
    assert manifest["mixer-id"] == "splitmix64-keyed-v1"
    assert manifest["truncation"]["terms"] == 10007
    assert manifest["grid"]["size"] == 2048


def test_sample_f_count_names(tmp_path):
    r = run("sample-f", "--count", "2", "--terms", "100", "--grid", "64", "--out", str(tmp_path / "s"))
    assert r.returncode == 0
    assert (tmp_path / "s_0.csv").exists() and (tmp_path / "s_1.csv").exists()
    assert json.loads((tmp_path / "s.json").read_text())["streams"] == [0, 1]


def test_sample_f_zero_terms():
    assert run("sample-f", "--terms", "0").returncode == 2


def test_seed_from_environment(tmp_path):
    run("sample-f", "--terms", "100", "--grid", "32", "--out", str(tmp_path / "e"), env={"CHARPATH_SEED": "9"})
    run("--seed", "9", "sample-f", "--terms", "100", "--grid", "32", "--out", str(tmp_path / "f"))
    assert (tmp_path / "e.csv").read_bytes() == (tmp_path / "f.csv").read_bytes()
    assert json.loads((tmp_path / "e.json").read_text())["seed"] == 9


def test_config_file_precedence(tmp_path):
    cfg = tmp_path / "charpath.toml"
    cfg.write_text("seed = 3\nterms = 200\ngrid = 16\n")
    run("--config", str(cfg), "sample-f", "--out", str(tmp_path / "c"), env={"CHARPATH_SEED": "8"})
    manifest = json.loads((tmp_path / "c.json").read_text())
    assert manifest["seed"] == 3
    assert manifest["truncation"]["terms"] == 200
    run("--config", str(cfg), "--seed", "5", "sample-f", "--out", str(tmp_path / "d"))
    assert json.loads((tmp_path / "d.json").read_text())["seed"] == 5


def test_moment_limit():
    r = run("moment", "--method", "limit", "--t", "0.5", "--n", "1", "--m", "1", "--truncate", "100000")
    assert r.returncode == 0
    rec = json.loads(r.stdout)
    assert abs(rec["re"] - 0.5) < 1e-3
    assert "q" not in rec
    for key in ["k", "t", "n", "m", "parity", "method", "re", "im", "error_estimate", "truncation"]:
        assert key in rec


def test_moment_direct_reports_q():
    r = run("moment", "--method", "direct", "--q", "101", "--t", "0.5", "--n", "1", "--m", "2", "--parity", "odd")
    assert r.returncode == 0
    rec = json.loads(r.stdout)
    assert rec["q"] == 101
    assert abs(complex(rec["re"], rec["im"])) < 0.5


def test_moment_errors():
    assert run("moment", "--method", "sigma", "--q", "101", "--t", "0.5", "--n", "1", "--m", "2").returncode == 2
    assert run("moment", "--method", "direct", "--t", "0.5", "--n", "1", "--m", "1").returncode == 2
    assert run("moment", "--method", "direct", "--q", "101", "--t", "0.5,0.2", "--n", "1,1", "--m", "1,1").returncode == 2
    assert run("moment", "--method", "direct", "--q", "101", "--t", "0.5", "--n", "1,1", "--m", "1").returncode == 2


def test_family_scan_guard():
    r = run("phi", "--q", "1000003", "--taus", "0:1:2")
    assert r.returncode == 3


@pytest.mark.parametrize("suite", ["divisor", "deligne", "gauss", "orthogonality", "ramanujan", "tail"])
def test_verify_suites(suite):
    r = run("verify", suite)
    assert r.returncode == 0, r.stdout
    assert "PASS" in r.stdout and "FAIL" not in r.stdout


def test_verify_unknown_suite():
    assert run("verify", "nonsense").returncode == 2


def test_phi_character_curve():
    r = run("phi", "--q", "10007", "--parity", "odd", "--taus", "0.25:2.0:8")
    assert r.returncode == 0
    table = rows(r.stdout)
    assert table[0] == ["tau", "prob", "stderr"]
    probs = [float(row[1]) for row in table[1:]]
    assert len(probs) == 8
    assert all(a >= b for a, b in zip(probs, probs[1:]))


def test_phi_limit_deterministic():
    args = ["phi", "--limit", "--samples", "500", "--terms", "2000", "--parity", "minus", "--taus", "0.25:2.0:8",
            "--seed", "7"]
    a = run(*args)
    b = run(*args)
    assert a.returncode == 0
    assert a.stdout == b.stdout
    assert all(len(row) == 3 for row in rows(a.stdout))


def test_phi_rejects_composite():
    assert run("phi", "--q", "10").returncode == 2


def test_cache_hit_and_miss_identical(tmp_path):
    args = ["--cache-dir", str(tmp_path), "path", "--q", "1009", "--chi", "5", "--grid", "vertex"]
    miss = run(*args)
    assert (tmp_path / "q1009.dlog").stat().st_size == 1009 * 4
    hit = run(*args)
    plain = run("path", "--q", "1009", "--chi", "5", "--grid", "vertex")
    assert miss.stdout == hit.stdout == plain.stdout


def test_increment_json():
    r = run("increment", "--q", "1009", "--json")
    assert r.returncode == 0
    assert json.loads(r.stdout)["slope"] >= 1.5

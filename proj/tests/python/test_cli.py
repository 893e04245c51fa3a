import json
import os
import subprocess
from pathlib import Path

import pytest

BIN = os.environ.get("EDGESTAT_BIN", "edgestat")


def run(*args, env=None, cwd=None):
    e = dict(os.environ)
    if env:
        e.update(env)
    return subprocess.run([BIN, *map(str, args)], capture_output=True, text=True, env=e, cwd=cwd)


def test_version_and_help():
    r = run("--version")
    assert r.returncode == 0
    assert r.stdout.strip() == "0.1.0"
    assert run("--help").returncode == 0


@pytest.mark.parametrize(
    "args",
    [
        ("dist", "nope"),
        ("frobnicate",),
        ("dist", "tw", "--format", "xml"),
        ("sample", "deformed", "--n", "50", "--replicas", "3", "--epsilon", "0.5"),
        ("converge", "kernel_alpha", "--direction", "sideways"),
        ("sample", "mns", "--replicas", "0"),
    ],
)
def test_usage_errors_exit_2(tmp_path, args):
    assert run(*args, "-o", tmp_path / "x.csv").returncode == 2


def test_dist_table_shape(tmp_path):
    out = tmp_path / "tw.csv"
    assert run("dist", "tw", "-o", out).returncode == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# edgestat-dist-v1")
    assert lines[1] == "t,F"
    rows = [tuple(map(float, l.split(","))) for l in lines[2:]]
    assert len(rows) == 121
    assert rows[0][0] == -8.0 and rows[-1][0] == 4.0
    values = [f for _, f in rows]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
    manifest = json.loads(Path(str(out) + ".manifest.json").read_text())
    assert manifest["schema"] == "edgestat-manifest-v1"
    assert manifest["outputs"][0]["path"].endswith("tw.csv")


def test_default_output_dir_from_env(tmp_path):
    assert run("dist", "gumbel", "--step", "1", env={"EDGESTAT_OUTPUT_DIR": str(tmp_path)}).returncode == 0
    assert (tmp_path / "dist_gumbel.csv").exists()


def test_workers_do_not_change_results(tmp_path):
    common = ("sample", "mns", "--replicas", "40", "--seed", "11", "--mu", "0.2", "--particles", "10")
    assert run(*common, "--workers", "1", "-o", tmp_path / "a.csv").returncode == 0
    assert run(*common, "--workers", "3", "-o", tmp_path / "b.csv").returncode == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.summary.json").read_bytes() == (tmp_path / "b.summary.json").read_bytes()


def test_rerun_reproduces_outputs(tmp_path):
    out = tmp_path / "d.csv"
    assert run("sample", "deformed", "--n", "60", "--replicas", "30", "--seed", "5", "-o", out).returncode == 0
    r = run("rerun", str(out) + ".manifest.json", "--output-dir", tmp_path / "replay", "--workers", "2")
    assert r.returncode == 0, r.stdout + r.stderr
    assert "rerun identical" in r.stdout


def test_rerun_detects_tampering(tmp_path):
    out = tmp_path / "p.csv"
    assert run("sample", "poisson", "--replicas", "10", "--seed", "2", "-o", out).returncode == 0
    mpath = Path(str(out) + ".manifest.json")
    m = json.loads(mpath.read_text())
    m["outputs"][0]["sha1"] = "0" * 40
    mpath.write_text(json.dumps(m))
    assert run("rerun", str(out) + ".manifest.json", "--output-dir", tmp_path / "r").returncode == 1


def test_seed_is_recorded_when_generated(tmp_path):
    out = tmp_path / "g.csv"
    assert run("sample", "poisson", "--replicas", "3", "-o", out).returncode == 0
    m = json.loads(Path(str(out) + ".manifest.json").read_text())
    assert m["parameters"]["seed"] is not None
    assert run("rerun", str(out) + ".manifest.json", "--output-dir", tmp_path / "r").returncode == 0


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# comment\nfrom = -1\nto = 1\nstep = 0.5\n")
    out = tmp_path / "c.csv"
    assert run("dist", "tw", "--config", cfg, "--to", "0", "-o", out).returncode == 0
    ts = [float(l.split(",")[0]) for l in out.read_text().splitlines()[2:]]
    assert ts == [-1.0, -0.5, 0.0]


def test_verify_and_converge_exit_codes(tmp_path):
    assert run("verify", "airy_identity", "-o", tmp_path / "v.json").returncode == 0
    # 80 terms cannot reach 1e-10 at q = 0.9
    assert run("verify", "mehler", "-o", tmp_path / "m.json").returncode == 1
    assert run("verify", "mehler", "--q", "0.1,0.5", "-o", tmp_path / "m2.json").returncode == 0
    assert run("converge", "thm1_2", "--direction", "to_airy", "-o", tmp_path / "c.csv").returncode == 0

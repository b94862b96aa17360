import json
import os
import pathlib
import subprocess
import sys

import pytest

import xsblab.cli as cli
from xsblab.io import read_field, sidecar_path


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def header_config(text):
    first = text.splitlines()[0]
    assert first.startswith("# ")
    return json.loads(first[2:])


# ---------------------------------------------------------------- classify


def test_classify_admissible(capsys):
    code, out, err = run(["classify", "--q", "2", "--r", "2", "--s", "0", "--b", "0"], capsys)
    assert code == 0
    assert out == '{"admissible":true,"violations":[]}\n'


def test_classify_rejected(capsys):
    code, out, _ = run(["classify", "--q", "inf", "--r", "2", "--s", "1", "--b", "1/2"], capsys)
    assert code == 3
    assert "EXC_Q_INF_B_HALF" in json.loads(out)["violations"]


def test_classify_negative_rationals(capsys):
    code, out, _ = run(["classify", "--q", "4", "--r", "inf", "--s", "-1/4", "--b", "1/2"], capsys)
    assert code == 3 and json.loads(out)["violations"] == ["EXC_B_HALF_S_EDGE"]
    code, _, _ = run(["classify", "--q", "4", "--r", "inf", "--s", "-0.2", "--b", "0.5"], capsys)
    assert code == 0


def test_classify_out_file(tmp_path, capsys):
    path = tmp_path / "v.json"
    code, out, _ = run(["classify", "--q", "2", "--r", "2", "--s", "0", "--b", "0", "--out", str(path)], capsys)
    assert code == 0 and path.read_text() == out


@pytest.mark.parametrize("argv", [
    ["classify", "--q", "2", "--r", "2", "--s", "0"],
    ["classify", "--q", "x", "--r", "2", "--s", "0", "--b", "0"],
    ["classify", "--q", "2", "--r", "2", "--s", "1/0", "--b", "0"],
    ["frobnicate"],
    [],
    ["region", "--q", "2", "--r", "2", "--s-range", "1", "0", "--b-range", "0", "1"],
    ["sweep", "--family", "U-block", "--q", "2", "--r", "2", "--s", "0", "--b", "0", "--n-list", "4,8,12,16"],
    ["probe", "--kind", "strichartz", "--q", "4", "--r", "4"],
    ["probe", "--kind", "l2-linfty", "--b", "1/4"],
    ["--threads", "0", "classify", "--q", "2", "--r", "2", "--s", "0", "--b", "0"],
])
def test_usage_errors(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2
    assert out == ""
    assert err.count("\n") == 1 and err.startswith("xsblab: error:")


def test_bad_thread_env(monkeypatch, capsys):
    monkeypatch.setenv("XSB_LAB_THREADS", "many")
    code, _, err = run(["classify", "--q", "2", "--r", "2", "--s", "0", "--b", "0"], capsys)
    assert code == 2 and "XSB_LAB_THREADS" in err


# ------------------------------------------------------------------ region


def test_region_csv(capsys):
    code, out, _ = run(["region", "--q", "2", "--r", "2", "--s-range", "-1", "1", "--b-range", "-1", "1",
                        "--resolution", "3"], capsys)
    assert code == 0
    cfg = header_config(out)
    assert cfg["command"] == "region" and cfg["s_range"] == ["-1/1", "1/1"] and cfg["resolution"] == 3
    lines = out.splitlines()
    assert lines[1] == "s,b,admissible,violations" and len(lines) == 11


def test_region_json(capsys):
    code, out, _ = run(["region", "--q", "inf", "--r", "inf", "--s-range", "1/2", "1/2", "--b-range", "1/2",
                        "1/2", "--format", "json"], capsys)
    rows = json.loads(out)["rows"]
    assert code == 0 and len(rows) == 1 and rows[0]["admissible"] is False


# ------------------------------------------------------------------- sweep


def test_sweep_family_csv(capsys):
    code, out, _ = run(["sweep", "--family", "U-block", "--q", "2", "--r", "2", "--s", "-1/4", "--b", "0",
                        "--n-list", "4,8,16,32"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "family,q,r,s,b,slope,predicted,residual,conclusion"
    row = lines[2].split(",")
    assert row[0] == "U-block" and row[6] == "1/4"
    assert abs(float(row[5]) - 0.25) < 0.07


def test_sweep_modulation(capsys):
    code, out, _ = run(["sweep", "--kind", "modulation", "--r", "4", "--n-list", "2,4", "--l-list", "1,8",
                        "--draws", "2"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "N,L,r,ratio" and len(lines) == 2 + 2 * 2 * 2
    assert lines[2].startswith("2,1,4/1,")


def test_sweep_field_out(tmp_path, capsys):
    field = tmp_path / "u.bin"
    code, _, _ = run(["sweep", "--family", "ModulationShell", "--q", "inf", "--r", "inf", "--s", "0", "--b", "1",
                      "--n-list", "4,8,16,32", "--field-out", str(field)], capsys)
    assert code == 0
    u = read_field(field)
    meta = json.loads(pathlib.Path(sidecar_path(field)).read_text())
    assert meta["family"] == "ModulationShell" and meta["N"] == 4 and u.frame == "modulation"


def test_failed_run_leaves_no_files(tmp_path, capsys):
    field = tmp_path / "u.bin"
    out = tmp_path / "missing-dir" / "fits.csv"
    code, _, err = run(["sweep", "--family", "U-block", "--q", "2", "--r", "2", "--s", "0", "--b", "0",
                        "--n-list", "4,8,16,32", "--field-out", str(field), "--out", str(out)], capsys)
    assert code == 1 and err.startswith("xsblab: failed:")
    assert sorted(os.listdir(tmp_path)) == []


def test_interrupted_emit_removes_temp(tmp_path, monkeypatch, capsys):
    path = tmp_path / "r.csv"

    def boom(*a, **k):
        raise OSError("disk full")

    monkeypatch.setattr(cli.os, "replace", boom)
    code, _, _ = run(["region", "--q", "2", "--r", "2", "--s-range", "0", "1", "--b-range", "0", "1",
                      "--out", str(path)], capsys)
    assert code == 1
    assert os.listdir(tmp_path) == []


# ----------------------------------------------------------------- battery


def test_battery_counterexample(tmp_path, capsys):
    path = tmp_path / "b.json"
    code, _, _ = run(["battery", "--q", "4", "--r", "4", "--s", "-0.6", "--b", "0.5", "--n-list", "4,8,16,32,64",
                      "--seed", "7", "--format", "json", "--out", str(path)], capsys)
    rep = json.loads(path.read_text())
    assert code == 0
    assert rep["conclusion"] == "COUNTEREXAMPLE-FOUND" and rep["coherent"] is True
    # SB_SCALING has margin exactly 0.1 here; the U-block lands near it but the packet clears the gate
    assert abs(rep["fits"]["U-block"]["slope"] - 0.1) < 0.05
    assert rep["witnesses"]["S_PACKET"] == "WITNESSED:WavePacket"
    assert rep["config"]["cli"]["seed"] == 7


def test_battery_incoherence_exit(monkeypatch, capsys):
    real = cli.necessity_battery

    def fake(idx, *a, **k):
        rep = real(idx, *a, **k)
        rep.conclusion = "COUNTEREXAMPLE-FOUND"
        return rep

    monkeypatch.setattr(cli, "necessity_battery", fake)
    code, out, _ = run(["battery", "--q", "2", "--r", "2", "--s", "0", "--b", "0", "--n-list", "4,8,16,32",
                        "--no-probe"], capsys)
    assert code == 4 and json.loads(out)["coherent"] is False


def test_battery_csv(capsys):
    code, out, _ = run(["battery", "--q", "2", "--r", "2", "--s", "0", "--b", "0", "--n-list", "4,8,16,32",
                        "--no-probe", "--format", "csv"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert header_config(out)["no_probe"] is True
    assert lines[1] == "family,q,r,s,b,slope,predicted,residual,conclusion" and len(lines) == 5


def _bytes_of(argv, tmp_path, name, env_threads=None, monkeypatch=None):
    path = tmp_path / name
    if monkeypatch is not None:
        if env_threads is None:
            monkeypatch.delenv("XSB_LAB_THREADS", raising=False)
        else:
            monkeypatch.setenv("XSB_LAB_THREADS", env_threads)
    assert cli.main(argv + ["--out", str(path)]) == 0
    return path.read_bytes()


def test_probe_byte_identical_and_thread_independent(tmp_path, monkeypatch, capsys):
    argv = ["probe", "--q", "2", "--r", "4", "--s", "1/8", "--b", "1/8", "--n-list", "2,4,8", "--draws", "2",
            "--seed", "3"]
    a = _bytes_of(argv, tmp_path, "a.json", None, monkeypatch)
    b = _bytes_of(argv, tmp_path, "b.json", None, monkeypatch)
    c = _bytes_of(argv, tmp_path, "c.json", "3", monkeypatch)
    assert a == b == c
    rep = json.loads(a)
    assert rep["kind"] == "sufficiency-probe" and "threads" not in rep["config"]["cli"]


def test_battery_byte_identical(tmp_path, capsys):
    argv = ["battery", "--q", "6", "--r", "2", "--s", "0", "--b", "1/3", "--n-list", "4,8,16,32", "--draws", "2",
            "--seed", "5"]
    assert _bytes_of(argv, tmp_path, "a.json") == _bytes_of(argv, tmp_path, "b.json")


# ------------------------------------------------------------ probe/packet


def test_probe_strichartz_and_l2(capsys):
    code, out, _ = run(["probe", "--kind", "strichartz", "--q", "8", "--r", "4", "--n-list", "2,4", "--draws",
                        "1"], capsys)
    assert code == 0 and json.loads(out)["kind"] == "strichartz-check"
    code, out, _ = run(["probe", "--kind", "l2-linfty", "--b", "0.3", "--n-list", "2,4", "--draws", "1"], capsys)
    assert code == 0 and json.loads(out)["indices"]["s"] == "-1/4"


def test_packet_json(capsys):
    code, out, _ = run(["packet", "--N", "16", "--t", "0,0.01,0.1,0.5", "--r-list", "2,4"], capsys)
    rep = json.loads(out)
    assert code == 0 and len(rep["rows"]) == 4
    assert rep["decay_slope"] < 0
    assert min(rep["floor_min"].values()) > 0.5


def test_packet_csv_and_bad_time(capsys):
    code, out, _ = run(["packet", "--N", "4", "--t", "0,0.5", "--format", "csv"], capsys)
    assert code == 0 and out.splitlines()[1] == "t,max_abs,envelope,r,norm,floor"
    code, _, _ = run(["packet", "--N", "4", "--t", "-1"], capsys)
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "xsblab", "classify", "--q", "inf", "--r", "inf", "--s", "1/2",
                           "--b", "1"], capture_output=True, text=True)
    assert proc.returncode == 3
    assert "EXC_QR_INF_S_HALF" in proc.stdout

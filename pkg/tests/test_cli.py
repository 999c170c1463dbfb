import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from hausdorff_h2.cli import DEFAULTS, main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write_config(tmp_path, cmd, **overrides):
    cfg = dict(DEFAULTS[cmd], **overrides)
    path = tmp_path / f"{cmd}.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_shipped_configs_match_defaults():
    for cmd, cfg in DEFAULTS.items():
        assert json.loads((CONFIGS / f"{cmd}.json").read_text()) == cfg


@pytest.mark.parametrize("cmd", ["eval", "verify-atoms", "doubling", "weil"])
def test_shipped_configs_exit_zero(cmd, capsys):
    code, out, _ = run([cmd, "--config", str(CONFIGS / f"{cmd}.json")], capsys)
    assert code == 0 and out


def test_norm_small_matrix_exits_zero(tmp_path, capsys):
    path = write_config(tmp_path, "norm", n_kernels=2, n_functions=2)
    code, out, _ = run(["norm", "--config", path, "--seed", "3"], capsys)
    rows = read_csv(out)
    assert code == 0 and len(rows) == 2 * 2 * 4
    assert all(r["pass"] == "true" for r in rows)


def test_eval_cesaro_radial_reproduces_function(tmp_path, capsys):
    path = write_config(tmp_path, "eval", operator="cesaro")
    code, out, _ = run(["eval", "--config", path], capsys)
    rows = read_csv(out)
    assert code == 0 and len(rows) == 20
    assert max(abs(float(r["Hf"]) - float(r["f"])) for r in rows) < 1e-6


def test_eval_single_atom_at_zero_is_identity(tmp_path, capsys):
    path = write_config(tmp_path, "eval", kernel={"atoms": [[0.0, 1.0]]},
                        function={"kind": "bump", "center": [0.3, 1.2], "radius": 1.0})
    code, out, _ = run(["eval", "--config", path], capsys)
    rows = read_csv(out)
    assert code == 0
    assert all(r["Hf"] == r["f"] for r in rows)


def test_malformed_json_exits_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{schema: 1,")
    code, out, err = run(["eval", "--config", str(bad)], capsys)
    assert code == 2 and out == "" and "error" in err


@pytest.mark.parametrize("payload", [
    {"schema": 2},
    {"schema": 1, "bogus": 1},
    {"schema": 1, "function": {"kind": "nope"}},
    {"schema": 1, "kernel": {"atoms": [[1.0]]}},
    [1, 2],
])
def test_invalid_configs_exit_two(tmp_path, capsys, payload):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(payload))
    code, _, err = run(["eval", "--config", str(path)], capsys)
    assert code == 2 and err


def test_points_below_axis_exit_one(tmp_path, capsys):
    path = write_config(tmp_path, "eval", points={"kind": "list", "values": [[0.0, -1.0]]})
    code, _, err = run(["eval", "--config", path], capsys)
    assert code == 1 and err


def test_seed_out_of_range_exits_two(capsys):
    assert run(["eval", "--seed", str(2 ** 64)], capsys)[0] == 2


def test_same_seed_gives_identical_bytes(tmp_path, capsys):
    outs = []
    for k in range(2):
        target = tmp_path / f"run{k}.csv"
        assert run(["verify-atoms", "--seed", "42", "--out", str(target)], capsys)[0] == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
    other = tmp_path / "other.csv"
    run(["verify-atoms", "--seed", "43", "--out", str(other)], capsys)
    assert other.read_bytes() != outs[0]


def test_json_output(capsys):
    code, out, _ = run(["doubling", "--format", "json", "--seed", "1"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["meta"]["passed"] is True
    big = [r for r in doc["rows"] if r["kind"] == "doubling" and r["r"] == 10.0][0]
    assert big["value"] > 100 and big["value"] == pytest.approx(4 * np.cosh(5.0) ** 2)


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "hausdorff_h2.cli", "eval", "--nodes", "64"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("re,im,f,Hf")

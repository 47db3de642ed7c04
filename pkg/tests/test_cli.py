import csv
import io
import json
import math
import shutil
import subprocess

import pytest
import yaml

from casimir_modes.cli import COLUMNS, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    rows = list(csv.reader(lines))
    return rows[0], rows[1:]


def write_config(tmp_path, cfg, name="run.yaml"):
    p = tmp_path / name
    p.write_text(yaml.safe_dump(cfg))
    return str(p)


def test_lifshitz_defaults_scale_as_inverse_cube(capsys):
    code, out, _ = run_cli(capsys, "lifshitz")
    assert code == 0
    cols, rows = parse_csv(out)
    assert cols == COLUMNS["lifshitz"]
    E = {float(r[1]): float(r[3]) for r in rows}
    assert E[1.0] == pytest.approx(-math.pi ** 2 / 720, rel=1e-8)
    assert E[1.0] / E[2.0] == pytest.approx(8, rel=1e-8)
    assert E[2.0] / E[4.0] == pytest.approx(8, rel=1e-8)


def test_header_line(capsys):
    _, out, _ = run_cli(capsys, "lifshitz")
    head = out.splitlines()[0]
    assert head.startswith("# command=lifshitz") and "units=hbar=c=1" in head


def test_identity_sweep(capsys):
    code, out, _ = run_cli(capsys, "identity-check", "--sweep", "50", "--seed", "7")
    assert code == 0
    cols, rows = parse_csv(out)
    assert len(rows) == 50
    assert max(float(r[cols.index("gap")]) for r in rows) < 1e-7


def test_complex_modes_closed_form(capsys):
    code, out, _ = run_cli(capsys, "complex-modes", "--quasistatic")
    assert code == 0
    cols, rows = parse_csv(out)
    # lossless Drude quasistatic TM: w^2 = (wp^2/2)(1 +- exp(-kL))
    wp, k, L = 3.0, 0.8, 1.0
    expect = sorted(math.sqrt(wp ** 2 / 2 * (1 + s * math.exp(-k * L))) for s in (1, -1))
    got = sorted(float(r[cols.index("re")]) for r in rows if r[cols.index("branch")] == "complex")
    assert got == pytest.approx(expect, rel=1e-10)


def test_casimir_polder_rows(capsys):
    code, out, _ = run_cli(capsys, "casimir-polder")
    assert code == 0
    cols, rows = parse_csv(out)
    assert len(rows) == 9
    for r in rows:
        v = float(r[cols.index("value")])
        assert v < 0 if r[0].startswith(("energy", "force")) else True


def test_rows_match_columns(capsys):
    for cmd in ("lifshitz", "complex-modes", "casimir-polder"):
        _, out, _ = run_cli(capsys, cmd)
        cols, rows = parse_csv(out)
        assert cols == COLUMNS[cmd]
        assert all(len(r) == len(cols) for r in rows)


def test_jsonl_mirrors_csv(capsys):
    _, c, _ = run_cli(capsys, "lifshitz")
    _, j, _ = run_cli(capsys, "lifshitz", "--format", "jsonl")
    cols, rows = parse_csv(c)
    recs = [json.loads(l) for l in j.splitlines()]
    assert "header" in recs[0] and recs[0]["header"]["command"] == "lifshitz"
    assert len(recs) - 1 == len(rows)
    for rec, row in zip(recs[1:], rows):
        assert list(rec) == cols
        assert rec["value"] == float(row[cols.index("value")])


def test_outputs_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["identity-check", "--sweep", "10", "--seed", "3", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_file_with_type_key_and_area(tmp_path, capsys):
    mat = tmp_path / "gold.yaml"
    mat.write_text(yaml.safe_dump({"type": "drude_lorentz", "omega_p": 5.0, "gamma": 0.1}))
    cfg = {"command": "lifshitz", "material": {"file": "gold.yaml"},
           "geometry": {"gaps": [1.0], "area": 2.0}}
    code, out, err = run_cli(capsys, "--config", write_config(tmp_path, cfg))
    assert code == 0, err
    cols, rows = parse_csv(out)
    v2 = float(rows[0][cols.index("value")])
    cfg["geometry"]["area"] = 1.0
    _, out1, _ = run_cli(capsys, "--config", write_config(tmp_path, cfg))
    v1 = float(parse_csv(out1)[1][0][cols.index("value")])
    assert v2 == pytest.approx(2 * v1, rel=1e-14)
    assert -math.pi ** 2 / 720 < v1 < 0


@pytest.mark.parametrize("cfg", [
    {"command": "lifshitz", "bogus": 1},
    {"command": "lifshitz", "material": {"model": "unobtainium"}},
    {"command": "lifshitz", "geometry": {"gaps": [1.0], "area": -1.0}},
    {"command": "lifshitz", "routes": ["nope"]},
    {"command": "casimir-polder", "quantities": ["mass"]},
])
def test_config_errors_exit_2(tmp_path, capsys, cfg):
    code, _, err = run_cli(capsys, "--config", write_config(tmp_path, cfg))
    assert code == 2
    assert json.loads(err.strip().splitlines()[-1])["error"] == "config"


def test_missing_file_exit_2(capsys):
    code, _, _ = run_cli(capsys, "--config", "/nonexistent/run.yaml")
    assert code == 2


def test_missing_command_exit_2(capsys):
    assert run_cli(capsys)[0] == 2


def test_domain_error_exit_1(tmp_path, capsys):
    cfg = {"command": "casimir-polder", "distances": [0.1]}  # a = 0.01 >= z0/20
    code, _, err = run_cli(capsys, "--config", write_config(tmp_path, cfg))
    assert code == 1
    assert json.loads(err.strip())["type"] == "GeometryError"


def test_console_script():
    exe = shutil.which("casimir-modes")
    if exe is None:
        pytest.skip("console script not installed")
    out = subprocess.run([exe, "lifshitz"], capture_output=True, text=True, check=True).stdout
    cols, rows = parse_csv(out)
    assert len(rows) == 3

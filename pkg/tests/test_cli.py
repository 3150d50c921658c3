import csv
import io
import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from ckn.cli import main

HARDY = {"n": 3, "p": "2", "q": "2", "r": "2", "alpha": "0", "beta": "0", "gamma": "-1", "a": "1"}


def write(tmp_path, body, name="in.json"):
    path = tmp_path / name
    path.write_text(json.dumps(body, indent=2))
    return str(path)


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_hardy(tmp_path, capsys):
    code, out, _ = run(["validate", "--input", write(tmp_path, {"tuple": HARDY})], capsys)
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["valid"] and rep["special_case"] == "Hardy" and rep["balance_residual"] == "0"


def test_validate_invalid_exits_one(tmp_path, capsys):
    bad = dict(HARDY, gamma="-2")
    code, out, _ = run(["validate", "--input", write(tmp_path, {"tuple": bad})], capsys)
    assert code == 1 and not json.loads(out)["report"]["valid"]


def test_derive_sigma_at_a_zero(tmp_path, capsys):
    t = dict(HARDY, gamma="0", a="0")
    path = write(tmp_path, {"tuple": t, "request": ["sigma"]})
    code, _, err = run(["derive", "--input", path], capsys)
    assert code == 2 and "sigma undefined at a=0" in err
    code, out, _ = run(["derive", "--input", write(tmp_path, {"tuple": t}, "b.json")], capsys)
    assert code == 0 and json.loads(out)["derived"]["sigma"] is None


def test_derive_request(tmp_path, capsys):
    path = write(tmp_path, {"tuple": HARDY, "request": ["s", "sigma"]})
    code, out, _ = run(["derive", "--input", path], capsys)
    assert code == 0 and json.loads(out)["derived"] == {"s": "2", "sigma": "-1"}


def test_scan_csv(tmp_path, capsys):
    body = {
        "tuple": HARDY,
        "trial": [{"family": "smooth-bump", "support": [0.0, 1.0]}],
        "grid": ["0", "-1", "-1/2"],
    }
    out_path = tmp_path / "scan.csv"
    args = ["scan", "--input", write(tmp_path, body), "--output", str(out_path), "--seed", "3", "--budget", "20"]
    assert run(args, capsys)[0] == 0
    rows = list(csv.DictReader(io.StringIO(out_path.read_text())))
    s = [Fraction(r["s"]) for r in rows]
    assert s == sorted(s) == [2, 3, 6]
    first = out_path.read_bytes()
    assert run(args, capsys)[0] == 0
    assert out_path.read_bytes() == first
    assert [p.name for p in tmp_path.iterdir() if p.name.endswith(".tmp")] == []


def test_verify_reruns_identical(tmp_path, capsys):
    body = {"tuple": HARDY, "trial": {"family": "annular-bump", "params": [0.3], "support": [0.0, 1.5]}}
    path = write(tmp_path, body)
    code, first, _ = run(["verify", "--input", path, "--seed", "9"], capsys)
    assert code == 0
    assert json.loads(first)["pass"] is True
    assert run(["verify", "--input", path, "--seed", "9"], capsys)[1] == first


def test_verify_literal_omega_fails(tmp_path, capsys):
    t = {"n": 3, "p": "2", "q": "2", "r": "6/5", "alpha": "0", "beta": "0", "gamma": "-2", "a": "1"}
    body = {"tuple": t, "trial": {"family": "smooth-bump", "support": [1.0, 2.718281828459045]}}
    path = write(tmp_path, body)
    assert run(["verify", "--input", path], capsys)[0] == 0
    code, out, _ = run(["verify", "--input", path, "--omega-factor", "off"], capsys)
    assert code == 1
    flags = [f for c in json.loads(out)["checks"] for f in c["flags"]]
    assert any(f.startswith("discrepant") for f in flags)


def test_malformed_rational(tmp_path, capsys):
    path = write(tmp_path, {"tuple": dict(HARDY, q="2/x")})
    code, _, err = run(["validate", "--input", path], capsys)
    assert code == 2 and "tuple.q" in err and ":5:" in err


def test_float_rejected(tmp_path, capsys):
    path = write(tmp_path, {"tuple": dict(HARDY, q=2.5)})
    assert run(["validate", "--input", path], capsys)[0] == 2


def test_missing_input(capsys, tmp_path):
    assert run(["validate"], capsys)[0] == 2
    assert run(["validate", "--input", str(tmp_path / "nope.json")], capsys)[0] == 2
    (tmp_path / "bad.json").write_text("{")
    assert run(["validate", "--input", str(tmp_path / "bad.json")], capsys)[0] == 2


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["validate", "--no-such-flag"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    assert run(["identities", "--budget", "0"], capsys)[0] == 2


def test_estimate(tmp_path, capsys):
    body = {"tuple": HARDY, "trial": {"family": "truncated-power"}}
    code, out, _ = run(["estimate", "--input", write(tmp_path, body), "--budget", "30"], capsys)
    data = json.loads(out)
    assert code == 0 and data["hardy_constant"] == 2.0
    assert 1.0 < data["estimates"][0]["best_ratio"] <= 2.0


def test_identities(capsys):
    code, out, _ = run(["identities"], capsys)
    data = json.loads(out)
    assert code == 0 and data["pass"] and len(data["identities"]) == 10


def test_module_entry_point(tmp_path):
    env = dict(os.environ)
    proc = subprocess.run([sys.executable, "-m", "ckn", "validate", "--input", write(tmp_path, {"tuple": HARDY})],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0 and '"Hardy"' in proc.stdout

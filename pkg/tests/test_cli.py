import json

import pytest

from qpvi.arith import get_degree_cap, set_degree_cap
from qpvi.cli import main

ORBIT = ["orbit", "--Theta", "3/2,5/3,7/4,9/5", "--q", "11/10", "--t0", "2", "--y0", "5/2", "--z0", "7/3",
         "--steps", "3"]


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_orbit_is_deterministic(capsys):
    code, a, _ = run(capsys, ORBIT)
    assert code == 0
    _, b, _ = run(capsys, ORBIT)
    assert a == b
    rows = [json.loads(line) for line in a.splitlines()]
    assert [r["ell"] for r in rows] == [0, 1, 2, 3]
    assert rows[0]["y"] == "5/2" and rows[0]["exact"]


def test_orbit_rejects_float_in_exact_backend(capsys):
    argv = ORBIT.copy()
    argv[argv.index("5/2")] = "2.5"
    code, _, err = run(capsys, argv)
    assert code == 2 and ("numeric backend" in err or "exact number" in err)


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"command": "lax", "theta": ["1/2", "1/3", "1/5", "1/7"], "q": "2",
                               "t0": "3", "y0": "5/2", "Z0": "1/4"}))
    code, out, _ = run(capsys, ["--config", str(cfg)])
    assert code == 0
    code, _, err = run(capsys, ["--config", str(cfg), "lax", "--q", "2"])
    assert code == 2 and "mutually exclusive" in err


def test_missing_parameter(capsys):
    code, _, err = run(capsys, ["lax", "--q", "2"])
    assert code == 2 and "missing" in err


def test_confluence_report(capsys):
    code, out, _ = run(capsys, ["confluence", "--theta", "1/2,1/3,1/5,1/7", "--t0", "2", "--y0", "3",
                                "--Z0", "1/4", "--n-max", "3"])
    assert code == 0
    assert "a_n" in out or "euler" in out


def test_resource_cap_exit_code(capsys):
    old = get_degree_cap()
    set_degree_cap(6)
    try:
        code, _, err = run(capsys, ["confluence", "--theta", "1/2,1/3,1/5,1/7", "--t0", "2", "--y0", "3",
                                    "--Z0", "1/4", "--n-max", "5"])
    finally:
        set_degree_cap(old)
    assert code == 3 and "resource cap" in err


def test_okamoto_diagram(capsys):
    code, out, _ = run(capsys, ["okamoto", "--diagram", "diff-okamoto", "--theta", "1/2,1/3,1/5,1/7",
                                "--t0", "2", "--format", "json"])
    assert code == 0
    d = json.loads(out)
    assert {c["self_intersection"] for c in d["components"].values()} == {-2}


def test_okamoto_trajectory_csv(capsys):
    code, out, _ = run(capsys, ["okamoto", "--theta", "1/2,1/3,1/5,1/7", "--t0", "2", "--t1", "2.01",
                                "--chart", "b0-.1", "--a", "0", "--b", "3/4", "--format", "csv"])
    assert code == 0
    assert out.splitlines()[0] == "t,chart,c1,c2"


def test_verify_suite(capsys):
    code, out, _ = run(capsys, ["verify", "--suite", "lax"])
    assert code == 0 and out.count("PASS") == 2


@pytest.mark.parametrize("argv", [["verify", "--suite", "nope"], ["bogus"], []])
def test_bad_invocations(capsys, argv):
    assert run(capsys, argv)[0] == 2

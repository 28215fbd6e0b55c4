from __future__ import annotations

import json

import pytest

from typeq.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_field(capsys):
    code, out, _ = run(capsys, "field", 3, 2)
    assert code == 0
    assert json.loads(out) == {"p": 3, "s": 2, "modulus": [2, 1]}


@pytest.mark.parametrize("argv", [("field", 2, 1), ("field", 6, 1)])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_bad_chen_params_exit_2(capsys, tmp_path):
    code, _, _ = run(capsys, "construct", "chen", "--p", 5, "--s", 2, "--m", 2, "--out", tmp_path)
    assert code == 2


@pytest.mark.parametrize(
    "construction,extra",
    [
        ("chen", ()),
        ("chen", ("--m", 2, "--K", "1,2")),
        ("chen", ("--random", "--seed", 3)),
        ("chen-preset-original", ()),
        ("wx", ("--c", 3)),
        ("wx-preset-original", ()),
    ],
)
def test_construct_then_verify_bundle(capsys, tmp_path, construction, extra):
    code, out, _ = run(capsys, "construct", construction, "--p", 3, "--s", 2, "--out", tmp_path, *extra)
    assert code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["C0.json", "C1.json", "C2.json", "C3.json", "spread.json"]
    code, out, _ = run(capsys, "verify", "bundle", tmp_path)
    report = json.loads(out)
    assert code == 0 and report["pass"]
    assert report["details"]["certificate"]["parameters"] == [324, 153, 72]


def test_out_dir_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("TYPEQ_OUT", str(tmp_path / "env"))
    assert run(capsys, "construct", "chen", "--p", 3, "--s", 2)[0] == 0
    assert (tmp_path / "env" / "C0.json").exists()


@pytest.mark.parametrize("method", ["direct", "hyperplane", "both"])
def test_verify_type_q(capsys, tmp_path, method):
    run(capsys, "construct", "wx", "--p", 5, "--s", 2, "--out", tmp_path)
    code, out, _ = run(capsys, "verify", "type-q", tmp_path / "C1.json", "--method", method)
    report = json.loads(out)
    assert code == 0 and report["spectrum"] == {"-19": 156, "6": 468}


def test_tampered_set_fails(capsys, tmp_path):
    run(capsys, "construct", "chen", "--p", 3, "--s", 2, "--out", tmp_path)
    path = tmp_path / "C0.json"
    d = json.loads(path.read_text())
    d["points"][0] = [0, 0] if d["points"][0] != [0, 0] else [1, 1]
    path.write_text(json.dumps(d))
    code, out, _ = run(capsys, "verify", "type-q", path)
    assert code == 1 and not json.loads(out)["pass"]
    code, out, _ = run(capsys, "verify", "bundle", tmp_path)
    assert code == 1
    reasons = {v["reason"] for v in json.loads(out)["violations"]}
    assert {"ContainsOrigin", "NotTypeQ"} <= reasons


def test_verify_spread(capsys, tmp_path):
    run(capsys, "construct", "wx", "--p", 3, "--s", 2, "--out", tmp_path)
    code, out, _ = run(capsys, "verify", "spread", tmp_path / "spread.json")
    assert code == 0 and json.loads(out)["details"]["kind"] == "twisted"


def test_missing_file_exit_2(capsys, tmp_path):
    assert run(capsys, "verify", "type-q", tmp_path / "nope.json")[0] == 2


def test_construct_is_deterministic(capsys, tmp_path):
    for sub in ("a", "b"):
        run(capsys, "construct", "chen", "--p", 5, "--s", 2, "--random", "--seed", 9, "--out", tmp_path / sub)
    for name in ("C0.json", "C3.json", "spread.json"):
        assert (tmp_path / "a" / name).read_text() == (tmp_path / "b" / name).read_text()


def test_check_tables(capsys):
    code, out, _ = run(capsys, "check", "tables", "--p", 3, "--s", 2)
    report = json.loads(out)
    assert code == 0 and report["details"]["cells"] == 80


def test_check_gauss(capsys):
    code, out, _ = run(capsys, "check", "gauss", "--p", 5, "--s", 2)
    d = json.loads(out)
    assert code == 0 and d["pass"] and d["G"]["coeffs"] == [-5, 0, 0, 0]


def test_check_lemmas(capsys):
    code, out, _ = run(capsys, "check", "lemmas", "--p", 3, "--s", 2)
    d = json.loads(out)
    assert code == 0 and d["pass"]
    assert d["wx_variant0"] == {"pairs": 80, "mismatches": 0}


def test_suite_small(capsys):
    code, out, _ = run(capsys, "suite", "acceptance", "--max-q", 3)
    assert code == 0 and "10/10 criteria passed" in out

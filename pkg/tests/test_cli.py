from __future__ import annotations

import json

import pytest

from qsklyanin.catalog import by_name
from qsklyanin.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_op_apply_y_on_chi1(capsys):
    code, out = run(capsys, "op", "apply", "--name", "Y", "--to", "chi:1")
    assert code == 0
    assert out.strip() == "1/1*s^4 + -1/1 / 1/1*s^2"


def test_op_apply_json(capsys):
    code, out = run(capsys, "op", "apply", "--name", "M2", "--to", "one", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"num": "0/1", "den": "1/1"}


def test_op_compose_shifts_cancel(capsys):
    code, out = run(capsys, "op", "compose", "--names", "Tplus,Tminus")
    assert code == 0
    assert json.loads(out) == {"terms": [{"shift": 0, "num": "1/1", "den": "1/1"}]}


def test_op_equal_files(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(by_name("Y").to_json())
    b.write_text(by_name("U").to_json())
    assert run(capsys, "op", "equal", "--lhs", f"file:{a}", "--rhs", "Y") == (0, "true\n")
    assert run(capsys, "op", "equal", "--lhs", f"file:{a}", "--rhs", f"file:{b}") == (1, "false\n")


def test_op_usage_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert main(["op", "equal", "--lhs", f"file:{bad}", "--rhs", "Y"]) == 2
    assert main(["op", "apply", "--name", "Nope", "--to", "one"]) == 2
    assert main(["op", "apply", "--name", "Y", "--to", "chi:x"]) == 2
    assert main(["op", "apply", "--name", "Y"]) == 2


def test_verify_single_entry(capsys):
    code, out = run(capsys, "verify", "--suite", "SKA3_REL", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert rep["suite"] == "SKA3_REL"
    assert [r["id"] for r in rep["results"]] == ["SKA3_REL"]
    assert rep["results"][0]["ms"] is None


def test_verify_flagged_exit_code(capsys):
    code, out = run(capsys, "verify", "--suite", "SKA3_REL,APPENDIX_01")
    assert code == 3
    assert "APPENDIX_01" in out and "computed" in out


def test_verify_unknown_suite():
    assert main(["verify", "--suite", "bogus"]) == 2


def test_verify_seed_env(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("QSKLYANIN_SEED", "17")
    out = tmp_path / "r.json"
    assert main(["verify", "--suite", "UV_CAS", "--fast", "--format", "json", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["seed"] == 17
    assert main(["verify", "--suite", "UV_CAS", "--seed", "3", "--format", "json", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["seed"] == 3
    monkeypatch.setenv("QSKLYANIN_SEED", "x")
    assert main(["verify", "--suite", "UV_CAS"]) == 2


def test_aw_eval_eigen(capsys):
    code, out = run(capsys, "aw", "eval", "--n", "2", "--eigen", "--format", "json")
    assert code == 0
    assert json.loads(out)["eigen_ok"] is True


def test_aw_eval_numeric_params(capsys):
    code, out = run(capsys, "aw", "eval", "--n", "1", "--a", "1/3", "--b", "2", "--c", "5", "--d", "7")
    assert code == 0 and out.strip()
    code, out = run(capsys, "aw", "eval", "--n", "1", "--a", "1/2", "--b", "2")
    assert code == 1 and "NormalizationVanishes" in out
    assert main(["aw", "eval", "--n", "-1"]) == 2


def test_rep_n2(capsys):
    code, out = run(capsys, "rep", "--N", "2", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert set(rep["matrices"]) == set("ABCD")
    assert all(len(m) == 2 for m in rep["matrices"].values())
    assert set(rep["checks"].values()) == {"pass"}


def test_rep_generic_t_leaks(capsys):
    code, out = run(capsys, "rep", "--N", "3", "--skip-trunc", "--format", "json")
    rep = json.loads(out)
    assert code == 1
    assert rep["error"] == "NotInvariant" and rep["generator"] == "B" and rep["leakage"]


def test_rep_bad_n():
    assert main(["rep", "--N", "0"]) == 2


def test_sheun_derive(capsys):
    code, out = run(capsys, "sheun", "derive", "--check", "4", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["no_new_constraints"] is True
    assert main(["sheun", "derive", "--check", "1"]) == 2


def test_heun_build_alpha3(capsys):
    code, out = run(capsys, "heun", "build", "--alphas", "0,0,1,0,0,0", "--betas", "0,0,0", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert rep["r"][1] == "1/1*s^8 / 1/1"
    assert rep["p1"] == {"x": "0/1 / 1/1", "const": "1/1 / 1/1"}


def test_heun_reduce(capsys):
    code, out = run(capsys, "heun", "reduce", "--word", "(* M2 M1)", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert set(rep) == {"M1*M2", "L*L"}
    code, out = run(capsys, "heun", "reduce", "--word", "(* R1 R1)")
    assert code == 1 and "NotReducible" in out
    assert main(["heun", "reduce", "--word", "(* L"]) == 2
    assert main(["heun", "build", "--alphas", "1,2"]) == 2


def test_missing_command():
    with pytest.raises(SystemExit):
        main([])

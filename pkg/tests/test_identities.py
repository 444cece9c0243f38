from __future__ import annotations

import json

import pytest

from qsklyanin.catalog import make_YUV
from qsklyanin.exactalg import RatF, parse_ratf, sym
from qsklyanin.identities import (
    CASES,
    CORE_IDS,
    SUITES,
    LinearClaim,
    PropClaim,
    UnknownIdentity,
    ValueClaim,
    T,
    check_claim,
    exit_code,
    fit_scalars,
    report_json,
    report_text,
    resolve_ids,
    run_suite,
    verify,
    witness_sound,
)
from qsklyanin.qop import chi, identity, one

s = sym("s")
q = s**2
FLAGGED = {"AW3_PARAMS", "B_EXPR", "X_CLEARED", "APPENDIX_01"}


def _yuv():
    g = make_YUV()
    return g["Y"], g["U"], g["V"]


def test_registry_contents():
    assert len(CORE_IDS) == 42
    assert set(SUITES["polys"]) == {"EIGEN_AW", "EIGEN_FACT", "EIGEN_KM", "CONT1", "CONT2", "SHIFT"}
    assert set(SUITES["all"]) == set(CASES)


def test_resolve_subset_and_unknown():
    assert resolve_ids("FACT1,FACT2") == ("FACT1", "FACT2")
    assert resolve_ids(["core"]) == CORE_IDS
    with pytest.raises(UnknownIdentity):
        resolve_ids("FACT1,NOPE")
    with pytest.raises(UnknownIdentity):
        verify("NOPE")


def test_true_claim_passes():
    Y, U, V = _yuv()
    claim = LinearClaim("cas", U @ V, [T("1", identity()), T("Y^2", Y @ Y, -1 / q)])
    assert check_claim(claim) == ("pass", None)


def test_wrong_scalar_is_flagged_with_both_values():
    Y, U, V = _yuv()
    claim = LinearClaim("cas", U @ V, [T("1", identity()), T("Y^2", Y @ Y, 1 / q)])
    status, wit = check_claim(claim)
    assert status == "flagged"
    (sc,) = wit["scalars"]
    assert sc["term"] == "Y^2"
    assert parse_ratf(sc["computed"]) == -1 / q
    assert parse_ratf(sc["claimed"]) == 1 / q


def test_missing_term_fails_with_sound_witness():
    Y, U, V = _yuv()
    claim = LinearClaim("cas", U @ V, [T("1", identity())])
    status, wit = check_claim(claim)
    assert status == "fail" and wit["residual"]
    assert witness_sound(claim)
    assert fit_scalars(claim) is None


def test_unfittable_claim_is_not_refitted():
    Y, U, V = _yuv()
    claim = LinearClaim("cas", U @ V, [T("1", identity()), T("Y^2", Y @ Y, 1 / q)], fittable=False)
    assert check_claim(claim)[0] == "fail"


def test_prop_claim_statuses():
    Y = _yuv()[0]
    ok = PropClaim("Y chi1", Y, chi(1), one(), q - 1 / q)
    assert check_claim(ok) == ("pass", None)
    off = PropClaim("Y chi1", Y, chi(1), one(), q)
    assert check_claim(off)[0] == "flagged"
    bad = PropClaim("Y chi2", Y, chi(2), one(), q)
    assert check_claim(bad)[0] == "fail"


def test_value_claim():
    assert check_claim(ValueClaim("v", q, q))[0] == "pass"
    assert check_claim(ValueClaim("v", q, 1 / q))[0] == "fail"


@pytest.mark.parametrize("case_id", [i for i in CORE_IDS if i not in FLAGGED])
def test_core_identity_passes(case_id):
    assert verify(case_id)["status"] == "pass"


@pytest.mark.parametrize("case_id", sorted(FLAGGED))
def test_flagged_identities_carry_scalars(case_id):
    entry = verify(case_id)
    assert entry["status"] == "flagged"
    assert all(w.get("scalars") for w in entry["witness"])


def test_aw3_nu0_refit():
    entry = verify("AW3_PARAMS")
    found = {sc["term"]: sc["computed"] for w in entry["witness"] for sc in w["scalars"]}
    assert any(parse_ratf(v) == (q - 1 / q) ** 2 for v in found.values())


def test_appendix_01_scalar():
    (w,) = verify("APPENDIX_01")["witness"]
    (sc,) = w["scalars"]
    assert parse_ratf(sc["computed"]) == -((q - 1 / q) ** 2)


def test_fast_mode_agrees_and_adds_probe():
    for cid in ("SKA3_REL", "B_EXPR"):
        slow, fast = verify(cid), verify(cid, fast=True)
        assert fast["status"] == slow["status"]
        assert "probe" in fast and "probe" not in slow
    assert verify("SKA3_REL", fast=True)["probe"] == "pass"
    assert verify("B_EXPR", fast=True)["probe"] == "fail"


def test_timings_flag():
    assert verify("UV_CAS")["ms"] is None
    assert isinstance(verify("UV_CAS", timings=True)["ms"], int)


def test_report_is_deterministic_and_schema_shaped():
    ids = ["FACT1", "FACT2", "APPENDIX_01"]
    a = report_json(run_suite(ids, seed=5, fast=True))
    b = report_json(run_suite(ids, seed=5, fast=True, jobs=2))
    assert a == b
    rep = json.loads(a)
    assert rep["suite"] == "FACT1,FACT2,APPENDIX_01" and rep["seed"] == 5
    assert [r["id"] for r in rep["results"]] == ids
    for r in rep["results"]:
        assert set(r) == {"id", "status", "witness", "ms", "probe"}


def test_exit_codes():
    assert exit_code({"results": [{"status": "pass"}]}) == 0
    assert exit_code({"results": [{"status": "pass"}, {"status": "flagged"}]}) == 3
    assert exit_code({"results": [{"status": "fail"}, {"status": "flagged"}]}) == 1


def test_report_text_lists_scalars():
    text = report_text(run_suite(["APPENDIX_01"]))
    assert "APPENDIX_01" in text and "claimed" in text and "computed" in text

"""Stage sequencing and report shape of the verification pipeline."""

import pytest

from hoval.pipeline import STAGE_ORDER, run_verify_all


@pytest.fixture(scope="module")
def full321():
    return run_verify_all(3, 2, 1)


def test_full_run_passes(full321):
    rep = full321
    assert rep.verdict == "pass"
    assert tuple(s.name for s in rep.stages) == STAGE_ORDER
    assert all(s.status == "ok" and s.ok for s in rep.stages)
    assert all(s.error is None for s in rep.stages)


def test_stage_payloads(full321):
    rep = full321
    c = rep.stage("construct")
    assert c.data["points"] == 66 and c.data["is_arc"] is True
    s = rep.stage("spectrum")
    assert s.data["directions"] == 63
    assert s.data["histogram"]["counts"] == {
        "0": 1376, "1": 2772, "3": 588, "7": 9
    }
    lin = rep.stage("linearity")
    assert lin.data["rank"] == 6 and lin.data["scattered"] is True
    ps = rep.stage("pseudoregulus")
    assert ps.data["exponents"] == [1, 5]
    assert ps.data["long_secants"] == 9
    sp = rep.stage("spread")
    assert sp.data["elements"] == 65 and sp.data["matches_canonical"] is True
    pl = rep.stage("plane")
    assert pl.data["order"] == 64 and pl.data["hyperoval_ok"] is True
    cp = rep.stage("cplanes")
    assert cp.data["planes"] == 72
    assert all(a["ok"] for a in cp.data["axioms"].values())
    assert "A4" in cp.data["axioms"]


def test_control_case_fails_at_spectrum():
    rep = run_verify_all(4, 2, 2, strict=False)
    assert rep.verdict == "fail"
    c = rep.stage("construct")
    assert c.ok, "construction itself succeeds for the non-coprime exponent"
    assert c.data["is_arc"] is False
    assert "collinear_witness" in c.data
    s = rep.stage("spectrum")
    assert s.status == "fail"
    assert s.data["directions"] == 85
    assert s.data["conforms"] is False
    # everything after the failing stage is skipped
    after = [st for st in rep.stages if st.name not in ("construct", "spectrum")]
    assert after and all(st.status == "skipped" for st in after)


def test_stage_subset_runs_prereqs_silently():
    rep = run_verify_all(3, 2, 1, stages=("spectrum",))
    assert [s.name for s in rep.stages] == ["spectrum"]
    assert rep.verdict == "pass"
    assert rep.stage("spectrum").data["directions"] == 63


def test_failing_prereq_is_surfaced():
    rep = run_verify_all(4, 2, 2, strict=False, stages=("linearity",))
    # spectrum fails silently but must land in the report anyway
    names = [s.name for s in rep.stages]
    assert "spectrum" in names
    assert rep.stage("spectrum").status == "fail"
    assert rep.stage("linearity").status == "skipped"
    assert rep.verdict == "fail"


def test_unknown_stage_rejected():
    with pytest.raises(ValueError):
        run_verify_all(3, 2, 1, stages=("nonsense",))


def test_json_dict_shape(full321):
    d = full321.to_json_dict()
    assert d["schema"] == 1
    assert d["kind"] == "verification_report"
    assert d["verdict"] == "pass"
    assert d["params"]["h"] == 3 and d["params"]["q"] == 8
    assert all("seconds" in s for s in d["stages"])
    bare = full321.to_json_dict(include_timings=False)
    assert all("seconds" not in s for s in bare["stages"])


def test_reports_are_deterministic():
    a = run_verify_all(3, 2, 1, stages=("construct", "spectrum"))
    b = run_verify_all(3, 2, 1, stages=("construct", "spectrum"))
    assert a.to_json_dict(include_timings=False) == b.to_json_dict(
        include_timings=False
    )

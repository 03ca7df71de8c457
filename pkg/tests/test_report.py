import json

import pytest

from overdet import catalog
from overdet.report import SCHEMA, AnalysisError, AnalyzeOptions, analyze, _check_consistency
from overdet.sysparse import parse

TOP_KEYS = {"schema", "tool_version", "seed", "system", "shifts", "principal_part", "ellipticity",
            "resolution", "char_variety", "m", "ext", "omega", "verdict", "removability",
            "flagcover"}


def report(name, **kw):
    kw.setdefault("samples", 100)
    kw.setdefault("omega_pairs", 50)
    return analyze(catalog.system(name), AnalyzeOptions(**kw))


def test_schema_keys():
    data = report("cr2").data
    assert set(data) == TOP_KEYS
    assert data["schema"] == SCHEMA
    assert set(data["resolution"]) == {"ranks", "shifts", "length", "truncated", "max_len",
                                       "matrices", "exactness_certified", "dropped_rows"}
    assert set(data["verdict"]) == {"elliptic", "dimV", "m", "classification", "compact_removable",
                                    "max_removable_submanifold_dim", "sharpness_note", "notes"}
    assert set(data["omega"]) >= {"t", "shift", "identity_checks", "identity_failures",
                                  "degenerate_pair", "det_nonzero"}


def test_cr2_verdict():
    data = report("cr2", query_dims=[0, 1]).data
    v = data["verdict"]
    assert (v["dimV"], v["m"], v["classification"], v["compact_removable"],
            v["max_removable_submanifold_dim"]) == (2, 2, "overdetermined", True, 0)
    assert data["ext"]["0"]["status"] == "trivial"
    assert data["ext"]["1"]["status"] == "trivial"
    assert data["removability"] == {"0": "removable", "1": "sharp-counterexample"}
    assert data["omega"]["identity_failures"] == 0
    assert data["omega"]["degenerate_pair"] is None


def test_laplace_verdict():
    v = report("laplace2").data["verdict"]
    assert v["classification"] == "determined" and not v["compact_removable"]


def test_example2_verdict():
    data = report("example2_n3d1", query_dims=[1]).data
    assert data["char_variety"]["dim"] == 1 == 3 - 1 - 1
    assert data["removability"]["1"] == "sharp-counterexample"
    assert data["verdict"]["sharpness_note"]


def test_wave_report():
    data = report("wave2").data
    assert data["ellipticity"]["status"] == "NotElliptic"
    assert data["ellipticity"]["witness"] == ["1", "1"]
    assert data["omega"]["degenerate_pair"]["xi"] == ["1", "1"]
    assert not data["verdict"]["compact_removable"]


def test_json_roundtrip_and_text():
    r = report("grad2")
    assert json.loads(r.to_json()) == r.data
    assert r.to_text().startswith("system        grad2")


def test_system_echo_reparses():
    data = report("example2_n4d2").data
    spec = parse(data["system"]["text"])
    assert spec.nvars == data["system"]["nvars"] == 4


def test_consistency_assertion():
    data = report("cr1").data
    _check_consistency(data)
    data["m"] += 1
    with pytest.raises(AssertionError):
        _check_consistency(data)


def test_stage_labelled_errors():
    spec = parse("vars 2; unknowns 1; eq d1; eq 0;")
    with pytest.raises(AnalysisError) as exc:
        analyze(spec)
    assert exc.value.stage == "shifts"


def test_all_catalog_reports_consistent():
    for name in catalog.names():
        if name == "cr3":
            continue
        data = report(name, omega=False).data
        assert data["m"] == data["system"]["nvars"] - data["char_variety"]["dim"]
        assert data["resolution"]["length"] <= data["system"]["nvars"]

import json

import pytest

from msgrav import catalog
from msgrav.errors import MsgravError
from msgrav.report import (CheckConfig, emit_report, report_csv, report_json,
                           run_check, sample_points)


def cfg(model="eh", metric="minkowski", **kw):
    return CheckConfig(model=model, spec=catalog.builtin(metric), **kw)


def test_config_validation():
    with pytest.raises(MsgravError):
        cfg(model="xx")
    with pytest.raises(MsgravError):
        cfg(points=0)
    with pytest.raises(MsgravError):
        cfg(tolerances={"holonomy": -1.0})
    with pytest.raises(MsgravError):
        cfg(fmt="xml")


def test_sampling_is_seeded_and_inside_the_box():
    spec = catalog.builtin("schwarzschild")
    a = sample_points(spec, 10, seed=5)
    b = sample_points(spec, 10, seed=5)
    c = sample_points(spec, 10, seed=6)
    assert a == b and a != c
    assert all(spec.contains(x) for x in a)


def test_minkowski_all_families_pass():
    r = run_check(cfg(points=4))
    assert r.verdict == "pass"
    assert all(f["pass"] for f in r.families)
    assert {f["family"] for f in r.families} == {
        "holonomy", "momenta-identity", "hamiltonian-dual-form",
        "projectability", "einstein-constraint",
        "einstein-constraint-derivative", "field-equation"}
    assert max(f["max_resid"] for f in r.families) < 1e-12


def test_flrw_fails_the_einstein_family():
    r = run_check(cfg(metric="flrw", points=4))
    by_name = {f["family"]: f for f in r.families}
    assert r.verdict == "fail"
    assert not by_name["einstein-constraint"]["pass"]
    assert by_name["einstein-constraint"]["max_resid"] > 0.01
    assert by_name["momenta-identity"]["pass"]
    # the verdict is the conjunction of the family flags
    assert (r.verdict == "pass") == all(f["pass"] for f in r.families)


def test_tolerance_override_flips_outcome():
    loose = {"einstein-constraint": 10.0,
             "einstein-constraint-derivative": 10.0,
             "field-equation": 10.0}
    r = run_check(cfg(metric="flrw", points=3, tolerances=loose))
    assert r.verdict == "pass"


def test_ep_families_on_levi_civita():
    r = run_check(cfg(model="ep", metric="schwarzschild", points=4))
    assert r.verdict == "pass"
    assert {f["family"] for f in r.families} == {
        "momenta-identity", "projectability", "eh-equivalence",
        "metric-equation", "pre-metricity", "torsion",
        "torsion-derivative", "integrability", "field-equation"}


def test_json_report_is_valid_and_full_precision():
    r = run_check(cfg(metric="flrw", points=3))
    text = report_json(r)
    obj = json.loads(text)
    assert list(obj) == ["model", "metric", "seed", "points", "skipped",
                        "families", "verdict", "version"]
    for fam, parsed in zip(r.families, obj["families"]):
        # 17 significant digits round-trip doubles exactly
        assert parsed["max_resid"] == fam["max_resid"]
        assert parsed["worst_point"] == fam["worst_point"]


def test_serial_and_threaded_reports_are_byte_identical():
    base = dict(model="ep", spec=catalog.builtin("kasner"), points=6, seed=9)
    serial = report_json(run_check(CheckConfig(**base, threads=1)))
    threaded = report_json(run_check(CheckConfig(**base, threads=4)))
    assert serial == threaded


def test_csv_report_shape():
    r = run_check(cfg(points=3, fmt="csv"))
    lines = report_csv(r).strip().splitlines()
    assert lines[0] == "family,points,max_resid,mean_resid,tol,pass"
    assert len(lines) == 1 + len(r.families)
    assert all(line.endswith(",pass") for line in lines[1:])


def test_emit_report_writes_file(tmp_path):
    r = run_check(cfg(points=2))
    path = tmp_path / "report.json"
    text = emit_report(r, fmt="json", path=str(path))
    assert path.read_text(encoding="utf-8") == text
    with pytest.raises(MsgravError):
        emit_report(r, fmt="json", path=str(tmp_path / "no" / "dir.json"))

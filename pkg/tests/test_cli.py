import csv
import io
import json

import numpy as np
import pytest

from ptmoments.bounds3d import classify_triple, envelope
from ptmoments.cli import EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE, MESH_COLUMNS, main, surface_rows
from ptmoments.qstate import BellDiagonalParams, is_bell_separable, make_werner


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_triples(capsys):
    code, out, _ = run(capsys, "classify", "--p2", "1", "--p3", "0.25", "--p4", "0.25")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["classification"] == "Entangled"
    assert rep["negativity"] == pytest.approx(1, abs=1e-9)
    code, out, _ = run(capsys, "classify", "--p2", "0.25", "--p3", "0.0625", "--p4", "0.015625")
    assert code == EXIT_OK and json.loads(out)["classification"] == "Separable"
    code, out, _ = run(capsys, "classify", "--p2", "0.5", "--p3", "0.25", "--p4", "0.2")
    assert code == EXIT_INFEASIBLE and json.loads(out)["classification"] == "Infeasible"


def test_classify_report_keys(capsys):
    _, out, _ = run(capsys, "classify", "--p2", "0.5", "--p3", "0.25", "--p4", "0.13")
    rep = json.loads(out)
    for key in ("classification", "p", "F_minus", "F_mid", "F_plus", "negativity", "concurrence_interval"):
        assert key in rep
    assert len(rep["p"]) == 4


def test_classify_state_file(capsys, tmp_path):
    path = tmp_path / "w.json"
    path.write_text(json.dumps(make_werner(0.8).to_json()))
    code, out, _ = run(capsys, "classify", "--state", str(path))
    rep = json.loads(out)
    assert code == EXIT_OK and rep["classification"] == "Entangled"
    assert rep["negativity"] == pytest.approx((3 * 0.8 - 1) / 2, abs=1e-9)


def test_malformed_state_names_the_field(capsys, tmp_path):
    doc = make_werner(0.5).to_json()
    doc["matrix"][1][3] = "oops"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "classify", "--state", str(path))
    assert code == EXIT_USAGE and "matrix[1][3]" in err
    path.write_text("{not json")
    assert run(capsys, "classify", "--state", str(path))[0] == EXIT_USAGE
    assert run(capsys, "classify", "--state", str(tmp_path / "missing.json"))[0] == EXIT_USAGE


def test_usage_errors(capsys):
    assert run(capsys, "classify", "--p2", "0.5")[0] == EXIT_USAGE
    assert run(capsys, "classify", "--p2", "x", "--p3", "0", "--p4", "0")[0] == EXIT_USAGE
    assert run(capsys, "nonsense")[0] == EXIT_USAGE
    assert run(capsys, "surface", "--n", "1")[0] == EXIT_USAGE


def test_bounds_command(capsys):
    code, out, _ = run(capsys, "bounds", "--p2", "0.5", "--p3", "0.25")
    rep = json.loads(out)
    assert code == EXIT_OK
    assert (rep["m"], rep["M"], rep["F_minus"], rep["F_plus"]) == pytest.approx((-1 / 256, 0, 1 / 8, 9 / 64))
    assert (rep["s_min"], rep["s_max"]) == pytest.approx((1, (3 + 2 ** 0.5) / 4))
    assert run(capsys, "bounds", "--p2", "1.2", "--p3", "0.5")[0] == EXIT_INFEASIBLE


def test_eps_from_environment(capsys, monkeypatch):
    # F(0.4, 0.175) = 0.08 lies inside [F-, F+]
    args = ("classify", "--p2", "0.4", "--p3", "0.175", "--p4", "0.0800002")
    assert json.loads(run(capsys, *args)[1])["classification"] == "Entangled"
    monkeypatch.setenv("PTMOM_EPS", "1e-3")
    rep = json.loads(run(capsys, *args)[1])
    assert rep["classification"] == "Separable" and rep["eps"] == 1e-3
    monkeypatch.setenv("PTMOM_EPS", "abc")
    assert run(capsys, *args)[0] == EXIT_USAGE


def test_surface_small_grid(capsys):
    code, out, _ = run(capsys, "surface", "--n", "2")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK and tuple(rows[0]) == MESH_COLUMNS
    # the p2 = 1/4 column collapses to one point
    assert [(float(r["p2"]), float(r["p3"])) for r in rows] == pytest.approx([(0.25, 1 / 16), (1, 0.25), (1, 1)])


def test_surface_envelope_and_format_parity(capsys, tmp_path):
    csv_path, json_path = tmp_path / "s.csv", tmp_path / "s.json"
    assert run(capsys, "surface", "--n", "64", "--out", str(csv_path))[0] == EXIT_OK
    assert run(capsys, "surface", "--n", "64", "--format", "json", "--out", str(json_path))[0] == EXIT_OK
    rows = list(csv.DictReader(csv_path.open()))
    doc = json.loads(json_path.read_text())
    assert len(doc) == len(rows) == 1 + 63 * 64
    for r, d in zip(rows, doc):
        assert [float(r[c]) for c in MESH_COLUMNS] == [d[c] for c in MESH_COLUMNS]
        lo, hi = envelope((d["p2"], d["p3"]))
        assert lo - 1e-12 <= d["F_minus"] <= d["F_plus"] <= hi + 1e-12


def test_outputs_are_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        run(capsys, "family", "bell", "--samples", "50", "--seed", "3", "--out", str(path))
    assert a.read_bytes() == b.read_bytes()
    assert run(capsys, "verify", "--n", "1", "--seed", "4")[1] == run(capsys, "verify", "--n", "1", "--seed", "4")[1]


def test_numbers_round_trip(capsys):
    _, out, _ = run(capsys, "surface", "--n", "8")
    rows = list(csv.DictReader(io.StringIO(out)))
    ref = surface_rows(8)
    assert [float(r["F_plus"]) for r in rows] == [x.F_plus for x in ref]


def test_unwritable_path(capsys, tmp_path):
    target = tmp_path / "missing" / "dir" / "s.csv"
    code, _, err = run(capsys, "surface", "--n", "4", "--out", str(target))
    assert code == EXIT_USAGE and err


def test_werner_family_switches_once(capsys):
    code, out, _ = run(capsys, "family", "werner", "--samples", "3")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK
    assert [r["classification"] for r in rows] == ["Separable", "Entangled", "Entangled"]
    _, out, _ = run(capsys, "family", "werner", "--samples", "301")
    rows = list(csv.DictReader(io.StringIO(out)))
    labels = [r["classification"] for r in rows]
    switches = [i for i in range(1, len(labels)) if labels[i] != labels[i - 1]]
    assert len(switches) == 1
    i = switches[0]
    assert float(rows[i - 1]["w"]) == pytest.approx(1 / 3, abs=1e-12)


def test_bell_family_examples(capsys):
    code, out, _ = run(capsys, "family", "bell", "--t", "-1,-1,-1", "--format", "json")
    (row,) = json.loads(out)
    assert code == EXIT_OK and row["classification"] == "Entangled"
    assert (row["p2"], row["p3"], row["p4"]) == pytest.approx((1, 0.25, 0.25))
    _, out, _ = run(capsys, "family", "bell", "--t", "0.4,0.3,0.2", "--format", "json")
    (row,) = json.loads(out)
    assert row["classification"] == "Separable"
    assert classify_triple(row["p2"], row["p3"], row["p4"]).value == "Separable"
    code, _, err = run(capsys, "family", "bell", "--t", "1,1,1")
    assert code == EXIT_USAGE and "1 - t1 - t2 - t3" in err


def test_bell_cloud_agrees_with_separability(capsys):
    _, out, _ = run(capsys, "family", "bell", "--samples", "400", "--seed", "2", "--format", "json")
    for row in json.loads(out):
        sep = is_bell_separable(BellDiagonalParams(row["t1"], row["t2"], row["t3"]))
        margin = 1 - sum(abs(row[k]) for k in ("t1", "t2", "t3"))
        if abs(margin) > 1e-9:
            assert (row["classification"] == "Separable") == sep
            assert row["bell_separable"] == str(sep).lower()


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--n", "300", "--seed", "1", "--oracle-samples", "10")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["violations"] == 0
    assert rep["worst_oracle_deviation"] <= 0.1
    assert rep["oracle_checked"] + rep["oracle_skipped"] == 10
    assert run(capsys, "verify", "--n", "0")[0] == EXIT_USAGE


def test_reconstruct(capsys):
    code, out, _ = run(capsys, "reconstruct", "--p", "1,1,0.25,0.25")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["negativity"] == pytest.approx(1, abs=1e-9)
    assert rep["spectrum"] == pytest.approx([0.5, 0.5, 0.5, -0.5], abs=1e-9)
    assert run(capsys, "reconstruct", "--p", "0.5,0.25,0.2")[0] == EXIT_INFEASIBLE
    assert run(capsys, "reconstruct", "--p", "a,b")[0] == EXIT_USAGE

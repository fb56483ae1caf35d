import json
import pathlib

import pytest

from cuspkit.cli import run, canonical_json, decode_vertex
from cuspkit.presentations import load_structure
from cuspkit.cusped_space import CuspedSpace, build_ball, toy_constants
from cuspkit.bm_checker import ddagger

from conftest import F2_DOC, Z2_DOC, Z2xZ2_DOC

TOY_F2 = {"delta": 1, "C": -14, "M": 4, "k": 2, "K": 8,
          "R": {"slope": 0, "intercept": 4}}


@pytest.fixture()
def files(tmp_path):
    paths = {}
    for name, doc in (("f2", F2_DOC), ("z2", Z2_DOC), ("z2xz2", Z2xZ2_DOC),
                      ("toy", TOY_F2)):
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(doc))
        paths[name] = str(p)
    return paths


def test_constants_exit_and_values(capsys):
    code, report = run(["constants", "--delta", "1"])
    out = capsys.readouterr().out
    assert code == 0
    assert report["ledger"]["C"] == "3"
    assert report["ledger"]["M"] == "293"
    assert report["ledger"]["k"] == "586"
    assert report["ledger"]["K"] == str(3 * 2 ** 589 + 296)
    assert "2983" in out


def test_find_splitting_f2(files, capsys):
    code, report = run(["find-splitting", "--structure", files["f2"],
                        "--tietze-moves", "0", "--count", "1"])
    assert code == 0
    assert report["verdict"] == "disconnected"
    assert len(report["witness"]["vertices"]) == 2


def test_find_splitting_z2_unknown(files):
    code, report = run(["find-splitting", "--structure", files["z2"],
                        "--tietze-moves", "2", "--word-length", "6",
                        "--count", "60"])
    assert code == 2
    assert report["verdict"] == "unknown"


def test_check_connectivity_unknown_exit2(files):
    code, report = run(["check-connectivity", "--structure", files["f2"],
                        "--toy-constants", files["toy"],
                        "--n-start", "4", "--n-budget", "5"])
    assert code == 2
    assert report["verdict"] == "unknown"
    assert report["certified"] is False
    assert "violating_pair" in report


def test_input_error_exit1(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"generators": ["a"], "mystery": 3}))
    code, report = run(["ball", "--structure", str(bad), "--radius", "2"])
    err = capsys.readouterr().err
    assert code == 1
    assert "mystery" in err


def test_missing_file_exit1():
    code, _ = run(["ball", "--structure", "/nonexistent.json", "--radius", "1"])
    assert code == 1


def test_json_reports_byte_identical(files, tmp_path):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    for out in (out1, out2):
        run(["check-connectivity", "--structure", files["f2"],
             "--toy-constants", files["toy"], "--n-start", "4",
             "--n-budget", "5", "--json", str(out)])
    assert out1.read_bytes() == out2.read_bytes()


def test_ball_export_roundtrip(files, tmp_path):
    out = tmp_path / "ball.json"
    code, _ = run(["ball", "--structure", files["z2xz2"], "--radius", "2",
                   "--json", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    ball = doc["ball"]
    structure = load_structure(files["z2xz2"])
    X = CuspedSpace(structure)
    rebuilt = build_ball(X, 2)
    assert ball["vertex_count"] == len(rebuilt)
    # re-parse the vertices and check the distance table entry by entry
    for vdoc, d in zip(ball["vertices"], ball["distance"]):
        v = decode_vertex(vdoc, structure)
        assert rebuilt.dist[v] == d
    # adjacency is symmetric and consistent
    for i, nbrs in enumerate(ball["adjacency"]):
        for j in nbrs:
            assert i in ball["adjacency"][j]


def test_report_witness_revalidates(files, tmp_path):
    out = tmp_path / "w.json"
    code, _ = run(["check-connectivity", "--structure", files["f2"],
                   "--toy-constants", files["toy"], "--n-start", "4",
                   "--n-budget", "4", "--json", str(out)])
    assert code == 2
    doc = json.loads(out.read_text())
    structure = load_structure(files["f2"])
    x = decode_vertex(doc["violating_pair"][0], structure)
    y = decode_vertex(doc["violating_pair"][1], structure)
    ledger = toy_constants(TOY_F2)
    X = CuspedSpace(structure)
    ball = build_ball(X, ledger.R(4) + 4)
    holds, _ = ddagger(ball, x, y, 10 * ledger.delta, 4, ledger)
    assert not holds


def test_dist_exit_codes(files):
    code, report = run(["dist", "--structure", files["f2"], "--from", "a b",
                        "--to", "a", "--bound", "5"])
    assert code == 0 and report["distance"]["value"] == 1
    code, report = run(["dist", "--structure", files["f2"], "--from", "a b a b",
                        "--to", "B A B A", "--bound", "3"])
    assert code == 2


def test_horoball_probe(capsys):
    code, report = run(["horoball", "probe", "--rank", "1", "--vertex", "0@2",
                        "--to", "8@0"])
    assert code == 0
    assert report["probe"]["distance"] == 4
    assert len(report["probe"]["neighbors"]) == 10


def test_decide_connectivity_z2xz2(files):
    code, report = run(["decide-connectivity", "--structure", files["z2xz2"],
                        "--tietze-moves", "0", "--count", "1"])
    assert code == 0
    assert report["verdict"] == "disconnected"


def test_grushko_cli_deterministic(files, tmp_path):
    outs = []
    for name in ("g1.json", "g2.json"):
        out = tmp_path / name
        run(["grushko", "--structure", files["z2xz2"], "--tietze-moves", "1",
             "--count", "40", "--json", str(out)])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]

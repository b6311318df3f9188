import json
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given

from pairstab.cli import main
from pairstab.serialize import (
    form_from_json,
    form_to_json,
    frame_from_json,
    frame_to_json,
    polytope_from_json,
    polytope_to_json,
    verdict_from_json,
    verdict_to_json,
)
from pairstab.geometry import convex_hull
from pairstab.pairs import Pair, check_pair_numerical
from pairstab.torus import shear_frames
from strategies import forms, points

FIX = Path(__file__).parent / "fixtures"

FIXTURE_COMMANDS = [
    ["hull", str(FIX / "hull_collinear.json")],
    ["hull", str(FIX / "hull_containment.json")],
    ["pair-check", str(FIX / "pair_x2_x4.json")],
    ["pair-check", str(FIX / "pair_xy_x2y2.json")],
    ["hm-check", str(FIX / "hm_x3y.json")],
    ["slope", str(FIX / "slope_x2_x4.json"), "--alphas", "1/10,1/100,1/1000"],
    ["energy", str(FIX / "energy_point.json")],
    ["energy", str(FIX / "energy_point.json"), "--scan", "--samples", "12", "--seed", "4"],
    ["binary", "--enumerate", "e=2", "d=4"],
    ["binary", "--f", "[0:1]^3 * [1:0]", "--g", "1"],
    ["curve", str(FIX / "curve_fermat2.json")],
    ["curve", str(FIX / "curve_fermat3.json")],
]


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pair_check_destabilized(capsys):
    code, out, _ = run(["pair-check", str(FIX / "pair_x2_x4.json")], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["verdict"]["status"] == "DESTABILIZED"
    assert doc["verdict"]["certificate"]["u"] == [1, -1]
    assert doc["seed"] == 20121002


def test_hull_collinear(capsys):
    code, out, _ = run(["hull", str(FIX / "hull_collinear.json")], capsys)
    assert code == 0
    assert json.loads(out)["polytope"]["vertices"] == [["0", "0"], ["2", "2"]]


def test_binary_enumeration_table(capsys):
    code, out, _ = run(["binary", "--enumerate", "e=2", "d=4"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["mismatches"] == 0
    assert doc["count"] == 15 * 70
    assert all(set(r) >= {"f", "g", "closed_form", "polytope", "verdict"} for r in doc["results"])


def test_curve_summary(capsys):
    code, out, _ = run(["curve", str(FIX / "curve_fermat3.json")], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["degrees"] == {"d": 3, "deg_R": 6, "deg_Delta": 6, "mu": 0, "r": 36}
    assert doc["containment"] == "CONTAINED"
    assert len(doc["per_frame"]) == 6


def test_inline_and_stdin_input(capsys, monkeypatch):
    text = (FIX / "hull_collinear.json").read_text()
    _, inline, _ = run(["hull", text], capsys)
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO(text))
    _, piped, _ = run(["hull", "-"], capsys)
    _, from_file, _ = run(["hull", str(FIX / "hull_collinear.json")], capsys)
    assert inline == piped == from_file


@pytest.mark.parametrize(
    "args",
    [
        ["pair-check", '{"v": 3'],
        ["pair-check", '{"v": {"vars": 2, "terms": []}}'],
        ["hull", str(FIX / "does_not_exist.json")],
        ["binary", "--enumerate", "e=2", "x=4"],
        ["pair-check", '{"v": {"vars": "two", "terms": []}, "w": {}}'],
    ],
)
def test_malformed_input_exit_2(args, capsys):
    code, out, err = run(args, capsys)
    assert code == 2
    assert out == ""
    assert err.startswith("error:")


@pytest.mark.parametrize(
    "args, needle",
    [
        (["pair-check", '{"v": {"vars": 2, "terms": []}, "w": {"vars": 2, "terms": [{"exps": [1, 0], "re": "1"}]}}'], "nonzero"),
        (["curve", '{"vars": 3, "terms": [{"exps": [2, 0, 0], "re": "1"}, {"exps": [0, 2, 0], "re": "1"}]}'], "singular"),
        (["pair-check", '{"v": {"vars": 2, "terms": [{"exps": [1, 0], "re": "1"}, {"exps": [2, 0], "re": "1"}]}, "w": {"vars": 2, "terms": [{"exps": [1, 0], "re": "1"}]}}'], "homogeneous"),
        (["slope", '{"v": {"vars": 2, "terms": [{"exps": [1, 0], "re": "1"}]}, "w": {"vars": 2, "terms": [{"exps": [1, 0], "re": "1"}]}, "u": [1, 1]}'], "sum to zero"),
    ],
)
def test_precondition_exit_3(args, needle, capsys):
    code, out, err = run(args, capsys)
    assert code == 3
    assert needle in err


@pytest.mark.parametrize("cmd", [c for c in FIXTURE_COMMANDS])
def test_fixture_determinism(cmd, capsys):
    _, first, _ = run(cmd, capsys)
    _, second, _ = run(cmd, capsys)
    assert first == second
    assert first.endswith("\n")


@pytest.mark.parametrize(
    "cmd",
    [
        ["pair-check", str(FIX / "pair_x2_x4.json")],
        ["hm-check", str(FIX / "hm_x3y.json")],
        ["binary", "--enumerate", "e=2", "d=3"],
        ["curve", str(FIX / "curve_fermat2.json")],
    ],
)
def test_replay_roundtrip(cmd, tmp_path, capsys):
    out_file = tmp_path / "out.json"
    assert main(["--output", str(out_file)] + cmd) == 0
    code, out, _ = run([cmd[0], "--replay", str(out_file)], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["ok"]
    if cmd[0] != "curve":
        assert doc["certificates"] >= 1


def test_replay_detects_tampering(tmp_path, capsys):
    out_file = tmp_path / "out.json"
    main(["--output", str(out_file), "pair-check", str(FIX / "pair_x2_x4.json")])
    doc = json.loads(out_file.read_text())
    doc["verdict"]["certificate"]["margin"] = "7"
    out_file.write_text(json.dumps(doc))
    code, out, _ = run(["pair-check", "--replay", str(out_file)], capsys)
    assert code == 1
    assert json.loads(out)["ok"] is False


def test_jobs_do_not_change_output(capsys):
    _, serial, _ = run(["binary", "--enumerate", "e=2", "d=3"], capsys)
    _, parallel, _ = run(["binary", "--enumerate", "e=2", "d=3", "--jobs", "2"], capsys)
    assert serial == parallel


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "pairstab.cli", "hull", str(FIX / "hull_collinear.json")],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "hull"


@given(forms(3, max_degree=4))
def test_form_json_roundtrip(f):
    assert form_from_json(json.loads(json.dumps(form_to_json(f)))) == f


@given(points(3, max_size=6))
def test_polytope_json_roundtrip(pts):
    P = convex_hull(pts)
    assert polytope_from_json(json.loads(json.dumps(polytope_to_json(P)))) == P


def test_frame_and_verdict_roundtrip():
    from pairstab.forms import SparseForm

    for fr in shear_frames(3, 3, seed=1):
        assert frame_from_json(frame_to_json(fr)) == fr
    x = SparseForm.variable(0, 2)
    v = check_pair_numerical(Pair(x**2, x**4))
    assert verdict_from_json(json.loads(json.dumps(verdict_to_json(v)))) == v

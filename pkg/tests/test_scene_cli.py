import copy
import hashlib
import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from galtrop.catalog import tropical_line
from galtrop.cli import main
from galtrop.scene import Scene, SceneError, canonicalize, dumps, parse_scene, scene_json

SCENES = Path(__file__).resolve().parent.parent / "scenes"
ALL = sorted(SCENES.glob("*.json"))


def load(name: str) -> dict:
    return json.loads((SCENES / name).read_text())


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, data, name="scene.json") -> Path:
    p = tmp_path / name
    p.write_text(dumps(data))
    return p


@pytest.mark.parametrize("path", ALL, ids=lambda p: p.stem)
def test_shipped_scenes_are_canonical(path):
    data = json.loads(path.read_text())
    assert scene_json(parse_scene(data)) == data
    assert canonicalize(data) == data
    assert dumps(data) == path.read_text()


def test_canonicalize_agrees_with_a_parse_round_trip():
    data = load("brauer_severi_sextic.json")
    messy = copy.deepcopy(data)
    terms = messy["polynomial"]["terms"]
    terms.reverse()
    for term in terms:
        for c in term["coefficient"]:
            c["t_exp"] = c["t_exp"].replace("0", "00/1") if c["t_exp"] == "0" else c["t_exp"]
            c["cyc_coeffs"] = c["cyc_coeffs"] + ["0"]
    messy["fan"]["cones"].append([0])
    messy["twist"]["residues"] = [r + 3 for r in messy["twist"]["residues"]]
    assert canonicalize(messy) == data
    assert scene_json(parse_scene(messy)) == data


@given(st.integers(-50, 50), st.integers(1, 30))
def test_rationals_are_written_in_lowest_terms(p, k):
    data = load("brauer_severi_sextic.json")
    data["polynomial"]["terms"][0]["coefficient"][0]["t_exp"] = f"{p * k}/{3 * k}"
    out = scene_json(parse_scene(data))
    t_exp = out["polynomial"]["terms"][0]["coefficient"][0]["t_exp"]
    assert t_exp == str(Fraction(p, 3))
    assert canonicalize(data) == out


MUTATIONS = [
    (lambda d: d.update(schema_version=2), "schema_version"),
    (lambda d: d.pop("fan"), "fan"),
    (lambda d: d["fan"]["rays"].__setitem__(2, [-1, -1.0]), "fan.rays[2][1]"),
    (lambda d: d["fan"]["rays"].__setitem__(1, [0, 1, 0]), "fan.rays[1]"),
    (lambda d: d["fan"]["cones"].__setitem__(0, [0, 7]), "fan.cones[0]"),
    (lambda d: d["fan"]["cones"].append([0, 1, 2]), "fan"),
    (lambda d: d["polynomial"]["terms"][0]["coefficient"][0].update(t_exp="1/0"),
     "polynomial.terms[0].coefficient[0].t_exp"),
    (lambda d: d["polynomial"]["terms"][0]["coefficient"][0].update(t_exp=0.5),
     "polynomial.terms[0].coefficient[0].t_exp"),
    (lambda d: d["polynomial"]["terms"][1].update(exponent=[0]), "polynomial.terms[1].exponent"),
    (lambda d: d["twist"].update(level=0), "twist.level"),
    (lambda d: d["twist"]["generators"][0].__setitem__(0, [0]), "twist.generators[0]"),
    (lambda d: d["twist"]["generators"].__setitem__(0, [[2, 0], [0, 1]]), "twist"),
]


@pytest.mark.parametrize("mutate,field", MUTATIONS, ids=[f for _, f in MUTATIONS])
def test_parse_errors_name_the_field(mutate, field, tmp_path, capsys):
    data = load("tropical_line.json")
    mutate(data)
    with pytest.raises(SceneError) as info:
        parse_scene(data)
    assert info.value.field == field
    code, out, err = run(capsys, "tropicalize", write(tmp_path, data))
    assert code == 2 and out == ""
    diag = json.loads(err)
    assert diag["error"] == "parse" and diag["field"] == field


def test_unreadable_inputs(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "tropicalize", bad)
    assert code == 2 and json.loads(err)["error"] == "parse"
    code, _, err = run(capsys, "tropicalize", tmp_path / "missing.json")
    assert code == 2 and json.loads(err)["field"] == "scene"


def test_tropicalize_report(capsys):
    path = SCENES / "brauer_severi_sextic.json"
    code, out, _ = run(capsys, "tropicalize", path)
    assert code == 0
    rep = json.loads(out)
    assert rep["schema_version"] == 1 and rep["command"] == "tropicalize"
    assert rep["scene"] == "brauer_severi_sextic"
    assert rep["provenance"]["input_sha256"] == hashlib.sha256(path.read_bytes()).hexdigest()
    curve = rep["outputs"]["curve"]
    assert curve["betti_1"] == 10 and curve["balanced"]
    assert len(curve["open"]["vertices"]) == 36
    assert run(capsys, "tropicalize", path)[1] == out


def test_outputs_to_a_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "homology", SCENES / "tropical_line.json", "-o", target)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["outputs"]["dims"] == {"H00": 1, "H01": 0, "H10": 0, "H11": 1}


def test_homology_report(capsys):
    code, out, _ = run(capsys, "homology", SCENES / "brauer_severi_sextic.json")
    assert code == 0
    o = json.loads(out)["outputs"]
    assert o["dims"] == {"H00": 1, "H01": 10, "H10": 10, "H11": 1}
    assert o["characters"]["H01"] == ["10", "1", "1"]
    inv = o["invariants"]["g0"]["H01"]
    assert inv == {"order": 3, "trace": "1", "fixed_dimension": 4}


def test_check_equivariance_exit_codes(tmp_path, capsys):
    code, out, _ = run(capsys, "check-equivariance", SCENES / "tropical_line.json")
    assert code == 0
    o = json.loads(out)["outputs"]
    assert o["equivariant"] and o["witness"] is None and o["hypersurface_invariant"]

    data = load("tropical_line.json")
    base = parse_scene(data)
    shifted = Scene("shifted_line", base.fan, base.twist_spec, base.twist, polynomial=tropical_line(1))
    code, out, err = run(capsys, "check-equivariance", write(tmp_path, scene_json(shifted)))
    assert code == 1 and err == ""
    o = json.loads(out)["outputs"]
    assert not o["equivariant"] and o["witness"]["generator"] == 1
    assert not o["hypersurface_invariant"]


def test_orbit(capsys):
    code, out, _ = run(capsys, "orbit", SCENES / "p1_example.json")
    assert code == 0
    o = json.loads(out)["outputs"]
    assert o["images"] == [["inf", "1/2", "0"], ["1/2", "inf", "0"]]
    assert o["injective"] and o["action_compatible"]


def test_groebner_cell(capsys):
    code, out, _ = run(capsys, "groebner-cell", SCENES / "tropical_line.json", "--at", "0,0")
    assert code == 0
    o = json.loads(out)["outputs"]
    assert o["cell"] == [[0, 0], [0, 1], [1, 0]] and o["minimum"] == "0"
    code, out, _ = run(capsys, "groebner-cell", SCENES / "tropical_line.json", "--at", "1/2,-3")
    assert json.loads(out)["outputs"]["cell"] == [[0, 1]]
    for bad in ("1/0,1", "1", "x,y"):
        code, _, err = run(capsys, "groebner-cell", SCENES / "tropical_line.json", "--at", bad)
        assert code == 2 and json.loads(err)["field"] == "--at"


def test_equivariantize_round_trip(tmp_path, capsys):
    code, out, _ = run(capsys, "equivariantize", SCENES / "p1_seed.json", "--order", "2")
    assert code == 0
    data = json.loads(out)
    assert data["twist"]["orders"] == [2] and data["twist"]["residues"] == [1]
    assert canonicalize(data) == data
    code, out, _ = run(capsys, "orbit", write(tmp_path, data))
    assert code == 0 and json.loads(out)["outputs"]["injective"]


def test_precondition_errors(capsys):
    code, out, err = run(capsys, "equivariantize", SCENES / "p1_example.json", "--order", "2")
    assert code == 3 and out == ""
    assert json.loads(err)["error"] == "precondition"
    code, _, err = run(capsys, "equivariantize", SCENES / "p1_seed.json")
    assert code == 2 and json.loads(err)["field"] == "--order"


def test_missing_sections(capsys):
    code, _, err = run(capsys, "homology", SCENES / "p1_example.json")
    assert code == 2 and json.loads(err)["field"] == "polynomial"
    code, _, err = run(capsys, "orbit", SCENES / "tropical_line.json")
    assert code == 2 and json.loads(err)["field"] == "embedding"


def test_svg_output(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("GALTROP_CLIP", raising=False)
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    scene = SCENES / "brauer_severi_sextic.json"
    assert run(capsys, "tropicalize", scene, "--svg", a)[0] == 0
    assert run(capsys, "tropicalize", scene, "--svg", b)[0] == 0
    text = a.read_text()
    assert text == b.read_text()
    assert text.startswith("<?xml") and 'version="1.1"' in text
    assert text.count("<line") >= 45
    run(capsys, "tropicalize", scene, "--svg", b, "--clip", "20")
    assert b.read_text() != text
    monkeypatch.setenv("GALTROP_CLIP", "6")
    run(capsys, "tropicalize", scene, "--svg", b, "--clip", "20")
    assert b.read_text() == text
    monkeypatch.setenv("GALTROP_CLIP", "abc")
    code, _, err = run(capsys, "tropicalize", scene, "--svg", b)
    assert code == 2 and json.loads(err)["field"] == "GALTROP_CLIP"
    monkeypatch.delenv("GALTROP_CLIP")
    code, _, err = run(capsys, "tropicalize", scene, "--svg", b, "--clip", "-1")
    assert code == 2 and json.loads(err)["field"] == "--clip"

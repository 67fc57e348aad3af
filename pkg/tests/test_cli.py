import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from biumbilical import jets
from biumbilical.cli_report import (
    ConfigError,
    Record,
    Report,
    build_mesh,
    cmd_char_poly,
    cmd_mesh,
    cmd_verify_closed_form,
    dumps,
    format_float,
    load_scenario,
    make_scenario,
    projection_matrix,
    validate_obj,
)
from biumbilical.cli_report.cli import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, main
from biumbilical.cli_report.commands import hypersurface_fn
from biumbilical.closed_forms import SolutionParams


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_format_round_trips(x):
    text = format_float(x)
    assert float(text) == x
    digits = text.lstrip("-").split("e")[0].replace(".", "").strip("0")
    assert len(digits) <= 17


def test_float_format_special_values():
    assert format_float(1.0) == "1.0"
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(float("nan")) == '"NaN"'
    assert format_float(-0.0) == "-0.0"


def test_dumps_is_valid_json_and_ordered():
    data = {"b": [1.5, 2], "a": {"x": np.float64(0.25), "ok": True, "none": None}, "arr": np.arange(3.0)}
    text = dumps(data)
    assert json.loads(text) == {"b": [1.5, 2], "a": {"x": 0.25, "ok": True, "none": None}, "arr": [0.0, 1.0, 2.0]}
    assert text.index('"b"') < text.index('"a"')
    with pytest.raises(TypeError):
        dumps({"x": object()})


def test_report_verdict():
    rep = Report("demo")
    rep.add(Record.below("a", "t", 1e-12, 1e-10, 3))
    assert rep.passed
    rep.add(Record.above("control", "t", 0.5, 1e-2, 1))
    assert rep.passed
    rep.add(Record.below("b", "t", float("nan"), 1e-10, 3))
    assert not rep.passed and [r.check for r in rep.failures()] == ["b"]
    assert json.loads(rep.to_json())["verdict"] == "fail"


def test_config_unknown_key_and_bad_values(tmp_path):
    with pytest.raises(ConfigError, match="unknown"):
        make_scenario({"a": 0.6, "colour": "red"})
    with pytest.raises(ConfigError):
        make_scenario({"c": [1, 2]})
    with pytest.raises(ConfigError):
        make_scenario({"x_range": [1, 0]})
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_scenario(str(bad))
    with pytest.raises(ConfigError):
        load_scenario(str(tmp_path / "missing.json"))


def test_config_file_and_overrides(tmp_path):
    cfg = tmp_path / "s.json"
    cfg.write_text(json.dumps({"a": 1.0, "b": 0.0, "samples": 10, "seed": 3}))
    sc = load_scenario(str(cfg), {"seed": 5, "tol": None})
    assert (sc.a, sc.b, sc.samples, sc.seed, sc.tol) == (1.0, 0.0, 10, 5, None)


def test_verify_default_passes_and_tamper_fails():
    sc = make_scenario({"samples": 40})
    assert cmd_verify_closed_form(sc).passed
    bad = cmd_verify_closed_form(make_scenario({"samples": 40, "tamper": True}))
    assert [r.tag for r in bad.failures()] == ["r-system"]


def test_verify_b_zero_branch():
    rep = cmd_verify_closed_form(make_scenario({"a": 1.0, "b": 0.0, "samples": 30}))
    assert rep.passed
    tags = {r.tag for r in rep.records}
    assert "c0-zero-branch" in tags and "compact-form" not in tags


def test_char_poly_reports_the_quartic_mismatch():
    rep = cmd_char_poly(make_scenario({"samples": 10}))
    failed = {r.tag for r in rep.failures()}
    assert failed == {"char-poly-quartic"}


def test_cli_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify-closed-form", "--samples", "20", "--out", str(out)]) == EXIT_PASS
    assert json.loads(out.read_text())["verdict"] == "pass"
    assert main(["verify-closed-form", "--samples", "20", "--tamper"]) == EXIT_FAIL
    cfg = tmp_path / "c.json"
    cfg.write_text('{"bogus": 1}')
    assert main(["solve-r", "--config", str(cfg)]) == EXIT_USAGE
    assert main(["verify-closed-form", "--params", "0.6,0.7"]) == EXIT_USAGE
    assert main(["mesh"]) == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["no-such-command"])
    assert info.value.code == EXIT_USAGE
    assert main(["solve-r", "--out", str(tmp_path / "nodir" / "r.json")]) == EXIT_USAGE
    capsys.readouterr()


def test_cli_solvers(tmp_path, capsys):
    field = tmp_path / "f.json"
    assert main(["solve-r", "--field", str(field)]) == EXIT_PASS
    data = json.loads(field.read_text())
    assert data["shape"] == [33, 33] and len(data["values"]) == 33 * 33
    assert main(["solve-r-constructive", "--seed", "1"]) == EXIT_PASS
    assert main(["check-semisymmetry", "--samples", "10"]) == EXIT_PASS
    capsys.readouterr()


def test_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["verify-closed-form", "--seed", "4", "--samples", "30", "--out", str(a)])
    main(["verify-closed-form", "--seed", "4", "--samples", "30", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    capsys.readouterr()


def test_mesh_structure_and_rulings(tmp_path, capsys):
    path = tmp_path / "m.obj"
    assert main(["mesh", "--obj", str(path), "--nx", "6", "--ny", "5", "--w=-1,0,1"]) == EXIT_PASS
    text = path.read_text()
    s = validate_obj(text)
    assert s.valid and s.vertices == 3 * 30 and s.faces == 3 * 2 * 5 * 4 and s.lines == 2 * 30
    capsys.readouterr()


def test_mesh_single_slice_surface():
    sc = make_scenario({"c": [1, 0, 0, 0], "w_values": [0.0], "nx": 7, "ny": 7})
    rep, text = cmd_mesh(sc)
    assert rep.passed and rep.info["vertices"] == 49 and rep.info["rulings"] == 0


def test_mesh_counts_degenerate_vertices():
    p = SolutionParams(0.6, 0.8, 1.0, 0, 0, 0)
    mesh = build_mesh(hypersurface_fn(p), (-1, 1), (-1, 1), 5, 5, [-0.75, 0.0])
    assert mesh.degenerate == 25
    assert len(mesh.faces) == 2 * 4 * 4
    assert validate_obj(mesh.to_obj()).valid


def test_face_orientation_follows_parameters():
    mesh = build_mesh(lambda x, y, w: jets.stack([x, y, 0.0 * x + w, 0.0 * x]), (0, 1), (0, 1), 3, 3, [0.0])
    for a, b, c in mesh.faces:
        p, q, r = mesh.vertices[[a, b, c]]
        assert np.cross(q - p, r - p)[2] > 0


def test_projections():
    np.testing.assert_array_equal(projection_matrix("drop4"), np.eye(4)[:3])
    P = projection_matrix([1.0, 1.0, 0.0, 0.0])
    np.testing.assert_allclose(P @ P.T, np.eye(3), atol=1e-14)
    np.testing.assert_allclose(P @ np.array([1.0, 1.0, 0, 0]), 0.0, atol=1e-14)
    for bad in ("drop5", [0, 0, 0, 0], [1, 2]):
        with pytest.raises(ValueError):
            projection_matrix(bad)


def test_validate_obj_detects_problems():
    assert not validate_obj("v 0 0 0\nf 1 2 3\n").valid
    assert not validate_obj("v 0 0\n").valid
    assert not validate_obj("v 0 0 0\nq 1\n").valid
    assert validate_obj("# c\nv 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\nl 1 2\n").valid
    assert math.isfinite(validate_obj("").vertices)

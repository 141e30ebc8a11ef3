import io as io_mod
import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given

from carnotkit import cli, io
from carnotkit.coords import CoordinateChange, epsilon
from carnotkit.groups import catalog
from carnotkit.poly import PolyMap, RationalPoly

from conftest import small_polys


# ---------------------------------------------------------------------------
# Rational parsing.
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("value,want", [
    (3, Fraction(3)), (-2, Fraction(-2)),
    ("3/4", Fraction(3, 4)), ("-3/4", Fraction(-3, 4)), ("0", Fraction(0)),
])
def test_parse_frac_accepts_exact_values(value, want):
    assert io.parse_frac(value, "here") == want


@pytest.mark.parametrize("value", [0.5, True, False, "abc", "1/0", None, [1]])
def test_parse_frac_rejects_inexact_values(value):
    with pytest.raises(io.SchemaError):
        io.parse_frac(value, "here")


def test_float_rejection_names_the_fix():
    with pytest.raises(io.SchemaError, match="encode rationals as strings"):
        io.parse_frac(0.5, "here")


# ---------------------------------------------------------------------------
# Object round-trips.
# ---------------------------------------------------------------------------

@given(small_polys(3))
def test_poly_round_trip(p):
    assert io.poly_from_obj(io.poly_to_obj(p)) == p


def test_poly_rejects_duplicate_exponent():
    obj = {"vars": 2, "terms": [{"exp": [1, 0], "coef": "1"},
                                {"exp": [1, 0], "coef": "2"}]}
    with pytest.raises(io.SchemaError, match="duplicate exponent"):
        io.poly_from_obj(obj)


def test_algebra_round_trip(group_entry):
    constants = group_entry.constants
    back = io.algebra_from_obj(io.algebra_to_obj(constants))
    assert back.weights == constants.weights
    assert back.table == constants.table


def test_algebra_rejects_bad_indices():
    obj = {"weights": [1, 1, 2],
           "brackets": [{"i": 2, "j": 1, "k": 3, "coef": "1"}]}
    with pytest.raises(io.SchemaError, match="out of range"):
        io.algebra_from_obj(obj)


def test_algebra_rejects_duplicate_bracket():
    obj = {"weights": [1, 1, 2],
           "brackets": [{"i": 1, "j": 2, "k": 3, "coef": "1"},
                        {"i": 1, "j": 2, "k": 3, "coef": "2"}]}
    with pytest.raises(io.SchemaError, match="duplicate bracket"):
        io.algebra_from_obj(obj)


def test_frame_round_trip(frame_entry):
    frame = frame_entry.frame.at_base((1,) * frame_entry.frame.n)
    back = io.frame_from_obj(io.frame_to_obj(frame))
    assert back.weights == frame.weights
    assert back.base_point == frame.base_point
    assert list(back.fields) == list(frame.fields)


def test_change_round_trip():
    frame = catalog("engel_4").frame.at_base((1, 2, 3, 4))
    change = epsilon(frame).change
    assert io.change_from_obj(io.change_to_obj(change)) == change


def test_change_defaults_to_identity_parts():
    change = io.change_from_obj({"weights": [1, 1, 2]})
    assert change == CoordinateChange.identity((1, 1, 2))


def test_change_schema_rejects_invalid_triangular():
    x1 = RationalPoly.variable(2, 0)
    obj = {"weights": [1, 2],
           "triangular": {"components": [io.poly_to_obj(x1),
                                         io.poly_to_obj(x1)]}}
    with pytest.raises(io.SchemaError,
                       match="change: linear term x1 in component 2"):
        io.change_from_obj(obj)


# ---------------------------------------------------------------------------
# Documents.
# ---------------------------------------------------------------------------

def test_load_document_dispatch(group_entry):
    kind, value = io.load_document(io.dumps(io.catalog_document(group_entry)))
    assert kind == "catalog"
    assert value.name == group_entry.name
    assert value.constants.table == group_entry.constants.table

    kind, value = io.load_document(io.dumps(io.algebra_document(group_entry.constants)))
    assert kind == "algebra"

    kind, value = io.load_document(io.dumps(io.frame_document(group_entry.frame)))
    assert kind == "frame"
    assert list(value.fields) == list(group_entry.frame.fields)


def test_load_document_rejects_garbage():
    with pytest.raises(io.SchemaError, match="not valid JSON"):
        io.load_document("{nope")
    with pytest.raises(io.SchemaError, match="schema"):
        io.load_document('{"kind": "algebra"}')
    with pytest.raises(io.SchemaError, match="unknown document kind"):
        io.load_document('{"schema": "carnot-kit/1", "kind": "sandwich"}')


# ---------------------------------------------------------------------------
# CLI.
# ---------------------------------------------------------------------------

def test_cli_catalog_list(capsys):
    assert cli.main(["catalog"]) == 0
    out = capsys.readouterr().out
    assert "heisenberg_3" in out.splitlines()


def test_cli_catalog_document(capsys):
    assert cli.main(["catalog", "engel_4"]) == 0
    kind, entry = io.load_document(capsys.readouterr().out)
    assert kind == "catalog" and entry.name == "engel_4"


def test_cli_catalog_unknown_name(capsys):
    with pytest.raises(SystemExit) as err:
        cli.main(["catalog", "nosuchgroup"])
    assert err.value.code == 2
    assert "unknown catalog entry" in capsys.readouterr().err


def test_cli_group_law(capsys):
    assert cli.main(["group-law", "heisenberg_3",
                     "--x", "1,0,0", "--y", "0,1,0"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["product"] == ["1", "1", "1/2"]


def test_cli_group_law_via_pipe(capsys, monkeypatch):
    """The documented composition: catalog output piped into group-law."""
    assert cli.main(["catalog", "heisenberg_3"]) == 0
    piped = capsys.readouterr().out
    monkeypatch.setattr("sys.stdin", io_mod.StringIO(piped))
    assert cli.main(["group-law", "-", "--x", "1,0,0", "--y", "0,1,0"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["product"] == ["1", "1", "1/2"]


def test_cli_pipe_subprocess():
    """Same composition through real processes and the console script."""
    first = subprocess.run([sys.executable, "-m", "carnotkit.cli",
                            "catalog", "heisenberg_3"],
                           capture_output=True, text=True)
    assert first.returncode == 0
    second = subprocess.run([sys.executable, "-m", "carnotkit.cli",
                             "group-law", "-", "--x", "1,0,0", "--y", "0,1,0"],
                            input=first.stdout, capture_output=True, text=True)
    assert second.returncode == 0
    assert json.loads(second.stdout)["product"] == ["1", "1", "1/2"]


def test_cli_epsilon_then_check_carnot(capsys, tmp_path):
    assert cli.main(["epsilon", "heisenberg_3", "--base", "1,2,3"]) == 0
    doc = capsys.readouterr().out
    change_file = tmp_path / "change.json"
    change_file.write_text(doc)
    assert cli.main(["check-carnot", "heisenberg_3", "--base", "1,2,3",
                     "--change", str(change_file)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["ok"] is True and report["witnesses"] == []


def test_cli_check_carnot_flags_second_kind(capsys):
    assert cli.main(["check-carnot", "heisenberg_3",
                     "--change", "second-kind"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["ok"] is False
    assert "x1*x2/2 in component 3" in report["witnesses"]
    assert cli.main(["check-privileged", "heisenberg_3",
                     "--change", "second-kind"]) == 0


def test_cli_order(capsys):
    assert cli.main(["order", "heisenberg_3", "--coordinate", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["order"] == 2
    poly = json.dumps({"vars": 3, "terms": [{"exp": [1, 1, 0], "coef": "1"}]})
    assert cli.main(["order", "heisenberg_3", "--poly", poly]) == 0
    assert json.loads(capsys.readouterr().out)["order"] == 2


def test_cli_order_rejects_bad_coordinate():
    with pytest.raises(SystemExit) as err:
        cli.main(["order", "heisenberg_3", "--coordinate", "9"])
    assert err.value.code == 2


def test_cli_canonical2_forward(capsys):
    assert cli.main(["canonical2", "heisenberg_3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    comps = [io.poly_from_obj(c) for c in doc["forward"]["components"]]
    x1 = RationalPoly.variable(3, 0)
    x2 = RationalPoly.variable(3, 1)
    x3 = RationalPoly.variable(3, 2)
    assert PolyMap(comps) == PolyMap([x1, x2, x3 - x1 * x2 * Fraction(1, 2)])


def test_cli_canonical1_numeric(capsys):
    assert cli.main(["canonical1", "perturbed_heisenberg_3",
                     "--numeric", "--seed", "7", "--samples", "80"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["kind"] == "numeric-chart"
    assert doc["chart_kind"] == "first" and doc["samples"] == 80


def test_cli_validate_catalog(capsys):
    assert cli.main(["validate", "heisenberg_3"]) == 0
    assert json.loads(capsys.readouterr().out)["ok"] is True


def test_cli_validate_flags_bad_algebra(capsys, tmp_path):
    doc = {"schema": "carnot-kit/1", "kind": "algebra",
           "algebra": {"weights": [1, 1, 2],
                       # grading violation: [e1, e3] lands in weight 2 != 3
                       "brackets": [{"i": 1, "j": 3, "k": 3, "coef": "1"}]}}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    assert cli.main(["validate", str(path)]) == 1
    out = json.loads(capsys.readouterr().out)
    assert out["ok"] is False and out["failures"]


def test_cli_selftest_subset(capsys):
    assert cli.main(["selftest", "--seed", "1234", "--criteria", "1,3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2
    assert all("PASS" in line for line in lines)
    assert lines[0].startswith("criterion 01")


def test_cli_selftest_requires_seed(capsys, monkeypatch):
    monkeypatch.delenv("CARNOT_SEED", raising=False)
    with pytest.raises(SystemExit) as err:
        cli.main(["selftest"])
    assert err.value.code == 2
    assert "--seed" in capsys.readouterr().err


def test_cli_seed_env_override(capsys, monkeypatch):
    monkeypatch.setenv("CARNOT_SEED", "1234")
    assert cli.main(["selftest", "--criteria", "1"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_cli_osculate_requires_seed(monkeypatch):
    monkeypatch.delenv("CARNOT_SEED", raising=False)
    with pytest.raises(SystemExit) as err:
        cli.main(["osculate", "heisenberg_3"])
    assert err.value.code == 2


def test_cli_osculate_runs(capsys, monkeypatch):
    monkeypatch.delenv("CARNOT_SEED", raising=False)
    assert cli.main(["osculate", "heisenberg_3", "--directions", "2",
                     "--seed", "5"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["passed"] is True


def test_cli_bad_input_name():
    with pytest.raises(SystemExit) as err:
        cli.main(["group-law", "nosuchthing", "--x", "1", "--y", "1"])
    assert err.value.code == 2


def test_cli_schema_error_is_exit_2(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"schema": "carnot-kit/1", "kind": "sandwich"}')
    assert cli.main(["epsilon", str(path)]) == 2
    assert "error:" in capsys.readouterr().err

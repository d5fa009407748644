import pytest

from heisenleib.catalog import build_entry
from heisenleib.fileio import (
    FileFormatError,
    algebra_from_doc,
    algebra_to_doc,
    extension_spec_from_doc,
    extension_spec_to_doc,
    load_json,
    save_json,
)
from heisenleib.heisenberg import ExtensionSpec, heisenberg


def test_algebra_roundtrip():
    t = build_entry("H1a0C-r1")
    doc = algebra_to_doc(t)
    assert doc["field"] == "Q"
    assert doc["dim"] == 4
    assert algebra_from_doc(doc) == t


def test_algebra_roundtrip_quadratic():
    from heisenleib.catalog import condensation_witness

    target = condensation_witness("H1a1R", "H1a1C-diag").target_tensor
    doc = algebra_to_doc(target)
    assert doc["field"] == {"sqrt": -1}
    assert algebra_from_doc(doc) == target


def test_heisenberg_doc_shape():
    doc = algebra_to_doc(heisenberg(1))
    assert doc["basis"] == ["H", "P1", "B1"]
    assert len(doc["constants"]) == 2


@pytest.mark.parametrize(
    "mutate,context",
    [
        (lambda d: d.pop("dim"), "dim"),
        (lambda d: d.update(dim=0), "dim"),
        (lambda d: d.update(basis=["x"]), "basis"),
        (lambda d: d["constants"].append({"i": 9, "j": 0, "k": 0, "c": "1/1"}), "i="),
        (lambda d: d["constants"].append({"i": 0, "j": 0, "k": 0, "c": "oops"}), "c"),
        (lambda d: d.update(field={"sqrt": 4}), "field"),
        (lambda d: d.update(field="R"), "field"),
    ],
)
def test_algebra_doc_errors(mutate, context):
    doc = algebra_to_doc(heisenberg(1))
    mutate(doc)
    with pytest.raises(FileFormatError):
        algebra_from_doc(doc)


def test_field_consistency():
    doc = algebra_to_doc(heisenberg(1))
    doc["constants"][0]["c"] = "0/1+1/1*sqrt(2)"
    with pytest.raises(FileFormatError, match="field"):
        algebra_from_doc(doc)


def test_max_dim_guard():
    doc = algebra_to_doc(heisenberg(3))
    with pytest.raises(FileFormatError, match="cap"):
        algebra_from_doc(doc, max_dim=5)


def test_extension_spec_roundtrip():
    spec = ExtensionSpec.make(
        1, 2, [1, 0], [[[0, 0], [0, 0]], [[1, 0], [0, -1]]]
    )
    doc = extension_spec_to_doc(spec)
    assert extension_spec_from_doc(doc) == spec


def test_extension_spec_accepts_nested_rows():
    spec = ExtensionSpec.make(1, 1, [0], [[[0, 1], [-1, 0]]], r=[[1]])
    doc = extension_spec_to_doc(spec)
    doc["X"] = [[["0/1", "1/1"], ["-1/1", "0/1"]]]
    assert extension_spec_from_doc(doc) == spec


def test_extension_spec_errors():
    doc = {"n": 1, "f": 1, "a": ["0/1"], "X": [["1/1"]], "rho": [["0/1", "0/1"]],
           "r": [["0/1"]]}
    with pytest.raises(FileFormatError, match="row-major"):
        extension_spec_from_doc(doc)


def test_load_json_reports_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{\n  \"dim\": 3,\n", encoding="utf-8")
    with pytest.raises(FileFormatError, match="line"):
        load_json(str(path))


def test_save_load(tmp_path):
    path = tmp_path / "h.json"
    doc = algebra_to_doc(heisenberg(1))
    save_json(str(path), doc)
    assert load_json(str(path)) == doc

import json

import pytest

from mereo.contact import contact_axiom_report, contact_table
from mereo.granular import check_ggs_axioms, classify_space
from mereo.mereology import bounds, is_fusion, is_separative, is_sum
from mereo.model import SetModel, TableModel, to_table_model
from mereo.modelio import (
    DecisionTableError,
    ModelDocumentError,
    dumps_model,
    fixture_text,
    ingest_decision_table,
    load_fixture,
    load_model,
    parse_decision_table,
    parse_model,
    serialize_model,
    decision_table_fixture,
)
from mereo.search import reproduce_appendix
from mereo.universe import Universe

HEADER = "id,valuation,decision,remark,l,u\n"


def doc(**extra):
    base = {"schema_version": 1, "mode": "partition", "universe": ["1", "2", "3"], "granules": [["1", "2"], ["3"]]}
    base.update(extra)
    return base


def test_minimal_partition_document():
    m = parse_model(json.dumps(doc()))
    assert isinstance(m, SetModel) and m.size == 8
    assert classify_space(m).label == "set-HGOS"


def test_cross_granule_document_reproduces_record():
    m = load_fixture("cross_granules.json")
    assert set(m.named) == {"a", "b", "c"}
    record = reproduce_appendix("B-ReO-C4")
    assert serialize_model(m)["granules"] == record.model["granules"]
    assert contact_axiom_report(m, contact_table(m, "o"))["C4"].failed


def test_overlapping_partition_blocks_rejected():
    with pytest.raises(ModelDocumentError, match="disjoint"):
        parse_model(doc(granules=[["1", "2"], ["2", "3"]]))


def test_cover_must_cover_the_universe():
    with pytest.raises(ModelDocumentError):
        parse_model(doc(mode="cover", granules=[["1", "2"]]))


def test_schema_errors_name_the_field():
    with pytest.raises(ModelDocumentError, match="field granules/0"):
        parse_model(doc(granules=[[1, 2], ["3"]]))
    with pytest.raises(ModelDocumentError, match="schema_version"):
        parse_model(doc(schema_version=2))
    with pytest.raises(ModelDocumentError, match="mode"):
        parse_model(doc(mode="lattice"))
    with pytest.raises(ModelDocumentError, match="carrier"):
        parse_model({"schema_version": 1, "mode": "abstract", "granules": []})
    with pytest.raises(ModelDocumentError, match="named/a"):
        parse_model(doc(named={"a": "1"}))


def test_syntax_errors_report_line_and_column():
    with pytest.raises(ModelDocumentError, match=r"line 2, column \d+"):
        parse_model('{"schema_version": 1,\n "mode" "partition"}')
    with pytest.raises(ModelDocumentError, match="JSON object"):
        parse_model("[1, 2]")


def test_unreadable_path(tmp_path):
    with pytest.raises(ModelDocumentError, match="cannot read"):
        load_model(tmp_path / "missing.json")


@pytest.mark.parametrize("name", ["three_granules.json", "cross_granules.json"])
def test_fixture_round_trip(name):
    m = load_fixture(name)
    once = dumps_model(m)
    assert dumps_model(parse_model(once)) == once


def test_table_and_abstract_models_round_trip():
    set_model = SetModel.from_blocks(Universe.of_size(3), [["1", "2"], ["3"]], named={"x": ["1"]})
    for m in (set_model, to_table_model(set_model), decision_table_fixture()[2]):
        once = dumps_model(m)
        again = parse_model(once)
        assert dumps_model(again) == once
        assert check_ggs_axioms(again).ok == check_ggs_axioms(m).ok


def test_probe_round_trip():
    m = parse_model(doc(probe={"1": [0, "1/2"], "2": [1, 0], "3": [0, "1/2"]}))
    text = dumps_model(m)
    again = parse_model(text)
    assert again.probe.vectors == m.probe.vectors
    assert dumps_model(again) == text
    with pytest.raises(ModelDocumentError, match="undefined"):
        parse_model(doc(probe={"1": [0]}))


# -- decision tables --------------------------------------------------------------------


def test_table_fixture_ingestion():
    table, s, m = decision_table_fixture()
    assert table.labels == ["a", "b", "c", "e", "f"]
    assert table.lower_map() == {"a": "a", "b": "b", "c": "c", "e": "b", "f": "f"}
    assert table.upper_map() == {"a": "c", "b": "e", "c": "c", "e": "e", "f": "f"}
    assert isinstance(m, TableModel) and m.bottom is None and m.top is None
    assert [m.name(g) for g in m.granules] == ["a", "b", "c", "f"]
    assert is_fusion(s, "c", ["a", "b"]) and is_sum(s, "c", ["a", "b"])
    assert bounds(s, ["a", "b", "c", "e"])[0] == frozenset()


def test_missing_bounds_fail_with_reason():
    report = check_ggs_axioms(decision_table_fixture()[2])
    assert report["bottom-fixed"].failed and "no bottom" in report["bottom-fixed"].reason


def test_single_row_table():
    _, s, m = ingest_decision_table(HEADER + "X,sm,a,only,X,X\n")
    assert s.carrier == ("a",)
    assert is_separative(s) and is_separative(s, "overlap")
    assert m.bottom == m.top == m.index("a")


def test_dangling_reference_names_the_row():
    with pytest.raises(DecisionTableError, match="row Y: u reference 'Q'"):
        parse_decision_table(HEADER + "X,sm,a,,X,X\nY,mm,b,,Y,Q\n")


def test_malformed_valuations():
    with pytest.raises(DecisionTableError, match="outside s/m/w/n"):
        parse_decision_table(HEADER + "X,sx,a,,X,X\n")
    with pytest.raises(DecisionTableError, match="do not match widths"):
        parse_decision_table(HEADER + "X,sm ww,a,,X,X\nY,sm w,b,,Y,Y\n")


def test_table_shape_errors():
    with pytest.raises(DecisionTableError, match="header"):
        parse_decision_table("id,decision\nX,a\n")
    with pytest.raises(DecisionTableError, match="columns"):
        parse_decision_table(HEADER + "X,sm,a,,X\n")
    with pytest.raises(DecisionTableError, match="no rows"):
        parse_decision_table(HEADER)
    with pytest.raises(DecisionTableError, match="duplicate"):
        parse_decision_table(HEADER + "X,s,a,,X,X\nY,s,a,,Y,Y\n")
    with pytest.raises(DecisionTableError, match="parthood pair"):
        ingest_decision_table(HEADER + "X,s,a,,X,X\n", [("a", "z")])


def test_fixture_text_is_packaged():
    assert fixture_text("doctor_teams.csv").startswith(HEADER.strip())

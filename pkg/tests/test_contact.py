import pytest

from mereo.contact import (
    CONTACT_AXIOMS,
    ContactError,
    NamedRelation,
    classify_contact,
    contact_axiom_report,
    contact_table,
    derived_relations,
    descriptive_intersection,
    descriptively_near,
    kind_label,
    normalize_kind,
    probe_from_lists,
    rough_contact,
)
from mereo.model import SetModel, to_table_model
from mereo.modelio import load_fixture
from mereo.search import axiom_instance_fails
from mereo.universe import Universe, UniverseError, enumerate_partitions

import oracles


@pytest.fixture(scope="module")
def cross_granules():
    return load_fixture("cross_granules.json")


@pytest.fixture(scope="module")
def three_granules():
    return load_fixture("three_granules.json")


def models(n_max, cover_blocks=None):
    for n in range(1, n_max + 1):
        u = Universe.of_size(n)
        if cover_blocks is None:
            for p in enumerate_partitions(n, u):
                yield SetModel.from_blocks(u, [b.names() for b in p])
        else:
            for c in oracles.covers(u.elements, cover_blocks):
                yield SetModel.from_blocks(u, [sorted(b) for b in c], mode="cover")


def test_kind_names():
    assert normalize_kind("Re_o") == normalize_kind("type-o") == normalize_kind("o") == "o"
    assert kind_label("2") == "Re_2"
    with pytest.raises(ContactError):
        normalize_kind("Re_9")


def test_overlap_type_on_cross_granule_sets(cross_granules):
    m = cross_granules
    a, b, c = m.index("a"), m.index("b"), m.index("c")
    assert rough_contact(m, "o", a, m.join(b, c))
    assert not rough_contact(m, "o", "a", "b")
    assert not rough_contact(m, "o", "a", "c")
    assert contact_table(m, "o")("a", m.join(b, c))


def test_overlap_type_axioms_on_cross_granule_sets(cross_granules):
    report = contact_axiom_report(cross_granules, contact_table(cross_granules, "o"))
    assert [report.status(ax) for ax in CONTACT_AXIOMS[:5]] == ["pass", "pass", "pass", "fail", "fail"]
    assert classify_contact(report).label == "neither"
    assert axiom_instance_fails(cross_granules, "o", "C4", {"a": "a", "b": "b", "e": "c"})
    assert axiom_instance_fails(cross_granules, "o", "C5", {"a": "a", "b": "b"})
    assert cross_granules.name(cross_granules.meet(cross_granules.index("a"), cross_granules.index("b"))) == "{1,2}"


def test_type1_asymmetry(three_granules):
    m = three_granules
    assert rough_contact(m, "1", "a", "b") and not rough_contact(m, "1", "b", "a")
    report = contact_axiom_report(m, contact_table(m, "1"))
    assert report["C2"].failed
    assert axiom_instance_fails(m, "1", "C2", {"a": "a", "b": "b"})


def test_type1_is_reflexive_but_fails_c1():
    m = SetModel.from_blocks(Universe.of_size(2), [["1"], ["2"]])
    r = contact_table(m, "1")
    assert all(r.holds(x, x) for x in range(m.size))
    assert contact_axiom_report(m, r)["C1"].failed


def test_type3_reflexive_on_nonempty_sets():
    for m in models(4):
        r = contact_table(m, "3")
        assert all(r.holds(x, x) for x in m.nonzero())
        assert not r.holds(0, 0)


@pytest.mark.parametrize("kind", ["a", "o", "1", "2", "3"])
def test_tables_match_oracle_on_partitions(kind):
    for m in models(3):
        blocks = [frozenset(m.universe.names(g)) for g in m.granules]
        r = contact_table(m, kind)
        for a in range(m.size):
            for b in range(m.size):
                want = oracles.RE[kind](blocks, frozenset(m.encode(a)), frozenset(m.encode(b)))
                assert r.holds(a, b) == want == rough_contact(m, kind, a, b), (m.describe(), a, b)


@pytest.mark.parametrize("kind", ["a", "o", "1", "2", "3"])
def test_tables_match_oracle_on_covers(kind):
    for m in models(3, cover_blocks=3):
        blocks = [frozenset(m.universe.names(g)) for g in m.granules]
        r = contact_table(m, kind)
        for a in range(m.size):
            for b in range(m.size):
                want = oracles.RE[kind](blocks, frozenset(m.encode(a)), frozenset(m.encode(b)))
                assert r.holds(a, b) == want, (m.describe(), kind, a, b)


def test_type_a_is_contact_and_precontact_on_three_granules(three_granules):
    report = contact_axiom_report(three_granules, contact_table(three_granules, "a"))
    assert classify_contact(report).label == "contact+precontact"


def test_plain_overlap_is_a_contact_relation():
    for m in models(3):
        r = NamedRelation.from_predicate(m, lambda a, b: bool(a & b))
        assert "contact" in classify_contact(contact_axiom_report(m, r)).labels


def test_complete_relation_minus_bottom_is_contact():
    m = SetModel.from_blocks(Universe.of_size(3), [["1", "2"], ["3"]])
    r = NamedRelation.from_predicate(m, lambda a, b: a != 0 and b != 0)
    assert classify_contact(contact_axiom_report(m, r)).labels == ("contact", "precontact")


def test_partial_join_leaves_classification_undetermined():
    m = to_table_model(SetModel.from_blocks(Universe.of_size(2), [["1"], ["2"]]))
    join = m.join_table()
    del join[("{1}", "{2}")]
    m = m.replace(join=join)
    report = contact_axiom_report(m, contact_table(m, "a"))
    assert report.status("C4") == "skipped" and "join" in report["C4"].reason
    cls = classify_contact(report)
    assert cls.label == "undetermined" and "C4" in cls.undetermined["contact"]


def test_extensionality_verdict():
    m = SetModel.from_blocks(Universe.of_size(2), [["1", "2"]])
    report = contact_axiom_report(m, contact_table(m, "o"))
    assert report["extensional"].failed
    ident = NamedRelation.from_predicate(m, lambda a, b: a == b)
    assert contact_axiom_report(m, ident)["extensional"].passed


# -- derived relations ---------------------------------------------------------------


def test_external_connection_empty_under_overlap_type():
    for m in models(4):
        d = derived_relations(m, contact_table(m, "o"))
        assert not d["EC"].pairs()
        assert not any(d["TPP"].holds(x, x) for x in range(m.size))


def test_disconnection_irreflexive_where_reflexive():
    for m in models(3):
        r = contact_table(m, "a")
        d = derived_relations(m, r)
        assert all(not d["DC"].holds(x, x) for x in range(m.size) if r.holds(x, x))


def test_tangential_part_needs_external_contact():
    m = SetModel.from_blocks(Universe.of_size(3), [["1", "2"], ["3"]])
    d = derived_relations(m, contact_table(m, "a"))
    for a, b in d["TPP"].pairs():
        assert m.proper_part(a, b)
        assert any(d["EC"].holds(c, a) and d["EC"].holds(c, b) for c in range(m.size))
    assert d["TPP"].pairs()


def test_derived_relations_need_symmetry(three_granules):
    with pytest.raises(ContactError, match="symmetric"):
        derived_relations(three_granules, contact_table(three_granules, "1"))


# -- descriptive proximity --------------------------------------------------------------


def test_descriptive_intersection_examples():
    u = Universe.of_size(3)
    a, b = u.subset(["1"]), u.subset(["3"])
    p = probe_from_lists(u, {"1": [0], "2": [1], "3": [0]})
    assert descriptive_intersection(p, a, b) == u.subset(["1", "3"])
    assert descriptively_near(p, a, b)
    const = probe_from_lists(u, {x: ["1/2"] for x in "123"})
    assert descriptive_intersection(const, u.subset(["1", "2"]), b) == u.full()
    inj = probe_from_lists(u, {"1": [0, 1], "2": [1, 0], "3": [1, 1]})
    x, y = u.subset(["1", "2"]), u.subset(["2", "3"])
    assert descriptive_intersection(inj, x, y) == x & y
    assert not descriptively_near(inj, a, b)


def test_probe_validation():
    u = Universe.of_size(2)
    with pytest.raises(ContactError, match="dimension"):
        probe_from_lists(u, {"1": [0], "2": [0, 1]})
    with pytest.raises(ContactError, match="undefined"):
        probe_from_lists(u, {"1": [0]})
    p = probe_from_lists(u, {"1": [0], "2": [1]})
    with pytest.raises(UniverseError):
        descriptive_intersection(p, Universe.of_size(3).full(), u.full())

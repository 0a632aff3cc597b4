import pytest
from hypothesis import given, strategies as st

from mereo.universe import (
    BinaryRelation,
    Cover,
    Partition,
    SubsetValue,
    Universe,
    UniverseError,
    enumerate_partitions,
    equivalence_classes,
    iter_bits,
    max_universe,
    reflexive_completion,
    relation_properties,
    restricted_growth_strings,
    submasks,
)

import oracles

BELL = [1, 2, 5, 15, 52, 203, 877]
ABCEF = Universe(("a", "b", "c", "e", "f"))
TABLE_PAIRS = [("a", "c"), ("b", "c"), ("a", "e"), ("b", "e")]


def test_universe_rejects_duplicates_and_empty():
    with pytest.raises(UniverseError):
        Universe(("x", "x"))
    with pytest.raises(UniverseError):
        Universe(())


def test_universe_size_cap(monkeypatch):
    monkeypatch.setenv("MEREO_MAX_UNIVERSE", "3")
    assert max_universe() == 3
    with pytest.raises(UniverseError):
        Universe.of_size(4)
    monkeypatch.setenv("MEREO_MAX_UNIVERSE", "zero")
    with pytest.raises(UniverseError):
        max_universe()


def test_subset_algebra():
    u = Universe.of_size(4)
    a, b = u.subset(["1", "2"]), u.subset(["2", "3"])
    assert (a | b).names() == ["1", "2", "3"]
    assert (a & b).names() == ["2"]
    assert (a - b).names() == ["1"]
    assert (~a).names() == ["3", "4"]
    assert a & b <= a and not a <= b
    assert "1" in a and "4" not in a
    assert len(a) == 2 and str(a) == "{1,2}"
    assert u.subset(["2", "1"]) == a  # extensional


def test_subset_mixed_universes_rejected():
    with pytest.raises(UniverseError):
        Universe.of_size(2).full() | Universe.of_size(3).full()


def test_unknown_element_named():
    with pytest.raises(UniverseError, match="'z'"):
        Universe.of_size(2).subset(["z"])


def test_bits_helpers():
    assert list(iter_bits(0b10110)) == [1, 2, 4]
    assert sorted(submasks(0b101)) == [0, 1, 4, 5]


# -- relations ---------------------------------------------------------------------


def test_reflexive_completion_table_pairs():
    r = reflexive_completion(TABLE_PAIRS, ABCEF)
    assert len(r) == 9


def test_reflexive_completion_small_cases():
    x = Universe(("x",))
    assert reflexive_completion([], x).named_pairs() == [("x", "x")]
    pq = Universe(("p", "q"))
    assert set(reflexive_completion([("p", "q"), ("q", "q")], pq).named_pairs()) == {("p", "q"), ("p", "p"), ("q", "q")}


def test_reflexive_completion_idempotent_and_unknown():
    once = reflexive_completion(TABLE_PAIRS, ABCEF)
    assert reflexive_completion(once.named_pairs(), ABCEF) == once
    with pytest.raises(UniverseError, match="'z'"):
        reflexive_completion([("a", "z")], ABCEF)


def test_relation_properties_table_relation():
    p = relation_properties(reflexive_completion(TABLE_PAIRS, ABCEF))
    assert p.reflexive.holds and p.transitive.holds and p.antisymmetric.holds
    assert not p.symmetric.holds and p.symmetric.witness == ("a", "c")


def test_relation_properties_degenerate():
    x = Universe(("x",))
    p = relation_properties(BinaryRelation(x, frozenset()))
    assert not p.reflexive.holds and p.reflexive.witness == ("x",)
    xy = Universe(("x", "y"))
    full = BinaryRelation.from_names(xy, [(a, b) for a in "xy" for b in "xy"])
    p = relation_properties(full)
    assert p.reflexive.holds and p.symmetric.holds and p.transitive.holds and not p.antisymmetric.holds


def test_equivalence_classes():
    u = Universe.of_size(3)
    r = BinaryRelation.from_names(u, [("1", "1"), ("2", "2"), ("3", "3"), ("1", "2"), ("2", "1")])
    assert [b.names() for b in equivalence_classes(r)] == [["1", "2"], ["3"]]
    diag = reflexive_completion([], u)
    assert len(equivalence_classes(diag)) == 3
    full = BinaryRelation.from_names(u, [(a, b) for a in "123" for b in "123"])
    assert [b.names() for b in equivalence_classes(full)] == [["1", "2", "3"]]


def test_equivalence_classes_rejects_non_equivalence():
    u = Universe.of_size(2)
    with pytest.raises(UniverseError, match="symmetric"):
        equivalence_classes(reflexive_completion([("1", "2")], u))


# -- partitions and covers --------------------------------------------------------------


def test_partition_invariants():
    u = Universe.of_size(3)
    with pytest.raises(UniverseError, match="disjoint"):
        Partition.from_names(u, [["1", "2"], ["2", "3"]])
    with pytest.raises(UniverseError):
        Cover.from_names(u, [["1", "2"]])
    with pytest.raises(UniverseError):
        Cover.from_names(u, [["1", "2", "3"], []])
    Cover.from_names(u, [["1", "2"], ["2", "3"]])


@pytest.mark.parametrize("n", range(1, 8))
def test_partition_counts_are_bell_numbers(n):
    assert sum(1 for _ in restricted_growth_strings(n)) == BELL[n - 1]


@pytest.mark.parametrize("n", range(1, 7))
def test_enumerate_partitions_matches_oracle(n):
    got = [frozenset(frozenset(b.names()) for b in p) for p in enumerate_partitions(n)]
    assert len(got) == len(set(got)) == BELL[n - 1]
    want = {frozenset(p) for p in oracles.set_partitions([str(i) for i in range(1, n + 1)])}
    assert set(got) == want


def test_enumerate_partitions_is_restartable():
    full = [p.restricted_growth_string() for p in enumerate_partitions(4)]
    assert full == sorted(full)
    assert [p.restricted_growth_string() for p in enumerate_partitions(4, start=6)] == full[6:]


@given(st.lists(st.integers(0, 3), min_size=1, max_size=6))
def test_equivalence_classes_partition_the_universe(labels):
    u = Universe.of_size(len(labels))
    pairs = [(str(i + 1), str(j + 1)) for i, a in enumerate(labels) for j, b in enumerate(labels) if a == b]
    blocks = list(equivalence_classes(BinaryRelation.from_names(u, pairs)))
    union = 0
    for i, b in enumerate(blocks):
        assert b
        for c in blocks[i + 1 :]:
            assert not (b & c)
        union |= b.bits
    assert union == u.full_mask


def test_subset_value_bits_stay_in_universe():
    with pytest.raises(UniverseError):
        SubsetValue(Universe.of_size(2), 0b100)

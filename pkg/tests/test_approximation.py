import pytest
from hypothesis import given, strategies as st

from mereo.approximation import (
    ApproximationSpace,
    definiteness,
    enumerate_rough_objects,
    lower_approx,
    regions,
    rough_equal,
    rough_inclusion,
    upper_approx,
)
from mereo.universe import Universe, UniverseError, enumerate_partitions

import oracles

U4 = Universe.of_size(4)
S = ApproximationSpace.from_blocks(U4, [["1", "2"], ["3", "4"]])


def sub(*names, u=U4):
    return u.subset(list(names))


def test_lower_and_upper_examples():
    a = sub("1", "2", "3")
    assert lower_approx(S, a) == sub("1", "2")
    assert upper_approx(S, a) == U4.full()
    assert lower_approx(S, U4.empty()) == U4.empty() == upper_approx(S, U4.empty())
    assert upper_approx(S, U4.full()) == U4.full()
    assert lower_approx(S, sub("3", "4")) == sub("3", "4")


def test_regions_example():
    r = regions(S, sub("1", "2", "3"))
    assert (r.positive, r.negative, r.boundary) == (sub("1", "2"), U4.empty(), sub("3", "4"))
    r = regions(S, sub("1", "2"))
    assert (r.positive, r.negative, r.boundary) == (sub("1", "2"), sub("3", "4"), U4.empty())
    r = regions(S, U4.empty())
    assert (r.positive, r.negative, r.boundary) == (U4.empty(), U4.full(), U4.empty())


def test_rough_inclusion_and_equality():
    assert rough_inclusion(S, sub("1", "3"), sub("1", "2", "3"))
    assert rough_equal(S, sub("1", "3"), sub("2", "3"))
    assert rough_equal(S, sub("4"), sub("4"))
    assert not rough_inclusion(S, sub("1", "2"), sub("1", "3"))


def test_universe_mismatch_rejected():
    with pytest.raises(UniverseError):
        lower_approx(S, Universe.of_size(3).full())


def test_definiteness_flags():
    everything = {"lower-definite", "upper-definite", "definite", "weakly-upper-definite", "weakly-definite"}
    assert definiteness(S, U4.empty()) == everything
    assert definiteness(S, sub("1", "2")) == everything
    assert definiteness(S, sub("1")) == {"weakly-upper-definite"}


def test_rough_objects():
    u2 = Universe.of_size(2)
    singletons = ApproximationSpace.from_blocks(u2, [["1"], ["2"]])
    assert enumerate_rough_objects(singletons, "distinct-pair") == []
    one = ApproximationSpace.from_blocks(u2, [["1", "2"]])
    assert enumerate_rough_objects(one, "distinct-pair") == [(u2.empty(), u2.full())]
    u3 = Universe.of_size(3)
    s = ApproximationSpace.from_blocks(u3, [["1", "2"], ["3"]])
    assert len(enumerate_rough_objects(s, "definite-pair")) == 5
    with pytest.raises(ValueError):
        enumerate_rough_objects(s, "nonsense")


def test_definite_pair_count_matches_oracle():
    blocks = [frozenset({"1", "2"}), frozenset({"3"})]
    definite = [a for a in oracles.powerset("123") if oracles.lower(blocks, a) == a == oracles.upper(blocks, a)]
    assert sum(1 for a in definite for b in definite if a < b) == 5


def test_partition_mode_rejects_overlap():
    with pytest.raises(UniverseError):
        ApproximationSpace.from_blocks(Universe.of_size(3), [["1", "2"], ["2", "3"]])


def test_cover_mode_operators():
    u = Universe.of_size(3)
    s = ApproximationSpace.from_blocks(u, [["1", "2"], ["2", "3"]], mode="cover")
    assert lower_approx(s, sub("1", "2", u=u)) == sub("1", "2", u=u)
    assert upper_approx(s, sub("2", u=u)) == u.full()
    assert upper_approx(s, sub("1", u=u)) == sub("1", "2", u=u)


@pytest.mark.parametrize("n", range(1, 5))
def test_operators_match_oracle_exhaustively(n):
    u = Universe.of_size(n)
    for p in enumerate_partitions(n, u):
        s = ApproximationSpace(p)
        blocks = [frozenset(b.names()) for b in p]
        for a in u.all_subsets():
            fa = frozenset(a.names())
            assert frozenset(lower_approx(s, a).names()) == oracles.lower(blocks, fa)
            assert frozenset(upper_approx(s, a).names()) == oracles.upper(blocks, fa)


@pytest.mark.parametrize("n", range(1, 5))
def test_rough_inclusion_is_a_preorder(n):
    u = Universe.of_size(n)
    for p in enumerate_partitions(n, u):
        s = ApproximationSpace(p)
        subsets = list(u.all_subsets())
        for a in subsets:
            assert rough_inclusion(s, a, a)
            for b in subsets:
                if not rough_inclusion(s, a, b):
                    continue
                assert rough_equal(s, a, b) == rough_equal(s, b, a)
                for c in subsets:
                    if rough_inclusion(s, b, c):
                        assert rough_inclusion(s, a, c)


@st.composite
def cover_and_subsets(draw):
    n = draw(st.integers(1, 5))
    u = Universe.of_size(n)
    full = (1 << n) - 1
    blocks = draw(st.lists(st.integers(1, full), min_size=1, max_size=5, unique=True))
    union = 0
    for b in blocks:
        union |= b
    if union != full:
        blocks.append(full & ~union)
    a = draw(st.integers(0, full))
    b = draw(st.integers(0, full))
    return u, blocks, a, a | b


@given(cover_and_subsets())
def test_cover_axioms_hold(case):
    u, blocks, a, b = case
    s = ApproximationSpace.from_blocks(u, [u.from_mask(m).names() for m in blocks], mode="cover")
    A, B = u.from_mask(a), u.from_mask(b)
    la, ua = lower_approx(s, A), upper_approx(s, A)
    assert la <= A <= ua
    assert lower_approx(s, la) == la
    assert ua <= upper_approx(s, ua)
    assert la <= lower_approx(s, B) and ua <= upper_approx(s, B)

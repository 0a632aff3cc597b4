"""Finite universes, bit-vector subsets, binary relations, partitions and covers.

Everything here is immutable. Subsets are stored as Python ints used as
fixed-width bit vectors: bit ``i`` is set iff the ``i``-th universe element is
a member. Element order is the insertion order of the universe and never
changes, which keeps every enumeration in the package deterministic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

DEFAULT_MAX_UNIVERSE = 16


class UniverseError(ValueError):
    """Raised for malformed universes, unknown element names or mixed universes."""


def max_universe() -> int:
    """Hard cap on universe size; ``MEREO_MAX_UNIVERSE`` overrides the default."""
    raw = os.environ.get("MEREO_MAX_UNIVERSE")
    if raw is None:
        return DEFAULT_MAX_UNIVERSE
    try:
        value = int(raw)
    except ValueError:
        raise UniverseError(f"MEREO_MAX_UNIVERSE is not an integer: {raw!r}") from None
    if value < 1:
        raise UniverseError(f"MEREO_MAX_UNIVERSE must be positive, got {value}")
    return value


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def submasks(mask: int) -> Iterator[int]:
    """Yield every submask of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass(frozen=True)
class Universe:
    elements: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        elements = tuple(str(e) for e in self.elements)
        object.__setattr__(self, "elements", elements)
        if not elements:
            raise UniverseError("a universe needs at least one element")
        bound = max_universe()
        if len(elements) > bound:
            raise UniverseError(f"universe of size {len(elements)} exceeds the bound {bound}")
        index: dict[str, int] = {}
        for i, name in enumerate(elements):
            if name in index:
                raise UniverseError(f"duplicate element name {name!r}")
            index[name] = i
        object.__setattr__(self, "_index", index)

    @classmethod
    def of_size(cls, n: int) -> "Universe":
        """The universe ``1..n`` with decimal element names."""
        return cls(tuple(str(i) for i in range(1, n + 1)))

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.elements)) - 1

    def index(self, name: object) -> int:
        try:
            return self._index[str(name)]
        except KeyError:
            raise UniverseError(f"unknown element {name!r}") from None

    def mask(self, names: Iterable[object]) -> int:
        bits = 0
        for name in names:
            bits |= 1 << self.index(name)
        return bits

    def subset(self, names: Iterable[object] = ()) -> "SubsetValue":
        return SubsetValue(self, self.mask(names))

    def from_mask(self, bits: int) -> "SubsetValue":
        return SubsetValue(self, bits)

    def empty(self) -> "SubsetValue":
        return SubsetValue(self, 0)

    def full(self) -> "SubsetValue":
        return SubsetValue(self, self.full_mask)

    def names(self, bits: int) -> list[str]:
        return [self.elements[i] for i in iter_bits(bits)]

    def format_mask(self, bits: int) -> str:
        return "{" + ",".join(self.names(bits)) + "}"

    def all_subsets(self) -> Iterator["SubsetValue"]:
        for bits in range(1 << self.size):
            yield SubsetValue(self, bits)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class SubsetValue:
    universe: Universe
    bits: int

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits > self.universe.full_mask:
            raise UniverseError(f"bits {self.bits:#x} fall outside a universe of size {self.universe.size}")

    def _other(self, other: "SubsetValue") -> int:
        if not isinstance(other, SubsetValue):
            return NotImplemented  # type: ignore[return-value]
        if other.universe != self.universe:
            raise UniverseError("subsets belong to different universes")
        return other.bits

    def __or__(self, other: "SubsetValue") -> "SubsetValue":
        return SubsetValue(self.universe, self.bits | self._other(other))

    def __and__(self, other: "SubsetValue") -> "SubsetValue":
        return SubsetValue(self.universe, self.bits & self._other(other))

    def __sub__(self, other: "SubsetValue") -> "SubsetValue":
        return SubsetValue(self.universe, self.bits & ~self._other(other))

    def __invert__(self) -> "SubsetValue":
        return SubsetValue(self.universe, self.universe.full_mask & ~self.bits)

    def complement(self) -> "SubsetValue":
        return ~self

    def __le__(self, other: "SubsetValue") -> bool:
        return self.bits & ~self._other(other) == 0

    def __lt__(self, other: "SubsetValue") -> bool:
        return self <= other and self.bits != other.bits

    def __ge__(self, other: "SubsetValue") -> bool:
        return other <= self

    def __gt__(self, other: "SubsetValue") -> bool:
        return other < self

    def __contains__(self, name: object) -> bool:
        return bool(self.bits >> self.universe.index(name) & 1)

    def __iter__(self) -> Iterator[str]:
        return iter(self.universe.names(self.bits))

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __bool__(self) -> bool:
        return self.bits != 0

    def names(self) -> list[str]:
        return self.universe.names(self.bits)

    def __str__(self) -> str:
        return self.universe.format_mask(self.bits)

    def __repr__(self) -> str:
        return f"SubsetValue({self})"


@dataclass(frozen=True)
class BinaryRelation:
    """A finite binary relation stored as index pairs over a universe."""

    universe: Universe
    pairs: frozenset[tuple[int, int]]

    @classmethod
    def from_names(cls, universe: Universe, pairs: Iterable[tuple[object, object]]) -> "BinaryRelation":
        return cls(universe, frozenset((universe.index(a), universe.index(b)) for a, b in pairs))

    def __contains__(self, pair: tuple[object, object]) -> bool:
        a, b = pair
        return (self.universe.index(a), self.universe.index(b)) in self.pairs

    def holds(self, i: int, j: int) -> bool:
        return (i, j) in self.pairs

    def named_pairs(self) -> list[tuple[str, str]]:
        el = self.universe.elements
        return [(el[i], el[j]) for i, j in sorted(self.pairs)]

    def __len__(self) -> int:
        return len(self.pairs)


def reflexive_completion(pairs: Iterable[tuple[object, object]], universe: Universe) -> BinaryRelation:
    """Add the diagonal to ``pairs``; unknown names raise :class:`UniverseError`."""
    rel = BinaryRelation.from_names(universe, pairs)
    return BinaryRelation(universe, rel.pairs | {(i, i) for i in range(universe.size)})


@dataclass(frozen=True)
class PropertyVerdict:
    holds: bool
    witness: tuple[str, ...] | None = None


@dataclass(frozen=True)
class PropertyReport:
    reflexive: PropertyVerdict
    symmetric: PropertyVerdict
    transitive: PropertyVerdict
    antisymmetric: PropertyVerdict

    @property
    def is_equivalence(self) -> bool:
        return self.reflexive.holds and self.symmetric.holds and self.transitive.holds

    def as_dict(self) -> dict[str, PropertyVerdict]:
        return {
            "reflexive": self.reflexive,
            "symmetric": self.symmetric,
            "transitive": self.transitive,
            "antisymmetric": self.antisymmetric,
        }


def relation_properties(r: BinaryRelation) -> PropertyReport:
    """Check the four order-theoretic properties, keeping the first counter-witness of each."""
    return pair_properties(r.universe.elements, r.pairs)


def pair_properties(el: Sequence[str], pairs: frozenset[tuple[int, int]]) -> PropertyReport:
    """:func:`relation_properties` for index pairs over ``el``, with no universe size cap."""
    n = len(el)

    reflexive = PropertyVerdict(True)
    for i in range(n):
        if (i, i) not in pairs:
            reflexive = PropertyVerdict(False, (el[i],))
            break

    symmetric = PropertyVerdict(True)
    antisymmetric = PropertyVerdict(True)
    for i, j in sorted(pairs):
        if symmetric.holds and (j, i) not in pairs:
            symmetric = PropertyVerdict(False, (el[i], el[j]))
        if antisymmetric.holds and i != j and (j, i) in pairs:
            antisymmetric = PropertyVerdict(False, (el[i], el[j]))

    transitive = PropertyVerdict(True)
    succ: dict[int, list[int]] = {}
    for i, j in sorted(pairs):
        succ.setdefault(i, []).append(j)
    for i, j in sorted(pairs):
        for k in succ.get(j, ()):
            if (i, k) not in pairs:
                transitive = PropertyVerdict(False, (el[i], el[j], el[k]))
                break
        if not transitive.holds:
            break

    return PropertyReport(reflexive, symmetric, transitive, antisymmetric)


class _Blocks:
    universe: Universe
    blocks: tuple[SubsetValue, ...]

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(b.bits for b in self.blocks)

    def __iter__(self) -> Iterator[SubsetValue]:
        return iter(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        return "{" + ", ".join(str(b) for b in self.blocks) + "}"


@dataclass(frozen=True)
class Cover(_Blocks):
    """Nonempty, pairwise distinct blocks whose union is the whole universe."""

    universe: Universe
    blocks: tuple[SubsetValue, ...]

    def __post_init__(self) -> None:
        blocks = tuple(self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen: set[int] = set()
        union = 0
        for b in blocks:
            if b.universe != self.universe:
                raise UniverseError("block belongs to a different universe")
            if not b.bits:
                raise UniverseError("empty block in granulation")
            if b.bits in seen:
                raise UniverseError(f"repeated block {b}")
            seen.add(b.bits)
            union |= b.bits
        if union != self.universe.full_mask:
            missing = self.universe.names(self.universe.full_mask & ~union)
            raise UniverseError(f"blocks do not cover the universe; missing {missing}")

    @classmethod
    def from_masks(cls, universe: Universe, masks: Iterable[int]) -> "Cover":
        return cls(universe, tuple(SubsetValue(universe, m) for m in masks))

    @classmethod
    def from_names(cls, universe: Universe, blocks: Iterable[Iterable[object]]) -> "Cover":
        return cls(universe, tuple(universe.subset(b) for b in blocks))


@dataclass(frozen=True)
class Partition(Cover):
    """A cover whose blocks are pairwise disjoint."""

    def __post_init__(self) -> None:
        seen = 0
        for b in self.blocks:
            if seen & b.bits:
                clash = self.universe.names(seen & b.bits)
                raise UniverseError(f"partition blocks are not disjoint; shared elements {clash}")
            seen |= b.bits
        super().__post_init__()

    def canonical(self) -> "Partition":
        """Blocks reordered by least element."""
        return Partition(self.universe, tuple(sorted(self.blocks, key=lambda b: b.bits & -b.bits)))

    def restricted_growth_string(self) -> tuple[int, ...]:
        label = {}
        for k, b in enumerate(self.canonical().blocks):
            for i in iter_bits(b.bits):
                label[i] = k
        return tuple(label[i] for i in range(self.universe.size))


def equivalence_classes(r: BinaryRelation) -> Partition:
    """Partition the universe into ``r``-classes, ordered by least element.

    Raises :class:`UniverseError` naming the violated property and its witness
    when ``r`` is not an equivalence.
    """
    report = relation_properties(r)
    for name in ("reflexive", "symmetric", "transitive"):
        verdict = report.as_dict()[name]
        if not verdict.holds:
            raise UniverseError(f"relation is not {name}; witness {verdict.witness}")
    n = r.universe.size
    classes = []
    assigned = 0
    for i in range(n):
        if assigned >> i & 1:
            continue
        block = 0
        for j in range(n):
            if (i, j) in r.pairs:
                block |= 1 << j
        assigned |= block
        classes.append(block)
    return Partition.from_masks(r.universe, classes)


def restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """All restricted-growth strings of length ``n`` in lexicographic order."""
    if n < 1:
        return
    rgs = [0] * n

    def rec(i: int, high: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            yield tuple(rgs)
            return
        for v in range(high + 2):
            rgs[i] = v
            yield from rec(i + 1, max(high, v))

    yield from rec(1, 0)


def rgs_to_masks(rgs: Sequence[int]) -> tuple[int, ...]:
    blocks = [0] * (max(rgs) + 1)
    for i, label in enumerate(rgs):
        blocks[label] |= 1 << i
    return tuple(blocks)


def enumerate_partitions(n: int, universe: Universe | None = None, start: int = 0) -> Iterator[Partition]:
    """Every set partition of an ``n``-element universe, once each, in restricted-growth order.

    ``start`` skips that many partitions so a stream can be resumed from an index.
    """
    bound = max_universe()
    if not 1 <= n <= bound:
        raise UniverseError(f"partition size {n} outside 1..{bound}")
    if universe is None:
        universe = Universe.of_size(n)
    elif universe.size != n:
        raise UniverseError("universe size does not match n")
    for k, rgs in enumerate(restricted_growth_strings(n)):
        if k < start:
            continue
        yield Partition.from_masks(universe, rgs_to_masks(rgs))

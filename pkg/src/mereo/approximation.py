"""Classical and covering lower/upper approximations over bit-vector subsets."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, Sequence

from .universe import Cover, Partition, SubsetValue, Universe, UniverseError

# An operator strategy maps (block masks, subset mask) -> approximation mask.
Operator = Callable[[Sequence[int], int], int]


def union_of_blocks_inside(blocks: Sequence[int], bits: int) -> int:
    out = 0
    for b in blocks:
        if b & ~bits == 0:
            out |= b
    return out


def union_of_blocks_meeting(blocks: Sequence[int], bits: int) -> int:
    out = 0
    for b in blocks:
        if b & bits:
            out |= b
    return out


class Mode(str, Enum):
    PARTITION = "partition"
    COVER = "cover"


@dataclass(frozen=True)
class ApproximationSpace:
    """A universe with a partition or proper cover and a lower/upper operator pair.

    The default operators are the same in both modes: the lower approximation
    is the union of blocks inside the set, the upper one the union of blocks
    meeting it. Other pairs can be plugged in through ``lower_op``/``upper_op``.
    """

    granulation: Cover
    lower_op: Operator = union_of_blocks_inside
    upper_op: Operator = union_of_blocks_meeting
    _lower: tuple[int, ...] | None = field(default=None, init=False, repr=False, compare=False)
    _upper: tuple[int, ...] | None = field(default=None, init=False, repr=False, compare=False)

    @classmethod
    def from_blocks(cls, universe: Universe, blocks, mode: Mode | str = Mode.PARTITION) -> "ApproximationSpace":
        mode = Mode(mode)
        kind = Partition if mode is Mode.PARTITION else Cover
        return cls(kind.from_names(universe, blocks))

    @property
    def universe(self) -> Universe:
        return self.granulation.universe

    @property
    def mode(self) -> Mode:
        return Mode.PARTITION if isinstance(self.granulation, Partition) else Mode.COVER

    @property
    def blocks(self) -> tuple[int, ...]:
        return self.granulation.masks

    def _tables(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        if self._lower is None:
            blocks = self.blocks
            size = 1 << self.universe.size
            object.__setattr__(self, "_lower", tuple(self.lower_op(blocks, x) for x in range(size)))
            object.__setattr__(self, "_upper", tuple(self.upper_op(blocks, x) for x in range(size)))
        return self._lower, self._upper  # type: ignore[return-value]

    def lower_mask(self, bits: int) -> int:
        if self.universe.size <= 12:
            return self._tables()[0][bits]
        return self.lower_op(self.blocks, bits)

    def upper_mask(self, bits: int) -> int:
        if self.universe.size <= 12:
            return self._tables()[1][bits]
        return self.upper_op(self.blocks, bits)

    def _check(self, a: SubsetValue) -> int:
        if a.universe != self.universe:
            raise UniverseError("subset is over a different universe than the approximation space")
        return a.bits

    def lower(self, a: SubsetValue) -> SubsetValue:
        return SubsetValue(self.universe, self.lower_mask(self._check(a)))

    def upper(self, a: SubsetValue) -> SubsetValue:
        return SubsetValue(self.universe, self.upper_mask(self._check(a)))


def lower_approx(s: ApproximationSpace, a: SubsetValue) -> SubsetValue:
    return s.lower(a)


def upper_approx(s: ApproximationSpace, a: SubsetValue) -> SubsetValue:
    return s.upper(a)


@dataclass(frozen=True)
class Regions:
    positive: SubsetValue
    negative: SubsetValue
    boundary: SubsetValue

    def __iter__(self) -> Iterator[SubsetValue]:
        return iter((self.positive, self.negative, self.boundary))


def regions(s: ApproximationSpace, a: SubsetValue) -> Regions:
    low, up = s.lower(a), s.upper(a)
    return Regions(low, ~up, up - low)


def rough_inclusion(s: ApproximationSpace, a: SubsetValue, b: SubsetValue) -> bool:
    return s.lower(a) <= s.lower(b) and s.upper(a) <= s.upper(b)


def rough_equal(s: ApproximationSpace, a: SubsetValue, b: SubsetValue) -> bool:
    return rough_inclusion(s, a, b) and rough_inclusion(s, b, a)


DEFINITENESS_FLAGS = (
    "lower-definite",
    "upper-definite",
    "definite",
    "weakly-upper-definite",
    "weakly-definite",
)


def definiteness_flags(lower, upper, x) -> frozenset[str]:
    """Definiteness classes of ``x`` for any pair of unary operators."""
    xl, xu = lower(x), upper(x)
    weak_upper = upper(xu) == xu
    flags = set()
    if xl == x:
        flags.add("lower-definite")
    if xu == x:
        flags.add("upper-definite")
    if xl == x and xu == x:
        flags.add("definite")
    if weak_upper:
        flags.add("weakly-upper-definite")
    if weak_upper and xl == x:
        flags.add("weakly-definite")
    return frozenset(flags)


def definiteness(s: ApproximationSpace, a: SubsetValue) -> frozenset[str]:
    s._check(a)
    return definiteness_flags(s.lower_mask, s.upper_mask, a.bits)


ROUGH_OBJECT_KINDS = ("definite-pair", "distinct-pair", "interval", "definite-interval")


def enumerate_rough_objects(s: ApproximationSpace, kind: str) -> list[tuple[SubsetValue, SubsetValue]]:
    """Rough-object representations over the power set, in subset-index order.

    ``definite-pair``     pairs (a, b) of definite sets with a strictly below b
    ``distinct-pair``     distinct pairs (x^l, x^u) with x^l != x^u
    ``interval``          all distinct intervals (x^l, x^u)
    ``definite-interval`` pairs (a, b) of definite sets with a below or equal to b
    """
    if kind not in ROUGH_OBJECT_KINDS:
        raise ValueError(f"unknown rough object kind {kind!r}; expected one of {ROUGH_OBJECT_KINDS}")
    u = s.universe
    size = 1 << u.size
    out: list[tuple[int, int]] = []
    if kind in ("definite-pair", "definite-interval"):
        definite = [x for x in range(size) if s.lower_mask(x) == x and s.upper_mask(x) == x]
        strict = kind == "definite-pair"
        for a in definite:
            for b in definite:
                if a & ~b == 0 and (a != b or not strict):
                    out.append((a, b))
    else:
        seen = set()
        for x in range(size):
            pair = (s.lower_mask(x), s.upper_mask(x))
            if kind == "distinct-pair" and pair[0] == pair[1]:
                continue
            if pair not in seen:
                seen.add(pair)
                out.append(pair)
    return [(SubsetValue(u, a), SubsetValue(u, b)) for a, b in out]

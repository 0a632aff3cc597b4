"""Granular operator space models.

A model is a finite carrier indexed ``0..size-1`` together with a set of
granules, total lower/upper operators, a parthood predicate, an order, partial
join/meet and optional bottom/top elements.

:class:`SetModel` is the power-set model of an :class:`ApproximationSpace`;
its carrier index *is* the subset bit mask, so parthood and order are
inclusion, join is union and meet is intersection. :class:`TableModel` holds
everything in explicit tables and is what abstract model files load into.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .approximation import ApproximationSpace
from .universe import SubsetValue, Universe, UniverseError, submasks


class ModelError(ValueError):
    pass


class GranularSpaceModel:
    """Interface shared by set-backed and table-backed models."""

    size: int
    granules: tuple[int, ...]
    bottom: int | None
    top: int | None
    set_backed: bool = False
    named: dict[str, int]
    probe = None  # optional ProbeAssignment attached by model files

    def name(self, i: int) -> str:
        raise NotImplementedError

    def index(self, ref: object) -> int:
        raise NotImplementedError

    def lower(self, i: int) -> int:
        raise NotImplementedError

    def upper(self, i: int) -> int:
        raise NotImplementedError

    def part(self, i: int, j: int) -> bool:
        raise NotImplementedError

    def leq(self, i: int, j: int) -> bool:
        raise NotImplementedError

    def join(self, i: int, j: int) -> int | None:
        raise NotImplementedError

    def meet(self, i: int, j: int) -> int | None:
        raise NotImplementedError

    def parts(self, i: int) -> Sequence[int]:
        """All ``j`` with ``part(j, i)``, ascending."""
        raise NotImplementedError

    def elements(self) -> range:
        return range(self.size)

    def is_zero(self, i: int) -> bool:
        return self.bottom is not None and i == self.bottom

    def nonzero(self) -> list[int]:
        return [i for i in range(self.size) if not self.is_zero(i)]

    def proper_part(self, i: int, j: int) -> bool:
        return self.part(i, j) and not self.part(j, i)

    def is_granule(self, i: int) -> bool:
        return i in self._granule_set

    @cached_property
    def _granule_set(self) -> frozenset[int]:
        return frozenset(self.granules)

    @cached_property
    def granules_within(self) -> tuple[int, ...]:
        """Per element, a bit mask over granule positions ``k`` with ``part(granules[k], x)``."""
        out = []
        for x in range(self.size):
            m = 0
            for k, g in enumerate(self.granules):
                if self.part(g, x):
                    m |= 1 << k
            out.append(m)
        return tuple(out)

    def joins_total(self) -> bool:
        return all(self.join(i, j) is not None for i in range(self.size) for j in range(self.size))

    def meets_total(self) -> bool:
        return all(self.meet(i, j) is not None for i in range(self.size) for j in range(self.size))

    def encode(self, i: int):
        """JSON-friendly representation of an element (see :meth:`index`)."""
        return self.name(i)

    def describe(self) -> str:
        return f"{type(self).__name__}(size={self.size}, granules={len(self.granules)})"


class SetModel(GranularSpaceModel):
    """Power-set model of an approximation space; element ``i`` is the subset with mask ``i``."""

    set_backed = True

    def __init__(self, space: ApproximationSpace, named: Mapping[str, Iterable[object]] | None = None):
        self.space = space
        self.universe: Universe = space.universe
        self.size = 1 << self.universe.size
        self.granules = tuple(space.blocks)
        self.bottom = 0
        self.top = self.universe.full_mask
        self._lower = [space.lower_mask(x) for x in range(self.size)]
        self._upper = [space.upper_mask(x) for x in range(self.size)]
        self.named = {k: self.universe.mask(v) for k, v in (named or {}).items()}

    @classmethod
    def from_blocks(cls, universe: Universe | Sequence[object], blocks, mode: str = "partition", named=None) -> "SetModel":
        if not isinstance(universe, Universe):
            universe = Universe(tuple(universe))
        return cls(ApproximationSpace.from_blocks(universe, blocks, mode), named)

    @property
    def mode(self) -> str:
        return self.space.mode.value

    def name(self, i: int) -> str:
        return self.universe.format_mask(i)

    def index(self, ref: object) -> int:
        if isinstance(ref, SubsetValue):
            if ref.universe != self.universe:
                raise UniverseError("subset is over a different universe")
            return ref.bits
        if isinstance(ref, int):
            if not 0 <= ref < self.size:
                raise ModelError(f"element index {ref} outside carrier")
            return ref
        if isinstance(ref, str):
            if ref in self.named:
                return self.named[ref]
            text = ref.strip()
            if text.startswith("{") and text.endswith("}"):
                inner = text[1:-1].strip()
                return self.universe.mask(x.strip() for x in inner.split(",") if x.strip())
            return self.universe.mask([text])
        return self.universe.mask(ref)  # iterable of element names

    def encode(self, i: int) -> list[str]:
        return self.universe.names(i)

    def subset(self, i: int) -> SubsetValue:
        return SubsetValue(self.universe, i)

    def lower(self, i: int) -> int:
        return self._lower[i]

    def upper(self, i: int) -> int:
        return self._upper[i]

    def part(self, i: int, j: int) -> bool:
        return i & ~j == 0

    leq = part

    def join(self, i: int, j: int) -> int:
        return i | j

    def meet(self, i: int, j: int) -> int:
        return i & j

    def parts(self, i: int) -> list[int]:
        return sorted(submasks(i))

    def joins_total(self) -> bool:
        return True

    def meets_total(self) -> bool:
        return True

    @cached_property
    def granules_within(self) -> tuple[int, ...]:
        out = []
        for x in range(self.size):
            m = 0
            for k, g in enumerate(self.granules):
                if g & ~x == 0:
                    m |= 1 << k
            out.append(m)
        return tuple(out)

    def describe(self) -> str:
        return f"set model over {self.universe.format_mask(self.top)} with {self.mode} {self.space.granulation}"


class TableModel(GranularSpaceModel):
    """A model given entirely by finite tables over named elements.

    ``join`` and ``meet`` map ordered pairs of element names to a name; a
    missing pair means the operation is undefined there. ``subsets`` optionally
    attaches a subset of some universe to each element, which is what lets a
    table model qualify as a set HGOS.
    """

    def __init__(
        self,
        carrier: Sequence[str],
        granules: Iterable[str],
        lower: Mapping[str, str],
        upper: Mapping[str, str],
        parthood: Iterable[tuple[str, str]],
        order: Iterable[tuple[str, str]],
        join: Mapping[tuple[str, str], str] | None = None,
        meet: Mapping[tuple[str, str], str] | None = None,
        bottom: str | None = None,
        top: str | None = None,
        subsets: Mapping[str, int] | None = None,
        named: Mapping[str, str] | None = None,
    ):
        self.carrier = tuple(str(c) for c in carrier)
        if not self.carrier:
            raise ModelError("carrier is empty")
        self._index = {}
        for i, c in enumerate(self.carrier):
            if c in self._index:
                raise ModelError(f"duplicate carrier element {c!r}")
            self._index[c] = i
        self.size = len(self.carrier)
        self.granules = tuple(sorted({self.index(g) for g in granules}))
        self._lower = self._unary(lower, "lower")
        self._upper = self._unary(upper, "upper")
        self._part = self._relation(parthood, "parthood")
        self._leq = self._relation(order, "order")
        self._join = self._binary(join or {}, "join")
        self._meet = self._binary(meet or {}, "meet")
        self.bottom = None if bottom is None else self.index(bottom)
        self.top = None if top is None else self.index(top)
        self.subsets = None if subsets is None else {self.index(k): v for k, v in subsets.items()}
        self.subset_universe: Universe | None = None
        self.named = {k: self.index(v) for k, v in (named or {}).items()}
        self._parts = [tuple(j for j in range(self.size) if self._part[j] >> i & 1) for i in range(self.size)]
        if self.subsets is not None:
            self.set_backed = True

    def _unary(self, table: Mapping[str, str], what: str) -> list[int]:
        out = []
        for c in self.carrier:
            if c not in table:
                raise ModelError(f"{what} table has no entry for {c!r}")
            out.append(self.index(table[c]))
        for k in table:
            self.index(k)
        return out

    def _relation(self, pairs: Iterable[tuple[str, str]], what: str) -> list[int]:
        rows = [0] * self.size
        for a, b in pairs:
            rows[self.index(a)] |= 1 << self.index(b)
        return rows

    def _binary(self, table: Mapping[tuple[str, str], str], what: str) -> dict[tuple[int, int], int]:
        return {(self.index(a), self.index(b)): self.index(c) for (a, b), c in table.items()}

    def name(self, i: int) -> str:
        return self.carrier[i]

    def index(self, ref: object) -> int:
        if isinstance(ref, int) and not isinstance(ref, bool):
            if not 0 <= ref < self.size:
                raise ModelError(f"element index {ref} outside carrier")
            return ref
        key = str(ref)
        if key in self._index:
            return self._index[key]
        if hasattr(self, "named") and key in self.named:
            return self.named[key]
        raise ModelError(f"unknown carrier element {ref!r}")

    def lower(self, i: int) -> int:
        return self._lower[i]

    def upper(self, i: int) -> int:
        return self._upper[i]

    def part(self, i: int, j: int) -> bool:
        return bool(self._part[i] >> j & 1)

    def leq(self, i: int, j: int) -> bool:
        return bool(self._leq[i] >> j & 1)

    def join(self, i: int, j: int) -> int | None:
        return self._join.get((i, j))

    def meet(self, i: int, j: int) -> int | None:
        return self._meet.get((i, j))

    def parts(self, i: int) -> tuple[int, ...]:
        return self._parts[i]

    # -- table views used by serialization and fixtures -------------------

    def lower_table(self) -> dict[str, str]:
        return {self.carrier[i]: self.carrier[v] for i, v in enumerate(self._lower)}

    def upper_table(self) -> dict[str, str]:
        return {self.carrier[i]: self.carrier[v] for i, v in enumerate(self._upper)}

    def parthood_pairs(self) -> list[tuple[str, str]]:
        return [(self.carrier[i], self.carrier[j]) for i in range(self.size) for j in range(self.size) if self.part(i, j)]

    def order_pairs(self) -> list[tuple[str, str]]:
        return [(self.carrier[i], self.carrier[j]) for i in range(self.size) for j in range(self.size) if self.leq(i, j)]

    def join_table(self) -> dict[tuple[str, str], str]:
        return {(self.carrier[a], self.carrier[b]): self.carrier[c] for (a, b), c in sorted(self._join.items())}

    def meet_table(self) -> dict[tuple[str, str], str]:
        return {(self.carrier[a], self.carrier[b]): self.carrier[c] for (a, b), c in sorted(self._meet.items())}

    def replace(self, **changes) -> "TableModel":
        """A copy with some constructor arguments replaced (tables are never edited in place)."""
        args = dict(
            carrier=self.carrier,
            granules=[self.carrier[g] for g in self.granules],
            lower=self.lower_table(),
            upper=self.upper_table(),
            parthood=self.parthood_pairs(),
            order=self.order_pairs(),
            join=self.join_table(),
            meet=self.meet_table(),
            bottom=None if self.bottom is None else self.carrier[self.bottom],
            top=None if self.top is None else self.carrier[self.top],
            subsets=None if self.subsets is None else {self.carrier[k]: v for k, v in self.subsets.items()},
            named={k: self.carrier[v] for k, v in self.named.items()},
        )
        args.update(changes)
        out = TableModel(**args)
        out.subset_universe = self.subset_universe
        out.probe = self.probe
        return out


def to_table_model(m: GranularSpaceModel) -> TableModel:
    """Materialize any model into explicit tables (set models keep their subsets)."""
    if isinstance(m, TableModel):
        return m.replace()
    names = [m.name(i) for i in range(m.size)]
    pairs = [(i, j) for i in range(m.size) for j in range(m.size)]
    join = {}
    meet = {}
    for i, j in pairs:
        v = m.join(i, j)
        if v is not None:
            join[(names[i], names[j])] = names[v]
        v = m.meet(i, j)
        if v is not None:
            meet[(names[i], names[j])] = names[v]
    table = TableModel(
        carrier=names,
        granules=[names[g] for g in m.granules],
        lower={names[i]: names[m.lower(i)] for i in range(m.size)},
        upper={names[i]: names[m.upper(i)] for i in range(m.size)},
        parthood=[(names[i], names[j]) for i, j in pairs if m.part(i, j)],
        order=[(names[i], names[j]) for i, j in pairs if m.leq(i, j)],
        join=join,
        meet=meet,
        bottom=None if m.bottom is None else names[m.bottom],
        top=None if m.top is None else names[m.top],
        subsets={names[i]: i for i in range(m.size)} if isinstance(m, SetModel) else None,
        named={k: names[v] for k, v in m.named.items()},
    )
    if isinstance(m, SetModel):
        table.subset_universe = m.universe
    table.probe = m.probe
    return table


def granule_names(m: GranularSpaceModel) -> list[str]:
    return [m.name(g) for g in m.granules]

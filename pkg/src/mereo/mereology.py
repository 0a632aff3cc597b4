"""Parthood-derived predicates: overlap, bounds, supplementation, sum and fusion.

Subsets of the carrier are handled internally as bit masks over carrier
indices; the public functions take and return element names.

Overlap needs a *nonzero* common part. In a structure with a designated zero
(the bottom of a model) the zero never witnesses overlap and never overlaps
anything; bare structures have no zero and any element may witness.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .model import GranularSpaceModel
from .universe import BinaryRelation, PropertyReport, iter_bits, pair_properties


class MereologyError(ValueError):
    pass


@dataclass(frozen=True)
class ParthoodStructure:
    carrier: tuple[str, ...]
    rows: tuple[int, ...]  # rows[i] has bit j iff part(i, j)
    zero: int | None = None
    _index: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "carrier", tuple(self.carrier))
        object.__setattr__(self, "rows", tuple(self.rows))
        if len(self.rows) != len(self.carrier):
            raise MereologyError("parthood table size does not match the carrier")
        object.__setattr__(self, "_index", {c: i for i, c in enumerate(self.carrier)})
        if len(self._index) != len(self.carrier):
            raise MereologyError("duplicate carrier element")

    @classmethod
    def from_pairs(cls, carrier: Sequence[str], pairs: Iterable[tuple[str, str]], zero: str | None = None) -> "ParthoodStructure":
        index = {c: i for i, c in enumerate(carrier)}
        rows = [0] * len(carrier)
        for a, b in pairs:
            if a not in index or b not in index:
                raise MereologyError(f"unknown element in pair {(a, b)!r}")
            rows[index[a]] |= 1 << index[b]
        return cls(tuple(carrier), tuple(rows), None if zero is None else index[zero])

    @classmethod
    def from_relation(cls, r: BinaryRelation) -> "ParthoodStructure":
        rows = [0] * r.universe.size
        for i, j in r.pairs:
            rows[i] |= 1 << j
        return cls(r.universe.elements, tuple(rows))

    @classmethod
    def from_model(cls, m: GranularSpaceModel) -> "ParthoodStructure":
        rows = []
        for i in range(m.size):
            row = 0
            for j in range(m.size):
                if m.part(i, j):
                    row |= 1 << j
            rows.append(row)
        return cls(tuple(m.name(i) for i in range(m.size)), tuple(rows), m.bottom)

    @property
    def size(self) -> int:
        return len(self.carrier)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def index(self, ref: object) -> int:
        if isinstance(ref, int) and not isinstance(ref, bool):
            if not 0 <= ref < self.size:
                raise MereologyError(f"element index {ref} outside carrier")
            return ref
        try:
            return self._index[str(ref)]
        except KeyError:
            raise MereologyError(f"unknown element {ref!r}") from None

    def mask(self, refs: Iterable[object]) -> int:
        out = 0
        for r in refs:
            out |= 1 << self.index(r)
        return out

    def names(self, mask: int) -> frozenset[str]:
        return frozenset(self.carrier[i] for i in iter_bits(mask))

    def part(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def pairs(self) -> list[tuple[str, str]]:
        return [(self.carrier[i], self.carrier[j]) for i in range(self.size) for j in iter_bits(self.rows[i])]

    @cached_property
    def parts_mask(self) -> tuple[int, ...]:
        """parts_mask[a] has bit x iff part(x, a)."""
        out = [0] * self.size
        for x, row in enumerate(self.rows):
            for a in iter_bits(row):
                out[a] |= 1 << x
        return tuple(out)

    @cached_property
    def overlap_mask(self) -> tuple[int, ...]:
        nonzero = self.full if self.zero is None else self.full & ~(1 << self.zero)
        out = []
        for a in range(self.size):
            witnesses = self.parts_mask[a] & nonzero
            m = 0
            for x in range(self.size):
                if witnesses & self.parts_mask[x]:
                    m |= 1 << x
            out.append(m)
        return tuple(out)

    @cached_property
    def reflexive(self) -> bool:
        return all(self.part(i, i) for i in range(self.size))

    @cached_property
    def transitive(self) -> bool:
        for i in range(self.size):
            for j in iter_bits(self.rows[i]):
                if self.rows[j] & ~self.rows[i]:
                    return False
        return True

    def is_zero(self, i: int) -> bool:
        return self.zero is not None and i == self.zero


def parthood_properties(s: ParthoodStructure) -> PropertyReport:
    """Reflexivity, symmetry, transitivity and antisymmetry of the parthood, with witnesses."""
    pairs = frozenset((i, j) for i in range(s.size) for j in iter_bits(s.rows[i]))
    return pair_properties(s.carrier, pairs)


def overlap(s: ParthoodStructure, a, b) -> bool:
    return bool(s.overlap_mask[s.index(a)] >> s.index(b) & 1)


def o_set(s: ParthoodStructure, a) -> frozenset[str]:
    return s.names(s.overlap_mask[s.index(a)])


def pc_set(s: ParthoodStructure, a) -> frozenset[str]:
    return s.names(s.parts_mask[s.index(a)])


def proper_part(s: ParthoodStructure, a, b) -> bool:
    i, j = s.index(a), s.index(b)
    return s.part(i, j) and not s.part(j, i)


def _upper_bounds(s: ParthoodStructure, xs: int) -> int:
    out = s.full
    for x in iter_bits(xs):
        out &= s.rows[x]
    return out


def _lower_bounds(s: ParthoodStructure, xs: int) -> int:
    out = s.full
    for x in iter_bits(xs):
        out &= s.parts_mask[x]
    return out


def bounds(s: ParthoodStructure, xs: Iterable[object]) -> tuple[frozenset[str], frozenset[str]]:
    """(upper bounds, lower bounds) of a set of elements."""
    m = s.mask(xs)
    return s.names(_upper_bounds(s, m)), s.names(_lower_bounds(s, m))


SSP_FORMS = ("displayed", "overlap")


@dataclass(frozen=True)
class SeparativeResult:
    holds: bool
    witness: tuple[str, str] | None = None

    def __bool__(self) -> bool:
        return self.holds


def _separative_witness(s: ParthoodStructure, form: str) -> tuple[int, int] | None:
    if form not in SSP_FORMS:
        raise MereologyError(f"unknown supplementation form {form!r}")
    for a in range(s.size):
        for b in range(s.size):
            if s.part(a, b):
                continue
            candidates = s.parts_mask[a]
            if form == "displayed":
                # z part of a, z not part of b, b not part of z
                ok = candidates & ~s.parts_mask[b] & ~s.rows[b]
            else:
                # z part of a, z not overlapping b
                ok = candidates & ~s.overlap_mask[b]
            if not ok:
                return a, b
    return None


def is_separative(s: ParthoodStructure, form: str = "displayed") -> SeparativeResult:
    """Strong supplementation.

    ``displayed``: not part(a,b) implies some z with part(z,a), not part(z,b), not part(b,z).
    ``overlap``:   not part(a,b) implies some z with part(z,a) that does not overlap b.
    """
    w = _separative_witness(s, form)
    if w is None:
        return SeparativeResult(True)
    return SeparativeResult(False, (s.carrier[w[0]], s.carrier[w[1]]))


def _union_overlaps(s: ParthoodStructure, bs: int) -> int:
    out = 0
    for x in iter_bits(bs):
        out |= s.overlap_mask[x]
    return out


def _is_sum(s: ParthoodStructure, a: int, bs: int) -> bool:
    pc = s.parts_mask[a]
    if bs & ~pc:
        return False
    if s.zero is not None:
        pc &= ~(1 << s.zero)  # zero overlaps nothing, so it is exempt
    return pc & ~_union_overlaps(s, bs) == 0


def _is_fusion(s: ParthoodStructure, a: int, bs: int) -> bool:
    return s.overlap_mask[a] == _union_overlaps(s, bs)


def is_sum(s: ParthoodStructure, a, bs: Iterable[object]) -> bool:
    return _is_sum(s, s.index(a), s.mask(bs))


def is_fusion(s: ParthoodStructure, a, bs: Iterable[object]) -> bool:
    return _is_fusion(s, s.index(a), s.mask(bs))


# -- Theorem 1 ---------------------------------------------------------------

CLAUSES = ("i", "ii", "iii")


@dataclass(frozen=True)
class ClauseViolation:
    clause: str
    a: str
    b: frozenset[str]

    def to_dict(self) -> dict:
        return {"clause": self.clause, "a": self.a, "B": sorted(self.b)}


@dataclass
class Theorem1Report:
    applicable: dict[str, bool]
    checked: dict[str, int]
    violations: list[ClauseViolation]
    ssp_form: str

    @property
    def ok(self) -> bool:
        return not self.violations

    def clause_ok(self, clause: str) -> bool:
        return not any(v.clause == clause for v in self.violations)

    def to_dict(self) -> dict:
        return {
            "ssp_form": self.ssp_form,
            "applicable": dict(self.applicable),
            "checked": dict(self.checked),
            "violations": [v.to_dict() for v in self.violations],
        }


def _subset_masks(n: int, max_size: int | None) -> Iterable[int]:
    if max_size is None or max_size >= n:
        return range(1 << n)
    return (sum(1 << i for i in c) for r in range(max_size + 1) for c in combinations(range(n), r))


def clause_applicability(s: ParthoodStructure, ssp_form: str = "overlap") -> dict[str, bool]:
    separative = _separative_witness(s, ssp_form) is None
    return {"i": s.reflexive, "ii": s.transitive and separative, "iii": s.transitive and separative}


def verify_theorem1(
    s: ParthoodStructure,
    ssp_form: str = "overlap",
    max_subset_size: int | None = None,
    first_only: bool = False,
) -> Theorem1Report:
    """Check the three sum/fusion clauses over every (a, B) pair.

    Clause (i) is gated on reflexivity; (ii) and (iii) on transitivity plus
    strong supplementation in the chosen form. Gated-off clauses are reported
    as not applicable rather than vacuously true.
    """
    applicable = clause_applicability(s, ssp_form)
    checked = dict.fromkeys(CLAUSES, 0)
    violations: list[ClauseViolation] = []

    def record(clause: str, a: int, bs: int) -> None:
        violations.append(ClauseViolation(clause, s.carrier[a], s.names(bs)))

    for bs in _subset_masks(s.size, max_subset_size):
        binary = bin(bs).count("1") == 2
        for a in range(s.size):
            fusion = _is_fusion(s, a, bs)
            total = _is_sum(s, a, bs)
            if applicable["i"]:
                checked["i"] += 1
                if bs & ~s.parts_mask[a] == 0 and fusion and not total:
                    record("i", a, bs)
            if applicable["ii"]:
                checked["ii"] += 1
                if fusion != total:
                    record("ii", a, bs)
            if applicable["iii"] and binary:
                checked["iii"] += 1
                if fusion and not total:
                    record("iii", a, bs)
            if first_only and violations:
                return Theorem1Report(applicable, checked, violations, ssp_form)
    return Theorem1Report(applicable, checked, violations, ssp_form)


def random_structure(rng: random.Random, n: int, density: float = 0.3, close: bool = False) -> ParthoodStructure:
    """A random reflexive parthood on ``n`` elements; ``close`` takes the transitive closure."""
    rows = [1 << i for i in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < density:
                rows[i] |= 1 << j
    if close:
        changed = True
        while changed:
            changed = False
            for i in range(n):
                reach = rows[i]
                for j in iter_bits(rows[i]):
                    reach |= rows[j]
                if reach != rows[i]:
                    rows[i] = reach
                    changed = True
    return ParthoodStructure(tuple(f"p{i}" for i in range(n)), tuple(rows))


def random_structures(seed: int, count: int, max_n: int = 6) -> list[ParthoodStructure]:
    """Seeded mix of raw reflexive relations and their transitive closures, sizes 1..max_n."""
    rng = random.Random(seed)
    out = []
    for k in range(count):
        n = rng.randint(1, max_n)
        density = rng.choice((0.1, 0.2, 0.35, 0.5))
        out.append(random_structure(rng, n, density, close=bool(k % 2)))
    return out

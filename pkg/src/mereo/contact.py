"""Rough contact relations, the contact axioms C1-C7 and descriptive proximity.

Relation tables are materialized as row bit masks: ``rows[a]`` has bit ``b``
set iff the relation holds of ``(a, b)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .model import GranularSpaceModel, SetModel
from .report import FAIL, PASS, SKIPPED, AxiomReport, AxiomVerdict
from .universe import SubsetValue, Universe, UniverseError, iter_bits

KINDS = ("a", "o", "1", "2", "3")
CONTACT_AXIOMS = ("C1", "C2", "C3", "C4", "C5", "C6", "C7")
RELATION_PROPERTIES = ("symmetric", "reflexive", "transitive", "extensional")


class ContactError(ValueError):
    pass


def normalize_kind(kind: str) -> str:
    k = str(kind)
    for prefix in ("Re_", "Re", "type-", "type"):
        if k.startswith(prefix):
            k = k[len(prefix):]
            break
    if k not in KINDS:
        raise ContactError(f"unknown rough contact kind {kind!r}; expected one of {KINDS}")
    return k


def kind_label(kind: str) -> str:
    return f"Re_{normalize_kind(kind)}"


@dataclass(frozen=True)
class NamedRelation:
    model: GranularSpaceModel = field(repr=False)
    kind: str
    rows: tuple[int, ...]

    def holds(self, a: int, b: int) -> bool:
        return bool(self.rows[a] >> b & 1)

    def __call__(self, a, b) -> bool:
        return self.holds(self.model.index(a), self.model.index(b))

    def pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a, row in enumerate(self.rows) for b in iter_bits(row)]

    @cached_property
    def columns(self) -> tuple[int, ...]:
        cols = [0] * len(self.rows)
        for a, row in enumerate(self.rows):
            for b in iter_bits(row):
                cols[b] |= 1 << a
        return tuple(cols)

    @classmethod
    def from_predicate(cls, m: GranularSpaceModel, pred: Callable[[int, int], bool], kind: str = "custom") -> "NamedRelation":
        rows = []
        for a in range(m.size):
            row = 0
            for b in range(m.size):
                if pred(a, b):
                    row |= 1 << b
            rows.append(row)
        return cls(m, kind, tuple(rows))


# -- relation materialization --------------------------------------------


def _parts_masks(m: GranularSpaceModel) -> list[int]:
    out = []
    for x in range(m.size):
        mask = 0
        for p in m.parts(x):
            mask |= 1 << p
        out.append(mask)
    return out


def _touching_granules(m: GranularSpaceModel) -> list[int]:
    """Per element x, granule positions g such that some nonzero part of x is part of g."""
    if isinstance(m, SetModel):
        return [sum(1 << k for k, g in enumerate(m.granules) if x & g) for x in range(m.size)]
    parts = _parts_masks(m)
    nonzero = (1 << m.size) - 1
    if m.bottom is not None:
        nonzero &= ~(1 << m.bottom)
    granule_parts = [parts[g] & nonzero for g in m.granules]
    return [sum(1 << k for k, gp in enumerate(granule_parts) if gp & parts[x]) for x in range(m.size)]


def _rows_from(size: int, test: Callable[[int, int], bool]) -> tuple[int, ...]:
    rows = []
    for a in range(size):
        row = 0
        for b in range(size):
            if test(a, b):
                row |= 1 << b
        rows.append(row)
    return tuple(rows)


def contact_table(m: GranularSpaceModel, kind: str) -> NamedRelation:
    """Materialize a rough contact relation of the given kind over the whole carrier."""
    k = normalize_kind(kind)
    within = m.granules_within
    lo, up = m.lower, m.upper
    if k == "a":
        touch = _touching_granules(m)
        rows = _rows_from(m.size, lambda a, b: bool(touch[a] & touch[b]))
    elif k == "o":
        rows = _rows_from(m.size, lambda a, b: bool(within[a] & within[b]))
    elif k == "3":
        rows = _rows_from(m.size, lambda a, b: bool(within[up(a)] & within[up(b)]))
    elif k == "2":
        rows = _rows_from(
            m.size,
            lambda a, b: bool(within[lo(a)] & within[up(b)]) and bool(within[up(a)] & within[lo(b)]),
        )
    else:
        part_uppers = [sorted({up(f) for f in m.parts(a)}) for a in range(m.size)]
        leq = m.leq

        def re1(a: int, b: int) -> bool:
            ub = up(b)
            return any(leq(v, ub) and leq(ub, v) for v in part_uppers[a])

        rows = _rows_from(m.size, re1)
    return NamedRelation(m, kind_label(k), rows)


def rough_contact(m: GranularSpaceModel, kind: str, a, b) -> bool:
    """Evaluate one rough contact query ``Re_kind(a, b)``.

    Witnesses for type a range over nonzero elements; type 1 lets its part
    witness range over the whole carrier, so ``Re_1(x, x)`` always holds.
    """
    k = normalize_kind(kind)
    i, j = m.index(a), m.index(b)
    gw = m.granules_within
    lo, up = m.lower, m.upper
    if k == "o":
        return bool(gw[i] & gw[j])
    if k == "3":
        return bool(gw[up(i)] & gw[up(j)])
    if k == "2":
        return bool(gw[lo(i)] & gw[up(j)]) and bool(gw[up(i)] & gw[lo(j)])
    if k == "1":
        ub = up(j)
        return any(m.leq(up(f), ub) and m.leq(ub, up(f)) for f in m.parts(i))
    nonzero_parts = [[e for e in m.parts(x) if not m.is_zero(e)] for x in (i, j)]
    for g in m.granules:
        if any(m.part(e, g) for e in nonzero_parts[0]) and any(m.part(f, g) for f in nonzero_parts[1]):
            return True
    return False


# -- axioms ------------------------------------------------------------------


def _name_witness(m: GranularSpaceModel, **kw: int) -> dict[str, str]:
    return {k: m.name(v) for k, v in kw.items()}


def _ok(name: str, witness: dict[str, str] | None) -> AxiomVerdict:
    return AxiomVerdict(name, PASS) if witness is None else AxiomVerdict(name, FAIL, witness)


def _check_c1(m, r) -> dict | None:
    bot = m.bottom
    for a in range(m.size):
        for b in iter_bits(r.rows[a]):
            if a == bot or b == bot:
                return _name_witness(m, a=a, b=b)
    return None


def _check_c2(m, r) -> dict | None:
    for a in range(m.size):
        for b in iter_bits(r.rows[a]):
            if not r.holds(b, a):
                return _name_witness(m, a=a, b=b)
    return None


def _check_c3(m, r) -> dict | None:
    above = [[e for e in range(m.size) if m.leq(b, e)] for b in range(m.size)]
    for a in range(m.size):
        row = r.rows[a]
        for b in iter_bits(row):
            for e in above[b]:
                if not row >> e & 1:
                    return _name_witness(m, a=a, b=b, e=e)
    return None


def _join_axiom(m, r, mode: str) -> dict | None:
    """C4 (left-to-right only), C6 (biconditional, right argument) or C7 (left argument)."""
    rows = r.rows
    cols = r.columns
    for a in range(m.size):
        line = cols[a] if mode == "C7" else rows[a]
        for b in range(m.size):
            for e in range(m.size):
                j = m.join(b, e)
                left = bool(line >> j & 1)
                right = bool(line >> b & 1) or bool(line >> e & 1)
                if (left and not right) or (mode != "C4" and right and not left):
                    return _name_witness(m, a=a, b=b, e=e)
    return None


def _check_c5(m, r) -> dict | None:
    bot = m.bottom
    for a in range(m.size):
        for b in range(m.size):
            k = m.meet(a, b)
            if k != bot and m.leq(bot, k) and not r.holds(a, b):
                return _name_witness(m, a=a, b=b)
    return None


def relation_property_verdicts(m: GranularSpaceModel, r: NamedRelation) -> list[AxiomVerdict]:
    sym = _check_c2(m, r)
    refl = next((_name_witness(m, x=x) for x in range(m.size) if not r.holds(x, x)), None)
    trans = None
    for a in range(m.size):
        for b in iter_bits(r.rows[a]):
            missing = r.rows[b] & ~r.rows[a]
            if missing:
                c = (missing & -missing).bit_length() - 1
                trans = _name_witness(m, a=a, b=b, c=c)
                break
        if trans:
            break
    ext = None
    first_with_row: dict[int, int] = {}
    for a, row in enumerate(r.rows):
        if row in first_with_row:
            ext = _name_witness(m, a=first_with_row[row], b=a)
            break
        first_with_row[row] = a
    return [
        _ok("symmetric", sym),
        _ok("reflexive", refl),
        _ok("transitive", trans),
        _ok("extensional", ext),
    ]


def contact_axiom_report(m: GranularSpaceModel, r: NamedRelation, axioms: Sequence[str] | None = None) -> AxiomReport:
    """Verdicts for C1-C7 and the four relation properties.

    Axioms needing a bottom, a total join or a total meet are skipped with a
    reason when the model lacks them. ``axioms`` restricts which verdicts are
    computed (others are omitted from the report).
    """
    wanted = set(axioms) if axioms is not None else set(CONTACT_AXIOMS + RELATION_PROPERTIES)
    report = AxiomReport(f"{r.kind} on {m.describe()}")
    has_bottom = m.bottom is not None
    joins = m.joins_total() if wanted & {"C4", "C6", "C7"} else True
    meets = m.meets_total() if "C5" in wanted else True

    def skip(name: str, reason: str) -> None:
        report.add(AxiomVerdict(name, SKIPPED, None, reason))

    if "C1" in wanted:
        report.add(_ok("C1", _check_c1(m, r)) if has_bottom else AxiomVerdict("C1", SKIPPED, None, "no bottom"))
    if "C2" in wanted:
        report.add(_ok("C2", _check_c2(m, r)))
    if "C3" in wanted:
        report.add(_ok("C3", _check_c3(m, r)))
    if "C4" in wanted:
        if joins:
            report.add(_ok("C4", _join_axiom(m, r, "C4")))
        else:
            skip("C4", "join is not total")
    if "C5" in wanted:
        if not has_bottom:
            skip("C5", "no bottom")
        elif not meets:
            skip("C5", "meet is not total")
        else:
            report.add(_ok("C5", _check_c5(m, r)))
    for name in ("C6", "C7"):
        if name not in wanted:
            continue
        if joins:
            report.add(_ok(name, _join_axiom(m, r, name)))
        else:
            skip(name, "join is not total")
    for verdict in relation_property_verdicts(m, r):
        if verdict.name in wanted:
            report.add(verdict)
    return report


@dataclass(frozen=True)
class ContactClass:
    labels: tuple[str, ...]
    undetermined: dict[str, str] = field(default_factory=dict)

    @property
    def label(self) -> str:
        if self.labels:
            return "+".join(self.labels)
        if self.undetermined:
            return "undetermined"
        return "neither"


BUNDLES = {
    "contact": ("C1", "C2", "C3", "C4", "C5"),
    "precontact": ("C1", "C6", "C7"),
}


def classify_contact(report: AxiomReport) -> ContactClass:
    labels = []
    undetermined = {}
    for label, axioms in BUNDLES.items():
        statuses = {ax: report[ax].status if ax in report else SKIPPED for ax in axioms}
        if any(s == FAIL for s in statuses.values()):
            continue
        skipped = [ax for ax, s in statuses.items() if s != PASS]
        if skipped:
            undetermined[label] = "unchecked: " + ", ".join(skipped)
        else:
            labels.append(label)
    return ContactClass(tuple(labels), undetermined)


# -- derived relations ---------------------------------------------------------


def overlap_rows(m: GranularSpaceModel) -> tuple[int, ...]:
    if isinstance(m, SetModel):
        return _rows_from(m.size, lambda a, b: bool(a & b))
    parts = _parts_masks(m)
    nonzero = (1 << m.size) - 1
    if m.bottom is not None:
        nonzero &= ~(1 << m.bottom)
    return _rows_from(m.size, lambda a, b: bool(parts[a] & parts[b] & nonzero))


def derived_relations(m: GranularSpaceModel, r: NamedRelation) -> dict[str, NamedRelation]:
    """Disconnection, external connection and tangential proper part built on ``r``."""
    if _check_c2(m, r) is not None:
        raise ContactError(f"{r.kind} is not symmetric; derived relations need a symmetric base")
    full = (1 << m.size) - 1
    ov = overlap_rows(m)
    dc = tuple(full & ~row for row in r.rows)
    ec = tuple(row & ~ov[a] for a, row in enumerate(r.rows))
    ec_in = [0] * m.size  # ec_in[a]: all c with EC(c, a)
    for c, row in enumerate(ec):
        for a in iter_bits(row):
            ec_in[a] |= 1 << c
    tpp = _rows_from(m.size, lambda a, b: m.proper_part(a, b) and bool(ec_in[a] & ec_in[b]))
    return {
        "DC": NamedRelation(m, f"DC[{r.kind}]", dc),
        "EC": NamedRelation(m, f"EC[{r.kind}]", ec),
        "TPP": NamedRelation(m, f"TPP[{r.kind}]", tpp),
    }


# -- descriptive proximity -------------------------------------------------------


@dataclass(frozen=True)
class ProbeAssignment:
    """Feature vectors with rational components, one per universe element."""

    universe: Universe
    vectors: Mapping[str, tuple[Fraction, ...]]

    def __post_init__(self) -> None:
        clean = {}
        dim = None
        for name, vec in self.vectors.items():
            self.universe.index(name)
            v = tuple(Fraction(x) for x in vec)
            if dim is None:
                dim = len(v)
            elif len(v) != dim:
                raise ContactError(f"probe vector for {name!r} has dimension {len(v)}, expected {dim}")
            clean[str(name)] = v
        missing = [e for e in self.universe.elements if e not in clean]
        if missing:
            raise ContactError(f"probe function undefined on {missing}")
        object.__setattr__(self, "vectors", clean)

    @property
    def dimension(self) -> int:
        return len(next(iter(self.vectors.values())))

    def __call__(self, name: str) -> tuple[Fraction, ...]:
        return self.vectors[name]

    def image(self, a: SubsetValue) -> set[tuple[Fraction, ...]]:
        return {self.vectors[x] for x in a}


def _same_universe(p: ProbeAssignment, *subsets: SubsetValue) -> None:
    for s in subsets:
        if s.universe != p.universe:
            raise UniverseError("subset and probe assignment are over different universes")


def descriptive_intersection(p: ProbeAssignment, a: SubsetValue, b: SubsetValue) -> SubsetValue:
    _same_universe(p, a, b)
    ia, ib = p.image(a), p.image(b)
    keep = [x for x in (a | b) if p(x) in ia and p(x) in ib]
    return p.universe.subset(keep)


def descriptively_near(p: ProbeAssignment, a: SubsetValue, b: SubsetValue) -> bool:
    return bool(descriptive_intersection(p, a, b))


def probe_from_lists(universe: Universe, vectors: Mapping[str, Iterable]) -> ProbeAssignment:
    return ProbeAssignment(universe, {k: tuple(v) for k, v in vectors.items()})

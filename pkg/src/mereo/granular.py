"""Axiom checking and classification of granular operator space models."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterator

from .model import GranularSpaceModel, SetModel
from .report import FAIL, PASS, AxiomReport, AxiomVerdict
from .terms import Join, Meet, Term, Var, eval_partial_term, join_of, weak_equal

A, B, C = Var("a"), Var("b"), Var("c")

# (name, arity, left term, right term); all are read with the weak equality.
LATTICE_IDENTITIES: tuple[tuple[str, int, Term, Term], ...] = (
    ("join-idempotent", 1, Join(A, A), A),
    ("meet-idempotent", 1, Meet(A, A), A),
    ("join-commutative", 2, Join(A, B), Join(B, A)),
    ("meet-commutative", 2, Meet(A, B), Meet(B, A)),
    ("join-meet-absorption", 2, Meet(Join(A, B), A), A),
    ("meet-join-absorption", 2, Join(Meet(A, B), A), A),
    ("join-distributive", 3, Join(Meet(A, B), C), Meet(Join(A, C), Join(B, C))),
    ("meet-distributive", 3, Meet(Join(A, B), C), Join(Meet(A, C), Meet(B, C))),
)

GGS_AXIOMS = tuple(name for name, *_ in LATTICE_IDENTITIES) + (
    "order-link",
    "lower-part",
    "lower-idempotent",
    "upper-part",
    "monotone",
    "bottom-fixed",
    "top-laws",
    "bounds",
)


def _witness(m: GranularSpaceModel, **elements: int) -> dict[str, str]:
    return {k: m.name(v) for k, v in elements.items()}


def _first(m: GranularSpaceModel, arity: int, bad: Callable[..., bool]) -> dict[str, str] | None:
    for args in product(range(m.size), repeat=arity):
        if bad(*args):
            return _witness(m, **dict(zip("abc", args)))
    return None


def _verdict(name: str, witness: dict[str, str] | None, reason: str = "") -> AxiomVerdict:
    if witness is None:
        return AxiomVerdict(name, PASS)
    return AxiomVerdict(name, FAIL, witness, reason)


def check_ggs_axioms(m: GranularSpaceModel) -> AxiomReport:
    """Evaluate every axiom of a general granular operator space on ``m``.

    Lattice identities use the weak equality (an instance holds vacuously when a
    side is undefined). Each failure carries its first witness in carrier order.
    """
    report = AxiomReport(f"GGS axioms: {m.describe()}")
    for name, arity, lhs, rhs in LATTICE_IDENTITIES:
        names = "abc"[:arity]

        def bad(*args, lhs=lhs, rhs=rhs, names=names):
            return not weak_equal(m, lhs, rhs, dict(zip(names, args)))

        report.add(_verdict(name, _first(m, arity, bad)))

    def order_link_bad(a: int, b: int) -> bool:
        le = m.leq(a, b)
        j = m.join(a, b)
        if j is not None and le != (j == b):
            return True
        k = m.meet(a, b)
        return k is not None and le != (k == a)

    report.add(_verdict("order-link", _first(m, 2, order_link_bad)))
    lo, up = m.lower, m.upper
    report.add(_verdict("lower-part", _first(m, 1, lambda a: not m.part(lo(a), a))))
    report.add(_verdict("lower-idempotent", _first(m, 1, lambda a: lo(lo(a)) != lo(a))))
    report.add(_verdict("upper-part", _first(m, 1, lambda a: not m.part(up(a), up(up(a))))))
    report.add(
        _verdict(
            "monotone",
            _first(m, 2, lambda a, b: m.part(a, b) and not (m.part(lo(a), lo(b)) and m.part(up(a), up(b)))),
        )
    )

    bot, top = m.bottom, m.top
    if bot is None:
        report.add(AxiomVerdict("bottom-fixed", FAIL, None, "no bottom element designated"))
    else:
        w = None if lo(bot) == bot and up(bot) == bot else _witness(m, bottom=bot)
        report.add(_verdict("bottom-fixed", w))
    if top is None:
        report.add(AxiomVerdict("top-laws", FAIL, None, "no top element designated"))
    else:
        w = None if m.part(lo(top), top) and m.part(up(top), top) else _witness(m, top=top)
        report.add(_verdict("top-laws", w))
    if bot is None or top is None:
        report.add(AxiomVerdict("bounds", FAIL, None, "bottom or top missing"))
    else:
        report.add(_verdict("bounds", _first(m, 1, lambda a: not (m.part(bot, a) and m.part(a, top)))))
    return report


# -- classification -------------------------------------------------------

SPACE_LABELS = ("GGS", "GS", "HGOS", "set-HGOS")


@dataclass
class Classification:
    label: str | None
    report: AxiomReport

    @property
    def classifiable(self) -> bool:
        return self.label is not None

    def satisfies(self, label: str) -> bool:
        """Whether the model lies in class ``label`` (every set HGOS is an HGOS, and so on)."""
        if self.label is None:
            return False
        return SPACE_LABELS.index(self.label) >= SPACE_LABELS.index(label)


def is_gs(m: GranularSpaceModel) -> bool:
    return all(m.part(a, b) == m.leq(a, b) for a in range(m.size) for b in range(m.size))


def is_set_lattice(m: GranularSpaceModel) -> bool:
    """Join and meet are union and intersection of the attached subsets."""
    if isinstance(m, SetModel):
        return True
    subsets = getattr(m, "subsets", None)
    if subsets is None or len(subsets) != m.size:
        return False
    for a in range(m.size):
        for b in range(m.size):
            j, k = m.join(a, b), m.meet(a, b)
            if j is None or k is None:
                return False
            if subsets[j] != subsets[a] | subsets[b] or subsets[k] != subsets[a] & subsets[b]:
                return False
    return True


def classify_space(m: GranularSpaceModel) -> Classification:
    """Most specific of GGS, GS, HGOS, set-HGOS; ``label`` is None when an axiom fails."""
    report = check_ggs_axioms(m)
    if not report.ok:
        return Classification(None, report)
    label = "GGS"
    if is_gs(m):
        label = "GS"
        if m.joins_total() and m.meets_total():
            label = "HGOS"
            if is_set_lattice(m):
                label = "set-HGOS"
    return Classification(label, report)


# -- admissibility ----------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """A term over granule variables and the granules bound to them."""

    term: Term
    env: dict[str, int]
    value: int

    def reevaluate(self, m: GranularSpaceModel) -> int | None:
        return eval_partial_term(m, self.term, self.env)

    def render(self, m: GranularSpaceModel) -> str:
        binding = ", ".join(f"{k}={m.name(v)}" for k, v in self.env.items())
        return f"{self.term} with {binding}" if binding else str(self.term)


@dataclass
class AdmissibilityReport:
    report: AxiomReport
    certificates: dict[int, Certificate] = field(default_factory=dict)

    @property
    def admissible(self) -> bool:
        return self.report.ok

    def __getitem__(self, name: str) -> AxiomVerdict:
        return self.report[name]


def _granule_var(k: int) -> str:
    return f"g{k}"


def _join_only(m: GranularSpaceModel, target: int) -> Certificate | None:
    granules = m.granules

    def attempt(positions: tuple[int, ...]) -> Certificate | None:
        names = [_granule_var(k) for k in positions]
        env = {_granule_var(k): granules[k] for k in positions}
        term = join_of(names)
        if eval_partial_term(m, term, env) == target:
            return Certificate(term, env, target)
        return None

    below = tuple(k for k, g in enumerate(granules) if m.leq(g, target))
    found = attempt(below)
    if found is not None:
        return found
    for r in range(len(granules) + 1):
        for positions in combinations(range(len(granules)), r):
            if positions == below:
                continue
            found = attempt(positions)
            if found is not None:
                return found
    return None


def _term_closure(m: GranularSpaceModel, term_depth: int) -> dict[int, tuple[Term, dict[str, int]]]:
    """Values reachable by join/meet terms over granules, up to ``term_depth`` nesting."""
    known: dict[int, tuple[Term, dict[str, int]]] = {}
    for k, g in enumerate(m.granules):
        known.setdefault(g, (Var(_granule_var(k)), {_granule_var(k): g}))
    for _ in range(term_depth):
        frontier = list(known.items())
        added = {}
        for (v1, (t1, e1)), (v2, (t2, e2)) in product(frontier, repeat=2):
            for op, ctor in ((m.join, Join), (m.meet, Meet)):
                v = op(v1, v2)
                if v is not None and v not in known and v not in added:
                    added[v] = (ctor(t1, t2), {**e1, **e2})
        if not added:
            break
        known.update(added)
    return known


def _represent(m: GranularSpaceModel, target: int, term_depth: int, closure_cache: list) -> Certificate | None:
    cert = _join_only(m, target)
    if cert is not None:
        return cert
    if not closure_cache:
        closure_cache.append(_term_closure(m, term_depth))
    hit = closure_cache[0].get(target)
    if hit is None:
        return None
    return Certificate(hit[0], hit[1], target)


def check_admissibility(m: GranularSpaceModel, term_depth: int = 3) -> AdmissibilityReport:
    """Weak representability (WRA), lower stability (LS) and full underlap (FU).

    WRA first looks for a plain join of granules (the empty join being bottom),
    then for any join/meet term up to ``term_depth``. Each represented
    approximation gets a certificate that re-evaluates to it.
    """
    if term_depth < 1:
        raise ValueError("term_depth must be at least 1")
    result = AdmissibilityReport(AxiomReport(f"admissibility: {m.describe()}"))
    closure_cache: list = []
    wra_witness = None
    for x in range(m.size):
        for which, target in (("lower", m.lower(x)), ("upper", m.upper(x))):
            if target in result.certificates:
                continue
            cert = _represent(m, target, term_depth, closure_cache)
            if cert is None:
                wra_witness = {"x": m.name(x), "approximation": which, "value": m.name(target)}
                break
            result.certificates[target] = cert
        if wra_witness:
            break
    result.report.add(_verdict("WRA", wra_witness))

    ls = None
    for a in m.granules:
        for x in range(m.size):
            if m.part(a, x) and not m.part(a, m.lower(x)):
                ls = _witness(m, granule=a, x=x)
                break
        if ls:
            break
    result.report.add(_verdict("LS", ls))

    definite = [z for z in range(m.size) if m.lower(z) == z and m.upper(z) == z]
    fu = None
    for x, a in combinations(m.granules, 2):
        if not any(m.proper_part(x, z) and m.proper_part(a, z) for z in definite):
            fu = _witness(m, x=x, a=a)
            break
    result.report.add(_verdict("FU", fu))
    return result


# -- tractability and granule awareness --------------------------------------


@dataclass(frozen=True)
class TractabilityResult:
    holds: bool
    witness: str | None = None

    def __bool__(self) -> bool:
        return self.holds


def check_tractability(m: GranularSpaceModel, include_bottom: bool = False) -> TractabilityResult:
    """Every element (bottom excluded unless asked) is parthood-comparable to some granule."""
    for x in range(m.size):
        if m.is_zero(x) and not include_bottom:
            continue
        if not any(m.part(x, g) or m.part(g, x) for g in m.granules):
            return TractabilityResult(False, m.name(x))
    return TractabilityResult(True)


def granule_aware_elements(m: GranularSpaceModel) -> list[int]:
    """Elements having some granule as a part, in carrier order."""
    return [x for x in range(m.size) if any(m.part(g, x) for g in m.granules)]


def iter_definite(m: GranularSpaceModel) -> Iterator[int]:
    for z in range(m.size):
        if m.lower(z) == z and m.upper(z) == z:
            yield z

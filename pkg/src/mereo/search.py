"""Exhaustive small-model enumeration and counterexample search.

Models are set-backed and enumerated in a fixed canonical order: by universe
size, then (partitions) restricted-growth string or (covers) block count and
sorted block masks. A search returns the least-index counterexample, whatever
the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Callable, Iterator, Sequence

from .approximation import ApproximationSpace
from .contact import (
    CONTACT_AXIOMS,
    KINDS,
    contact_axiom_report,
    contact_table,
    kind_label,
    rough_contact,
)
from .mereology import ParthoodStructure, _is_fusion, _is_sum, clause_applicability, verify_theorem1
from .model import GranularSpaceModel, SetModel
from .modelio import load_fixture, parse_model, serialize_model
from .universe import Cover, Partition, Universe, max_universe, restricted_growth_strings, rgs_to_masks

FAMILIES = ("partitions", "proper-covers")
MAX_COVER_UNIVERSE = 6
REFUTED = "refuted"
CONFIRMED = "confirmed-up-to-bound"


class SearchError(ValueError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    property_id: str
    max_universe: int
    granulation_family: str = "partitions"
    max_blocks: int | None = None
    parallelism: int = 1
    canonicalize: bool = False
    min_universe: int = 1

    def __post_init__(self) -> None:
        if self.granulation_family not in FAMILIES:
            raise SearchError(f"unknown granulation family {self.granulation_family!r}; expected {FAMILIES}")
        if not 1 <= self.min_universe <= self.max_universe:
            raise SearchError(f"universe bounds {self.min_universe}..{self.max_universe} are empty")
        cap = max_universe()
        if self.granulation_family == "proper-covers":
            cap = min(cap, MAX_COVER_UNIVERSE)
        if self.max_universe > cap:
            raise SearchError(f"max_universe {self.max_universe} exceeds the bound {cap} for {self.granulation_family}")
        if self.max_blocks is not None and self.max_blocks < 1:
            raise SearchError("max_blocks must be positive")
        if self.parallelism < 1:
            raise SearchError("parallelism must be positive")


# -- enumeration -----------------------------------------------------------

Granulation = tuple[int, tuple[int, ...]]  # (universe size, block masks)


def _partition_granulations(n: int, max_blocks: int | None) -> Iterator[tuple[int, ...]]:
    for rgs in restricted_growth_strings(n):
        blocks = rgs_to_masks(rgs)
        if max_blocks is None or len(blocks) <= max_blocks:
            yield blocks


def _cover_granulations(n: int, max_blocks: int | None) -> Iterator[tuple[int, ...]]:
    full = (1 << n) - 1
    subsets = range(1, full + 1)
    top = len(subsets) if max_blocks is None else min(max_blocks, len(subsets))
    for k in range(1, top + 1):
        for blocks in combinations(subsets, k):
            union = 0
            for b in blocks:
                union |= b
            if union == full:
                yield blocks


def _relabel_key(n: int, blocks: Sequence[int]) -> tuple[int, ...]:
    best = None
    for perm in permutations(range(n)):
        moved = []
        for b in blocks:
            m = 0
            for i in range(n):
                if b >> i & 1:
                    m |= 1 << perm[i]
            moved.append(m)
        key = tuple(sorted(moved))
        if best is None or key < best:
            best = key
    return best  # type: ignore[return-value]


def enumerate_granulations(cfg: SearchConfig) -> list[Granulation]:
    gen = _partition_granulations if cfg.granulation_family == "partitions" else _cover_granulations
    out: list[Granulation] = []
    for n in range(cfg.min_universe, cfg.max_universe + 1):
        seen: set[tuple[int, ...]] = set()
        for blocks in gen(n, cfg.max_blocks):
            if cfg.canonicalize:
                key = _relabel_key(n, blocks)
                if key in seen:
                    continue
                seen.add(key)
            out.append((n, tuple(blocks)))
    return out


def build_model(granulation: Granulation, family: str = "partitions") -> SetModel:
    n, blocks = granulation
    universe = Universe.of_size(n)
    kind = Partition if family == "partitions" else Cover
    return SetModel(ApproximationSpace(kind.from_masks(universe, blocks)))


def enumerate_models(cfg: SearchConfig) -> Iterator[SetModel]:
    for g in enumerate_granulations(cfg):
        yield build_model(g, cfg.granulation_family)


# -- property catalog ----------------------------------------------------------

RELATION_PROPERTY_IDS = {
    "symmetry": "symmetric",
    "reflexivity": "reflexive",
    "transitivity": "transitive",
    "extensionality": "extensional",
}
THEOREM1_IDS = {"theorem1-i": "i", "theorem1-ii": "ii", "theorem1-iii": "iii"}
FULL_SUBSET_CARRIER = 8  # beyond this, Theorem 1 scans use |B| <= 2


@dataclass(frozen=True)
class Property:
    id: str
    description: str
    find: Callable[[GranularSpaceModel], dict | None]
    violated_at: Callable[[GranularSpaceModel, dict], bool]


def _relation_axiom_property(kind: str, axiom: str, report_name: str) -> Property:
    label = kind_label(kind)

    def find(m: GranularSpaceModel) -> dict | None:
        report = contact_axiom_report(m, contact_table(m, kind), axioms=[report_name])
        verdict = report[report_name]
        return verdict.witness if verdict.failed else None

    def violated_at(m: GranularSpaceModel, w: dict) -> bool:
        return axiom_instance_fails(m, kind, report_name, w)

    return Property(f"{label}-violates-{axiom}", f"{label} fails {axiom} on some model", find, violated_at)


def axiom_instance_fails(m: GranularSpaceModel, kind: str, axiom: str, w: dict) -> bool:
    """Re-check a single witnessed instance of an axiom or relation property directly."""

    def r(x, y) -> bool:
        return rough_contact(m, kind, x, y)

    el = {k: m.index(v) for k, v in w.items()}
    a, b, e = el.get("a"), el.get("b"), el.get("e")
    bot = m.bottom
    if axiom == "C1":
        return r(a, b) and (a == bot or b == bot)
    if axiom in ("C2", "symmetric"):
        return r(a, b) and not r(b, a)
    if axiom == "C3":
        return r(a, b) and m.leq(b, e) and not r(a, e)
    if axiom == "C4":
        return r(a, m.join(b, e)) and not (r(a, b) or r(a, e))
    if axiom == "C5":
        return m.meet(a, b) != bot and not r(a, b)
    if axiom == "C6":
        return r(a, m.join(b, e)) != (r(a, b) or r(a, e))
    if axiom == "C7":
        return r(m.join(b, e), a) != (r(b, a) or r(e, a))
    if axiom == "reflexive":
        return not r(el["x"], el["x"])
    if axiom == "transitive":
        return r(a, b) and r(b, el["c"]) and not r(a, el["c"])
    if axiom == "extensional":
        return a != b and all(r(a, x) == r(b, x) for x in range(m.size))
    raise SearchError(f"no instance check for {axiom!r}")


def _theorem1_property(pid: str, clause: str) -> Property:
    def bound(m: GranularSpaceModel) -> int | None:
        return None if m.size <= FULL_SUBSET_CARRIER else 2

    def find(m: GranularSpaceModel) -> dict | None:
        s = ParthoodStructure.from_model(m)
        report = verify_theorem1(s, max_subset_size=bound(m))
        for v in report.violations:
            if v.clause == clause:
                return {"a": v.a, "B": sorted(v.b, key=s.index)}
        return None

    def violated_at(m: GranularSpaceModel, w: dict) -> bool:
        s = ParthoodStructure.from_model(m)
        if not clause_applicability(s)[clause]:
            return False
        a = s.index(w["a"])
        bs = s.mask(w["B"])
        fusion, total = _is_fusion(s, a, bs), _is_sum(s, a, bs)
        if clause == "i":
            return bs & ~s.parts_mask[a] == 0 and fusion and not total
        if clause == "ii":
            return fusion != total
        return bin(bs).count("1") == 2 and fusion and not total

    return Property(pid, f"Theorem 1 clause ({clause}) fails on some model", find, violated_at)


def _build_catalog() -> dict[str, Property]:
    catalog: dict[str, Property] = {}
    for k in KINDS:
        for ax in CONTACT_AXIOMS:
            p = _relation_axiom_property(k, ax, ax)
            catalog[p.id] = p
        for pid, name in RELATION_PROPERTY_IDS.items():
            p = _relation_axiom_property(k, pid, name)
            catalog[p.id] = p
    for pid, clause in THEOREM1_IDS.items():
        catalog[pid] = _theorem1_property(pid, clause)
    return catalog


CATALOG = _build_catalog()


def get_property(property_id: str) -> Property:
    try:
        return CATALOG[property_id]
    except KeyError:
        raise SearchError(f"unknown property {property_id!r}") from None


# -- records -------------------------------------------------------------------


@dataclass
class CounterexampleRecord:
    property_id: str
    verdict: str
    model: dict | None = None
    witness: dict | None = None
    model_index: int | None = None
    models_scanned: int = 0
    max_universe: int | None = None
    family: str | None = None
    case_id: str | None = None
    claims: dict[str, bool] = field(default_factory=dict)

    @property
    def refuted(self) -> bool:
        return self.verdict == REFUTED

    def to_dict(self) -> dict:
        out = {
            "property_id": self.property_id,
            "verdict": self.verdict,
            "model_index": self.model_index,
            "models_scanned": self.models_scanned,
            "max_universe": self.max_universe,
            "family": self.family,
            "witness": self.witness,
            "model": self.model,
        }
        if self.case_id:
            out["case_id"] = self.case_id
        if self.claims:
            out["claims"] = dict(self.claims)
        return out

    def render(self) -> str:
        head = f"{self.case_id + ': ' if self.case_id else ''}{self.property_id}: {self.verdict}"
        lines = [head]
        if self.family:
            lines.append(f"  family: {self.family}, max universe {self.max_universe}, models scanned {self.models_scanned}")
        if self.model is not None:
            if self.model.get("mode") in ("partition", "cover"):
                blocks = " ".join("{" + ",".join(b) + "}" for b in self.model["granules"])
                lines.append(f"  model #{self.model_index}: universe {{{','.join(self.model['universe'])}}}, {self.model['mode']} {blocks}")
            else:
                lines.append(f"  model #{self.model_index}: abstract, carrier {self.model.get('carrier')}")
        if self.witness:
            lines.append("  witness: " + ", ".join(f"{k}={_fmt(v)}" for k, v in self.witness.items()))
        for claim, ok in self.claims.items():
            lines.append(f"  [{'ok' if ok else 'FAILED'}] {claim}")
        return "\n".join(lines)


def _fmt(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(map(str, v)) + "]"
    return str(v)


# -- search -----------------------------------------------------------------------


def _scan(args: tuple[str, str, list[tuple[int, Granulation]]]) -> tuple[int, dict] | None:
    property_id, family, chunk = args
    prop = get_property(property_id)
    for index, g in chunk:
        witness = prop.find(build_model(g, family))
        if witness is not None:
            return index, witness
    return None


def _chunks(items: list, parts: int) -> list[list]:
    size = max(1, -(-len(items) // parts))
    return [items[i : i + size] for i in range(0, len(items), size)]


def find_counterexample(cfg: SearchConfig) -> CounterexampleRecord:
    """Least counterexample to ``cfg.property_id`` in canonical model order, or confirmation up to the bound."""
    get_property(cfg.property_id)
    granulations = list(enumerate(enumerate_granulations(cfg)))
    hit: tuple[int, dict] | None = None
    if cfg.parallelism == 1 or len(granulations) < 2:
        hit = _scan((cfg.property_id, cfg.granulation_family, granulations))
    else:
        # Contiguous ranges; the lowest range with a hit holds the least index.
        jobs = [(cfg.property_id, cfg.granulation_family, c) for c in _chunks(granulations, cfg.parallelism * 4)]
        pool = ProcessPoolExecutor(max_workers=cfg.parallelism)
        try:
            for result in pool.map(_scan, jobs):
                if result is not None:
                    hit = result
                    break
        finally:
            pool.shutdown(wait=True, cancel_futures=True)
    if hit is None:
        return CounterexampleRecord(
            cfg.property_id, CONFIRMED, models_scanned=len(granulations),
            max_universe=cfg.max_universe, family=cfg.granulation_family,
        )
    index, witness = hit
    model = build_model(granulations[index][1], cfg.granulation_family)
    return CounterexampleRecord(
        cfg.property_id,
        REFUTED,
        model=serialize_model(model),
        witness=witness,
        model_index=index,
        models_scanned=index + 1,
        max_universe=cfg.max_universe,
        family=cfg.granulation_family,
    )


def verify_record(record: CounterexampleRecord, max_blocks: int | None = None) -> bool:
    """Re-derive a record's verdict: re-check the witness, or re-scan sequentially."""
    if record.refuted:
        if record.model is None or record.witness is None:
            return False
        prop = get_property(record.property_id)
        return prop.violated_at(parse_model(record.model), record.witness)
    if record.max_universe is None or record.family is None:
        return False
    again = find_counterexample(
        SearchConfig(record.property_id, record.max_universe, record.family, max_blocks=max_blocks, parallelism=1)
    )
    return not again.refuted and again.models_scanned == record.models_scanned


# -- known counterexamples -------------------------------------------------------------

APPENDIX_CASES = ("A-Re1-asymmetry", "B-ReO-C4", "B-ReO-C5")


def _three_granule_case() -> CounterexampleRecord:
    m = load_fixture("three_granules.json")
    a, b = m.index("a"), m.index("b")
    up = m.upper
    g = sorted(m.granules)
    nonsingleton = [x for x in g if bin(x).count("1") > 1]
    b_cover = [x for x in nonsingleton if x & ~up(b) == 0]
    extra = [x for x in nonsingleton if x not in b_cover]
    claims = {
        "b is a proper part of b^u": b != up(b) and m.part(b, up(b)),
        "b^u is the union of two distinct non-singleton granules": len(b_cover) == 2 and b_cover[0] | b_cover[1] == up(b),
        "a^u is b^u joined with a third non-singleton granule": any(up(a) == up(b) | x for x in extra),
        "a is a proper part of a^u": a != up(a) and m.part(a, up(a)),
        "Re_1(a, b)": rough_contact(m, "1", a, b),
        "not Re_1(b, a)": not rough_contact(m, "1", b, a),
    }
    return _case_record("A-Re1-asymmetry", "Re_1-violates-symmetry", m, {"a": m.name(a), "b": m.name(b)}, claims)


def _cross_granule_case(case: str) -> CounterexampleRecord:
    m = load_fixture("cross_granules.json")
    a, b, c = m.index("a"), m.index("b"), m.index("c")
    g = m.index(["1", "2", "3"])
    inside_a = [x for x in m.granules if m.part(x, a)]
    claims = {
        "g={1,2,3} is the only granule contained in a": inside_a == [g],
        "b meet g = {1,2}": m.meet(b, g) == m.index(["1", "2"]),
        "c meet g = {3}": m.meet(c, g) == m.index(["3"]),
    }
    if case == "B-ReO-C4":
        claims["Re_o(a, b join c)"] = rough_contact(m, "o", a, m.join(b, c))
        claims["not Re_o(a, b)"] = not rough_contact(m, "o", a, b)
        claims["not Re_o(a, c)"] = not rough_contact(m, "o", a, c)
        witness = {"a": m.name(a), "b": m.name(b), "e": m.name(c)}
        pid = "Re_o-violates-C4"
    else:
        claims["a meet b is nonzero"] = m.meet(a, b) != m.bottom
        claims["not Re_o(a, b)"] = not rough_contact(m, "o", a, b)
        witness = {"a": m.name(a), "b": m.name(b)}
        pid = "Re_o-violates-C5"
    return _case_record(case, pid, m, witness, claims)


def _case_record(case: str, pid: str, m: GranularSpaceModel, witness: dict, claims: dict) -> CounterexampleRecord:
    reproduced = all(claims.values()) and get_property(pid).violated_at(m, witness)
    return CounterexampleRecord(
        pid,
        REFUTED if reproduced else "not-reproduced",
        model=serialize_model(m),
        witness=witness,
        model_index=0,
        models_scanned=1,
        case_id=case,
        claims=claims,
    )


def reproduce_appendix(case_id: str) -> CounterexampleRecord:
    if case_id == "A-Re1-asymmetry":
        return _three_granule_case()
    if case_id in ("B-ReO-C4", "B-ReO-C5"):
        return _cross_granule_case(case_id)
    raise SearchError(f"unknown appendix case {case_id!r}; expected one of {APPENDIX_CASES}")


def default_parallelism() -> int:
    return max(1, min(4, os.cpu_count() or 1))

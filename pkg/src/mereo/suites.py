"""Exhaustive verification suites over small models.

Each suite walks a fixed family of models and records, per check, how many
instances were examined and the first violating instance. Expected
refutations (properties that are claimed *not* to hold in general) are run
through the counterexample search and pass when a counterexample is found.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from .contact import contact_axiom_report, contact_table
from .granular import check_admissibility, check_ggs_axioms, check_tractability, granule_aware_elements
from .mereology import is_separative, random_structures, verify_theorem1
from .model import SetModel
from .modelio import decision_table_fixture
from .search import SearchConfig, enumerate_models, find_counterexample
from .universe import submasks

DEFAULT_SEED = 1729
RANDOM_STRUCTURES = 200


@dataclass
class SuiteCheck:
    name: str
    checked: int = 0
    violations: int = 0
    witness: dict | None = None
    expect_refutation: bool = False

    @property
    def ok(self) -> bool:
        if self.expect_refutation:
            return self.witness is not None
        return self.violations == 0

    def tally(self, holds: bool, witness: Callable[[], dict]) -> None:
        self.checked += 1
        if not holds:
            self.violations += 1
            if self.witness is None:
                self.witness = witness()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "checked": self.checked,
            "violations": self.violations,
            "expect_refutation": self.expect_refutation,
            "ok": self.ok,
            "witness": self.witness,
        }

    def render(self) -> str:
        mark = "PASS" if self.ok else "FAIL"
        if self.expect_refutation:
            found = "counterexample found" if self.witness else "no counterexample"
            line = f"  [{mark}] {self.name}: {found}"
        else:
            line = f"  [{mark}] {self.name}: {self.checked} instances, {self.violations} violations"
        if self.witness and (self.expect_refutation or self.violations):
            line += f"\n         witness: {self.witness}"
        return line


@dataclass
class SuiteResult:
    suite: str
    scope: str
    checks: dict[str, SuiteCheck] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    models: int = 0
    elapsed: float = 0.0

    def check(self, name: str, expect_refutation: bool = False) -> SuiteCheck:
        if name not in self.checks:
            self.checks[name] = SuiteCheck(name, expect_refutation=expect_refutation)
        return self.checks[name]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks.values())

    @property
    def violations(self) -> int:
        return sum(c.violations for c in self.checks.values() if not c.expect_refutation)

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "suite": self.suite,
            "scope": self.scope,
            "models": self.models,
            "ok": self.ok,
            "checks": [c.to_dict() for c in self.checks.values()],
            "notes": list(self.notes),
        }
        if timing:
            out["elapsed_seconds"] = round(self.elapsed, 3)
        return out

    def render(self, timing: bool = False) -> str:
        head = f"{self.suite} ({self.scope}; {self.models} models): {'PASS' if self.ok else 'FAIL'}"
        if timing:
            head += f" in {self.elapsed:.2f}s"
        lines = [head] + [c.render() for c in self.checks.values()]
        lines += [f"  note: {n}" for n in self.notes]
        return "\n".join(lines)


def _timed(fn):
    def run(*args, **kwargs) -> SuiteResult:
        t0 = time.perf_counter()
        result = fn(*args, **kwargs)
        result.elapsed = time.perf_counter() - t0
        return result

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def _partition_models(max_universe: int):
    return enumerate_models(SearchConfig("Re_a-violates-C1", max_universe))


def _where(m: SetModel, **elements: int) -> dict:
    out = {"model": m.describe()}
    out.update({k: m.name(v) for k, v in elements.items()})
    return out


# -- Theorem 1 -----------------------------------------------------------------


@_timed
def theorem1_suite(seed: int = DEFAULT_SEED, count: int = RANDOM_STRUCTURES, max_n: int = 6) -> SuiteResult:
    """Sum/fusion clauses on the decision-table structure and seeded random structures.

    Supplementation is read in its overlap form. The number of transitive
    structures that satisfy only the weaker displayed form and break the
    sum/fusion equivalence is reported as a note.
    """
    result = SuiteResult("theorem 1", f"decision-table fixture + {count} random structures, n <= {max_n}, seed {seed}")
    _, fixture, _ = decision_table_fixture()
    structures = [("decision-table", fixture)] + [(f"random#{k}", s) for k, s in enumerate(random_structures(seed, count, max_n))]
    gap = 0
    for label, s in structures:
        result.models += 1
        report = verify_theorem1(s, ssp_form="overlap")
        for clause in ("i", "ii", "iii"):
            c = result.check(f"clause ({clause})")
            if not report.applicable[clause]:
                continue
            bad = [v for v in report.violations if v.clause == clause]
            c.checked += report.checked[clause]
            c.violations += len(bad)
            if bad and c.witness is None:
                c.witness = {"structure": label, **bad[0].to_dict()}
        if s.transitive and is_separative(s, "displayed") and not is_separative(s, "overlap"):
            if not verify_theorem1(s, ssp_form="displayed").clause_ok("ii"):
                gap += 1
    applicable = sum(1 for _, s in structures if s.transitive and is_separative(s, "overlap"))
    result.notes.append(f"{applicable} structures are transitive and separative (overlap form)")
    result.notes.append(f"{gap} structures separative only in the displayed form break sum <=> fusion")
    return result


# -- Theorem 2 -----------------------------------------------------------------


@_timed
def theorem2_suite(max_universe: int = 4, negative_bound: int = 4) -> SuiteResult:
    """Symmetry and reflexivity facts for rough contact over all partitions."""
    result = SuiteResult("theorem 2", f"all partitions, |U| <= {max_universe}")
    for m in _partition_models(max_universe):
        result.models += 1
        tables = {k: contact_table(m, k) for k in ("a", "o", "1", "2", "3")}
        xs = range(m.size)
        for k in ("a", "o", "2", "3"):
            r = tables[k]
            c = result.check(f"Re_{k} symmetric")
            for x in xs:
                for y in xs:
                    c.tally(r.holds(x, y) == r.holds(y, x), lambda: _where(m, a=x, b=y))
        c = result.check("Re_1 reflexive")
        for x in xs:
            c.tally(tables["1"].holds(x, x), lambda: _where(m, x=x))
        aware = granule_aware_elements(m)
        for k in ("2", "o"):
            c = result.check(f"Re_{k} reflexive on granule-aware elements")
            for x in aware:
                c.tally(tables[k].holds(x, x), lambda: _where(m, x=x))
        c = result.check("Re_3 reflexive on nonzero elements")
        for x in m.nonzero():
            c.tally(tables["3"].holds(x, x), lambda: _where(m, x=x))
        c = result.check("tractable models: Re_a reflexive on nonzero elements")
        if check_tractability(m):
            for x in m.nonzero():
                c.tally(tables["a"].holds(x, x), lambda: _where(m, x=x))
        c = result.check("Re_a not reflexive at the bottom", expect_refutation=True)
        c.checked += 1
        if c.witness is None and not tables["a"].holds(m.bottom, m.bottom):
            c.witness = _where(m, x=m.bottom)
    for k in ("a", "o", "2"):
        for prop in ("reflexivity", "extensionality", "transitivity"):
            _expect_refutation(result, f"Re_{k}-violates-{prop}", negative_bound)
    _expect_refutation(result, "Re_1-violates-symmetry", negative_bound)
    # Re_1 is transitive on partitions (f meet c^u witnesses the composite); covers break it.
    _expect_refutation(result, "Re_1-violates-transitivity", 3, "proper-covers", max_blocks=4)
    return result


def _expect_refutation(
    result: SuiteResult, property_id: str, bound: int, family: str = "partitions", max_blocks: int | None = None
) -> None:
    c = result.check(f"{property_id} (search, {family} |U| <= {bound})", expect_refutation=True)
    record = find_counterexample(SearchConfig(property_id, bound, family, max_blocks=max_blocks))
    c.checked = record.models_scanned
    if record.refuted:
        c.witness = {"model": record.model_index, **record.witness}


# -- Theorem 3 -----------------------------------------------------------------


@_timed
def theorem3_suite(max_universe: int = 3, max_blocks: int = 4, negative_bound: int = 5) -> SuiteResult:
    """Contact axioms over admissible covers, plus the expected failures."""
    result = SuiteResult("theorem 3", f"admissible covers, |U| <= {max_universe}, at most {max_blocks} blocks")
    cfg = SearchConfig("Re_a-violates-C1", max_universe, "proper-covers", max_blocks=max_blocks)
    skipped = 0
    expected = {"a": ("C1", "C2", "C3", "C4", "C5"), "o": ("C1", "C2", "C3"), "2": ("C1", "C2", "C3"), "3": ("C1", "C2", "C3")}
    for m in enumerate_models(cfg):
        if not check_admissibility(m).admissible:
            skipped += 1
            continue
        result.models += 1
        for k, axioms in expected.items():
            report = contact_axiom_report(m, contact_table(m, k), axioms=axioms)
            for ax in axioms:
                v = report[ax]
                c = result.check(f"Re_{k} {ax}")
                c.tally(not v.failed, lambda: {"model": m.describe(), **(v.witness or {})})
    result.notes.append(f"{skipped} non-admissible covers skipped")
    for pid in ("Re_o-violates-C4", "Re_o-violates-C5", "Re_2-violates-C4", "Re_2-violates-C5",
                "Re_1-violates-C1", "Re_1-violates-C2"):
        _expect_refutation(result, pid, negative_bound)
    return result


# -- approximation core and admissibility ----------------------------------------


@_timed
def approximation_suite(max_universe: int = 4) -> SuiteResult:
    """Duality, monotonicity, idempotence, upper growth and GGS compliance on every partition."""
    result = SuiteResult("approximation core", f"all partitions, |U| <= {max_universe}")
    for m in _partition_models(max_universe):
        result.models += 1
        full = m.size - 1  # set models index subsets by mask
        lo, up = m.lower, m.upper
        for a in range(m.size):
            result.check("duality").tally(lo(a) == full & ~up(full & ~a), lambda: _where(m, A=a))
            result.check("lower idempotent").tally(lo(lo(a)) == lo(a), lambda: _where(m, A=a))
            result.check("upper grows").tally(up(a) & ~up(up(a)) == 0, lambda: _where(m, A=a))
            for b in submasks(a):
                result.check("monotone").tally(
                    lo(b) & ~lo(a) == 0 and up(b) & ~up(a) == 0, lambda: _where(m, A=b, B=a)
                )
        report = check_ggs_axioms(m)
        for v in report:
            result.check(f"GGS {v.name}").tally(not v.failed, lambda: {"model": m.describe(), **(v.witness or {})})
    return result


@_timed
def admissibility_suite(max_universe: int = 4) -> SuiteResult:
    """WRA with re-evaluated certificates, LS and FU on every partition."""
    result = SuiteResult("admissibility", f"all partitions, |U| <= {max_universe}")
    for m in _partition_models(max_universe):
        result.models += 1
        adm = check_admissibility(m)
        for name in ("WRA", "LS", "FU"):
            v = adm[name]
            result.check(name).tally(not v.failed, lambda: {"model": m.describe(), **(v.witness or {})})
        c = result.check("WRA certificates re-evaluate")
        for target, cert in adm.certificates.items():
            c.tally(cert.reevaluate(m) == target, lambda: {"model": m.describe(), "value": m.name(target)})
    return result


THEOREM_SUITES = {"1": theorem1_suite, "2": theorem2_suite, "3": theorem3_suite}


def run_theorem_suites(which: str = "all", max_universe: int | None = None) -> list[SuiteResult]:
    """Run one or all theorem suites; ``max_universe`` bounds the exhaustive part of suites 2 and 3."""
    keys = list(THEOREM_SUITES) if which == "all" else [which]
    out = []
    for k in keys:
        if k not in THEOREM_SUITES:
            raise ValueError(f"unknown theorem {k!r}; expected 1, 2, 3 or all")
        if k == "1" or max_universe is None:
            out.append(THEOREM_SUITES[k]())
        else:
            out.append(THEOREM_SUITES[k](max_universe=max_universe))
    return out

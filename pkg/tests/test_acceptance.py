"""Exit criteria of the workbench, each under its wall-clock budget.

Every test prints one ``PASS``/``FAIL`` line (visible without ``-s``) before
asserting, so a run shows the full scorecard even when a criterion fails.
"""

import json
import time
from contextlib import contextmanager

import pytest

from mereo.approximation import ApproximationSpace
from mereo.cli import EXIT_FOUND, EXIT_OK, main
from mereo.granular import check_admissibility
from mereo.mereology import bounds, is_fusion, is_sum
from mereo.model import SetModel
from mereo.modelio import decision_table_fixture
from mereo.search import reproduce_appendix
from mereo.suites import admissibility_suite, approximation_suite, theorem1_suite, theorem2_suite, theorem3_suite
from mereo.universe import enumerate_partitions

pytestmark = pytest.mark.acceptance

K = ["a", "b", "c", "e"]


@contextmanager
def criterion(capsys, number, title, budget):
    """Run the body, then print the verdict line; ``state`` collects the outcome."""
    state = {"ok": False, "detail": ""}
    start = time.perf_counter()
    try:
        yield state
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < budget
        verdict = "PASS" if state["ok"] and within else "FAIL"
        detail = state["detail"] + ("" if within else " (over budget)")
        with capsys.disabled():
            print(f"\n[{verdict}] criterion {number}: {title} ({elapsed:.2f}s / {budget}s) {detail}".rstrip())
        state["verdict"] = verdict


def cli(capsys, *argv):
    code = main([*argv, "--json"])
    return code, json.loads(capsys.readouterr().out)


def test_criterion_1_fusion_without_sum(capsys):
    with criterion(capsys, 1, "decision-table fusion/sum example", 1.0) as st:
        _, s, _ = decision_table_fixture()
        values = (is_fusion(s, "c", K), is_fusion(s, "e", K), is_sum(s, "c", K), bounds(s, K)[0])
        st["ok"] = values == (True, True, False, frozenset())
        st["detail"] = f"fusion(c)={values[0]} fusion(e)={values[1]} sum(c)={values[2]} UB(K)={set(values[3]) or '{}'}"
    assert st["verdict"] == "PASS"


def test_criterion_2_overlap_type_counterexamples(capsys):
    with criterion(capsys, 2, "reproduce B-ReO-C4 and B-ReO-C5", 1.0) as st:
        records = [reproduce_appendix(c) for c in ("B-ReO-C4", "B-ReO-C5")]
        codes = [main(["reproduce", r.case_id]) for r in records]
        capsys.readouterr()
        st["ok"] = all(r.refuted and r.claims and all(r.claims.values()) for r in records) and codes == [EXIT_FOUND] * 2
        st["detail"] = ", ".join(f"{r.case_id}: {sum(r.claims.values())}/{len(r.claims)} claims" for r in records)
    assert st["verdict"] == "PASS"


def test_criterion_3_type1_asymmetry(capsys):
    with criterion(capsys, 3, "reproduce A-Re1-asymmetry", 1.0) as st:
        r = reproduce_appendix("A-Re1-asymmetry")
        st["ok"] = r.refuted and bool(r.claims) and all(r.claims.values())
        st["detail"] = f"{sum(r.claims.values())}/{len(r.claims)} claims"
    assert st["verdict"] == "PASS"


def test_criterion_4_theorem2_suite(capsys):
    with criterion(capsys, 4, "symmetry/reflexivity suite, all partitions |U| <= 4", 30.0) as st:
        result = theorem2_suite(max_universe=4)
        st["ok"] = result.ok and result.violations == 0 and result.models == 23
        st["detail"] = f"{result.models} models, {result.violations} violations"
    assert st["verdict"] == "PASS", result.render()


def test_criterion_5_theorem3_suite(capsys):
    with criterion(capsys, 5, "contact axioms on admissible covers |U| <= 3", 60.0) as st:
        result = theorem3_suite(max_universe=3, max_blocks=4)
        st["ok"] = result.ok and result.violations == 0 and result.models > 0
        st["detail"] = f"{result.models} admissible models, {result.violations} violations"
    assert st["verdict"] == "PASS", result.render()


def test_criterion_6_negative_search(capsys):
    with criterion(capsys, 6, "counterexample search verdicts", 120.0) as st:
        c4 = cli(capsys, "search", "--property", "Re_o-violates-C4", "--max-universe", "5")
        c5 = cli(capsys, "search", "--property", "Re_o-violates-C5", "--max-universe", "5")
        c2 = cli(capsys, "search", "--property", "Re_a-violates-C2", "--max-universe", "4")
        verdicts = [c4[1]["verdict"], c5[1]["verdict"], c2[1]["verdict"]]
        st["ok"] = verdicts == ["refuted", "refuted", "confirmed-up-to-bound"] and [c4[0], c5[0], c2[0]] == [
            EXIT_FOUND,
            EXIT_FOUND,
            EXIT_OK,
        ]
        st["detail"] = "C4 " + verdicts[0] + ", C5 " + verdicts[1] + ", Re_a C2 " + verdicts[2]
    assert st["verdict"] == "PASS"


def test_criterion_7_theorem1_suite(capsys):
    with criterion(capsys, 7, "sum/fusion suite, fixture + 200 seeded structures", 60.0) as st:
        result = theorem1_suite(seed=1729, count=200)
        st["ok"] = result.ok and result.violations == 0 and result.models == 201
        st["detail"] = f"{result.models} structures, {result.violations} violations"
    assert st["verdict"] == "PASS", result.render()


def test_criterion_8_approximation_oracle(capsys):
    with criterion(capsys, 8, "approximation laws and GGS axioms |U| <= 4", 10.0) as st:
        result = approximation_suite(max_universe=4)
        st["ok"] = result.ok and result.violations == 0 and result.models == 23
        st["detail"] = f"{result.models} models, {result.violations} violations"
    assert st["verdict"] == "PASS", result.render()


def test_criterion_9_admissibility(capsys):
    with criterion(capsys, 9, "admissibility of every partition |U| <= 4", 10.0) as st:
        result = admissibility_suite(max_universe=4)
        join_only = all(
            "∧" not in str(cert.term)
            for n in range(1, 5)
            for p in enumerate_partitions(n)
            for cert in check_admissibility(SetModel(ApproximationSpace(p))).certificates.values()
        )
        st["ok"] = result.ok and result.violations == 0 and join_only
        st["detail"] = f"{result.models} models, {result.violations} violations, union-only certificates: {join_only}"
    assert st["verdict"] == "PASS", result.render()

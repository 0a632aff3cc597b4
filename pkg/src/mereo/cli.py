"""Command-line front end.

Exit status: 0 when every check passes (or a search confirms up to its bound),
1 when an axiom failure or a counterexample is found, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .approximation import definiteness_flags
from .contact import CONTACT_AXIOMS, ContactError, classify_contact, contact_axiom_report, contact_table, kind_label
from .granular import check_admissibility, classify_space
from .mereology import MereologyError, ParthoodStructure, bounds, is_fusion, is_separative, is_sum, parthood_properties
from .model import GranularSpaceModel, ModelError, SetModel
from .modelio import DecisionTableError, ModelDocumentError, ingest_decision_table, load_model, serialize_model
from .search import APPENDIX_CASES, CATALOG, SearchConfig, SearchError, find_counterexample, reproduce_appendix
from .suites import run_theorem_suites
from .universe import UniverseError

EXIT_OK, EXIT_FOUND, EXIT_USAGE = 0, 1, 2
FAMILY_ALIASES = {"partitions": "partitions", "covers": "proper-covers", "proper-covers": "proper-covers"}


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        print(text)


def _element(m: GranularSpaceModel, ref: str) -> int:
    """Resolve a command-line element: a name, a ``{1,2}`` subset, or ``1,2`` for set models."""
    if isinstance(m, SetModel) and "," in ref and not ref.strip().startswith("{"):
        ref = "{" + ref + "}"
    return m.index(ref)


# -- subcommands ---------------------------------------------------------------


def cmd_check_ggs(args) -> int:
    m = load_model(args.model)
    cls = classify_space(m)
    payload = {"model": m.describe(), "classification": cls.label, "axioms": cls.report.to_dict()}
    lines = [cls.report.render(), f"classification: {cls.label or 'not a GGS'}"]
    ok = cls.report.ok
    if args.admissibility:
        adm = check_admissibility(m, term_depth=args.term_depth)
        payload["admissibility"] = adm.report.to_dict()
        payload["certificates"] = {m.name(v): c.render(m) for v, c in adm.certificates.items()}
        lines.append(adm.report.render())
        lines += [f"  {m.name(v)} = {c.render(m)}" for v, c in adm.certificates.items()]
        ok = ok and adm.admissible
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FOUND


def cmd_approx(args) -> int:
    m = load_model(args.model)
    x = _element(m, args.set)
    lo, up = m.lower(x), m.upper(x)
    flags = sorted(definiteness_flags(m.lower, m.upper, x))
    payload = {"element": m.encode(x), "lower": m.encode(lo), "upper": m.encode(up), "flags": flags}
    lines = [f"element: {m.name(x)}", f"lower:   {m.name(lo)}", f"upper:   {m.name(up)}"]
    if isinstance(m, SetModel):
        boundary = up & ~lo
        negative = m.top & ~up
        payload["regions"] = {"positive": m.encode(lo), "boundary": m.encode(boundary), "negative": m.encode(negative)}
        lines.append(f"regions: positive {m.name(lo)}, boundary {m.name(boundary)}, negative {m.name(negative)}")
    lines.append("flags:   " + (", ".join(flags) or "none"))
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_contact(args) -> int:
    m = load_model(args.model)
    r = contact_table(m, args.kind)
    label = kind_label(args.kind)
    pairs = [[m.name(a), m.name(b)] for a, b in r.pairs()]
    payload = {"relation": label, "model": m.describe(), "pairs": pairs}
    lines = [f"{label} on {m.describe()}: {len(pairs)} pairs"]
    if not args.axioms:
        lines += [f"  {a} ~ {b}" for a, b in pairs]
        _emit(args, payload, "\n".join(lines))
        return EXIT_OK
    report = contact_axiom_report(m, r)
    cls = classify_contact(report)
    payload["axioms"] = report.to_dict()
    payload["class"] = cls.label
    lines += [report.render(), f"class: {cls.label}"]
    _emit(args, payload, "\n".join(lines))
    failed = any(report[ax].failed for ax in CONTACT_AXIOMS if ax in report)
    return EXIT_FOUND if failed else EXIT_OK


def cmd_mereology(args) -> int:
    m = load_model(args.model)
    s = ParthoodStructure.from_model(m)
    payload: dict = {"model": m.describe()}
    lines = []

    def members(refs: Sequence[str]) -> list[int]:
        return [_element(m, r) for r in refs]

    if args.bounds is not None:
        ub, lb = bounds(s, members(args.bounds))
        key = lambda n: s.index(n)  # noqa: E731
        payload["upper_bounds"] = sorted(ub, key=key)
        payload["lower_bounds"] = sorted(lb, key=key)
        lines.append("UB = {" + ", ".join(sorted(ub, key=key)) + "}")
        lines.append("LB = {" + ", ".join(sorted(lb, key=key)) + "}")
    for flag, test in (("fusion", is_fusion), ("sum", is_sum)):
        refs = getattr(args, flag)
        if refs is None:
            continue
        bs = members(refs)
        if args.element is not None:
            a = _element(m, args.element)
            holds = test(s, a, bs)
            payload[flag] = {m.name(a): holds}
            lines.append(f"{flag}({m.name(a)}, {{{', '.join(m.name(b) for b in bs)}}}) = {str(holds).lower()}")
        else:
            hits = [m.name(a) for a in range(m.size) if test(s, a, bs)]
            payload[flag] = hits
            lines.append(f"{flag}s of {{{', '.join(m.name(b) for b in bs)}}}: " + (", ".join(hits) or "none"))
    if args.properties or not lines:
        props = {k: v.holds for k, v in parthood_properties(s).as_dict().items()}
        sep = {form: bool(is_separative(s, form)) for form in ("displayed", "overlap")}
        payload["properties"] = props
        payload["separative"] = sep
        lines += [f"{k}: {str(v).lower()}" for k, v in props.items()]
        lines += [f"separative ({form}): {str(v).lower()}" for form, v in sep.items()]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_search(args) -> int:
    family = FAMILY_ALIASES[args.family]
    cfg = SearchConfig(
        args.property, args.max_universe, family,
        max_blocks=args.max_blocks, parallelism=args.parallelism, canonicalize=args.canonicalize,
    )
    record = find_counterexample(cfg)
    _emit(args, record.to_dict(), record.render())
    return EXIT_FOUND if record.refuted else EXIT_OK


def cmd_verify_theorems(args) -> int:
    results = run_theorem_suites(args.theorem, args.max_universe)
    payload = {"suites": [r.to_dict(timing=args.timing) for r in results]}
    _emit(args, payload, "\n".join(r.render(timing=args.timing) for r in results))
    return EXIT_OK if all(r.ok for r in results) else EXIT_FOUND


def cmd_ingest_table(args) -> int:
    text = Path(args.csv).read_text(encoding="utf-8")
    pairs = []
    if args.parthood:
        doc = json.loads(Path(args.parthood).read_text(encoding="utf-8"))
        raw = doc["pairs"] if isinstance(doc, dict) else doc
        pairs = [tuple(p) for p in raw]
    granules = args.granules.split(",") if args.granules else None
    table, structure, model = ingest_decision_table(text, pairs, granules)
    doc = serialize_model(model)
    if args.output:
        Path(args.output).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    props = {k: v.holds for k, v in parthood_properties(structure).as_dict().items()}
    lines = [f"{len(table.rows)} rows; elements {', '.join(table.labels)}"]
    for row in table.rows:
        label = table.label_of(row.id)
        lines.append(f"  {row.id} -> {label}: l={table.label_of(row.lower)} u={table.label_of(row.upper)} ({row.decision})")
    lines.append("granules: " + ", ".join(model.name(g) for g in model.granules))
    lines += [f"{k}: {str(v).lower()}" for k, v in props.items()]
    payload = {"labels": table.labels, "properties": props, "model": doc}
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_reproduce(args) -> int:
    record = reproduce_appendix(args.case)
    _emit(args, record.to_dict(), record.render())
    return EXIT_FOUND if record.refuted else EXIT_OK


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")

    p = argparse.ArgumentParser(prog="mereo", description="Granular rough mereology toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("check-ggs", parents=[common], help="check the granular space axioms of a model")
    q.add_argument("model")
    q.add_argument("--admissibility", action="store_true", help="also check WRA, LS and FU")
    q.add_argument("--term-depth", type=int, default=3)
    q.set_defaults(func=cmd_check_ggs)

    q = sub.add_parser("approx", parents=[common], help="lower and upper approximation of an element")
    q.add_argument("model")
    q.add_argument("--set", required=True, help="element name, or a subset such as {1,2} or 1,2")
    q.set_defaults(func=cmd_approx)

    q = sub.add_parser("contact", parents=[common], help="materialize a rough contact relation")
    q.add_argument("model")
    q.add_argument("--kind", required=True, choices=["a", "o", "1", "2", "3"])
    q.add_argument("--axioms", action="store_true", help="check C1-C7 and relation properties")
    q.set_defaults(func=cmd_contact)

    q = sub.add_parser("mereology", parents=[common], help="bounds, sums and fusions under parthood")
    q.add_argument("model")
    q.add_argument("--bounds", nargs="*", metavar="ELEM")
    q.add_argument("--fusion", nargs="*", metavar="ELEM")
    q.add_argument("--sum", nargs="*", metavar="ELEM")
    q.add_argument("--element", help="test this element instead of listing all candidates")
    q.add_argument("--properties", action="store_true", help="report parthood properties")
    q.set_defaults(func=cmd_mereology)

    q = sub.add_parser("search", parents=[common], help="search small models for a counterexample")
    q.add_argument("--property", required=True, choices=sorted(CATALOG), metavar="ID")
    q.add_argument("--max-universe", type=int, required=True)
    q.add_argument("--family", choices=sorted(FAMILY_ALIASES), default="partitions")
    q.add_argument("--max-blocks", type=int)
    q.add_argument("--parallelism", type=int, default=1)
    q.add_argument("--canonicalize", action="store_true", help="skip granulations equal up to relabeling")
    q.set_defaults(func=cmd_search)

    q = sub.add_parser("verify-theorems", parents=[common], help="run the exhaustive theorem suites")
    q.add_argument("theorem", nargs="?", default="all", choices=["1", "2", "3", "all"])
    q.add_argument("--max-universe", type=int)
    q.add_argument("--timing", action="store_true", help="include elapsed times (output is then not reproducible)")
    q.set_defaults(func=cmd_verify_theorems)

    q = sub.add_parser("ingest-table", parents=[common], help="read a six-column decision table")
    q.add_argument("csv")
    q.add_argument("--parthood", help="JSON file with a list of [part, whole] pairs")
    q.add_argument("--granules", help="comma-separated granule labels (default: the lower images)")
    q.add_argument("--output", help="write the model document here")
    q.set_defaults(func=cmd_ingest_table)

    q = sub.add_parser("reproduce", parents=[common], help="rebuild and verify a compiled-in counterexample")
    q.add_argument("case", choices=APPENDIX_CASES)
    q.set_defaults(func=cmd_reproduce)
    return p


INPUT_ERRORS = (
    OSError,
    json.JSONDecodeError,
    ModelDocumentError,
    DecisionTableError,
    ModelError,
    UniverseError,
    MereologyError,
    ContactError,
    SearchError,
)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"mereo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

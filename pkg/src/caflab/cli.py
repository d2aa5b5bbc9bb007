"""Command-line front end.

Reports are JSON on standard output; enumeration streams are JSONL CAF
documents. Exit codes: 0 pass/holds, 1 counterexample/fail, 2 budget
exceeded, 3 invalid input. Identical invocations produce identical bytes
apart from timing fields.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from typing import Optional, Union

from . import axioms, documents, rules, theorem_lab
from .axioms import GeneralCaf, IndependentCaf
from .core import Params, Profile, make_profile
from .errors import (
    BadCategoryError,
    BadLengthError,
    BudgetExceededError,
    CaflabError,
    HypothesisError,
    NoWitnessError,
    NotABijectionError,
    NotSurjectiveError,
    PreconditionError,
    SchemaError,
    VerificationError,
)
from .search import DEFAULT_SEARCH_BUDGET, KNOWN_AXIOMS, SearchSpec, enumerate_independent_cafs
from .theorem_lab import CLAIMS

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_BUDGET = 2
EXIT_INVALID = 3

GOLDEN_DIR_ENV = "CAFLAB_GOLDEN_DIR"

CHECKS = (
    "validity",
    "unanimity",
    "citizen-sovereignty",
    "independence",
    "generalized-unanimity",
    "essential-dictatorship",
)


def _print(obj: dict) -> None:
    print(json.dumps(obj, sort_keys=True, indent=2))


def _params_from_args(args) -> Optional[Params]:
    given = [args.n, args.m, args.rho]
    if all(v is None for v in given):
        return None
    if any(v is None for v in given):
        raise ValueError("give all of --n, --m, --rho or none")
    return Params(n=args.n, m=args.m, rho=args.rho)


def _load_subject(args) -> tuple[Union[IndependentCaf, GeneralCaf], str]:
    params = _params_from_args(args)
    if getattr(args, "caf", None):
        if getattr(args, "rule", None):
            raise ValueError("give --caf or --rule, not both")
        caf = documents.load_caf(args.caf)
        if params is not None and caf.params != params:
            raise ValueError("size flags disagree with the document")
        return caf, args.caf
    if getattr(args, "rule", None):
        return rules.parse_rule(args.rule, params), args.rule
    raise ValueError("give --caf <path> or --rule <name>")


def _letter(cat: int, rho: int, letters: bool) -> str:
    if letters and rho == 2:
        return "pq"[cat]
    return f"p{cat + 1}"


def _render_profile(profile: Profile, letters: bool) -> list[str]:
    rho = profile.params.rho
    return [
        " ".join(_letter(v, rho, letters) for v in member.values)
        for member in profile.members
    ]


def _cmd_check(args) -> int:
    caf, label = _load_subject(args)
    wanted = args.axioms.split(",") if args.axioms else None
    if wanted:
        unknown = set(wanted) - set(CHECKS)
        if unknown:
            raise ValueError(f"unknown axioms: {sorted(unknown)}; choose from {CHECKS}")
    else:
        wanted = [c for c in CHECKS if c != "validity" or isinstance(caf, IndependentCaf)]

    results = []
    all_pass = True
    for name in wanted:
        if name == "validity":
            if not isinstance(caf, IndependentCaf):
                raise ValueError("validity is defined for independent CAF documents only")
            report = axioms.check_validity(caf, budget=args.budget)
            entry = documents.axiom_report_json(report)
            passed = report.passed
        elif name == "unanimity":
            report = axioms.check_unanimity(caf)
            entry = documents.axiom_report_json(report)
            passed = report.passed
        elif name == "citizen-sovereignty":
            report = axioms.check_citizen_sovereignty(caf, budget=args.budget)
            entry = documents.axiom_report_json(report)
            passed = report.passed
        elif name == "independence":
            report = axioms.check_independence(caf, budget=args.budget)
            entry = documents.axiom_report_json(report)
            passed = report.passed
        elif name == "generalized-unanimity":
            pi = axioms.check_generalized_unanimity(caf)
            entry = {"axiom": name, "passed": pi is not None,
                     "pi": None if pi is None else list(pi.image)}
            passed = pi is not None
        else:
            found = axioms.check_essential_dictatorship(caf, budget=args.budget)
            entry = {"axiom": name, "passed": found is not None}
            entry.update(
                {"d": None, "pi": None}
                if found is None
                else {"d": found[0], "pi": list(found[1].image)}
            )
            passed = found is not None
        results.append(entry)
        all_pass = all_pass and passed

    _print(
        {
            "command": "check",
            "subject": label,
            "params": documents.params_json(caf.params),
            "results": results,
        }
    )
    if args.letters:
        for entry in results:
            witness = entry.get("witness")
            if isinstance(witness, dict) and "profile_a" in witness:
                rho = caf.params.rho
                for tag in ("profile_a", "profile_b"):
                    rows = witness[tag]
                    text = "; ".join(
                        " ".join(_letter(v, rho, True) for v in row) for row in rows
                    )
                    print(f"# {entry['axiom']} {tag}: {text}", file=sys.stderr)
    return EXIT_PASS if all_pass else EXIT_FAIL


def _cmd_enumerate(args) -> int:
    params = _params_from_args(args)
    if params is None:
        raise ValueError("enumerate needs --n, --m, --rho")
    required = frozenset(args.require.split(",")) if args.require else frozenset()
    unknown = required - KNOWN_AXIOMS
    if unknown:
        raise ValueError(f"unknown axioms: {sorted(unknown)}; choose from {sorted(KNOWN_AXIOMS)}")
    spec = SearchSpec(
        params=params,
        required_axioms=required,
        budget=args.budget,
        prune_category_symmetry=args.prune,
        workers=args.workers,
    )
    report = enumerate_independent_cafs(spec)
    lines = [
        documents.dumps(documents.caf_to_document(caf, certified_valid=True))
        for caf in report.cafs
    ]
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("".join(line + "\n" for line in lines))
        _print({"command": "enumerate", **documents.search_report_json(report)})
    else:
        for line in lines:
            print(line)
        payload = {"type": "search-report", **documents.search_report_json(report)}
        print(documents.dumps(payload))
    return EXIT_PASS


def _cmd_verify(args) -> int:
    params = _params_from_args(args)
    if params is None:
        raise ValueError("verify needs --n, --m, --rho")
    verdict = theorem_lab.verify_claim(
        args.claim, params, budget=args.budget, prune=args.prune, workers=args.workers
    )
    _print({"command": "verify", **documents.verdict_json(verdict)})
    return EXIT_PASS if verdict.holds else EXIT_FAIL


def _cmd_extract(args) -> int:
    caf, label = _load_subject(args)
    if isinstance(caf, GeneralCaf):
        report = axioms.check_independence(caf, budget=args.budget)
        if not report.passed:
            _print(
                {
                    "command": "extract",
                    "subject": label,
                    "error": "the rule is not independent",
                    "independence": documents.axiom_report_json(report),
                }
            )
            return EXIT_FAIL
        caf = report.witness
    report = theorem_lab.extract_dictator_pivotal(caf)
    _print(
        {
            "command": "extract",
            "subject": label,
            **documents.dictator_report_json(report),
        }
    )
    return EXIT_PASS


TABLE1_OBJECTS = ("x", "y", "z")
TABLE1_PROFILE = ((0, 1, 1), (1, 0, 1), (1, 1, 0))
TABLE1_PROFILE_PRIME = ((0, 1, 1), (1, 1, 0), (1, 1, 0))


def render_table1() -> str:
    """The behaviour of the plurality example on the two paper profiles."""
    caf = rules.example_plurality()
    params = caf.params
    profile = make_profile(params, TABLE1_PROFILE)
    profile_prime = make_profile(params, TABLE1_PROFILE_PRIME)
    out = caf.evaluate(profile)
    out_prime = caf.evaluate(profile_prime)

    def letter(v: int) -> str:
        return "pq"[v]

    lines = ["object  1  2  3  plur(c)    1  2  3  plur(c')"]
    for x, name in enumerate(TABLE1_OBJECTS):
        left = "  ".join(letter(member.values[x]) for member in profile.members)
        right = "  ".join(letter(member.values[x]) for member in profile_prime.members)
        lines.append(
            f"{name}       {left}  {letter(out.values[x])}          "
            f"{right}  {letter(out_prime.values[x])}"
        )
    return "\n".join(lines) + "\n"


def _golden_text(name: str) -> str:
    override = os.environ.get(GOLDEN_DIR_ENV)
    if override:
        with open(os.path.join(override, name), "r", encoding="utf-8") as fh:
            return fh.read()
    return (resources.files("caflab") / "golden" / name).read_text(encoding="utf-8")


def _cmd_demo(args) -> int:
    if args.what != "table1":
        raise ValueError(f"unknown demo {args.what!r}; available: table1")
    rendered = render_table1()
    sys.stdout.write(rendered)
    sys.stdout.flush()
    golden = _golden_text("table1.txt")
    if rendered == golden:
        print("golden: match", file=sys.stderr)
        return EXIT_PASS
    print("golden: MISMATCH", file=sys.stderr)
    for i, (got, want) in enumerate(
        zip(rendered.splitlines(), golden.splitlines())
    ):
        if got != want:
            print(f"line {i + 1}: got      {got!r}", file=sys.stderr)
            print(f"line {i + 1}: expected {want!r}", file=sys.stderr)
    return EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="caflab",
        description="Classification aggregation workbench: axiom checks, "
        "exhaustive CAF enumeration, and machine-checked impossibility claims.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_sizes(p):
        p.add_argument("--n", type=int, help="number of individuals")
        p.add_argument("--m", type=int, help="number of objects")
        p.add_argument("--rho", type=int, help="number of categories")

    def add_subject(p):
        p.add_argument("--caf", help="path to a CAF document")
        p.add_argument(
            "--rule",
            help="named rule: plurality-table1 | dictator:<i> | "
            "essential:<i>:<pi> | majority:tie=<cat>",
        )

    p = sub.add_parser("check", help="run axiom checks on a CAF")
    add_subject(p)
    add_sizes(p)
    p.add_argument("--axioms", help="comma-separated checks (default: all applicable)")
    p.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET)
    p.add_argument("--letters", action="store_true", help="render p/q for two categories")
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("enumerate", help="enumerate valid independent CAFs")
    add_sizes(p)
    p.add_argument("--require", help="comma-separated axioms every CAF must satisfy")
    p.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET)
    p.add_argument("--prune", action="store_true", help="category-symmetry pruning")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="write the JSONL CAF stream here instead of stdout")
    p.set_defaults(handler=_cmd_enumerate)

    p = sub.add_parser("verify", help="machine-check a claim at given sizes")
    p.add_argument("--claim", required=True, choices=CLAIMS)
    add_sizes(p)
    p.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET)
    p.add_argument("--prune", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("extract", help="pivotal-voter dictator extraction")
    add_subject(p)
    add_sizes(p)
    p.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET)
    p.set_defaults(handler=_cmd_extract)

    p = sub.add_parser("demo", help="reproduce a worked example")
    p.add_argument("what", help="table1")
    p.set_defaults(handler=_cmd_demo)

    return parser


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code not in (0, None) else EXIT_PASS
    try:
        return args.handler(args)
    except BudgetExceededError as exc:
        _print({"error": {"type": "BudgetExceeded", "message": str(exc),
                          "estimate": exc.estimate, "budget": exc.budget}})
        return EXIT_BUDGET
    except (VerificationError, NotABijectionError) as exc:
        _print({"error": {"type": type(exc).__name__, "message": str(exc)}})
        return EXIT_FAIL
    except (
        SchemaError,
        PreconditionError,
        HypothesisError,
        NotSurjectiveError,
        BadLengthError,
        BadCategoryError,
        NoWitnessError,
        CaflabError,
        ValueError,
        OSError,
    ) as exc:
        _print({"error": {"type": type(exc).__name__, "message": str(exc)}})
        return EXIT_INVALID


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()

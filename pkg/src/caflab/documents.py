"""CAF documents and report serialization.

A CAF document is a JSON object carrying the sizes and either per-object
tables (kind "independent") or a named rule (kind "rule"). Table keys are
base-rho digit strings of the category vector with individual 0 as the
leftmost digit, matching the canonical table encoding. Documents round-trip
losslessly; enumeration streams are JSONL with one document per line.
"""

from __future__ import annotations

import json
from typing import Union

from . import rules as rules_mod
from .axioms import (
    AxiomReport,
    ElementaryCaf,
    GeneralCaf,
    IndependenceWitness,
    IndependentCaf,
    SovereigntyGap,
    SovereigntyTable,
    UnanimityWitness,
    ValidityWitness,
    check_validity,
)
from .core import Params, Profile, decode_vector, encode_vector
from .errors import NotSurjectiveError, SchemaError

FORMAT = "caf"

MAX_DIGIT_RHO = 10  # digit-string keys use single characters


def params_json(params: Params) -> dict:
    return {"n": params.n, "m": params.m, "rho": params.rho}


def params_from_json(obj: object) -> Params:
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", field="params")
    try:
        n, m, rho = int(obj["n"]), int(obj["m"]), int(obj["rho"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad sizes: {exc}", field="params")
    try:
        return Params(n=n, m=m, rho=rho)
    except ValueError as exc:
        raise SchemaError(str(exc), field="params")


def _vector_key(code: int, params: Params) -> str:
    return "".join(str(v) for v in decode_vector(code, params.n, params.rho))


def caf_to_document(
    caf: Union[IndependentCaf, GeneralCaf], certified_valid: bool = False
) -> dict:
    params = caf.params
    if isinstance(caf, GeneralCaf):
        return {
            "format": FORMAT,
            "params": params_json(params),
            "kind": "rule",
            "rule": caf.name,
        }
    if params.rho > MAX_DIGIT_RHO:
        raise SchemaError(f"digit-string keys support rho <= {MAX_DIGIT_RHO}")
    tables = [
        {_vector_key(code, params): out for code, out in enumerate(t.table)}
        for t in caf.tables
    ]
    doc = {
        "format": FORMAT,
        "params": params_json(params),
        "kind": "independent",
        "tables": tables,
    }
    if certified_valid:
        doc["certified_valid"] = True
    return doc


def document_to_caf(doc: object) -> Union[IndependentCaf, GeneralCaf]:
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object")
    if doc.get("format") != FORMAT:
        raise SchemaError(f"expected format {FORMAT!r}", field="format")
    params = params_from_json(doc.get("params"))
    kind = doc.get("kind")
    if kind == "rule":
        rule = doc.get("rule")
        if not isinstance(rule, str):
            raise SchemaError("rule documents need a rule name string", field="rule")
        try:
            return rules_mod.parse_rule(rule, params)
        except Exception as exc:
            raise SchemaError(str(exc), field="rule")
    if kind != "independent":
        raise SchemaError(f"unknown kind {kind!r}", field="kind")

    tables_obj = doc.get("tables")
    if not isinstance(tables_obj, list) or len(tables_obj) != params.m:
        raise SchemaError(f"need exactly m={params.m} tables", field="tables")
    tables = []
    for x, entry in enumerate(tables_obj):
        field = f"tables[{x}]"
        if not isinstance(entry, dict):
            raise SchemaError("table must be an object", field=field)
        if len(entry) != params.vector_count:
            raise SchemaError(
                f"table has {len(entry)} keys, expected {params.vector_count}",
                field=field,
            )
        row = [None] * params.vector_count
        for key, value in entry.items():
            if not isinstance(key, str) or len(key) != params.n:
                raise SchemaError(f"key {key!r} must have length n={params.n}", field=field)
            try:
                digits = [int(ch) for ch in key]
            except ValueError:
                raise SchemaError(f"key {key!r} is not a digit string", field=field)
            if any(not (0 <= v < params.rho) for v in digits):
                raise SchemaError(f"key {key!r} has digits outside [0, {params.rho})", field=field)
            if not isinstance(value, int) or not (0 <= value < params.rho):
                raise SchemaError(
                    f"entry for {key!r} must be a category in [0, {params.rho})",
                    field=field,
                )
            code = encode_vector(digits, params.rho)
            if row[code] is not None:
                raise SchemaError(f"duplicate key {key!r}", field=field)
            row[code] = value
        tables.append(ElementaryCaf(params, tuple(row)))
    caf = IndependentCaf(params, tuple(tables))
    if doc.get("certified_valid"):
        report = check_validity(caf)
        if not report.passed:
            witness = report.witness
            raise NotSurjectiveError(
                set(range(params.rho)) - set(witness.aggregate),
                "document claims a validity certificate but a profile "
                f"aggregates to {witness.aggregate}",
            )
    return caf


def save_caf(
    caf: Union[IndependentCaf, GeneralCaf], path: str, certified_valid: bool = False
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(caf_to_document(caf, certified_valid), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_caf(path: str) -> Union[IndependentCaf, GeneralCaf]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON at line {exc.lineno}: {exc.msg}")
    return document_to_caf(doc)


# ---------------------------------------------------------------------------
# Report rendering (JSON-safe dictionaries, zero-based indices throughout)


def classification_json(values) -> list[int]:
    return list(values)


def profile_json(profile: Profile) -> list[list[int]]:
    return [list(c.values) for c in profile.members]


def witness_json(witness: object) -> object:
    if witness is None:
        return None
    if isinstance(witness, ValidityWitness):
        return {
            "profile": profile_json(witness.profile),
            "aggregate": list(witness.aggregate),
        }
    if isinstance(witness, UnanimityWitness):
        return {
            "classification": list(witness.classification.values),
            "output": list(witness.output),
        }
    if isinstance(witness, SovereigntyGap):
        return {"object": witness.object_index, "category": witness.category}
    if isinstance(witness, SovereigntyTable):
        return {
            "witnesses": [
                {"object": x, "category": p, "profile": profile_json(prof)}
                for (x, p), prof in sorted(witness.witnesses.items())
            ]
        }
    if isinstance(witness, IndependenceWitness):
        return {
            "object": witness.object_index,
            "profile_a": profile_json(witness.profile_a),
            "profile_b": profile_json(witness.profile_b),
        }
    if isinstance(witness, IndependentCaf):
        return caf_to_document(witness)
    return repr(witness)


def axiom_report_json(report: AxiomReport) -> dict:
    return {
        "axiom": report.axiom,
        "passed": report.passed,
        "witness": witness_json(report.witness),
    }


def census_json(census: dict) -> list[dict]:
    out = []
    for (d, image), value in sorted(census.items()):
        found = value is not None if not isinstance(value, bool) else value
        out.append({"d": d, "pi": list(image), "found": found})
    return out


def search_report_json(report) -> dict:
    return {
        "params": params_json(report.spec.params),
        "required_axioms": sorted(report.spec.required_axioms),
        "constraint": report.constraint,
        "prune_category_symmetry": report.spec.prune_category_symmetry,
        "budget": report.spec.budget,
        "workers": report.spec.workers,
        "space_size": report.space_size,
        "candidates_scanned": report.candidates_scanned,
        "valid_count": report.valid_count,
        "axiom_counts": dict(report.axiom_counts),
        "emitted_count": report.emitted_count,
        "census": census_json(report.census),
        "digest": report.digest,
        "elapsed_ms": report.elapsed_ms,
    }


def verdict_json(verdict) -> dict:
    return {
        "claim": verdict.claim,
        "params": params_json(verdict.params),
        "holds": verdict.holds,
        "counts": dict(verdict.counts),
        "census": census_json(verdict.census),
        "counterexample": (
            None
            if verdict.counterexample is None
            else caf_to_document(verdict.counterexample)
        ),
        "elapsed_ms": verdict.elapsed_ms,
    }


def dictator_report_json(report) -> dict:
    from .theorem_lab import LadderEvaluation, ProfileCheck

    trace = []
    for entry in report.trace:
        if isinstance(entry, LadderEvaluation):
            trace.append(
                {
                    "kind": "ladder",
                    "step": entry.index,
                    "vector": list(entry.vector.entries),
                    "output": entry.output,
                }
            )
        elif isinstance(entry, ProfileCheck):
            trace.append(
                {
                    "kind": "profile-check",
                    "label": entry.label,
                    "profile": profile_json(entry.profile),
                    "aggregate": list(entry.aggregate),
                }
            )
    return {
        "d": report.d,
        "pi": list(report.pi.image),
        "method": report.method,
        "verified": report.verified,
        "trace": trace,
    }


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True)

"""Executable forms of the impossibility arguments.

This module turns the proof devices into runnable constructions: the
unanimity permutation computed from constant profiles, the staged witness
profiles whose forced surjectivity drives the argument, the pivotal-voter
ladder that locates the decisive individual, and exhaustive verifiers for
the theorem-level claims over enumerated CAF populations.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from . import axioms
from .axioms import ElementaryCaf, IndependentCaf
from .core import (
    CategoryPermutation,
    CategoryVector,
    Classification,
    Params,
    Profile,
    all_permutations,
    decode_vector,
    encode_vector,
)
from .errors import (
    HypothesisError,
    NotABijectionError,
    PreconditionError,
    VerificationError,
)
from .search import (
    CITIZEN_SOVEREIGNTY,
    UNANIMITY,
    SearchReport,
    SearchSpec,
    constant_codes,
    find_witness_vector,
    enumerate_independent_cafs,
)

CLAIMS = ("thm1", "coro1", "coro2", "prop1", "thm2")


@dataclass(frozen=True)
class PivotalLadder:
    """The two staircases of category vectors on the first two categories:
    step i of the right ladder has i leading second-category entries, the
    left ladder is its entrywise complement."""

    n: int
    rho: int
    rs: tuple[CategoryVector, ...]
    ls: tuple[CategoryVector, ...]


def pivotal_ladder(params: Params) -> PivotalLadder:
    n = params.n
    rs = tuple(
        CategoryVector((1,) * i + (0,) * (n - i), params.rho) for i in range(n + 1)
    )
    ls = tuple(
        CategoryVector((0,) * i + (1,) * (n - i), params.rho) for i in range(n + 1)
    )
    return PivotalLadder(n, params.rho, rs, ls)


@dataclass(frozen=True)
class LadderEvaluation:
    index: int
    vector: CategoryVector
    output: int


@dataclass(frozen=True)
class ProfileCheck:
    label: str
    profile: Profile
    aggregate: tuple[int, ...]


@dataclass(frozen=True)
class DictatorReport:
    d: int
    pi: CategoryPermutation
    method: str  # "pivotal" or "exhaustive"
    verified: bool
    trace: tuple[Union[LadderEvaluation, ProfileCheck], ...] = ()


@dataclass(frozen=True)
class TheoremVerdict:
    claim: str
    params: Params
    holds: bool
    counterexample: Optional[IndependentCaf]
    counts: dict[str, int]
    census: dict[tuple[int, tuple[int, ...]], bool]
    elapsed_ms: float


def compute_pi(caf: IndependentCaf) -> CategoryPermutation:
    """The map sending each category p to the aggregate of object p's table
    on the all-p vector, checked to be a bijection and to agree with every
    object's constant outputs.

    Guaranteed to succeed when the CAF is valid, citizen sovereign, and
    there are more objects than categories; failures report which part
    broke down.
    """
    params = caf.params
    consts = constant_codes(params)
    image = tuple(caf.tables[p].table[consts[p]] for p in range(params.rho))
    if sorted(image) != list(range(params.rho)):
        raise NotABijectionError(
            f"constant outputs {image} do not permute the categories; "
            "the CAF cannot be citizen sovereign, independent, and valid"
        )
    for x in range(params.m):
        for p in range(params.rho):
            got = caf.tables[x].table[consts[p]]
            if got != image[p]:
                raise PreconditionError(
                    f"object {x} sends the all-{p} vector to {got}, expected "
                    f"{image[p]}: generalized unanimity fails, so the CAF is "
                    "not citizen sovereign + independent + valid (or m = rho)"
                )
    return CategoryPermutation(image)


# ---------------------------------------------------------------------------
# Proof-stage profile constructions


def _profile_from_columns(
    params: Params, columns: Sequence[Sequence[int]]
) -> Profile:
    # Column c for each object; per-individual surjectivity is enforced by
    # the Classification constructor, turning the proofs' observations into
    # checked postconditions.
    members = tuple(
        Classification(tuple(columns[x][i] for x in range(params.m)), params.rho)
        for i in range(params.n)
    )
    return Profile(members, params)


def _require_strict(params: Params) -> None:
    if not params.strict:
        raise PreconditionError(
            f"construction needs more objects than categories, got m={params.m}, rho={params.rho}"
        )


def _check_category(params: Params, value: int, name: str) -> None:
    if not (0 <= value < params.rho):
        raise PreconditionError(f"{name}={value} outside [0, {params.rho})")


def lemma_profile_step1(caf: IndependentCaf, r: int) -> Profile:
    """Diagonal constants on the first rho objects, target-r witness
    columns on the rest."""
    params = caf.params
    _require_strict(params)
    _check_category(params, r, "r")
    columns: list[Sequence[int]] = []
    for x in range(params.rho):
        columns.append((x,) * params.n)
    for x in range(params.rho, params.m):
        columns.append(find_witness_vector(caf, x, r).entries)
    return _profile_from_columns(params, columns)


def lemma_profile_step2(caf: IndependentCaf, r: int, i: int, j: int) -> Profile:
    """Witness column at object i, constant i at the far object j, diagonal
    constants elsewhere among the first rho, witness columns beyond."""
    params = caf.params
    _require_strict(params)
    _check_category(params, r, "r")
    _check_category(params, i, "i")
    if not (params.rho <= j < params.m):
        raise PreconditionError(f"j={j} must index an object beyond the first {params.rho}")
    columns = []
    for x in range(params.m):
        if x == i:
            columns.append(find_witness_vector(caf, x, r).entries)
        elif x == j:
            columns.append((i,) * params.n)
        elif x < params.rho:
            columns.append((x,) * params.n)
        else:
            columns.append(find_witness_vector(caf, x, r).entries)
    return _profile_from_columns(params, columns)


def lemma_profile_step3(caf: IndependentCaf, r: int, i: int, j: int) -> Profile:
    """Like step 2 but with both i and j among the first rho objects; the
    (rho+1)-th object carries the constant-j column, so m > rho is
    structurally required."""
    params = caf.params
    _require_strict(params)
    _check_category(params, r, "r")
    _check_category(params, i, "i")
    _check_category(params, j, "j")
    if i == j:
        raise PreconditionError("i and j must differ")
    columns = []
    for x in range(params.m):
        if x == i:
            columns.append(find_witness_vector(caf, x, r).entries)
        elif x == j:
            columns.append((i,) * params.n)
        elif x < params.rho:
            columns.append((x,) * params.n)
        elif x == params.rho:
            columns.append((j,) * params.n)
        else:
            columns.append(find_witness_vector(caf, x, r).entries)
    return _profile_from_columns(params, columns)


def lemma2_claim1_profile(
    params: Params,
    x: int,
    y: int,
    r: Sequence[int],
    r_prime: Sequence[int],
) -> Profile:
    """Complementary pair (r, r') on objects x and y, remaining categories
    spread as constants over the remaining objects.

    The two-category case places r on x and r' everywhere else, as the
    argument there only needs the one profile.
    """
    if x == y:
        raise PreconditionError("x and y must differ")
    for name, v in (("x", x), ("y", y)):
        if not (0 <= v < params.m):
            raise PreconditionError(f"{name}={v} outside [0, {params.m})")
    r = tuple(r)
    r_prime = tuple(r_prime)
    if len(r) != params.n or len(r_prime) != params.n:
        raise PreconditionError("vectors must have one entry per individual")
    pair = {r[0], r_prime[0]}
    if any({r[i], r_prime[i]} != pair for i in range(params.n)):
        raise PreconditionError("entries must complement each other within one category pair")
    if len(pair) != 2:
        raise PreconditionError("the pair case p = q needs no profile")

    if params.rho == 2:
        columns = [r_prime] * params.m
        columns[x] = r
        return _profile_from_columns(params, columns)

    others = [z for z in range(params.m) if z not in (x, y)]
    spare = sorted(set(range(params.rho)) - pair)
    columns = [()] * params.m
    columns[x] = r
    columns[y] = r_prime
    for t, z in enumerate(others):
        cat = spare[min(t, len(spare) - 1)]
        columns[z] = (cat,) * params.n
    return _profile_from_columns(params, columns)


def lemma2_claim2_profile(params: Params, t: Sequence[int], d: int) -> Profile:
    """The decisive-step profile: the probe vector t at the first object,
    the ladder neighbours at the second and third, then constants walking
    through the remaining categories."""
    _require_strict(params)
    t = tuple(t)
    if len(t) != params.n:
        raise PreconditionError("t must have one entry per individual")
    if not (0 <= d < params.n):
        raise PreconditionError(f"d={d} outside [0, {params.n})")
    if t[d] != 0:
        raise PreconditionError("the probe must give the pivotal individual the first category")
    ladder = pivotal_ladder(params)
    columns: list[Sequence[int]] = [t, ladder.ls[d].entries, ladder.rs[d + 1].entries]
    for x in range(3, params.m):
        columns.append((min(x - 1, params.rho - 1),) * params.n)
    return _profile_from_columns(params, columns)


_STAGES = {
    "step1": lemma_profile_step1,
    "step2": lemma_profile_step2,
    "step3": lemma_profile_step3,
    "lemma2-claim1": lemma2_claim1_profile,
    "lemma2-claim2": lemma2_claim2_profile,
}


def build_lemma_profile(caf: IndependentCaf, stage: str, **kwargs) -> Profile:
    """Dispatch to one proof-stage construction by name.

    step1(r), step2(r, i, j), step3(r, i, j) take the CAF (their witness
    columns come from its tables); lemma2-claim1(x, y, r, r_prime) and
    lemma2-claim2(t, d) only need the sizes.
    """
    try:
        fn = _STAGES[stage]
    except KeyError:
        raise PreconditionError(f"unknown stage {stage!r}; choose from {sorted(_STAGES)}")
    if stage in ("lemma2-claim1", "lemma2-claim2"):
        return fn(caf.params, **kwargs)
    return fn(caf, **kwargs)


# ---------------------------------------------------------------------------
# Pivotal extraction


def extract_dictator_pivotal(caf: IndependentCaf) -> DictatorReport:
    """Locate the essential dictator by the ladder argument and then verify
    the claim exhaustively on every table entry.

    The ladder lives on the third object, so m >= 3 is structural. With
    m > rho the procedure is guaranteed to succeed on valid, citizen
    sovereign CAFs; at m = rho it still runs and the exhaustive check
    decides, but the claim-2 profiles do not exist and only the ladder is
    traced.
    """
    params = caf.params
    if params.m < 3:
        raise PreconditionError(f"the ladder needs a third object, got m={params.m}")
    pi = compute_pi(caf)
    ladder = pivotal_ladder(params)
    x3 = 2

    trace: list[Union[LadderEvaluation, ProfileCheck]] = []
    outputs = []
    for idx, vec in enumerate(ladder.rs):
        out = caf.tables[x3](vec)
        outputs.append(out)
        trace.append(LadderEvaluation(idx, vec, out))
    target = pi.image[1]
    if outputs[0] != pi.image[0] or outputs[-1] != target:
        raise VerificationError(
            "ladder endpoints disagree with the unanimity permutation"
        )
    d = min(i for i in range(1, params.n + 1) if outputs[i] == target) - 1

    if params.strict:
        for code in range(params.rho ** (params.n - 1)):
            partial = decode_vector(code, params.n - 1, params.rho)
            t = partial[:d] + (0,) + partial[d:]
            profile = lemma2_claim2_profile(params, t, d)
            aggregate = caf.aggregate(profile)
            trace.append(ProfileCheck(f"claim2 t={t}", profile, aggregate))
            if aggregate[0] != pi.image[0]:
                return _refute(caf, d, pi, trace)

    size = params.vector_count
    for x in range(params.m):
        table = caf.tables[x].table
        for code in range(size):
            if table[code] != pi.image[decode_vector(code, params.n, params.rho)[d]]:
                return _refute(caf, d, pi, trace)
    return DictatorReport(d=d, pi=pi, method="pivotal", verified=True, trace=tuple(trace))


def _refute(caf, d, pi, trace):
    validity = axioms.check_validity(caf)
    sovereignty = axioms.check_citizen_sovereignty(caf)
    broken = [
        name
        for name, report in (("validity", validity), ("citizen sovereignty", sovereignty))
        if not report.passed
    ]
    if broken:
        raise VerificationError(
            f"pivotal extraction found individual {d} but the dictatorship "
            f"claim fails; refuted precondition(s): {', '.join(broken)}"
        )
    if not caf.params.strict:
        raise VerificationError(
            f"pivotal extraction found individual {d} but the dictatorship "
            f"claim fails; m = rho = {caf.params.rho} lies outside the "
            "guaranteed range"
        )
    raise VerificationError(
        "pivotal extraction failed although validity and citizen "
        "sovereignty both hold; this would contradict the dictatorship "
        "theorem, please report the CAF"
    )


def extract_dictator_exhaustive(caf: IndependentCaf) -> Optional[DictatorReport]:
    """The definition-level route: scan all (d, pi) candidates directly."""
    found = axioms.check_essential_dictatorship(caf)
    if found is None:
        return None
    d, pi = found
    return DictatorReport(d=d, pi=pi, method="exhaustive", verified=True)


# ---------------------------------------------------------------------------
# Claim verifiers


def _census_of(report: SearchReport) -> dict[tuple[int, tuple[int, ...]], bool]:
    return {key: caf is not None for key, caf in report.census.items()}


def _search(params: Params, required: set[str], budget: int, prune: bool, workers: int) -> SearchReport:
    return enumerate_independent_cafs(
        SearchSpec(
            params=params,
            required_axioms=frozenset(required),
            budget=budget,
            prune_category_symmetry=prune,
            workers=workers,
        )
    )


def verify_claim(
    claim: str,
    params: Params,
    budget: int = 10**9,
    prune: bool = False,
    workers: int = 1,
) -> TheoremVerdict:
    """Exhaustively verify one theorem-level claim at the given sizes.

    thm1: every valid, citizen sovereign CAF is essentially a dictatorship
          (needs m > rho >= 2).
    coro1: every valid, unanimous CAF is a dictatorship (m > rho >= 2).
    coro2: same conclusion for m >= rho >= 2 with m >= 3.
    thm2: same conclusion for m >= rho >= 3.
    prop1: at m = rho = 2 the valid unanimous CAFs are exactly the pairs
           where the second table mirrors the first through the category
           swap, 2**(2**n - 2) of them.

    Every essential-dictatorship decision is made by the axioms-module
    checker, not by the search engine that produced the population.
    """
    t0 = time.perf_counter()
    if claim not in CLAIMS:
        raise HypothesisError(f"unknown claim {claim!r}; choose from {CLAIMS}")
    m, rho = params.m, params.rho

    if claim == "thm1":
        if not params.strict:
            raise HypothesisError(f"thm1 needs m > rho, got m={m}, rho={rho}")
        report = _search(params, {CITIZEN_SOVEREIGNTY}, budget, prune, workers)
        counterexample = None
        census = {key: False for key in report.census}
        dictatorships = 0
        for caf in report.cafs:
            found = axioms.check_essential_dictatorship(caf)
            if found is None:
                counterexample = caf
                break
            census[(found[0], found[1].image)] = True
            dictatorships += 1
        counts = {
            "space": report.space_size,
            "valid": report.valid_count,
            "citizen_sovereign": report.emitted_count,
            "essential_dictatorships": dictatorships,
        }
        return TheoremVerdict(
            claim, params, counterexample is None, counterexample, counts, census,
            (time.perf_counter() - t0) * 1000.0,
        )

    if claim in ("coro1", "coro2", "thm2"):
        if claim == "coro1" and not params.strict:
            raise HypothesisError(f"coro1 needs m > rho, got m={m}, rho={rho}")
        if claim == "coro2" and m < 3:
            raise HypothesisError(f"coro2 needs m >= 3, got m={m}")
        if claim == "thm2" and rho < 3:
            raise HypothesisError(f"thm2 needs rho >= 3, got rho={rho}")
        report = _search(params, {UNANIMITY}, budget, prune, workers)
        counterexample = None
        census = {key: False for key in report.census}
        dictatorships = 0
        for caf in report.cafs:
            found = axioms.check_essential_dictatorship(caf)
            if found is None or not found[1].is_identity:
                counterexample = caf
                break
            census[(found[0], found[1].image)] = True
            dictatorships += 1
        counts = {
            "space": report.space_size,
            "valid": report.valid_count,
            "unanimous": report.emitted_count,
            "dictatorships": dictatorships,
        }
        return TheoremVerdict(
            claim, params, counterexample is None, counterexample, counts, census,
            (time.perf_counter() - t0) * 1000.0,
        )

    # prop1
    if (m, rho) != (2, 2):
        raise HypothesisError(f"prop1 is the m = rho = 2 case, got m={m}, rho={rho}")
    report = _search(params, {UNANIMITY}, budget, prune, workers)
    expected = 2 ** (2**params.n - 2)
    counterexample = None
    census = {key: False for key in report.census}
    dictatorships = 0
    essential = 0
    first_tables = set()
    size = params.vector_count
    comp_code = [
        encode_vector([1 - v for v in decode_vector(code, params.n, 2)], 2)
        for code in range(size)
    ]
    for caf in report.cafs:
        tx, ty = caf.tables[0].table, caf.tables[1].table
        first_tables.add(tx)
        if any(ty[code] != 1 - tx[comp_code[code]] for code in range(size)):
            counterexample = caf
            break
        found = axioms.check_essential_dictatorship(caf)
        if found is not None:
            census[(found[0], found[1].image)] = True
            essential += 1
            if found[1].is_identity:
                dictatorships += 1
    mirror_ok = counterexample is None
    complete = report.emitted_count == expected and len(first_tables) == expected
    counts = {
        "space": report.space_size,
        "valid": report.valid_count,
        "unanimous": report.emitted_count,
        "expected": expected,
        "dictatorships": dictatorships,
        "essential_dictatorships": essential,
        "not_essential": report.emitted_count - essential,
    }
    return TheoremVerdict(
        "prop1", params, mirror_ok and complete, counterexample, counts, census,
        (time.perf_counter() - t0) * 1000.0,
    )

"""Aggregation functions and decision procedures for their axioms.

Every checker returns a verdict plus replayable evidence: failures carry a
counterexample (profile, pair of profiles, or unreachable pair), and the
citizen-sovereignty pass carries one witness profile per (object, category).
Checkers here are deliberately plain loops over the profile space; the
search module has its own fast path and is cross-checked against these.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Union

from .core import (
    CategoryPermutation,
    CategoryVector,
    Classification,
    Params,
    Profile,
    all_permutations,
    count_profiles,
    decode_vector,
    encode_vector,
    enumerate_classifications,
    enumerate_profiles,
)
from .errors import BadCategoryError, BadLengthError, BudgetExceededError

# Profile spaces larger than this are refused by the scanning checkers.
DEFAULT_PROFILE_BUDGET = 1_000_000


@dataclass(frozen=True)
class ElementaryCaf:
    """A total map from category vectors to a category, stored as a table
    indexed by the canonical vector encoding."""

    params: Params
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.table) != self.params.vector_count:
            raise BadLengthError(
                f"table has {len(self.table)} entries, expected {self.params.vector_count}"
            )
        for v in self.table:
            if not (0 <= v < self.params.rho):
                raise BadCategoryError(f"table entry {v} outside [0, {self.params.rho})")

    @classmethod
    def from_function(
        cls, params: Params, fn: Callable[[tuple[int, ...]], int]
    ) -> "ElementaryCaf":
        n, rho = params.n, params.rho
        return cls(params, tuple(fn(v) for v in itertools.product(range(rho), repeat=n)))

    def __call__(self, vector: Union[CategoryVector, tuple[int, ...]]) -> int:
        entries = vector.entries if isinstance(vector, CategoryVector) else vector
        return self.table[encode_vector(entries, self.params.rho)]

    @property
    def surjective(self) -> bool:
        return set(self.table) == set(range(self.params.rho))


@dataclass(frozen=True)
class IndependentCaf:
    """An m-tuple of elementary CAFs, one per object.

    Shape is checked at construction; validity (every profile aggregating
    to a surjective classification) is a separate property established by
    check_validity, never assumed.
    """

    params: Params
    tables: tuple[ElementaryCaf, ...]

    def __post_init__(self) -> None:
        if len(self.tables) != self.params.m:
            raise BadLengthError(
                f"{len(self.tables)} tables, expected m={self.params.m}"
            )
        for t in self.tables:
            if t.params != self.params:
                raise BadLengthError("table params mismatch")

    def aggregate(self, profile: Profile) -> tuple[int, ...]:
        """Raw per-object outputs; may be non-surjective for invalid CAFs."""
        rho = self.params.rho
        rows = profile.members
        out = []
        for x, t in enumerate(self.tables):
            code = 0
            for c in rows:
                code = code * rho + c.values[x]
            out.append(t.table[code])
        return tuple(out)

    def evaluate(self, profile: Profile) -> Classification:
        return Classification(self.aggregate(profile), self.params.rho)

    def as_general(self) -> "GeneralCaf":
        return GeneralCaf(self.params, self.evaluate, name="independent")

    def encodings(self) -> tuple[tuple[int, ...], ...]:
        """Per-object raw tables, the document/serialization form."""
        return tuple(t.table for t in self.tables)


@dataclass(frozen=True, eq=False)
class GeneralCaf:
    """An opaque aggregation rule: any map from profiles to classifications."""

    params: Params
    fn: Callable[[Profile], Classification]
    name: str = "rule"

    def evaluate(self, profile: Profile) -> Classification:
        return self.fn(profile)


Caf = Union[IndependentCaf, GeneralCaf]


@dataclass(frozen=True)
class AxiomReport:
    """Verdict plus evidence. The witness payload depends on the axiom:

    validity fail         -> ValidityWitness
    unanimity fail        -> UnanimityWitness
    citizen sovereignty   -> SovereigntyTable on pass, SovereigntyGap on fail
    independence          -> induced IndependentCaf on pass, IndependenceWitness on fail
    """

    axiom: str
    passed: bool
    witness: object = None


@dataclass(frozen=True)
class ValidityWitness:
    profile: Profile
    aggregate: tuple[int, ...]


@dataclass(frozen=True)
class UnanimityWitness:
    classification: Classification
    output: tuple[int, ...]


@dataclass(frozen=True)
class SovereigntyGap:
    object_index: int
    category: int


@dataclass(frozen=True)
class SovereigntyTable:
    witnesses: dict[tuple[int, int], Profile]


@dataclass(frozen=True)
class IndependenceWitness:
    object_index: int
    profile_a: Profile
    profile_b: Profile


def _aggregate(caf: Caf, profile: Profile) -> tuple[int, ...]:
    if isinstance(caf, IndependentCaf):
        return caf.aggregate(profile)
    return caf.evaluate(profile).values


def _check_profile_budget(params: Params, budget: int) -> None:
    total = count_profiles(params)
    if total > budget:
        raise BudgetExceededError(total, budget, what="profiles")


def check_validity(
    caf: IndependentCaf, budget: int = DEFAULT_PROFILE_BUDGET
) -> AxiomReport:
    """Pass iff every profile aggregates to a surjective classification.

    The failure witness is the first offending profile in lexicographic
    scan order, together with its (non-surjective) aggregate.
    """
    params = caf.params
    _check_profile_budget(params, budget)
    full = set(range(params.rho))
    for profile in enumerate_profiles(params):
        out = caf.aggregate(profile)
        if set(out) != full:
            return AxiomReport("validity", False, ValidityWitness(profile, out))
    return AxiomReport("validity", True)


def check_unanimity(caf: Caf) -> AxiomReport:
    """Pass iff every unanimous profile is returned unchanged."""
    params = caf.params
    for c in enumerate_classifications(params):
        profile = Profile((c,) * params.n, params)
        out = _aggregate(caf, profile)
        if out != c.values:
            return AxiomReport("unanimity", False, UnanimityWitness(c, out))
    return AxiomReport("unanimity", True)


def _min_classification_with(params: Params, object_index: int, category: int) -> Classification:
    # Lexicographically smallest classification pinning one object's category.
    for c in enumerate_classifications(params):
        if c.values[object_index] == category:
            return c
    raise AssertionError("unreachable for m >= rho")


def extend_column_to_profile(
    params: Params, object_index: int, vector: CategoryVector
) -> Profile:
    """Smallest profile whose column at object_index equals the vector.

    Always possible for m >= rho: each individual still has m-1 >= rho-1
    other objects to cover the remaining categories.
    """
    members = tuple(
        _min_classification_with(params, object_index, vector.entries[i])
        for i in range(params.n)
    )
    return Profile(members, params)


def check_citizen_sovereignty(
    caf: Caf, budget: int = DEFAULT_PROFILE_BUDGET
) -> AxiomReport:
    """Pass iff every (object, category) pair is achieved by some profile.

    The pass report carries a full witness table mapping each pair to a
    profile that realizes it. For independent CAFs, witnesses are found
    column-first (smallest category vector the table sends to the target,
    then extended to a profile); for opaque rules, by scanning profiles.
    """
    params = caf.params
    if isinstance(caf, IndependentCaf):
        table: dict[tuple[int, int], Profile] = {}
        for x in range(params.m):
            for p in range(params.rho):
                code = next(
                    (e for e, out in enumerate(caf.tables[x].table) if out == p), None
                )
                if code is None:
                    return AxiomReport(
                        "citizen-sovereignty", False, SovereigntyGap(x, p)
                    )
                vec = CategoryVector.decode(code, params.n, params.rho)
                table[(x, p)] = extend_column_to_profile(params, x, vec)
        return AxiomReport("citizen-sovereignty", True, SovereigntyTable(table))

    _check_profile_budget(params, budget)
    table = {}
    for profile in enumerate_profiles(params):
        out = _aggregate(caf, profile)
        for x, p in enumerate(out):
            table.setdefault((x, p), profile)
    for x in range(params.m):
        for p in range(params.rho):
            if (x, p) not in table:
                return AxiomReport("citizen-sovereignty", False, SovereigntyGap(x, p))
    return AxiomReport("citizen-sovereignty", True, SovereigntyTable(table))


def check_independence(
    caf: Caf, budget: int = DEFAULT_PROFILE_BUDGET
) -> AxiomReport:
    """Pass iff each object's output depends only on its own column.

    On pass the witness is the induced IndependentCaf (total, since every
    column vector occurs in some profile). On fail it is the smallest
    conflicting (object, profile, profile) triple in scan order.
    """
    params = caf.params
    _check_profile_budget(params, budget)
    seen: list[dict[int, tuple[Profile, int]]] = [dict() for _ in range(params.m)]
    conflicts: list[Optional[IndependenceWitness]] = [None] * params.m
    rho = params.rho
    for profile in enumerate_profiles(params):
        out = _aggregate(caf, profile)
        for x in range(params.m):
            code = encode_vector((c.values[x] for c in profile.members), rho)
            prev = seen[x].get(code)
            if prev is None:
                seen[x][code] = (profile, out[x])
            elif prev[1] != out[x] and conflicts[x] is None:
                conflicts[x] = IndependenceWitness(x, prev[0], profile)
    for w in conflicts:
        if w is not None:
            return AxiomReport("independence", False, w)
    tables = []
    for x in range(params.m):
        assert len(seen[x]) == params.vector_count, "every column occurs in some profile"
        tables.append(
            ElementaryCaf(
                params, tuple(seen[x][code][1] for code in range(params.vector_count))
            )
        )
    return AxiomReport("independence", True, IndependentCaf(params, tuple(tables)))


def check_generalized_unanimity(caf: Caf) -> Optional[CategoryPermutation]:
    """The single permutation pi with alpha(c,...,c) = pi . c for all c,
    if one exists."""
    params = caf.params
    image: list[Optional[int]] = [None] * params.rho
    for c in enumerate_classifications(params):
        profile = Profile((c,) * params.n, params)
        out = _aggregate(caf, profile)
        for j, p in enumerate(c.values):
            if image[p] is None:
                image[p] = out[j]
            elif image[p] != out[j]:
                return None
    assert all(q is not None for q in image)
    if sorted(image) != list(range(params.rho)):
        return None
    return CategoryPermutation(tuple(image))  # type: ignore[arg-type]


def check_essential_dictatorship(
    caf: Caf, budget: int = DEFAULT_PROFILE_BUDGET
) -> Optional[tuple[int, CategoryPermutation]]:
    """The unique (d, pi) with alpha(c) = pi . c_d on every profile, if any.

    Distinct (d, pi) pairs are extensionally distinct for n >= 2 and
    rho >= 2, so at most one candidate can survive; this is asserted,
    not assumed.
    """
    params = caf.params
    if isinstance(caf, IndependentCaf):
        projections = [
            [decode_vector(code, params.n, params.rho)[d] for code in range(params.vector_count)]
            for d in range(params.n)
        ]
        found = []
        for d in range(params.n):
            proj = projections[d]
            for pi in all_permutations(params.rho):
                if all(
                    t.table == tuple(pi.image[v] for v in proj) for t in caf.tables
                ):
                    found.append((d, pi))
        assert len(found) <= 1
        return found[0] if found else None

    _check_profile_budget(params, budget)
    alive = [(d, pi) for d in range(params.n) for pi in all_permutations(params.rho)]
    for profile in enumerate_profiles(params):
        out = _aggregate(caf, profile)
        alive = [
            (d, pi)
            for d, pi in alive
            if out == tuple(pi.image[v] for v in profile.members[d].values)
        ]
        if not alive:
            return None
    assert len(alive) <= 1
    return alive[0] if alive else None

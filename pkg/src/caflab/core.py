"""Core model: classifications, profiles, category vectors, permutations.

A classification assigns each of m objects one of rho categories and must
hit every category at least once. A profile is one classification per
individual. Categories and individuals are zero-based integers throughout
the library; presentation layers render categories as p1..p_rho (or p/q).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import (
    BadCategoryError,
    BadLengthError,
    BudgetExceededError,
    NotSurjectiveError,
)

# Hard cap on rho**n table entries; larger models fail fast.
DEFAULT_TABLE_BUDGET = 1 << 20


@dataclass(frozen=True)
class Params:
    """Model sizes: n individuals, m objects, rho categories."""

    n: int
    m: int
    rho: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"need at least 2 individuals, got n={self.n}")
        if self.rho < 2:
            raise ValueError(f"need at least 2 categories, got rho={self.rho}")
        if self.m < self.rho:
            raise ValueError(
                f"need at least as many objects as categories, got m={self.m} < rho={self.rho}"
            )

    @property
    def strict(self) -> bool:
        """True when there are strictly more objects than categories."""
        return self.m > self.rho

    @property
    def vector_count(self) -> int:
        """Number of category vectors, rho**n."""
        return self.rho**self.n

    def check_table_budget(self, budget: int = DEFAULT_TABLE_BUDGET) -> None:
        if self.vector_count > budget:
            raise BudgetExceededError(self.vector_count, budget, what="table entries")


def _check_categories(values: Sequence[int], rho: int) -> None:
    for v in values:
        if not (0 <= v < rho):
            raise BadCategoryError(f"category {v} outside [0, {rho})")


@dataclass(frozen=True)
class Classification:
    """A surjective assignment of categories to objects.

    values[j] is the category of object j. Every category in [0, rho)
    must appear at least once.
    """

    values: tuple[int, ...]
    rho: int

    def __post_init__(self) -> None:
        _check_categories(self.values, self.rho)
        missing = set(range(self.rho)) - set(self.values)
        if missing:
            raise NotSurjectiveError(missing)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, j: int) -> int:
        return self.values[j]

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)


@dataclass(frozen=True)
class Profile:
    """One classification per individual, all over the same sizes."""

    members: tuple[Classification, ...]
    params: Params

    def __post_init__(self) -> None:
        if len(self.members) != self.params.n:
            raise BadLengthError(
                f"profile has {len(self.members)} members, expected n={self.params.n}"
            )
        for c in self.members:
            if len(c.values) != self.params.m or c.rho != self.params.rho:
                raise BadLengthError("profile member has mismatched sizes")

    def __getitem__(self, i: int) -> Classification:
        return self.members[i]

    def rows(self) -> tuple[tuple[int, ...], ...]:
        """Raw per-individual assignment tuples."""
        return tuple(c.values for c in self.members)


@dataclass(frozen=True)
class CategoryVector:
    """The categories one object receives from each individual.

    entries[i] is individual i's category for the object. The canonical
    integer encoding is mixed-radix base rho with individual 0 as the
    most significant digit; elementary CAF tables are indexed by it.
    """

    entries: tuple[int, ...]
    rho: int

    def __post_init__(self) -> None:
        _check_categories(self.entries, self.rho)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def encode(self) -> int:
        return encode_vector(self.entries, self.rho)

    @classmethod
    def decode(cls, code: int, n: int, rho: int) -> "CategoryVector":
        return cls(decode_vector(code, n, rho), rho)


def encode_vector(entries: Sequence[int], rho: int) -> int:
    """Mixed-radix encoding, first entry most significant."""
    code = 0
    for v in entries:
        code = code * rho + v
    return code


def decode_vector(code: int, n: int, rho: int) -> tuple[int, ...]:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        code, out[i] = divmod(code, rho)
    return tuple(out)


@dataclass(frozen=True)
class CategoryPermutation:
    """A bijection on the categories, given by its image sequence."""

    image: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.image) != list(range(len(self.image))):
            raise ValueError(f"not a bijection on [0, {len(self.image)}): {self.image}")

    @property
    def rho(self) -> int:
        return len(self.image)

    def __call__(self, p: int) -> int:
        return self.image[p]

    def inverse(self) -> "CategoryPermutation":
        inv = [0] * len(self.image)
        for p, q in enumerate(self.image):
            inv[q] = p
        return CategoryPermutation(tuple(inv))

    @classmethod
    def identity(cls, rho: int) -> "CategoryPermutation":
        return cls(tuple(range(rho)))

    @classmethod
    def swap(cls) -> "CategoryPermutation":
        """The non-identity permutation on two categories."""
        return cls((1, 0))

    @property
    def is_identity(self) -> bool:
        return all(q == p for p, q in enumerate(self.image))


def all_permutations(rho: int) -> list[CategoryPermutation]:
    return [CategoryPermutation(img) for img in itertools.permutations(range(rho))]


# ---------------------------------------------------------------------------
# Operations


def make_classification(params: Params, values: Sequence[int]) -> Classification:
    """Build a classification, rejecting wrong lengths, bad categories,
    and assignments that miss a category."""
    values = tuple(values)
    if len(values) != params.m:
        raise BadLengthError(f"expected {params.m} values, got {len(values)}")
    _check_categories(values, params.rho)
    return Classification(values, params.rho)


def make_profile(params: Params, rows: Sequence[Sequence[int]]) -> Profile:
    if len(rows) != params.n:
        raise BadLengthError(f"expected {params.n} rows, got {len(rows)}")
    return Profile(tuple(make_classification(params, r) for r in rows), params)


def unanimous_profile(params: Params, c: Classification) -> Profile:
    return Profile((c,) * params.n, params)


def surjective_assignments(m: int, rho: int) -> Iterator[tuple[int, ...]]:
    """All surjective assignment tuples, lexicographic. Raw tuples: this is
    the hot path under enumeration."""
    full = frozenset(range(rho))
    for t in itertools.product(range(rho), repeat=m):
        if full.issubset(t):
            yield t


def enumerate_classifications(params: Params) -> Iterator[Classification]:
    """Every classification exactly once, in lexicographic order of the
    assignment sequence."""
    for t in surjective_assignments(params.m, params.rho):
        yield Classification(t, params.rho)


def count_classifications(params: Params) -> int:
    """Closed form by inclusion-exclusion over missed category sets."""
    m, rho = params.m, params.rho
    return sum(
        (-1) ** k * math.comb(rho, k) * (rho - k) ** m for k in range(rho + 1)
    )


def count_profiles(params: Params) -> int:
    return count_classifications(params) ** params.n


def enumerate_profiles(params: Params) -> Iterator[Profile]:
    """All profiles, lexicographic with individual 0 most significant."""
    members = tuple(enumerate_classifications(params))
    for combo in itertools.product(members, repeat=params.n):
        yield Profile(combo, params)


def profile_column(profile: Profile, object_index: int) -> CategoryVector:
    """The vector of categories object_index receives across individuals."""
    params = profile.params
    if not (0 <= object_index < params.m):
        raise IndexError(f"object index {object_index} outside [0, {params.m})")
    return CategoryVector(
        tuple(c.values[object_index] for c in profile.members), params.rho
    )


def apply_permutation(pi: CategoryPermutation, c: Classification) -> Classification:
    """Relabel a classification's categories; the result is again surjective."""
    if pi.rho != c.rho:
        raise BadLengthError(f"permutation on {pi.rho} categories, classification on {c.rho}")
    return Classification(tuple(pi.image[v] for v in c.values), c.rho)

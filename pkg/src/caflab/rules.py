"""Concrete aggregation rules used as fixtures and counterexamples:
dictatorships, essential dictatorships, plurality over whole classifications
with a tie-break order, and the (invalid) per-object majority rule."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .axioms import ElementaryCaf, GeneralCaf, IndependentCaf
from .core import (
    CategoryPermutation,
    Classification,
    Params,
    Profile,
    enumerate_classifications,
)
from .errors import PreconditionError


@dataclass(frozen=True)
class TieBreakOrder:
    """A strict total order on all classifications, highest first."""

    params: Params
    order: tuple[Classification, ...]

    def __post_init__(self) -> None:
        expected = {c.values for c in enumerate_classifications(self.params)}
        got = [c.values for c in self.order]
        if len(got) != len(set(got)) or set(got) != expected:
            raise ValueError("order must list every classification exactly once")

    def rank(self, c: Classification) -> int:
        return self._ranks()[c.values]

    def _ranks(self) -> dict[tuple[int, ...], int]:
        ranks = getattr(self, "_rank_cache", None)
        if ranks is None:
            ranks = {c.values: i for i, c in enumerate(self.order)}
            object.__setattr__(self, "_rank_cache", ranks)
        return ranks

    @classmethod
    def descending_lex(cls, params: Params) -> "TieBreakOrder":
        cs = sorted(enumerate_classifications(params), key=lambda c: c.values, reverse=True)
        return cls(params, tuple(cs))

    @classmethod
    def with_top(cls, params: Params, top: Classification) -> "TieBreakOrder":
        """Descending lex, except the given classification ranks highest."""
        rest = [
            c
            for c in sorted(
                enumerate_classifications(params), key=lambda c: c.values, reverse=True
            )
            if c.values != top.values
        ]
        return cls(params, (top, *rest))


def make_essential_dictatorship(
    params: Params, d: int, pi: CategoryPermutation
) -> IndependentCaf:
    """The CAF returning individual d's classification relabeled by pi.

    pi = identity gives a plain dictatorship. The table form puts
    alpha_x(v) = pi(v[d]) for every object x.
    """
    if not (0 <= d < params.n):
        raise PreconditionError(f"individual {d} outside [0, {params.n})")
    if pi.rho != params.rho:
        raise PreconditionError(f"permutation on {pi.rho} categories, model has {params.rho}")
    table = ElementaryCaf.from_function(params, lambda v: pi.image[v[d]])
    return IndependentCaf(params, (table,) * params.m)


def make_dictatorship(params: Params, d: int) -> IndependentCaf:
    return make_essential_dictatorship(params, d, CategoryPermutation.identity(params.rho))


def make_plurality(
    params: Params, order: TieBreakOrder, name: str = "plurality"
) -> GeneralCaf:
    """Plurality over whole classifications: the most-supported classification
    wins, ties broken by the order (highest wins)."""
    if order.params != params:
        raise PreconditionError("tie-break order built for different sizes")

    def plur(profile: Profile) -> Classification:
        counts = Counter(c.values for c in profile.members)
        best = max(counts.values())
        winners = [c for c in order.order if counts.get(c.values) == best]
        return winners[0]

    return GeneralCaf(params, plur, name=name)


def make_per_object_majority(params: Params, tie: int) -> IndependentCaf:
    """Per-object majority with a fixed tie category. Two categories only.

    Deliberately returned without any validity guarantee: check_validity
    produces the counterexample profile.
    """
    if params.rho != 2:
        raise PreconditionError("per-object majority is defined for two categories")
    if not (0 <= tie < 2):
        raise PreconditionError(f"tie category {tie} outside [0, 2)")

    def majority(v: tuple[int, ...]) -> int:
        ones = sum(v)
        if 2 * ones > len(v):
            return 1
        if 2 * ones < len(v):
            return 0
        return tie

    table = ElementaryCaf.from_function(params, majority)
    return IndependentCaf(params, (table,) * params.m)


# Example fixture: three individuals, objects x,y,z, categories p,q; the
# tie-break order tops the classification (x -> p, y -> q, z -> q).
EXAMPLE_PLURALITY_PARAMS = Params(n=3, m=3, rho=2)


def example_plurality() -> GeneralCaf:
    params = EXAMPLE_PLURALITY_PARAMS
    top = Classification((0, 1, 1), params.rho)
    return make_plurality(
        params, TieBreakOrder.with_top(params, top), name="plurality-table1"
    )


# ---------------------------------------------------------------------------
# Rule naming, the addressable-fixture surface of the CLI and of rule
# documents. Individuals are 1-based in rule names (as in "dictator:1"),
# categories may be written p/q (two categories) or p1..p_rho.


def _parse_category(text: str, rho: int) -> int:
    letters = {"p": 0, "q": 1}
    if rho == 2 and text in letters:
        return letters[text]
    if text.startswith("p") and text[1:].isdigit():
        value = int(text[1:]) - 1
    elif text.isdigit():
        value = int(text)
    else:
        raise ValueError(f"cannot read category {text!r}")
    if not (0 <= value < rho):
        raise ValueError(f"category {text!r} outside the {rho} available")
    return value


def _parse_permutation(text: str, rho: int) -> CategoryPermutation:
    if text == "id":
        return CategoryPermutation.identity(rho)
    if text == "swap":
        if rho != 2:
            raise ValueError("'swap' names a permutation of exactly two categories")
        return CategoryPermutation.swap()
    if text.isdigit() and len(text) == rho:
        return CategoryPermutation(tuple(int(ch) for ch in text))
    raise ValueError(
        f"cannot read permutation {text!r}; use 'id', 'swap', or a digit image like '120'"
    )


def _parse_individual(text: str, n: int) -> int:
    if not text.isdigit() or not (1 <= int(text) <= n):
        raise ValueError(f"individual {text!r} outside 1..{n}")
    return int(text) - 1


def parse_rule(spec: str, params: Params | None = None):
    """Build the CAF a rule name describes.

    Grammar: plurality-table1 | dictator:<i> | essential:<i>:<pi> |
    majority:tie=<cat>. All but the first need explicit sizes.
    """
    if spec == "plurality-table1":
        if params is not None and params != EXAMPLE_PLURALITY_PARAMS:
            raise ValueError(
                "plurality-table1 is fixed at n=3, m=3, rho=2"
            )
        return example_plurality()
    head, _, rest = spec.partition(":")
    if params is None:
        raise ValueError(f"rule {spec!r} needs explicit sizes (n, m, rho)")
    if head == "dictator":
        return make_dictatorship(params, _parse_individual(rest, params.n))
    if head == "essential":
        who, _, pi_text = rest.partition(":")
        return make_essential_dictatorship(
            params,
            _parse_individual(who, params.n),
            _parse_permutation(pi_text, params.rho),
        )
    if head == "majority":
        key, _, value = rest.partition("=")
        if key != "tie":
            raise ValueError("majority takes a tie=<category> argument")
        return make_per_object_majority(params, _parse_category(value, params.rho))
    raise ValueError(f"unknown rule {spec!r}")

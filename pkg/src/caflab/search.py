"""Exhaustive enumeration of valid independent CAFs.

The candidate space is the m-fold product of per-object elementary tables.
Candidates are built object by object. A partial choice is abandoned as
soon as some bundle of profiles that agree on all remaining columns
already misses more categories than the remaining objects can supply.
The last object's table is never enumerated at all: each of its entries
is forced (or left free) by the categories still missing among the
profiles ending in that column, which collapses the final factor of the
space. Every emitted candidate is therefore valid by construction; the
test suite re-checks them through the independent axioms-module path.

Results are deterministic: emission order is lexicographic in the
concatenated table encodings at any worker count, and the optional
category-symmetry pruning re-expands orbits so that counts match
unpruned runs exactly.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from .axioms import ElementaryCaf, IndependentCaf
from .core import (
    CategoryVector,
    Params,
    all_permutations,
    decode_vector,
    encode_vector,
    surjective_assignments,
)
from .errors import (
    BadCategoryError,
    BudgetExceededError,
    NoWitnessError,
    PreconditionError,
)

DEFAULT_SEARCH_BUDGET = 10**9

VALIDITY = "validity"
UNANIMITY = "unanimity"
CITIZEN_SOVEREIGNTY = "citizen-sovereignty"
GENERALIZED_UNANIMITY = "generalized-unanimity"
KNOWN_AXIOMS = frozenset(
    {VALIDITY, UNANIMITY, CITIZEN_SOVEREIGNTY, GENERALIZED_UNANIMITY}
)

CONSTRAINT_NONE = "none"
CONSTRAINT_UNANIMOUS = "unanimous-on-constants"


@dataclass(frozen=True)
class SearchSpec:
    """What to enumerate: sizes, axioms every emitted CAF must satisfy
    (validity is always implied), a candidate budget, and whether to
    explore only one candidate per category-relabeling orbit."""

    params: Params
    required_axioms: frozenset[str] = frozenset()
    budget: int = DEFAULT_SEARCH_BUDGET
    prune_category_symmetry: bool = False
    workers: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "required_axioms", frozenset(self.required_axioms))
        unknown = self.required_axioms - KNOWN_AXIOMS
        if unknown:
            raise ValueError(f"unknown axioms: {sorted(unknown)}")
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


@dataclass(frozen=True)
class SearchReport:
    """Exact accounting of a completed enumeration.

    candidates_scanned equals the full (constraint-reduced) candidate
    space: early abort decides candidates in bulk, it never leaves any
    undecided. All counts refer to the unpruned space even when
    category-symmetry pruning did the exploring.
    """

    spec: SearchSpec
    constraint: str
    space_size: int
    candidates_scanned: int
    valid_count: int
    axiom_counts: dict[str, int]
    cafs: tuple[IndependentCaf, ...]
    census: dict[tuple[int, tuple[int, ...]], Optional[IndependentCaf]]
    digest: str
    elapsed_ms: float

    @property
    def emitted_count(self) -> int:
        return len(self.cafs)


def constant_codes(params: Params) -> list[int]:
    """Encodings of the constant vectors (p,...,p), one per category."""
    return [encode_vector((p,) * params.n, params.rho) for p in range(params.rho)]


def _fixed_entries(params: Params, constraint: str) -> dict[int, int]:
    if constraint == CONSTRAINT_NONE:
        return {}
    if constraint == CONSTRAINT_UNANIMOUS:
        return {code: p for p, code in enumerate(constant_codes(params))}
    raise ValueError(f"unknown constraint {constraint!r}")


def _table_stream(params: Params, fixed: dict[int, int]) -> Iterator[tuple[int, ...]]:
    # Lexicographic in the full table encoding; fixed positions are constant.
    size = params.vector_count
    free = [c for c in range(size) if c not in fixed]
    base = [fixed.get(c, 0) for c in range(size)]
    for combo in itertools.product(range(params.rho), repeat=len(free)):
        t = base[:]
        for pos, v in zip(free, combo):
            t[pos] = v
        yield tuple(t)


def elementary_count(params: Params, constraint: str = CONSTRAINT_NONE) -> int:
    fixed = _fixed_entries(params, constraint)
    return params.rho ** (params.vector_count - len(fixed))


def enumerate_elementary_cafs(
    params: Params,
    constraint: str = CONSTRAINT_NONE,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> Iterator[ElementaryCaf]:
    """All elementary tables under the constraint, lexicographic in the
    table encoding."""
    params.check_table_budget()
    total = elementary_count(params, constraint)
    if total > budget:
        raise BudgetExceededError(total, budget, what="elementary tables")
    for tab in _table_stream(params, _fixed_entries(params, constraint)):
        yield ElementaryCaf(params, tab)


def find_witness_vector(
    caf: IndependentCaf, object_index: int, target: int
) -> CategoryVector:
    """Smallest category vector the object's table sends to the target."""
    params = caf.params
    if not (0 <= object_index < params.m):
        raise IndexError(f"object index {object_index} outside [0, {params.m})")
    if not (0 <= target < params.rho):
        raise BadCategoryError(f"category {target} outside [0, {params.rho})")
    for code, out in enumerate(caf.tables[object_index].table):
        if out == target:
            return CategoryVector.decode(code, params.n, params.rho)
    raise NoWitnessError(
        f"object {object_index} never aggregates to category {target}"
    )


def estimate_search_space(spec: SearchSpec) -> int:
    """Exact candidate count before validity filtering, with constraint
    reductions implied by the required axioms applied."""
    params = spec.params
    if UNANIMITY in spec.required_axioms:
        return elementary_count(params, CONSTRAINT_UNANIMOUS) ** params.m
    if GENERALIZED_UNANIMITY in spec.required_axioms:
        # one unanimity-like run per permutation of the constants
        return (
            math.factorial(params.rho)
            * elementary_count(params, CONSTRAINT_UNANIMOUS) ** params.m
        )
    return elementary_count(params, CONSTRAINT_NONE) ** params.m


# ---------------------------------------------------------------------------
# Engine


class _Context:
    """Precomputed arrays for one (params, fixed-entries) table stream."""

    def __init__(self, params: Params, fixed: dict[int, int]):
        self.params = params
        self.fixed = fixed
        n, m, rho = params.n, params.m, params.rho
        size = params.vector_count
        if rho > 8:
            raise BudgetExceededError(rho, 8, what="categories (bitmask width)")

        self.tabs: list[tuple[int, ...]] = list(_table_stream(params, fixed))
        self.tab_index = {t: i for i, t in enumerate(self.tabs)}
        self.E = len(self.tabs)
        tabs_np = np.array(self.tabs, dtype=np.uint8)

        classes = list(surjective_assignments(m, rho))
        profiles = list(itertools.product(range(len(classes)), repeat=n))
        self.P = len(profiles)
        colenc = np.empty((self.P, m), dtype=np.int64)
        for pid, rows in enumerate(profiles):
            for x in range(m):
                code = 0
                for r in rows:
                    code = code * rho + classes[r][x]
                colenc[pid, x] = code
        self.colenc = colenc

        bit = (np.uint8(1) << np.arange(rho, dtype=np.uint8))
        self.full_mask = np.uint8((1 << rho) - 1)
        # stage_bits[x][t, pid]: bit of table t's output on profile pid at object x
        self.stage_bits = [bit[tabs_np[:, colenc[:, x]]] for x in range(m)]

        self.popcnt = np.array([bin(v).count("1") for v in range(256)], dtype=np.uint8)
        self.bit_to_cat = {1 << q: q for q in range(rho)}

        # profile orderings grouped by the columns of objects j..m-1
        self.suffix_order: dict[int, np.ndarray] = {}
        self.suffix_starts: dict[int, np.ndarray] = {}
        for j in range(1, m - 1):
            keys = [tuple(colenc[pid, j:]) for pid in range(self.P)]
            order = np.array(sorted(range(self.P), key=keys.__getitem__), dtype=np.int64)
            starts = [0]
            for i in range(1, self.P):
                if keys[order[i]] != keys[order[i - 1]]:
                    starts.append(i)
            self.suffix_order[j] = order
            self.suffix_starts[j] = np.array(starts, dtype=np.int64)

        last = colenc[:, m - 1]
        self.last_order = np.argsort(last, kind="stable")
        sorted_last = last[self.last_order]
        starts = [0] + [i for i in range(1, self.P) if sorted_last[i] != sorted_last[i - 1]]
        assert len(starts) == size, "every column occurs at the last object"
        self.last_starts = np.array(starts, dtype=np.int64)

        self.allowed_base = [
            (fixed[k],) if k in fixed else tuple(range(rho)) for k in range(size)
        ]

    def table_flags(self) -> tuple[list[bool], list[tuple[int, ...]]]:
        """Per-table surjectivity and constant-vector signature."""
        rho = self.params.rho
        consts = constant_codes(self.params)
        surj = [set(t) == set(range(rho)) for t in self.tabs]
        sig = [tuple(t[c] for c in consts) for t in self.tabs]
        return surj, sig

    def dictator_tables(self) -> dict[int, tuple[int, tuple[int, ...]]]:
        """Stream index of each essential-dictatorship table -> (d, pi image)."""
        params = self.params
        out: dict[int, tuple[int, tuple[int, ...]]] = {}
        for d in range(params.n):
            proj = [
                decode_vector(code, params.n, params.rho)[d]
                for code in range(params.vector_count)
            ]
            for pi in all_permutations(params.rho):
                expected = tuple(pi.image[v] for v in proj)
                idx = self.tab_index.get(expected)
                if idx is not None:
                    out[idx] = (d, pi.image)
        return out

    def relabel_index_maps(self) -> list[list[int]]:
        """For each non-identity category permutation, the table-index map
        of conjugation (relabel inputs and outputs)."""
        params = self.params
        n, rho = params.n, params.rho
        size = params.vector_count
        maps = []
        for sigma in itertools.permutations(range(rho)):
            if sigma == tuple(range(rho)):
                continue
            inv = [0] * rho
            for p, q in enumerate(sigma):
                inv[q] = p
            in_perm = [
                encode_vector([inv[v] for v in decode_vector(code, n, rho)], rho)
                for code in range(size)
            ]
            idx_map = []
            for t in self.tabs:
                relabeled = tuple(sigma[t[in_perm[c]]] for c in range(size))
                idx_map.append(self.tab_index[relabeled])
            maps.append(idx_map)
        return maps


def _scan(ctx: _Context, first_indices: Sequence[int]) -> list[tuple[int, ...]]:
    """All valid candidate tuples whose first table index is in
    first_indices, in lexicographic index order."""
    params = ctx.params
    m = params.m
    out: list[tuple[int, ...]] = []
    zero = np.zeros(ctx.P, dtype=np.uint8)

    def pruned(depth: int, covered: np.ndarray) -> bool:
        # depth tables chosen; profiles sharing columns depth..m-1 need at
        # most m-depth more categories between them
        missing = ctx.full_mask & ~covered
        groups = np.bitwise_or.reduceat(
            missing[ctx.suffix_order[depth]], ctx.suffix_starts[depth]
        )
        return bool((ctx.popcnt[groups] > m - depth).any())

    def finish(chosen: tuple[int, ...], covered: np.ndarray, rows: Sequence[int]) -> None:
        # vectorize over the next-to-last object, then force the last table
        bits = ctx.stage_bits[m - 2][rows]
        cov = covered[None, :] | bits
        missing = ctx.full_mask & ~cov
        union = np.bitwise_or.reduceat(missing[:, ctx.last_order], ctx.last_starts, axis=1)
        alive = ~(ctx.popcnt[union] >= 2).any(axis=1)
        for bi in np.nonzero(alive)[0]:
            urow = union[bi]
            choices = []
            dead = False
            for k, base in enumerate(ctx.allowed_base):
                u = int(urow[k])
                if u == 0:
                    choices.append(base)
                else:
                    q = ctx.bit_to_cat[u]
                    if q not in base:
                        dead = True
                        break
                    choices.append((q,))
            if dead:
                continue
            prefix = chosen + (int(rows[bi]),)
            for combo in itertools.product(*choices):
                out.append(prefix + (ctx.tab_index[combo],))

    def walk(depth: int, covered: np.ndarray, chosen: tuple[int, ...]) -> None:
        if depth == m - 2:
            rows = first_indices if depth == 0 else range(ctx.E)
            finish(chosen, covered, list(rows))
            return
        rng = first_indices if depth == 0 else range(ctx.E)
        for t in rng:
            cov = covered | ctx.stage_bits[depth][t]
            if depth + 1 <= m - 2 and pruned(depth + 1, cov):
                continue
            walk(depth + 1, cov, chosen + (t,))

    walk(0, zero, ())
    return out


def _scan_chunk(
    params: Params, fixed_items: tuple[tuple[int, int], ...], first: tuple[int, ...]
) -> list[tuple[int, ...]]:
    # process-pool entry point; rebuilds the context per worker
    ctx = _Context(params, dict(fixed_items))
    return _scan(ctx, list(first))


def _run_scan(
    ctx: _Context, first_indices: list[int], workers: int
) -> list[tuple[int, ...]]:
    if workers <= 1 or len(first_indices) < 2 * workers:
        return _scan(ctx, first_indices)
    chunk = math.ceil(len(first_indices) / workers)
    pieces = [
        tuple(first_indices[i : i + chunk])
        for i in range(0, len(first_indices), chunk)
    ]
    fixed_items = tuple(sorted(ctx.fixed.items()))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_scan_chunk, ctx.params, fixed_items, piece)
            for piece in pieces
        ]
        merged: list[tuple[int, ...]] = []
        for fut in futures:
            merged.extend(fut.result())
    return merged


def _digest(cafs: Sequence[IndependentCaf]) -> str:
    h = hashlib.sha256()
    for caf in cafs:
        h.update(";".join(",".join(map(str, t.table)) for t in caf.tables).encode())
        h.update(b"\n")
    return h.hexdigest()


def enumerate_independent_cafs(spec: SearchSpec) -> SearchReport:
    """Every valid independent CAF satisfying the required axioms, with an
    exact census of the essential dictatorships found."""
    t0 = time.perf_counter()
    params = spec.params
    required = spec.required_axioms
    params.check_table_budget()

    space = estimate_search_space(spec)
    effective = space // math.factorial(params.rho) if spec.prune_category_symmetry else space
    if effective > spec.budget:
        raise BudgetExceededError(space, spec.budget, what="candidates")

    if UNANIMITY in required:
        constraint = CONSTRAINT_UNANIMOUS
        runs: list[dict[int, int]] = [_fixed_entries(params, CONSTRAINT_UNANIMOUS)]
    elif GENERALIZED_UNANIMITY in required:
        if spec.prune_category_symmetry:
            raise PreconditionError(
                "category-symmetry pruning is incompatible with the "
                "generalized-unanimity constraint runs"
            )
        constraint = CONSTRAINT_UNANIMOUS
        consts = constant_codes(params)
        runs = [
            {code: pi.image[p] for p, code in enumerate(consts)}
            for pi in all_permutations(params.rho)
        ]
    else:
        constraint = CONSTRAINT_NONE
        runs = [_fixed_entries(params, CONSTRAINT_NONE)]

    valid_count = 0
    axiom_counts = {
        UNANIMITY: 0,
        CITIZEN_SOVEREIGNTY: 0,
        GENERALIZED_UNANIMITY: 0,
        "essential-dictatorship": 0,
    }
    emitted: list[IndependentCaf] = []
    census: dict[tuple[int, tuple[int, ...]], Optional[IndependentCaf]] = {
        (d, pi.image): None
        for d in range(params.n)
        for pi in all_permutations(params.rho)
    }
    identity = tuple(range(params.rho))

    for fixed in runs:
        ctx = _Context(params, fixed)
        surj, sig = ctx.table_flags()
        ed_tables = ctx.dictator_tables()

        first = list(range(ctx.E))
        rel_maps: list[list[int]] = []
        if spec.prune_category_symmetry:
            rel_maps = ctx.relabel_index_maps()
            first = [t for t in first if all(rm[t] >= t for rm in rel_maps)]

        found = _run_scan(ctx, first, spec.workers)

        if spec.prune_category_symmetry:
            expanded: list[tuple[int, ...]] = []
            for tup in found:
                orbit = {tup}
                canonical = True
                for rm in rel_maps:
                    other = tuple(rm[t] for t in tup)
                    if other < tup:
                        canonical = False
                        break
                    orbit.add(other)
                if canonical:
                    expanded.extend(orbit)
            found = sorted(expanded)

        for tup in found:
            valid_count += 1
            is_unan = all(sig[t] == identity for t in tup)
            is_cs = all(surj[t] for t in tup)
            sigs = {sig[t] for t in tup}
            is_gu = len(sigs) == 1 and sorted(next(iter(sigs))) == list(range(params.rho))
            ed = ed_tables.get(tup[0]) if len(set(tup)) == 1 else None
            if is_unan:
                axiom_counts[UNANIMITY] += 1
            if is_cs:
                axiom_counts[CITIZEN_SOVEREIGNTY] += 1
            if is_gu:
                axiom_counts[GENERALIZED_UNANIMITY] += 1
            if ed is not None:
                axiom_counts["essential-dictatorship"] += 1

            if UNANIMITY in required and not is_unan:
                continue
            if CITIZEN_SOVEREIGNTY in required and not is_cs:
                continue
            if GENERALIZED_UNANIMITY in required and not is_gu:
                continue
            caf = IndependentCaf(
                params, tuple(ElementaryCaf(params, ctx.tabs[t]) for t in tup)
            )
            emitted.append(caf)
            if ed is not None and census.get(ed) is None:
                census[ed] = caf

    if len(runs) > 1:
        emitted.sort(key=lambda caf: caf.encodings())

    return SearchReport(
        spec=spec,
        constraint=constraint,
        space_size=space,
        candidates_scanned=space,
        valid_count=valid_count,
        axiom_counts=axiom_counts,
        cafs=tuple(emitted),
        census=census,
        digest=_digest(emitted),
        elapsed_ms=(time.perf_counter() - t0) * 1000.0,
    )

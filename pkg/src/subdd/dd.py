"""The double description method over an integer inequality matrix.

A DDState pairs the processed rows of a matrix with the extremal rays of the cone they
cut out. Incidence is kept as a boolean ray-by-processed-row matrix and exposed packed
into 64-bit words in both directions: one string per ray (its tight rows) and one string
per processed row (the rays tight on it).
"""

import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import StrEnum
from functools import cached_property

import numpy as np

from .cone import ConeSpec, zero_block_rows
from .errors import OverflowDetectedError, SubddError
from .linalg import INT64_MAX, RowSpace, int_matrix, inverse_columns, make_primitive, rank
from .logger import debug
from .orders import InsertionOrder, cstar_prefix, dynamic_next

WORD_BITS = 64
# witness search: rays in the first block, then cells (candidate x ray) per block
FIRST_WITNESS_BLOCK = 64
WITNESS_CELLS = 1 << 20


class AdjacencyTest(StrEnum):
    HALFGRAPH = "halfgraph"
    COMBINATORIAL = "combinatorial"
    ALGEBRAIC = "algebraic"


class IntegerBackend(StrEnum):
    EXACT = "exact"
    INT64 = "int64"


def pack_bits(bools: np.ndarray) -> np.ndarray:
    """Pack the last axis into little-endian uint64 words (bit k of word w is item 64w+k)."""
    bools = np.asarray(bools, dtype=bool)
    nbits = bools.shape[-1]
    nwords = max(1, -(-nbits // WORD_BITS))
    padded = np.zeros(bools.shape[:-1] + (nwords * WORD_BITS,), dtype=bool)
    padded[..., :nbits] = bools
    packed = np.packbits(padded, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8")


def bit_is_set(words: np.ndarray, index: int) -> bool:
    return bool(int(words[index // WORD_BITS]) >> (index % WORD_BITS) & 1)


def clear_bit(words: np.ndarray, index: int) -> None:
    words[index // WORD_BITS] &= ~np.uint64(1 << (index % WORD_BITS))


def popcount(words: np.ndarray) -> np.ndarray:
    """Set bits per row of a packed array (sums the last axis)."""
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)


@dataclass
class AdjacencyCounters:
    """Instrumentation for the adjacency tests."""

    pairs: int = 0
    prechecks_failed: int = 0
    adjacent: int = 0
    cache_builds: int = 0
    rows_anded: int = 0

    def merge(self, other: "AdjacencyCounters") -> None:
        self.pairs += other.pairs
        self.prechecks_failed += other.prechecks_failed
        self.adjacent += other.adjacent
        self.cache_builds += other.cache_builds
        self.rows_anded += other.rows_anded


@dataclass(eq=False)
class DDState:
    """Processed rows of `matrix` and the extremal rays of the cone they define."""

    matrix: np.ndarray
    processed: tuple[int, ...]
    rays: np.ndarray
    zero: np.ndarray  # zero[r, k] <=> matrix[processed[k]] @ rays[r] == 0

    @classmethod
    def from_rays(
        cls, matrix: np.ndarray, processed: Sequence[int], rays: np.ndarray
    ) -> "DDState":
        """Build a state from rays alone, computing incidence by exact dot products."""
        rays = rays if isinstance(rays, np.ndarray) else int_matrix(rays, matrix.shape[1])
        processed = tuple(int(r) for r in processed)
        if rays.shape[0] == 0:
            zero = np.zeros((0, len(processed)), dtype=bool)
        else:
            zero = (matrix[list(processed)] @ rays.T == 0).T
        rays, zero = sort_rays(rays, zero)
        return cls(matrix, processed, rays, np.ascontiguousarray(zero))

    @property
    def dimension(self) -> int:
        return self.matrix.shape[1]

    @property
    def size(self) -> int:
        return self.rays.shape[0]

    @cached_property
    def column_strings(self) -> np.ndarray:
        """One packed string per ray: its tight processed rows."""
        return pack_bits(self.zero)

    @cached_property
    def row_strings(self) -> np.ndarray:
        """One packed string per processed row: the rays tight on it."""
        return pack_bits(self.zero.T)

    @cached_property
    def all_rays(self) -> np.ndarray:
        return pack_bits(np.ones(self.size, dtype=bool))

    def weights(self) -> np.ndarray:
        return self.zero.sum(axis=1)

    def row_values(self, row: int) -> np.ndarray:
        return self.rays @ self.matrix[row]

    def common_rows(self, p: int, q: int) -> np.ndarray:
        """Local indices of processed rows tight at both rays."""
        return np.flatnonzero(self.zero[p] & self.zero[q])


def sort_rays(rays: np.ndarray, zero: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sort by coordinate tuple and drop duplicate rays."""
    count = rays.shape[0]
    if count == 0:
        return rays, zero
    if rays.dtype == object:
        order = np.array(sorted(range(count), key=lambda i: tuple(rays[i])), dtype=np.intp)
    else:
        order = np.lexsort(rays.T[::-1])
    rays = rays[order]
    zero = zero[order]
    duplicate = np.zeros(count, dtype=bool)
    duplicate[1:] = np.all(rays[1:] == rays[:-1], axis=1)
    if duplicate.any():
        rays = rays[~duplicate]
        zero = zero[~duplicate]
    return rays, zero


def _matrix_of(source: ConeSpec | np.ndarray) -> np.ndarray:
    return source.matrix if isinstance(source, ConeSpec) else np.asarray(source)


def select_initial_rows(
    matrix: np.ndarray, order: Sequence[int]
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """First d linearly independent rows of the order, and the dependent rows skipped."""
    d = matrix.shape[1]
    space = RowSpace(d)
    chosen: list[int] = []
    skipped: list[int] = []
    for row in order:
        if space.add(matrix[row]):
            chosen.append(int(row))
            if len(chosen) == d:
                return tuple(chosen), tuple(skipped)
        else:
            skipped.append(int(row))
    raise ValueError(f"order exhausted at rank {len(chosen)} before reaching rank {d}")


def initial_dd_pair(source: ConeSpec | np.ndarray, order: Sequence[int]) -> DDState:
    """Simplicial starting cone: the columns of the inverse of the first d independent rows."""
    matrix = _matrix_of(source)
    rows, _ = select_initial_rows(matrix, order)
    basis = matrix[list(rows)]
    rays = inverse_columns(basis).T
    zero = ~np.eye(len(rows), dtype=bool)
    rays, zero = sort_rays(rays, zero)
    return DDState(matrix, rows, rays, zero)


def split_rays(state: DDState, row: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Indices of rays with a.r > 0, a.r = 0 and a.r < 0."""
    values = state.row_values(row)
    return (
        np.flatnonzero(values > 0),
        np.flatnonzero(values == 0),
        np.flatnonzero(values < 0),
    )


def conic_intersection(r1: np.ndarray, r2: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Primitive ray (a.r1) r2 - (a.r2) r1 on the hyperplane a.x = 0."""
    v1 = int(np.dot(a, r1))
    v2 = int(np.dot(a, r2))
    if not v1 > 0 > v2:
        raise ValueError("conic_intersection needs a.r1 > 0 > a.r2")
    combined = [v1 * int(y) - v2 * int(x) for x, y in zip(r1, r2)]
    return make_primitive(int_matrix([combined]))[0]


def algebraic_adjacent(state: DDState, p: int, q: int) -> bool:
    """Adjacent iff the rows tight at both rays have rank d - 2."""
    common = state.common_rows(p, q)
    target = state.dimension - 2
    if len(common) < target:
        return False
    rows = [state.processed[k] for k in common]
    return rank(state.matrix[rows]) == target


def combinatorial_adjacent(
    state: DDState, p: int, q: int, counters: AdjacencyCounters | None = None
) -> bool:
    """No third ray is tight on every row common to p and q."""
    common_words = state.column_strings[p] & state.column_strings[q]
    if int(popcount(common_words)) < state.dimension - 2:
        if counters:
            counters.prechecks_failed += 1
        return False
    b = state.all_rays.copy()
    clear_bit(b, p)
    clear_bit(b, q)
    row_strings = state.row_strings
    for k in state.common_rows(p, q):
        b &= row_strings[k]
        if counters:
            counters.rows_anded += 1
        if not b.any():
            return True
    return not b.any()


def halfgraph_candidates(state: DDState, p: int) -> np.ndarray:
    """Boolean mask of rays sharing at least d-2 tight rows with p (p itself excluded)."""
    cols = state.column_strings
    counts = popcount(cols & cols[p])
    mask = counts >= state.dimension - 2
    mask[p] = False
    return mask


class GraphTestCache:
    """Packed candidate string for the current positive ray; rebuilt when the ray changes."""

    def __init__(self):
        self.ray: int | None = None
        self.words: np.ndarray | None = None
        self.builds = 0

    def get(self, state: DDState, p: int) -> np.ndarray:
        if self.ray != p or self.words is None:
            self.words = pack_bits(halfgraph_candidates(state, p))
            self.ray = p
            self.builds += 1
        return self.words


def halfgraph_adjacent(
    state: DDState,
    p: int,
    q: int,
    cache: GraphTestCache,
    counters: AdjacencyCounters | None = None,
) -> bool:
    """Combinatorial test seeded with the cached candidate string of p.

    Words are processed one at a time and each word stops being ANDed once it is zero;
    a word that survives every common row names a third ray and ends the test.
    """
    builds_before = cache.builds
    g = cache.get(state, p)
    if counters and cache.builds != builds_before:
        counters.cache_builds += 1
    if not bit_is_set(g, q):
        if counters:
            counters.prechecks_failed += 1
        return False
    b = g.copy()
    clear_bit(b, q)
    common = state.common_rows(p, q)
    strings = state.row_strings
    for w in range(b.shape[0]):
        chunk = int(b[w])
        if chunk == 0:
            continue
        for k in common:
            chunk &= int(strings[k, w])
            if counters:
                counters.rows_anded += 1
            if chunk == 0:
                break
        else:
            return False
    return True


def _adjacent_batch(
    state: DDState, p: int, others: np.ndarray, counters: AdjacencyCounters
) -> np.ndarray:
    """Vectorized halfgraph test of one ray against many rays on the other side of the cut.

    A third ray containing the common zero set Z of (p, q) shares at least |Z| zeros
    with p, so the witness pool is the halfgraph of p sorted by shared count, largest
    first. Witnesses are searched block by block; a candidate leaves the search as soon
    as one is found, and the scan stops once the pool's shared count drops below the
    smallest |Z| still alive. Only candidates with no witness are adjacent.
    """
    counters.pairs += len(others)
    cols = state.column_strings
    shared = popcount(cols & cols[p])
    shared[p] = -1
    threshold = state.dimension - 2
    counters.cache_builds += 1
    candidates = others[shared[others] >= threshold]
    counters.prechecks_failed += len(others) - len(candidates)
    if candidates.size == 0:
        return candidates

    pool = np.flatnonzero(shared >= threshold)
    pool = pool[np.argsort(-shared[pool], kind="stable")]
    pool_shared = shared[pool]
    not_pool = ~cols[pool]
    common = cols[candidates] & cols[p]
    sizes = shared[candidates]
    alive = np.ones(len(candidates), dtype=bool)

    start = 0
    block = FIRST_WITNESS_BLOCK
    while start < len(pool):
        idx = np.flatnonzero(alive)
        if idx.size == 0 or pool_shared[start] < sizes[idx].min():
            break
        stop = min(len(pool), start + max(block, 1))
        witness = np.ones((idx.size, stop - start), dtype=bool)
        for w in range(cols.shape[1]):
            witness &= (common[idx, w][:, None] & not_pool[start:stop, w][None, :]) == 0
        witness &= pool[None, start:stop] != candidates[idx][:, None]
        alive[idx[witness.any(axis=1)]] = False
        start = stop
        block = max(FIRST_WITNESS_BLOCK, WITNESS_CELLS // max(1, int(alive.sum())))

    counters.adjacent += int(alive.sum())
    return candidates[alive]


def _adjacent_pairwise(
    state: DDState,
    p: int,
    others: np.ndarray,
    test: AdjacencyTest,
    counters: AdjacencyCounters,
) -> np.ndarray:
    counters.pairs += len(others)
    if test == AdjacencyTest.ALGEBRAIC:
        hits = [q for q in others if algebraic_adjacent(state, p, int(q))]
    elif test == AdjacencyTest.COMBINATORIAL:
        hits = [q for q in others if combinatorial_adjacent(state, p, int(q), counters)]
    else:
        cache = GraphTestCache()
        hits = [q for q in others if halfgraph_adjacent(state, p, int(q), cache, counters)]
    counters.adjacent += len(hits)
    return np.array(hits, dtype=np.intp)


def adjacent_pairs(
    state: DDState,
    positives: np.ndarray,
    negatives: np.ndarray,
    test: AdjacencyTest = AdjacencyTest.HALFGRAPH,
    threads: int = 1,
    counters: AdjacencyCounters | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """All adjacent (positive, negative) pairs, sorted by positive ray then negative ray.

    Adjacency is symmetric, so the search runs over the smaller side.
    """
    # build the packed strings before any worker reads them
    _ = state.column_strings, state.row_strings, state.all_rays
    test = AdjacencyTest(test)
    swap = len(negatives) < len(positives)
    outer, inner = (negatives, positives) if swap else (positives, negatives)

    def work(chunk: np.ndarray):
        local = AdjacencyCounters()
        ps, qs = [], []
        for p in chunk:
            if test == AdjacencyTest.HALFGRAPH:
                hits = _adjacent_batch(state, int(p), inner, local)
            else:
                hits = _adjacent_pairwise(state, int(p), inner, test, local)
            ps.append(np.full(len(hits), p, dtype=np.intp))
            qs.append(hits.astype(np.intp))
        return ps, qs, local

    if threads > 1 and len(outer) > threads:
        chunks = np.array_split(outer, threads * 4)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, chunks))
    else:
        results = [work(outer)]

    all_p: list[np.ndarray] = [np.zeros(0, dtype=np.intp)]
    all_q: list[np.ndarray] = [np.zeros(0, dtype=np.intp)]
    for ps, qs, local in results:
        all_p.extend(ps)
        all_q.extend(qs)
        if counters is not None:
            counters.merge(local)
    ps, qs = np.concatenate(all_p), np.concatenate(all_q)
    if swap:
        ps, qs = qs, ps
    order = np.lexsort((qs, ps))
    return ps[order], qs[order]


def _ensure_capacity(
    rays: np.ndarray, row: np.ndarray, backend: IntegerBackend, factor: int = 1
) -> np.ndarray:
    """Switch to Python integers (or fail) before a step could leave the int64 range.

    `factor` bounds any further product taken with the new rays (a row norm).
    """
    if rays.dtype == object or rays.shape[0] == 0:
        return rays
    largest = int(np.abs(rays).max())
    norm = int(np.abs(row).sum())
    if 2 * norm * largest * largest * max(1, factor) <= INT64_MAX:
        return rays
    if backend == IntegerBackend.INT64:
        raise OverflowDetectedError(
            f"ray coordinates up to {largest} would overflow int64 in the next step"
        )
    debug.print("[DD] switching rays to arbitrary precision integers")
    return rays.astype(object)


def dd_step(
    state: DDState,
    row: int,
    *,
    adjacency_test: AdjacencyTest | str = AdjacencyTest.HALFGRAPH,
    threads: int = 1,
    integer_backend: IntegerBackend | str = IntegerBackend.EXACT,
    counters: AdjacencyCounters | None = None,
) -> DDState:
    """Insert one row: keep rays with a.r >= 0 and add one ray per adjacent +/- pair."""
    a = state.matrix[row]
    rays = _ensure_capacity(state.rays, a, IntegerBackend(integer_backend))
    if rays is not state.rays:
        state = DDState(state.matrix, state.processed, rays, state.zero)
    values = state.row_values(row)
    positives = np.flatnonzero(values > 0)
    negatives = np.flatnonzero(values < 0)
    keep = np.flatnonzero(values >= 0)

    kept_rays = rays[keep]
    kept_zero = np.column_stack([state.zero[keep], values[keep] == 0])

    if positives.size and negatives.size:
        ps, qs = adjacent_pairs(state, positives, negatives, adjacency_test, threads, counters)
    else:
        ps = qs = np.zeros(0, dtype=np.intp)

    if ps.size:
        vp = values[ps][:, None]
        vq = values[qs][:, None]
        new_rays = make_primitive(vp * rays[qs] - vq * rays[ps])
        new_zero = np.column_stack(
            [state.zero[ps] & state.zero[qs], np.ones(ps.size, dtype=bool)]
        )
        out_rays = np.concatenate([kept_rays, new_rays])
        out_zero = np.concatenate([kept_zero, new_zero])
    else:
        out_rays, out_zero = kept_rays, kept_zero

    out_rays, out_zero = sort_rays(out_rays, out_zero)
    return DDState(
        state.matrix, state.processed + (int(row),), out_rays, np.ascontiguousarray(out_zero)
    )


def check_incidence(state: DDState, rate: float, rng: np.random.Generator) -> int:
    """Recheck a random sample of rays by exact dot products; returns the mismatch count."""
    if state.size == 0 or rate <= 0:
        return 0
    count = min(state.size, max(1, math.ceil(rate * state.size)))
    sample = np.sort(rng.choice(state.size, size=count, replace=False))
    values = (state.matrix[list(state.processed)] @ state.rays[sample].T).T
    bad = (values == 0) != state.zero[sample]
    bad |= values < 0
    return int(np.count_nonzero(bad.any(axis=1)))


@dataclass
class DDOptions:
    stop_after: int | None = None
    emit_intermediate_sizes: bool = True
    adjacency_test: AdjacencyTest | str = AdjacencyTest.HALFGRAPH
    max_rays: int | None = None
    threads: int = 1
    integer_backend: IntegerBackend | str = IntegerBackend.EXACT
    incidence_check_rate: float = 0.0
    seed: int = 0
    progress_callback: Callable[[int, int, int], None] | None = None


@dataclass
class DDResult:
    state: DDState
    trajectory: list[tuple[int, int]] = field(default_factory=list)
    complete: bool = False
    budget_exhausted: bool = False
    skipped: tuple[int, ...] = ()
    counters: AdjacencyCounters = field(default_factory=AdjacencyCounters)

    @property
    def rays(self) -> np.ndarray:
        return self.state.rays

    @property
    def order(self) -> tuple[int, ...]:
        return self.state.processed


def run_dd(
    source: ConeSpec | np.ndarray,
    order: InsertionOrder | Sequence[int] | None = None,
    options: DDOptions | None = None,
) -> DDResult:
    """Run the method over the rows named by `order` (all rows in index order by default).

    A plain row sequence may name a subset of the rows; the cone is then the one those rows
    define. Stops early at `stop_after` processed rows or when `max_rays` is exceeded.
    """
    matrix = _matrix_of(source)
    options = options or DDOptions()
    dynamic = None
    if order is None:
        rows = tuple(range(matrix.shape[0]))
    elif isinstance(order, InsertionOrder):
        if order.is_dynamic:
            dynamic = order.kind
            rows = tuple(sorted(order.rows)) if order.rows is not None else tuple(
                range(matrix.shape[0])
            )
        else:
            rows = order.rows
    else:
        rows = tuple(int(r) for r in order)

    initial, skipped = select_initial_rows(matrix, rows)
    state = initial_dd_pair(matrix, initial)
    chosen = set(initial)
    remaining = [r for r in rows if r not in chosen]
    result = DDResult(state=state, skipped=skipped)
    if options.emit_intermediate_sizes:
        result.trajectory.append((len(state.processed), state.size))
    rng = np.random.default_rng(options.seed)

    while remaining:
        if options.stop_after is not None and len(state.processed) >= options.stop_after:
            break
        if options.max_rays and state.size > options.max_rays:
            result.budget_exhausted = True
            break
        if dynamic is not None:
            row = dynamic_next(state, remaining, dynamic)
            remaining.remove(row)
        else:
            row = remaining.pop(0)
        state = dd_step(
            state,
            row,
            adjacency_test=options.adjacency_test,
            threads=options.threads,
            integer_backend=options.integer_backend,
            counters=result.counters,
        )
        if options.incidence_check_rate:
            mismatches = check_incidence(state, options.incidence_check_rate, rng)
            if mismatches:
                raise SubddError(
                    f"incidence check failed for {mismatches} rays after row {row}"
                )
        if options.emit_intermediate_sizes:
            result.trajectory.append((len(state.processed), state.size))
        if options.progress_callback:
            options.progress_callback(len(state.processed), state.size, row)

    if options.max_rays and state.size > options.max_rays:
        result.budget_exhausted = True
    result.state = state
    result.complete = not remaining and not result.budget_exhausted
    return result


def is_cstar_state(state: DDState, spec: ConeSpec) -> bool:
    """True when the processed rows are exactly those of the C* prefix of the recursive order."""
    return state.matrix is spec.matrix and set(state.processed) == set(cstar_prefix(spec))


def harvest_step(
    state: DDState,
    row: int,
    spec: ConeSpec,
    *,
    adjacency_test: AdjacencyTest | str = AdjacencyTest.HALFGRAPH,
    integer_backend: IntegerBackend | str = IntegerBackend.EXACT,
    counters: AdjacencyCounters | None = None,
) -> np.ndarray:
    """Rays of the full cone found while cutting an intermediate cone with `row`.

    Each candidate pair is kept only if the new ray is nonnegative and satisfies every row
    of the full matrix; only then is adjacency tested. Cutting C* by a (0,j|K) row needs
    neither the precheck nor the test, since every +/- pair is adjacent there.
    """
    counters = counters if counters is not None else AdjacencyCounters()
    test = AdjacencyTest(adjacency_test)
    skip_tests = is_cstar_state(state, spec) and row in set(zero_block_rows(spec))
    check_norm = int(np.abs(spec.matrix).sum(axis=1).max())
    rays = _ensure_capacity(
        state.rays, state.matrix[row], IntegerBackend(integer_backend), check_norm
    )
    if rays is not state.rays:
        state = DDState(state.matrix, state.processed, rays, state.zero)
    values = state.row_values(row)
    positives = np.flatnonzero(values > 0)
    negatives = np.flatnonzero(values < 0)
    found: list[np.ndarray] = []
    cache = GraphTestCache()
    for p in positives:
        p = int(p)
        if skip_tests:
            candidates = negatives
        else:
            mask = halfgraph_candidates(state, p)
            candidates = negatives[mask[negatives]]
            counters.cache_builds += 1
            counters.prechecks_failed += len(negatives) - len(candidates)
        if candidates.size == 0:
            continue
        counters.pairs += len(candidates)
        produced = values[p] * rays[candidates] - values[candidates][:, None] * rays[p]
        ok = np.all(produced >= 0, axis=1)
        ok &= np.all(spec.matrix @ produced.T >= 0, axis=0)
        if not skip_tests:
            for idx in np.flatnonzero(ok):
                q = int(candidates[idx])
                if test == AdjacencyTest.ALGEBRAIC:
                    ok[idx] = algebraic_adjacent(state, p, q)
                elif test == AdjacencyTest.COMBINATORIAL:
                    ok[idx] = combinatorial_adjacent(state, p, q, counters)
                else:
                    ok[idx] = halfgraph_adjacent(state, p, q, cache, counters)
        if ok.any():
            counters.adjacent += int(ok.sum())
            found.append(make_primitive(produced[ok]))
    if not found:
        return np.zeros((0, state.dimension), dtype=rays.dtype)
    harvested = np.concatenate(found)
    harvested, _ = sort_rays(harvested, np.zeros((harvested.shape[0], 0), dtype=bool))
    return harvested


def harvest(
    state: DDState,
    rows: Sequence[int],
    spec: ConeSpec,
    *,
    adjacency_test: AdjacencyTest | str = AdjacencyTest.HALFGRAPH,
    integer_backend: IntegerBackend | str = IntegerBackend.EXACT,
) -> np.ndarray:
    """harvest_step over several candidate next rows; the union, deduplicated."""
    parts = [
        harvest_step(
            state, r, spec, adjacency_test=adjacency_test, integer_backend=integer_backend
        )
        for r in rows
    ]
    parts = [p for p in parts if p.shape[0]]
    if not parts:
        return np.zeros((0, state.dimension), dtype=np.int64)
    merged = np.concatenate(parts)
    merged, _ = sort_rays(merged, np.zeros((merged.shape[0], 0), dtype=bool))
    return merged

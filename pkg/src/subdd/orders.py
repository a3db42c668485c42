"""Row insertion orders for the double description method."""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import StrEnum
from functools import cache

import numpy as np

from .cone import ConeSpec, ElementaryTriplet, cstar_rows, elements_mask, mask_elements
from .linalg import RowSpace


class OrderKind(StrEnum):
    LEXMIN = "lexmin"
    TOPT = "topt"
    RECURSIVE = "recursive"
    MAXCUT = "maxcut"
    MINCUT = "mincut"

    @property
    def is_dynamic(self) -> bool:
        return self in (OrderKind.MAXCUT, OrderKind.MINCUT)


@dataclass(frozen=True)
class InsertionOrder:
    """A static row permutation, or a dynamic policy over an optional candidate subset."""

    kind: OrderKind
    rows: tuple[int, ...] | None = None
    seed: int | None = None

    @property
    def is_dynamic(self) -> bool:
        return self.kind.is_dynamic

    def restricted(self, subset: Iterable[int]) -> "InsertionOrder":
        keep = set(subset)
        if self.rows is None:
            return InsertionOrder(self.kind, tuple(sorted(keep)), self.seed)
        return InsertionOrder(self.kind, restrict_order(self.rows, keep), self.seed)


def size_priority(n: int) -> list[int]:
    """|K| values interleaved from both ends: 0, n-2, 1, n-3, ..."""
    lo, hi = 0, n - 2
    out = []
    while lo <= hi:
        out.append(lo)
        if hi != lo:
            out.append(hi)
        lo += 1
        hi -= 1
    return out


def topt_key(triplet: ElementaryTriplet, n: int) -> tuple:
    rank_of_size = {k: pos for pos, k in enumerate(size_priority(n))}
    return (rank_of_size[triplet.K.bit_count()], triplet.key)


def topt_order(spec: ConeSpec) -> InsertionOrder:
    """Reverse of the relation: |K| priority first, then the element sequence i j K."""
    ranked = sorted(range(spec.m), key=lambda r: topt_key(spec.triplets[r], spec.n))
    return InsertionOrder(OrderKind.TOPT, tuple(reversed(ranked)))


def rec_enumerate(K: Sequence[int]) -> list[tuple[int, ...]]:
    """K first, then for each element of K from the largest down, recurse on K minus it.

    Subsets already listed are not listed (or expanded) again.
    """
    seen: set[tuple[int, ...]] = set()
    out: list[tuple[int, ...]] = []

    def visit(subset: tuple[int, ...]):
        if subset in seen:
            return
        seen.add(subset)
        out.append(subset)
        for pos in range(len(subset) - 1, -1, -1):
            visit(subset[:pos] + subset[pos + 1 :])

    visit(tuple(sorted(K)))
    return out


def recursive_enumeration(spec: ConeSpec) -> list[int]:
    rows = []
    full = spec.full_mask
    for i in range(spec.n):
        for j in range(i + 1, spec.n):
            rest = mask_elements(full & ~(1 << i) & ~(1 << j))
            for K in rec_enumerate(rest):
                rows.append(spec.row_index(i, j, elements_mask(K)))
    return rows


def recursive_order(spec: ConeSpec) -> InsertionOrder:
    """Reverse of the enumeration: pairs lexicographic, K from rec_enumerate(X - ij)."""
    return InsertionOrder(OrderKind.RECURSIVE, tuple(reversed(recursive_enumeration(spec))))


@cache
def cstar_prefix(spec: ConeSpec) -> tuple[int, ...]:
    """Rows processed by the recursive order when it reaches C*.

    The rows outside the (0,j|K) block have rank d - (n-1), so the cone they define is
    not pointed. The recursive order lists them first and then completes the rank with
    the first n-1 block rows that are independent of them; C* is the cone of that prefix.
    """
    outside = set(cstar_rows(spec))
    order = recursive_order(spec).rows
    head = tuple(r for r in order if r in outside)
    space = RowSpace(spec.d)
    for r in head:
        space.add(spec.matrix[r])
    extra = []
    for r in order:
        if r in outside:
            continue
        if space.add(spec.matrix[r]):
            extra.append(r)
        if space.rank == spec.d:
            break
    if len(extra) != spec.n - 1:
        raise ValueError(f"expected {spec.n - 1} completing rows, found {len(extra)}")
    return head + tuple(extra)


def lexmin_order(spec: ConeSpec, shuffle_seed: int | None = None) -> InsertionOrder:
    """Rows sorted ascending by coefficient vector, optionally under a shuffled column order."""
    columns = np.arange(spec.d)
    if shuffle_seed is not None:
        columns = np.random.default_rng(shuffle_seed).permutation(spec.d)
    permuted = spec.matrix[:, columns]
    # np.lexsort takes its primary key last; it is stable, so equal rows keep index order
    ranked = np.lexsort(permuted.T[::-1])
    return InsertionOrder(OrderKind.LEXMIN, tuple(int(r) for r in ranked), shuffle_seed)


def dynamic_order(kind: OrderKind, rows: Iterable[int] | None = None) -> InsertionOrder:
    if not kind.is_dynamic:
        raise ValueError(f"{kind} is a static order")
    return InsertionOrder(kind, tuple(rows) if rows is not None else None)


def negative_counts(matrix: np.ndarray, rays: np.ndarray, rows: Sequence[int]) -> np.ndarray:
    """For each candidate row, the number of current rays it cuts off."""
    if len(rows) == 0 or rays.shape[0] == 0:
        return np.zeros(len(rows), dtype=np.int64)
    values = matrix[np.asarray(rows)] @ rays.T
    return np.count_nonzero(values < 0, axis=1)


def dynamic_next(state, remaining: Iterable[int], kind: OrderKind) -> int:
    """Row cutting off the most (maxcut) or fewest (mincut) rays; ties go to the smallest index."""
    candidates = sorted(remaining)
    if not candidates:
        raise ValueError("no remaining rows")
    counts = negative_counts(state.matrix, state.rays, candidates)
    if kind == OrderKind.MAXCUT:
        pick = int(np.argmax(counts))
    elif kind == OrderKind.MINCUT:
        pick = int(np.argmin(counts))
    else:
        raise ValueError(f"{kind} is a static order")
    return candidates[pick]


def restrict_order(rows: Sequence[int], subset: Iterable[int]) -> tuple[int, ...]:
    keep = set(subset)
    return tuple(r for r in rows if r in keep)


def omit_row(rows: Sequence[int], row: int) -> tuple[int, ...]:
    """Order for the penultimate cone that leaves out one row."""
    return tuple(r for r in rows if r != row)


def build_order(kind: OrderKind | str, spec: ConeSpec, seed: int | None = None) -> InsertionOrder:
    kind = OrderKind(kind)
    match kind:
        case OrderKind.TOPT:
            return topt_order(spec)
        case OrderKind.RECURSIVE:
            return recursive_order(spec)
        case OrderKind.LEXMIN:
            return lexmin_order(spec, seed)
        case _:
            return dynamic_order(kind)

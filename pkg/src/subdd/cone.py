"""Coordinates, elementary inequalities and known extremal functions of the cone.

Subsets of the base set {0, ..., n-1} are n-bit masks (element i is bit i). A
p-standardized function has f(empty) = 0 and f(X - i) = f(X) for every i, so it is
determined by its values on the coordinate set R = {A : A nonempty, |A| != n-1},
listed in ascending mask order. The value at X sits at mask 2^n - 1, the last coordinate.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb

import numpy as np

from .linalg import int_array

MIN_N = 3
MAX_N = 8


def _check_n(n: int) -> None:
    if not MIN_N <= n <= MAX_N:
        raise ValueError(f"base set size n={n} out of range ({MIN_N}..{MAX_N})")


def popcount(mask: int) -> int:
    return mask.bit_count()


def mask_elements(mask: int) -> tuple[int, ...]:
    """Elements of a subset mask in increasing order."""
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def elements_mask(elements: Iterable[int]) -> int:
    mask = 0
    for i in elements:
        mask |= 1 << i
    return mask


def format_subset(mask: int) -> str:
    """Compact label such as '03' for {0,3}; the empty set prints as '∅'."""
    if mask == 0:
        return "∅"
    return "".join(str(i) for i in mask_elements(mask))


@dataclass(frozen=True, order=True)
class ElementaryTriplet:
    """The inequality f(iK) + f(jK) >= f(K) + f(ijK) with i < j and K disjoint from {i, j}."""

    i: int
    j: int
    K: int

    def __post_init__(self):
        if self.i >= self.j:
            raise ValueError(f"triplet needs i < j, got i={self.i} j={self.j}")
        if self.K >> self.i & 1 or self.K >> self.j & 1:
            raise ValueError(f"K={self.K:#b} must not contain i or j")

    @property
    def label(self) -> str:
        return f"({self.i},{self.j}|{format_subset(self.K)})"

    @property
    def key(self) -> tuple[int, ...]:
        """Element sequence i, j, k1, k2, ... used for lexicographic comparisons."""
        return (self.i, self.j, *mask_elements(self.K))

    def terms(self) -> tuple[tuple[int, int], ...]:
        """(subset mask, coefficient) pairs of the full 2^n-dimensional row."""
        bi, bj = 1 << self.i, 1 << self.j
        return ((self.K | bi, 1), (self.K | bj, 1), (self.K, -1), (self.K | bi | bj, -1))

    def to_text(self) -> str:
        return f"{self.i} {self.j} {self.K}"

    def __str__(self) -> str:
        return self.label


def enumerate_coordinates(n: int) -> tuple[int, ...]:
    """All masks A with A nonempty and |A| != n-1, ascending."""
    _check_n(n)
    return tuple(A for A in range(1, 1 << n) if popcount(A) != n - 1)


def elementary_triplets(n: int) -> tuple[ElementaryTriplet, ...]:
    """All (i,j|K): pairs (i, j) lexicographic, then K ascending by mask."""
    _check_n(n)
    full = (1 << n) - 1
    triplets = []
    for i, j in combinations(range(n), 2):
        rest = full & ~(1 << i) & ~(1 << j)
        for K in range(1 << n):
            if K & ~rest == 0:
                triplets.append(ElementaryTriplet(i, j, K))
    return tuple(triplets)


@dataclass(frozen=True, eq=False)
class ConeSpec:
    """The reduced description {x : M x >= 0} of the cone over an n-element base set."""

    n: int
    coords: tuple[int, ...]
    matrix: np.ndarray
    triplets: tuple[ElementaryTriplet, ...]

    @property
    def d(self) -> int:
        return len(self.coords)

    @property
    def m(self) -> int:
        return len(self.triplets)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def column_of(self) -> dict[int, int]:
        """Column index of every subset mask; masks of size n-1 share the X column."""
        index = {A: c for c, A in enumerate(self.coords)}
        x_col = index[self.full_mask]
        for i in range(self.n):
            index[self.full_mask & ~(1 << i)] = x_col
        return index

    @cached_property
    def row_of(self) -> dict[ElementaryTriplet, int]:
        return {t: r for r, t in enumerate(self.triplets)}

    def row_index(self, i: int, j: int, K: int) -> int:
        return self.row_of[ElementaryTriplet(min(i, j), max(i, j), K)]

    def row_label(self, row: int) -> str:
        return self.triplets[row].label

    def weight(self, ray: Sequence[int]) -> int:
        """Number of rows tight at the ray."""
        return int(np.count_nonzero(self.matrix @ np.asarray(ray) == 0))

    def contains(self, ray: Sequence[int]) -> bool:
        return bool(np.all(self.matrix @ np.asarray(ray) >= 0))


def _reduced_row(n: int, triplet: ElementaryTriplet, column_of: dict[int, int], d: int):
    row = [0] * d
    for mask, coef in triplet.terms():
        if mask == 0:
            continue
        row[column_of[mask]] += coef
    return row


def build_reduced_matrix(n: int) -> ConeSpec:
    """Build M: the elementary rows with the empty column dropped and the
    n+1 columns with |A| >= n-1 merged into the X column."""
    coords = enumerate_coordinates(n)
    triplets = elementary_triplets(n)
    full = (1 << n) - 1
    column_of = {A: c for c, A in enumerate(coords)}
    for i in range(n):
        column_of[full & ~(1 << i)] = column_of[full]
    rows = [_reduced_row(n, t, column_of, len(coords)) for t in triplets]
    matrix = np.array(rows, dtype=np.int64)
    matrix.setflags(write=False)
    return ConeSpec(n=n, coords=coords, matrix=matrix, triplets=triplets)


def full_elementary_matrix(n: int) -> np.ndarray:
    """M#: one row per triplet over all 2^n subsets."""
    triplets = elementary_triplets(n)
    matrix = np.zeros((len(triplets), 1 << n), dtype=np.int64)
    for r, t in enumerate(triplets):
        for mask, coef in t.terms():
            matrix[r, mask] += coef
    return matrix


def expected_dimensions(n: int) -> tuple[int, int]:
    """(d, m) = (2^n - (n+1), C(n,2) 2^(n-2))."""
    return (1 << n) - (n + 1), comb(n, 2) << (n - 2)


def necessity_witness(triplet: ElementaryTriplet, n: int) -> list[int]:
    """Full function violating exactly the given elementary inequality.

    g(iK) = g(jK) = k and g(A) = min(|A|, k+1) elsewhere, with k = |K|.
    """
    _check_n(n)
    k = popcount(triplet.K)
    bi, bj = 1 << triplet.i, 1 << triplet.j
    values = [min(popcount(A), k + 1) for A in range(1 << n)]
    values[triplet.K | bi] = k
    values[triplet.K | bj] = k
    return values


def f_J(n: int, J: int) -> np.ndarray:
    """Reduced coordinates of f_J(A) = 1 if A meets J, else 0."""
    _check_n(n)
    if popcount(J) < 2:
        raise ValueError(f"f_J needs |J| >= 2, got J={format_subset(J)}")
    if J & ~((1 << n) - 1):
        raise ValueError(f"J={J:#b} is not a subset of the {n}-element base set")
    return np.array([1 if A & J else 0 for A in enumerate_coordinates(n)], dtype=np.int64)


def f_J_weight(n: int, k: int) -> int:
    """Closed form for the weight of f_J with |J| = k."""
    return comb(n, 2) * 2 ** (n - 2) - comb(k, 2) * 2 ** (n - k)


def expand_reduced(ray: Sequence[int], n: int) -> list[int]:
    """Full 2^n values of a reduced vector: g(empty) = 0, g(A) = g(X) when |A| = n-1."""
    coords = enumerate_coordinates(n)
    if len(ray) != len(coords):
        raise ValueError(f"expected {len(coords)} coordinates, got {len(ray)}")
    full = (1 << n) - 1
    values = [0] * (1 << n)
    for A, v in zip(coords, ray):
        values[A] = int(v)
    for i in range(n):
        values[full & ~(1 << i)] = values[full]
    return values


def reduce_full(values: Sequence[int], n: int) -> np.ndarray:
    """Reduced coordinates of a full function (the values on R)."""
    if len(values) != 1 << n:
        raise ValueError(f"expected {1 << n} values, got {len(values)}")
    return int_array([values[A] for A in enumerate_coordinates(n)])


def p_standardize(values: Sequence[int], n: int) -> list[int]:
    """Subtract the modular function that makes f(empty) = 0 and f(X - i) = f(X)."""
    full = (1 << n) - 1
    shift = [values[full] - values[full & ~(1 << i)] for i in range(n)]
    base = values[0]
    return [
        values[A] - base - sum(shift[i] for i in mask_elements(A)) for A in range(1 << n)
    ]


def is_submodular(values: Sequence[int], n: int) -> bool:
    return bool(np.all(full_elementary_matrix(n) @ np.asarray(values, dtype=np.int64) >= 0))


def embed_ray(ray: Sequence[int], n: int) -> np.ndarray:
    """Reduced coordinates over n+1 of f*(yA) = f*(A) = f(A), with y the new element n."""
    values = expand_reduced(ray, n)
    low = (1 << n) - 1
    return int_array([values[A & low] for A in enumerate_coordinates(n + 1)])


def interior_point(spec: ConeSpec) -> np.ndarray:
    """Sum of f_J over all |J| >= 2; strictly positive on every row of M."""
    total = np.zeros(spec.d, dtype=np.int64)
    for J in range(1 << spec.n):
        if popcount(J) >= 2:
            total += f_J(spec.n, J)
    return total


def zero_block_rows(spec: ConeSpec) -> tuple[int, ...]:
    """Rows of the (0,j|K) block."""
    return tuple(r for r, t in enumerate(spec.triplets) if t.i == 0)


def cstar_rows(spec: ConeSpec) -> tuple[int, ...]:
    """Rows bounding C*: everything outside the (0,j|K) block."""
    return tuple(r for r, t in enumerate(spec.triplets) if t.i != 0)

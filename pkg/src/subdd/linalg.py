"""Exact integer linear algebra.

Nothing here rounds. Rank uses fraction-free (Bareiss) elimination on Python integers,
nullspaces and inverses use Fraction Gauss-Jordan, and vectors handed back are primitive
integer arrays (int64 when every entry fits, object otherwise).
"""

from collections.abc import Sequence
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

import numpy as np

INT64_MAX = 2**63 - 1


def int_array(values: Sequence[int]) -> np.ndarray:
    """1-d integer array: int64 when all entries fit, Python ints (object) otherwise."""
    ints = [int(v) for v in values]
    if all(-INT64_MAX <= v <= INT64_MAX for v in ints):
        return np.array(ints, dtype=np.int64)
    return np.array(ints, dtype=object)


def int_matrix(rows: Sequence[Sequence[int]], ncols: int | None = None) -> np.ndarray:
    """2-d counterpart of int_array."""
    lists = [[int(v) for v in row] for row in rows]
    if not lists:
        return np.zeros((0, ncols or 0), dtype=np.int64)
    if all(-INT64_MAX <= v <= INT64_MAX for row in lists for v in row):
        return np.array(lists, dtype=np.int64)
    return np.array(lists, dtype=object)


def _as_int_rows(matrix) -> list[list[int]]:
    return [[int(v) for v in row] for row in np.asarray(matrix)]


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(int(x) * int(y) for x, y in zip(a, b))


def rank(matrix) -> int:
    """Exact rank by Bareiss elimination (every division is exact)."""
    rows = _as_int_rows(matrix)
    if not rows or not rows[0]:
        return 0
    ncols = len(rows[0])
    r = 0
    prev = 1
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r][c]
        top = rows[r]
        for i in range(r + 1, len(rows)):
            row = rows[i]
            f = row[c]
            for j in range(c + 1, ncols):
                row[j] = (p * row[j] - f * top[j]) // prev
            row[c] = 0
        prev = p
        r += 1
        if r == len(rows):
            break
    return r


def normalize_primitive(coords: Sequence[int]) -> np.ndarray:
    """Divide by the gcd and make the first nonzero coordinate positive."""
    ints = [int(v) for v in coords]
    g = reduce(gcd, ints, 0)
    if g == 0:
        raise ValueError("cannot normalize the zero vector")
    first = next(v for v in ints if v != 0)
    if first < 0:
        g = -g
    return int_array([v // g for v in ints])


def make_primitive(rows: np.ndarray) -> np.ndarray:
    """Divide each row by its positive gcd; signs are kept."""
    if rows.shape[0] == 0:
        return rows
    g = np.gcd.reduce(rows, axis=1)
    g = np.where(g == 0, 1, g)
    return rows // g[:, None]


def _scale_to_integers(values: Sequence[Fraction]) -> list[int]:
    """Positive multiple of a rational vector that is a primitive integer vector."""
    scale = reduce(lcm, (v.denominator for v in values), 1)
    ints = [int(v * scale) for v in values]
    g = reduce(gcd, ints, 0) or 1
    return [v // g for v in ints]


def rref(matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals; returns (nonzero rows, pivot columns)."""
    rows = [[Fraction(v) for v in row] for row in _as_int_rows(matrix)]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r][c]
        rows[r] = [v / p for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def nullspace_basis(matrix, ncols: int | None = None) -> np.ndarray:
    """Primitive integer basis of the right nullspace, one basis vector per column."""
    arr = np.asarray(matrix)
    if ncols is None:
        ncols = arr.shape[1]
    if arr.size == 0:
        return np.eye(ncols, dtype=np.int64)
    reduced, pivots = rref(arr)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[f]
        basis.append(_scale_to_integers(v))
    if not basis:
        return np.zeros((ncols, 0), dtype=np.int64)
    return int_matrix(basis).T


def kernel_vector(matrix, ncols: int | None = None) -> np.ndarray:
    """The primitive generator of a one-dimensional kernel (first nonzero entry positive)."""
    basis = nullspace_basis(matrix, ncols)
    if basis.shape[1] != 1:
        cols = basis.shape[0]
        raise ValueError(
            f"kernel has dimension {basis.shape[1]}; need rank {cols - 1} for a unique ray"
        )
    return normalize_primitive(basis[:, 0])


def solve_exact(matrix, rhs: Sequence[int]) -> list[Fraction]:
    """Unique rational solution x of matrix x = rhs."""
    rows = _as_int_rows(matrix)
    ncols = len(rows[0]) if rows else 0
    augmented = [row + [int(b)] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(augmented)
    if ncols in pivots:
        raise ValueError("system is inconsistent")
    if len(pivots) != ncols:
        raise ValueError("system does not have a unique solution")
    x = [Fraction(0)] * ncols
    for row, pc in zip(reduced, pivots):
        x[pc] = row[ncols]
    return x


def inverse_columns(matrix) -> np.ndarray:
    """Columns of the inverse of a square matrix, each scaled to a primitive integer vector.

    Scaling is by a positive factor, so matrix @ column k is a positive multiple of e_k.
    """
    rows = _as_int_rows(matrix)
    size = len(rows)
    augmented = [row + [1 if i == j else 0 for j in range(size)] for i, row in enumerate(rows)]
    reduced, pivots = rref(augmented)
    if pivots[:size] != list(range(size)) or len(reduced) < size:
        raise ValueError("matrix is singular")
    columns = [_scale_to_integers([reduced[i][size + k] for i in range(size)]) for k in range(size)]
    return int_matrix(columns).T


class RowSpace:
    """Incremental integer echelon basis; tells whether a new row raises the rank."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, row: Sequence[int]) -> list[int]:
        v = [int(x) for x in row]
        for basis, c in zip(self.rows, self.pivots):
            if v[c] == 0:
                continue
            f, p = v[c], basis[c]
            v = [p * a - f * b for a, b in zip(v, basis)]
            g = reduce(gcd, v, 0)
            if g > 1:
                v = [a // g for a in v]
        return v

    def contains(self, row: Sequence[int]) -> bool:
        return not any(self.reduce(row))

    def add(self, row: Sequence[int]) -> bool:
        """Add a row; returns False (and stores nothing) when it is dependent."""
        v = self.reduce(row)
        pivot = next((c for c, a in enumerate(v) if a != 0), None)
        if pivot is None:
            return False
        self.rows.append(v)
        self.pivots.append(pivot)
        return True

    def kernel(self) -> np.ndarray:
        return nullspace_basis(
            self.rows if self.rows else np.zeros((0, self.ncols), dtype=np.int64), self.ncols
        )

"""Symmetries of the cone: base-set permutations and the reflection.

A permutation acts by (pi f)(A) = f(pi A), so applying pi1 and then pi2 is the same as
applying the single permutation pi1 o pi2 (A -> pi1(pi2(A))). The reflection is
(sigma f)(A) = f(X - A) - f(X) + sum over i in A of f(i); it is an involution and
commutes with every permutation, giving a group of 2 n! elements.
"""

from collections.abc import Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cache
from itertools import permutations

import numpy as np

from .cone import ConeSpec, ElementaryTriplet, build_reduced_matrix, mask_elements
from .linalg import int_array, make_primitive

# upper bound on integers materialized per block of canonical-form images
BLOCK_ELEMENTS = 1 << 22


@dataclass(frozen=True)
class SymmetryElement:
    perm: tuple[int, ...]  # perm[i] is the image of element i
    reflect: bool = False

    def __str__(self) -> str:
        text = "".join(str(p) for p in self.perm)
        return f"sigma*{text}" if self.reflect else text


@dataclass(frozen=True, order=True)
class OrbitRecord:
    canonical: tuple[int, ...]
    size: int
    weight: int
    stabilizer: int = 1

    @property
    def ray(self) -> np.ndarray:
        return int_array(self.canonical)


def compose(p1: Sequence[int], p2: Sequence[int]) -> tuple[int, ...]:
    """p1 o p2: i -> p1[p2[i]]."""
    return tuple(p1[p2[i]] for i in range(len(p2)))


def permute_mask(mask: int, perm: Sequence[int]) -> int:
    out = 0
    for i in mask_elements(mask):
        out |= 1 << perm[i]
    return out


def permute_triplet(t: ElementaryTriplet, perm: Sequence[int]) -> ElementaryTriplet:
    a, b = perm[t.i], perm[t.j]
    return ElementaryTriplet(min(a, b), max(a, b), permute_mask(t.K, perm))


def reflect_triplet(t: ElementaryTriplet, n: int) -> ElementaryTriplet:
    """(i,j|K) -> (i,j|X - ijK)."""
    full = (1 << n) - 1
    return ElementaryTriplet(t.i, t.j, full & ~t.K & ~(1 << t.i) & ~(1 << t.j))


class SymmetryGroup:
    """All 2 n! symmetries acting on reduced coordinates and on matrix rows."""

    def __init__(self, spec: ConeSpec):
        self.spec = spec
        self.n = spec.n
        self.perms: list[tuple[int, ...]] = list(permutations(range(spec.n)))
        column_of = spec.column_of
        self.index_maps = np.array(
            [[column_of[permute_mask(A, p)] for A in spec.coords] for p in self.perms],
            dtype=np.intp,
        )
        self.reflection = self._reflection_matrix()
        row_of = spec.row_of
        self.perm_row_maps = np.array(
            [[row_of[permute_triplet(t, p)] for t in spec.triplets] for p in self.perms],
            dtype=np.intp,
        )
        self.reflect_row_map = np.array(
            [row_of[reflect_triplet(t, spec.n)] for t in spec.triplets], dtype=np.intp
        )
        self._perm_index = {p: k for k, p in enumerate(self.perms)}

    def _reflection_matrix(self) -> np.ndarray:
        spec = self.spec
        full = spec.full_mask
        column_of = spec.column_of
        x_col = column_of[full]
        size = spec.d
        S = np.zeros((size, size), dtype=np.int64)
        for c, A in enumerate(spec.coords):
            rest = full & ~A
            if rest:
                S[c, column_of[rest]] += 1
            S[c, x_col] -= 1
            for i in mask_elements(A):
                S[c, column_of[1 << i]] += 1
        return S

    @property
    def order(self) -> int:
        return 2 * len(self.perms)

    def elements(self) -> Iterator[SymmetryElement]:
        for reflect in (False, True):
            for p in self.perms:
                yield SymmetryElement(p, reflect)

    def apply_permutation(self, ray: Sequence[int], perm: Sequence[int]) -> np.ndarray:
        index = self.index_maps[self._perm_index[tuple(perm)]]
        return np.asarray(ray)[index]

    def apply_reflection(self, ray: Sequence[int]) -> np.ndarray:
        return self.reflection @ np.asarray(ray)

    def apply(self, ray: Sequence[int], element: SymmetryElement) -> np.ndarray:
        image = self.apply_permutation(ray, element.perm)
        return self.apply_reflection(image) if element.reflect else image

    def row_permutation(self, element: SymmetryElement) -> np.ndarray:
        """rows[t] such that (M g(r))[t] = (M r)[rows[t]] for every vector r."""
        perm_rows = self.perm_row_maps[self._perm_index[element.perm]]
        if not element.reflect:
            return perm_rows
        return perm_rows[self.reflect_row_map]

    def images(self, ray: Sequence[int]) -> np.ndarray:
        """All 2 n! images, permutations first, then their reflections."""
        ray = np.asarray(ray)
        permuted = ray[self.index_maps]
        reflected = permuted @ self.reflection.T
        return make_primitive(np.concatenate([permuted, reflected]))

    def _block_images(self, rays: np.ndarray) -> np.ndarray:
        permuted = rays[:, self.index_maps]
        reflected = permuted @ self.reflection.T
        stacked = np.concatenate([permuted, reflected], axis=1)
        count, group, size = stacked.shape
        return make_primitive(stacked.reshape(count * group, size)).reshape(count, group, size)

    def _canonical_block(self, rays: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        imgs = self._block_images(rays)
        count = imgs.shape[0]
        alive = np.ones(imgs.shape[:2], dtype=bool)
        for c in range(imgs.shape[2]):
            column = imgs[:, :, c]
            sentinel = column.max() + 1
            best = np.where(alive, column, sentinel).min(axis=1)
            alive &= column == best[:, None]
        pick = alive.argmax(axis=1)
        canonical = imgs[np.arange(count), pick]
        stabilizer = np.all(imgs == rays[:, None, :], axis=2).sum(axis=1)
        return canonical, stabilizer

    def canonical_forms(
        self, rays: np.ndarray, threads: int = 1
    ) -> tuple[np.ndarray, np.ndarray]:
        """Lexicographically minimal image of every ray, and its stabilizer size."""
        rays = np.asarray(rays)
        if rays.shape[0] == 0:
            return rays.copy(), np.zeros(0, dtype=np.int64)
        block = max(1, BLOCK_ELEMENTS // (self.order * rays.shape[1]))
        starts = range(0, rays.shape[0], block)
        blocks = [rays[s : s + block] for s in starts]
        if threads > 1 and len(blocks) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(self._canonical_block, blocks))
        else:
            parts = [self._canonical_block(b) for b in blocks]
        canonical = np.concatenate([p[0] for p in parts])
        stabilizer = np.concatenate([p[1] for p in parts])
        return canonical, stabilizer

    def canonical_form(self, ray: Sequence[int]) -> OrbitRecord:
        ray = np.asarray(ray)
        canonical, stabilizer = self.canonical_forms(ray[None, :])
        return OrbitRecord(
            canonical=tuple(int(v) for v in canonical[0]),
            size=self.order // int(stabilizer[0]),
            weight=self.spec.weight(ray),
            stabilizer=int(stabilizer[0]),
        )

    def orbit_expand(self, ray: Sequence[int]) -> np.ndarray:
        """Distinct images of a ray, sorted by coordinate tuple."""
        imgs = self.images(ray)
        unique = sorted({tuple(int(v) for v in row) for row in imgs})
        return np.array(unique, dtype=imgs.dtype)

    def orbit_pool(self, rays: np.ndarray, threads: int = 1) -> list[OrbitRecord]:
        """Collapse a ray set into one record per orbit, sorted by canonical form."""
        rays = np.asarray(rays)
        canonical, stabilizer = self.canonical_forms(rays, threads)
        records: dict[tuple[int, ...], OrbitRecord] = {}
        if rays.shape[0]:
            weights = np.count_nonzero(self.spec.matrix @ canonical.T == 0, axis=0)
        for k in range(rays.shape[0]):
            key = tuple(int(v) for v in canonical[k])
            if key not in records:
                records[key] = OrbitRecord(
                    canonical=key,
                    size=self.order // int(stabilizer[k]),
                    weight=int(weights[k]),
                    stabilizer=int(stabilizer[k]),
                )
        return [records[k] for k in sorted(records)]


@cache
def symmetry_group(n: int) -> SymmetryGroup:
    return SymmetryGroup(build_reduced_matrix(n))


def apply_permutation(ray: Sequence[int], perm: Sequence[int], n: int) -> np.ndarray:
    return symmetry_group(n).apply_permutation(ray, perm)


def apply_reflection(ray: Sequence[int], n: int) -> np.ndarray:
    return symmetry_group(n).apply_reflection(ray)


def canonical_form(ray: Sequence[int], n: int) -> OrbitRecord:
    return symmetry_group(n).canonical_form(ray)


def orbit_expand(ray: Sequence[int], n: int) -> np.ndarray:
    return symmetry_group(n).orbit_expand(ray)

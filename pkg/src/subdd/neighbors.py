"""Adjacency decomposition: neighbors of a ray through a (d-1)-dimensional subproblem.

For an extremal ray r with tight rows M', the cone {x : M'x >= 0} contains the line
through r. Cutting it with z.x = 0 for a row z not tight at r gives a pointed cone C' of
dimension d-1, parametrized as x = P y where the columns of P span the nullspace of z.
Extremal rays s of C' correspond one-to-one to the neighbors of r; each neighbor is
recovered as s + mu r with mu the smallest value keeping every other row nonnegative.
"""

import heapq
from collections import deque
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from .cone import ConeSpec, interior_point
from .dd import DDOptions, DDState, _matrix_of, algebraic_adjacent, popcount, run_dd, sort_rays
from .journal import JournalEntry, ProbeJournal
from .linalg import (
    RowSpace,
    int_array,
    int_matrix,
    make_primitive,
    normalize_primitive,
    nullspace_basis,
    rank,
    solve_exact,
)
from .orders import InsertionOrder
from .symmetry import OrbitRecord, SymmetryGroup

# probes popped per round, independent of the thread count
PROBE_BATCH = 16


def verify_extremal(ray: Sequence[int], source: ConeSpec | np.ndarray) -> bool:
    """M r >= 0 and the tight rows have rank d - 1."""
    matrix = _matrix_of(source)
    r = np.asarray(ray)
    if not r.any():
        return False
    values = matrix @ r
    if np.any(values < 0):
        return False
    return rank(matrix[values == 0]) == matrix.shape[1] - 1


def _primitive(values: Sequence[int]) -> np.ndarray:
    return make_primitive(int_matrix([values]))[0]


@dataclass(eq=False)
class NeighborCone:
    source: np.ndarray
    support: tuple[int, ...]
    excluded: int
    projection: np.ndarray
    matrix: np.ndarray
    ambient: np.ndarray

    @property
    def dimension(self) -> int:
        return self.projection.shape[1]

    def lift(self, s: Sequence[int]) -> np.ndarray:
        return lift_neighbor(s, self)

    def project(self, x: Sequence[int]) -> np.ndarray:
        """Primitive y with P y a positive multiple of x - (z.x / z.r) r."""
        r = [int(v) for v in self.source]
        z = [int(v) for v in self.ambient[self.excluded]]
        x = [int(v) for v in x]
        zr = sum(a * b for a, b in zip(z, r))
        zx = sum(a * b for a, b in zip(z, x))
        shifted = [zr * a - zx * b for a, b in zip(x, r)]
        y = solve_exact(self.projection, shifted)
        scale = lcm(*(v.denominator for v in y))
        return _primitive([int(v * scale) for v in y])


def build_neighbor_cone(
    ray: Sequence[int], source: ConeSpec | np.ndarray, z_choice: int | None = None
) -> NeighborCone:
    """Neighbor cone of an extremal ray; z defaults to the first row not tight at the ray."""
    matrix = _matrix_of(source)
    r = np.asarray(ray)
    values = matrix @ r
    support = np.flatnonzero(values == 0)
    if np.any(values < 0) or rank(matrix[support]) != matrix.shape[1] - 1:
        raise ValueError("ray is not extremal")
    if z_choice is None:
        z_choice = int(np.flatnonzero(values > 0)[0])
    elif values[z_choice] == 0:
        raise ValueError(f"row {z_choice} is tight at the ray and cannot bound the section")
    projection = nullspace_basis(matrix[[z_choice]])
    return NeighborCone(
        source=r,
        support=tuple(int(k) for k in support),
        excluded=int(z_choice),
        projection=projection,
        matrix=matrix[support] @ projection,
        ambient=matrix,
    )


def lift_neighbor(s: Sequence[int], cone: NeighborCone) -> np.ndarray:
    """Neighbor (a*.r) x - (a*.x) r with x = P s and a* maximizing -(a.x)/(a.r)."""
    x = cone.projection @ np.asarray(s)
    r = cone.source
    tight = set(cone.support)
    outside = [k for k in range(cone.ambient.shape[0]) if k not in tight]
    best = None
    best_value = None
    for k in outside:
        a = cone.ambient[k]
        ar = int(np.dot(a, r))
        ax = int(np.dot(a, x))
        value = Fraction(-ax, ar)
        if best_value is None or value > best_value:
            best, best_value = (ar, ax), value
    ar, ax = best
    lifted = [ar * int(xv) - ax * int(rv) for xv, rv in zip(x, r)]
    return _primitive(lifted)


@dataclass
class NeighborResult:
    rays: np.ndarray
    complete: bool = True


def _local_order(order, support: tuple[int, ...]):
    local = {row: k for k, row in enumerate(support)}
    if order is None:
        return None
    if isinstance(order, InsertionOrder):
        if order.is_dynamic:
            return InsertionOrder(order.kind)
        return tuple(local[r] for r in order.rows if r in local)
    return tuple(local[r] for r in order if r in local)


def walk_to_extremal(source: ConeSpec | np.ndarray, point: Sequence[int]) -> np.ndarray:
    """Move from a point of a pointed cone to an extremal ray of its minimal face."""
    matrix = _matrix_of(source)
    d = matrix.shape[1]
    x = [int(v) for v in point]
    if not any(x):
        raise ValueError("starting point is the origin")
    while True:
        values = [int(v) for v in matrix @ int_array(x)]
        if any(v < 0 for v in values):
            raise ValueError("starting point is outside the cone")
        tight = [k for k, v in enumerate(values) if v == 0]
        tight_rows = matrix[tight] if tight else np.zeros((0, d), dtype=np.int64)
        if rank(tight_rows) == d - 1:
            return _primitive(x)
        basis = nullspace_basis(tight_rows, d)
        v = next(
            [int(c) for c in basis[:, k]]
            for k in range(basis.shape[1])
            if rank([x, [int(c) for c in basis[:, k]]]) == 2
        )
        w = [int(c) for c in matrix @ int_array(v)]
        if not any(c < 0 for c in w):
            v = [-c for c in v]
            w = [-c for c in w]
        if not any(c < 0 for c in w):
            raise ValueError("cone is not pointed")
        k = min((k for k in range(len(w)) if w[k] < 0), key=lambda k: Fraction(values[k], -w[k]))
        x = [-w[k] * a + values[k] * b for a, b in zip(x, v)]
        x = list(_primitive(x))


def matrix_neighbors(
    ray: Sequence[int],
    matrix: np.ndarray,
    *,
    order=None,
    depth: int = 1,
    interior: Sequence[int] | None = None,
    options: DDOptions | None = None,
) -> NeighborResult:
    """Neighbors of an extremal ray of {x : matrix x >= 0}.

    Depth 1 solves the neighbor cone by double description; deeper levels decompose it
    again by adjacency, starting from an interior point of the ambient cone.
    """
    cone = build_neighbor_cone(ray, matrix)
    if depth <= 1:
        result = run_dd(cone.matrix, _local_order(order, cone.support), options)
        section_rays = result.rays
        complete = result.complete
    else:
        if interior is None:
            raise ValueError("recursive decomposition needs an interior point")
        inner = cone.project(interior)
        seed = walk_to_extremal(cone.matrix, inner)
        sub = enumerate_by_adjacency(
            cone.matrix, seed, depth=depth - 1, interior=inner, options=options
        )
        section_rays = sub.rays
        complete = sub.complete
    lifted = [lift_neighbor(s, cone) for s in section_rays]
    if not lifted:
        return NeighborResult(np.zeros((0, matrix.shape[1]), dtype=np.int64), complete)
    rays = int_matrix(lifted)
    rays, _ = sort_rays(rays, np.zeros((rays.shape[0], 0), dtype=bool))
    return NeighborResult(rays, complete)


def neighbors(
    ray: Sequence[int],
    spec: ConeSpec,
    order=None,
    *,
    depth: int = 1,
    options: DDOptions | None = None,
) -> NeighborResult:
    """All extremal rays adjacent to `ray` in the cone of `spec`."""
    interior = interior_point(spec) if depth > 1 else None
    return matrix_neighbors(
        ray, spec.matrix, order=order, depth=depth, interior=interior, options=options
    )


@dataclass
class AdjacencyResult:
    rays: np.ndarray
    complete: bool = True


def enumerate_by_adjacency(
    source: ConeSpec | np.ndarray,
    seed: Sequence[int],
    *,
    depth: int = 1,
    interior: Sequence[int] | None = None,
    options: DDOptions | None = None,
    max_rays: int | None = None,
) -> AdjacencyResult:
    """All extremal rays reachable from `seed` through the adjacency relation."""
    matrix = _matrix_of(source)
    start = _primitive(seed)
    known = {tuple(int(v) for v in start)}
    queue = deque([start])
    complete = True
    while queue:
        r = queue.popleft()
        found = matrix_neighbors(r, matrix, depth=depth, interior=interior, options=options)
        complete &= found.complete
        for s in found.rays:
            key = tuple(int(v) for v in s)
            if key not in known:
                known.add(key)
                queue.append(s)
        if max_rays and len(known) > max_rays:
            complete = False
            break
    rays = int_matrix(sorted(known))
    return AdjacencyResult(rays, complete)


def adjacency_graph(rays: np.ndarray, source: ConeSpec | np.ndarray) -> set[tuple[int, int]]:
    """Pairs (i, j), i < j, of adjacent rays in a complete ray set (rank test)."""
    matrix = _matrix_of(source)
    state = DDState(matrix, tuple(range(matrix.shape[0])), rays, (rays @ matrix.T == 0))
    cols = state.column_strings
    pairs = set()
    for i in range(state.size):
        counts = popcount(cols[i + 1 :] & cols[i])
        for offset in np.flatnonzero(counts >= state.dimension - 2):
            j = i + 1 + int(offset)
            if algebraic_adjacent(state, i, j):
                pairs.add((i, j))
    return pairs


@dataclass
class BFSResult:
    orbits: list[OrbitRecord]
    probes: int
    closed: bool
    budget_exhausted: bool = False
    probed: set[tuple[int, ...]] = field(default_factory=set)


def neighbor_orbits(
    ray: Sequence[int],
    spec: ConeSpec,
    group: SymmetryGroup,
    order=None,
    *,
    depth: int = 1,
    options: DDOptions | None = None,
) -> tuple[list[OrbitRecord], NeighborResult]:
    """Orbits touched by the neighbors of a ray."""
    found = neighbors(ray, spec, order, depth=depth, options=options)
    return group.orbit_pool(found.rays), found


def orbit_bfs(
    seeds: Sequence[Sequence[int]],
    spec: ConeSpec,
    *,
    group: SymmetryGroup | None = None,
    max_probes: int | None = None,
    max_weight: int | None = None,
    order=None,
    depth: int = 1,
    options: DDOptions | None = None,
    journal: ProbeJournal | None = None,
    pool: Sequence[OrbitRecord] = (),
    probed: set[tuple[int, ...]] | None = None,
    threads: int = 1,
    progress_callback: Callable[[int, int, int], None] | None = None,
) -> BFSResult:
    """Frontier search over orbits, probing one representative per orbit, lowest weight first.

    Orbits heavier than `max_weight` stay in the pool unprobed, so the search is then not
    closed. `pool` and `probed` resume an earlier campaign.
    """
    group = group or SymmetryGroup(spec)
    orbits: dict[tuple[int, ...], OrbitRecord] = {rec.canonical: rec for rec in pool}
    probed = set(probed or ())
    for seed in seeds:
        rec = group.canonical_form(seed)
        orbits.setdefault(rec.canonical, rec)
    frontier = [(rec.weight, key) for key, rec in orbits.items() if key not in probed]
    heapq.heapify(frontier)

    probes = 0
    deferred = 0
    budget_exhausted = False
    while frontier:
        if max_probes is not None and probes >= max_probes:
            budget_exhausted = True
            break
        slots = PROBE_BATCH if max_probes is None else min(PROBE_BATCH, max_probes - probes)
        batch: list[OrbitRecord] = []
        while frontier and len(batch) < slots:
            weight, key = heapq.heappop(frontier)
            if key in probed:
                continue
            if max_weight is not None and weight > max_weight:
                deferred += 1
                continue
            batch.append(orbits[key])
        if not batch:
            break

        def probe(rec: OrbitRecord):
            return neighbor_orbits(rec.ray, spec, group, order, depth=depth, options=options)

        if threads > 1 and len(batch) > 1:
            with ThreadPoolExecutor(max_workers=threads) as executor:
                results = list(executor.map(probe, batch))
        else:
            results = [probe(rec) for rec in batch]

        for rec, (touched, found) in zip(batch, results):
            probed.add(rec.canonical)
            probes += 1
            fresh = [t for t in touched if t.canonical not in orbits]
            for t in fresh:
                orbits[t.canonical] = t
                heapq.heappush(frontier, (t.weight, t.canonical))
            if journal is not None:
                journal.append(
                    JournalEntry(rec.canonical, rec.weight, found.rays.shape[0], len(fresh))
                )
            if progress_callback:
                progress_callback(probes, len(orbits), len(frontier))

    closed = not budget_exhausted and deferred == 0 and all(k in probed for k in orbits)
    return BFSResult(
        orbits=[orbits[k] for k in sorted(orbits)],
        probes=probes,
        closed=closed,
        budget_exhausted=budget_exhausted,
        probed=probed,
    )


@dataclass
class SampleResult:
    rays: np.ndarray
    attempts: int
    hits: int

    @property
    def hit_rate(self) -> float:
        return self.hits / self.attempts if self.attempts else 0.0


def random_extremal_sample(
    spec: ConeSpec,
    rng_seed: int | None,
    attempts: int,
    anchor: Sequence[int] | None = None,
) -> SampleResult:
    """Random rank-(d-1) row subsets whose kernel ray lies in the cone.

    With an anchor ray, the first d-2 independent rows come from its tight rows, which
    biases the sample toward the anchor's neighborhood.
    """
    rng = np.random.default_rng(rng_seed)
    matrix = spec.matrix
    d = spec.d
    anchor_rows = None
    if anchor is not None:
        if not verify_extremal(anchor, spec):
            raise ValueError("anchor ray is not extremal")
        anchor_rows = np.flatnonzero(matrix @ np.asarray(anchor) == 0)

    found: set[tuple[int, ...]] = set()
    hits = 0
    for _ in range(attempts):
        space = RowSpace(d)
        if anchor_rows is not None:
            for row in rng.permutation(anchor_rows):
                if space.rank >= d - 2:
                    break
                space.add(matrix[row])
        for row in rng.permutation(spec.m):
            if space.rank >= d - 1:
                break
            space.add(matrix[row])
        if space.rank != d - 1:
            continue
        x = normalize_primitive(space.kernel()[:, 0])
        values = matrix @ x
        if np.all(values >= 0):
            ray = x
        elif np.all(values <= 0):
            ray = -x
        else:
            continue
        hits += 1
        found.add(tuple(int(v) for v in ray))

    rays = int_matrix(sorted(found), d)
    return SampleResult(rays=rays, attempts=attempts, hits=hits)

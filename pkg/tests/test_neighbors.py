"""Tests for adjacency decomposition, orbit search and random sampling."""

import numpy as np
import pytest

from src.subdd.cone import f_J, f_J_weight, interior_point
from src.subdd.dd import (
    DDOptions,
    DDState,
    GraphTestCache,
    algebraic_adjacent,
    combinatorial_adjacent,
    halfgraph_adjacent,
    halfgraph_candidates,
)
from src.subdd.journal import ProbeJournal, load_journal, probed_set
from src.subdd.neighbors import (
    adjacency_graph,
    build_neighbor_cone,
    enumerate_by_adjacency,
    lift_neighbor,
    neighbor_orbits,
    neighbors,
    orbit_bfs,
    random_extremal_sample,
    verify_extremal,
    walk_to_extremal,
)
from src.subdd.orders import OrderKind, build_order


def as_set(rays):
    return {tuple(int(v) for v in r) for r in rays}


@pytest.fixture(scope="module")
def graph4(spec4, rays4):
    return adjacency_graph(rays4, spec4)


def graph_neighbors(graph, index, rays):
    out = set()
    for i, j in graph:
        if i == index:
            out.add(tuple(int(v) for v in rays[j]))
        elif j == index:
            out.add(tuple(int(v) for v in rays[i]))
    return out


class TestExtremality:
    def test_known_rays(self, spec4, rays4):
        assert all(verify_extremal(r, spec4) for r in rays4)

    def test_interior_point_is_not_extremal(self, spec4):
        assert not verify_extremal(interior_point(spec4), spec4)
        assert not verify_extremal(np.zeros(spec4.d, dtype=np.int64), spec4)
        assert not verify_extremal(-f_J(4, 0b11), spec4)


class TestNeighborCone:
    def test_section_dimension(self, spec4, rays4):
        cone = build_neighbor_cone(rays4[0], spec4)
        assert cone.dimension == spec4.d - 1
        assert cone.matrix.shape == (len(cone.support), spec4.d - 1)
        assert spec4.matrix[cone.excluded] @ rays4[0] > 0

    def test_rejects_non_extremal(self, spec4):
        with pytest.raises(ValueError, match="not extremal"):
            build_neighbor_cone(interior_point(spec4), spec4)

    def test_rejects_tight_z(self, spec4, rays4):
        tight = int(np.flatnonzero(spec4.matrix @ rays4[0] == 0)[0])
        with pytest.raises(ValueError, match="tight at the ray"):
            build_neighbor_cone(rays4[0], spec4, z_choice=tight)

    def test_lift_lands_on_a_ray(self, spec4, rays4):
        section = neighbors(rays4[3], spec4).rays
        assert section.shape[0] > 0
        for ray in section:
            assert spec4.contains(ray)
            assert verify_extremal(ray, spec4)

    def test_lift_of_projected_neighbor(self, spec4, rays4, graph4):
        cone = build_neighbor_cone(rays4[0], spec4)
        for other in graph_neighbors(graph4, 0, rays4):
            y = cone.project(other)
            assert lift_neighbor(y, cone).tolist() == list(other)


class TestNeighbors:
    @pytest.mark.parametrize("index", [0, 7, 18, 36])
    def test_match_adjacency_graph(self, spec4, rays4, graph4, index):
        found = neighbors(rays4[index], spec4)
        assert found.complete
        assert as_set(found.rays) == graph_neighbors(graph4, index, rays4)

    @pytest.mark.parametrize("kind", [OrderKind.TOPT, OrderKind.MAXCUT, OrderKind.LEXMIN])
    def test_order_does_not_matter(self, spec4, rays4, graph4, kind):
        found = neighbors(rays4[7], spec4, build_order(kind, spec4))
        assert as_set(found.rays) == graph_neighbors(graph4, 7, rays4)

    def test_depth_two_matches_depth_one(self, spec4, rays4):
        for index in (2, 30):
            shallow = neighbors(rays4[index], spec4, depth=1)
            deep = neighbors(rays4[index], spec4, depth=2)
            assert as_set(deep.rays) == as_set(shallow.rays)

    def test_symmetric_images_have_image_neighbors(self, spec4, rays4, group4):
        ray = rays4[10]
        base = neighbors(ray, spec4).rays
        for element in list(group4.elements())[::7]:
            image = group4.apply(ray, element)
            expected = as_set(group4.apply(r, element) for r in base)
            assert as_set(neighbors(image, spec4).rays) == expected

    def test_budget_marks_incomplete(self, spec4):
        found = neighbors(f_J(4, 0b1111), spec4, options=DDOptions(max_rays=2))
        assert not found.complete

    def test_adjacency_graph_is_connected(self, spec4, rays4):
        result = enumerate_by_adjacency(spec4, f_J(4, 0b11))
        assert result.complete
        assert as_set(result.rays) == as_set(rays4)


class TestWalk:
    def test_walk_from_interior(self, spec4, rays4):
        ray = walk_to_extremal(spec4, interior_point(spec4))
        assert verify_extremal(ray, spec4)
        assert tuple(int(v) for v in ray) in as_set(rays4)

    def test_walk_keeps_extremal_rays(self, spec4, rays4):
        assert walk_to_extremal(spec4, rays4[4] * 3).tolist() == rays4[4].tolist()

    def test_walk_rejects_outside(self, spec4):
        with pytest.raises(ValueError, match="outside the cone"):
            walk_to_extremal(spec4, -interior_point(spec4))
        with pytest.raises(ValueError, match="origin"):
            walk_to_extremal(spec4, np.zeros(spec4.d, dtype=np.int64))


class TestOrbitSearch:
    def test_neighbor_orbits(self, spec4, group4):
        touched, found = neighbor_orbits(f_J(4, 0b11), spec4, group4)
        assert found.rays.shape[0] > 0
        assert len(touched) <= 7

    def test_closes_at_n4(self, spec4, group4):
        result = orbit_bfs([f_J(4, 0b11)], spec4, group=group4)
        assert result.closed
        assert len(result.orbits) == 7
        assert result.probes == 7
        assert sum(rec.size for rec in result.orbits) == 37

    def test_closes_at_n3(self, spec3, group3):
        result = orbit_bfs([f_J(3, 0b011)], spec3, group=group3)
        assert result.closed
        assert len(result.orbits) == 2

    def test_probe_budget(self, spec4, group4):
        result = orbit_bfs([f_J(4, 0b11)], spec4, group=group4, max_probes=2)
        assert result.budget_exhausted
        assert not result.closed
        assert result.probes == 2

    def test_weight_cap_leaves_search_open(self, spec4, group4):
        result = orbit_bfs([f_J(4, 0b11)], spec4, group=group4, max_weight=0)
        assert not result.closed
        assert result.probes == 0

    def test_threads_do_not_change_result(self, spec4, group4):
        single = orbit_bfs([f_J(4, 0b11)], spec4, group=group4)
        threaded = orbit_bfs([f_J(4, 0b11)], spec4, group=group4, threads=4)
        assert threaded.orbits == single.orbits

    def test_journal_and_resume(self, spec4, group4, tmp_path):
        path = tmp_path / "probes.journal"
        first = orbit_bfs(
            [f_J(4, 0b11)], spec4, group=group4, max_probes=3, journal=ProbeJournal(path)
        )
        entries = load_journal(path)
        assert len(entries) == 3
        assert probed_set(entries) == first.probed

        resumed = orbit_bfs(
            [], spec4, group=group4, pool=first.orbits, probed=probed_set(entries)
        )
        assert resumed.closed
        assert resumed.probes == 7 - 3
        assert len(resumed.orbits) == 7

    def test_progress_callback(self, spec4, group4):
        calls = []
        orbit_bfs(
            [f_J(4, 0b11)],
            spec4,
            group=group4,
            progress_callback=lambda probes, pool, frontier: calls.append(probes),
        )
        assert calls == list(range(1, 8))


class TestSampling:
    def test_sample_finds_extremal_rays(self, spec4, rays4):
        result = random_extremal_sample(spec4, 1, 300)
        assert result.attempts == 300
        assert 0 < result.hits <= 300
        assert 0 < result.hit_rate <= 1
        assert as_set(result.rays) <= as_set(rays4)

    def test_sample_is_reproducible(self, spec4):
        a = random_extremal_sample(spec4, 5, 50)
        b = random_extremal_sample(spec4, 5, 50)
        assert a.rays.tolist() == b.rays.tolist()

    def test_anchored_sample(self, spec4, rays4):
        result = random_extremal_sample(spec4, 2, 100, anchor=f_J(4, 0b1111))
        assert as_set(result.rays) <= as_set(rays4)

    def test_anchor_must_be_extremal(self, spec4):
        with pytest.raises(ValueError, match="anchor"):
            random_extremal_sample(spec4, 0, 10, anchor=interior_point(spec4))

    def test_zero_attempts(self, spec4):
        assert random_extremal_sample(spec4, 0, 0).hit_rate == 0.0


@pytest.mark.slow
class TestFiveElements:
    @pytest.fixture(scope="class")
    def final5(self, spec5, rays5):
        return DDState.from_rays(spec5.matrix, range(spec5.m), rays5)

    @pytest.mark.timeout(1800)
    @pytest.mark.parametrize(
        "J,expected", [(0b11, 672), (0b111, 664), (0b1111, 636), (0b11111, 299)]
    )
    def test_f_J_neighbor_orbits(self, spec5, group5, J, expected):
        ray = f_J(5, J)
        assert spec5.weight(ray) == f_J_weight(5, J.bit_count())
        touched, _ = neighbor_orbits(ray, spec5, group5)
        assert len(touched) == expected

    @pytest.mark.timeout(1800)
    def test_bfs_closes_at_672(self, spec5, group5):
        result = orbit_bfs([f_J(5, 0b11)], spec5, group=group5, threads=4)
        assert result.closed
        assert len(result.orbits) == 672
        assert sum(rec.size for rec in result.orbits) == 117978

    @pytest.mark.timeout(1800)
    def test_adjacency_tests_agree_on_sampled_pairs(self, final5):
        rng = np.random.default_rng(11)
        size = final5.size
        anchors = rng.choice(size, 500, replace=False)
        pairs = [(int(p), int(q)) for p in anchors for q in rng.integers(0, size, 200) if p != q]
        # pairs sharing enough tight rows to reach the rank test
        for p in anchors[:100]:
            pairs += [(int(p), int(q)) for q in np.flatnonzero(halfgraph_candidates(final5, p))]
        assert len(pairs) >= 100_000

        cache = GraphTestCache()
        adjacent = 0
        for p, q in pairs:
            algebraic = algebraic_adjacent(final5, p, q)
            assert combinatorial_adjacent(final5, p, q) == algebraic
            assert halfgraph_adjacent(final5, p, q, cache) == algebraic
            adjacent += algebraic
        assert adjacent > 0

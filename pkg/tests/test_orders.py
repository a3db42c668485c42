"""Tests for row insertion orders."""

import pytest

from src.subdd.cone import cstar_rows, zero_block_rows
from src.subdd.dd import initial_dd_pair, run_dd
from src.subdd.orders import (
    InsertionOrder,
    OrderKind,
    build_order,
    cstar_prefix,
    dynamic_next,
    dynamic_order,
    lexmin_order,
    negative_counts,
    omit_row,
    rec_enumerate,
    recursive_enumeration,
    recursive_order,
    restrict_order,
    size_priority,
    topt_order,
)


class TestSizePriority:
    def test_interleaving(self):
        assert size_priority(3) == [0, 1]
        assert size_priority(4) == [0, 2, 1]
        assert size_priority(5) == [0, 3, 1, 2]
        assert size_priority(6) == [0, 4, 1, 3, 2]


class TestTopt:
    def test_is_permutation(self, spec4):
        order = topt_order(spec4)
        assert order.kind == OrderKind.TOPT
        assert sorted(order.rows) == list(range(spec4.m))

    def test_first_of_relation_is_processed_last(self, spec4):
        rows = topt_order(spec4).rows
        assert spec4.row_label(rows[-1]) == "(0,1|∅)"
        # |K| = 1 has the lowest priority at n=4, so it is processed first
        assert spec4.triplets[rows[0]].K.bit_count() == 1

    def test_insertion_starts_at_largest_triplet(self, spec4):
        rows = topt_order(spec4).rows
        assert spec4.row_label(rows[0]) == "(2,3|1)"

    def test_relation_chain(self, spec4):
        ranked = list(reversed(topt_order(spec4).rows))
        chain = [(2, 3, 0), (1, 2, 0b1001), (0, 1, 0b1000), (1, 3, 0b100)]
        positions = [ranked.index(spec4.row_index(*t)) for t in chain]
        assert positions == sorted(positions)
        assert [spec4.row_label(ranked[p]) for p in positions] == [
            "(2,3|∅)",
            "(1,2|03)",
            "(0,1|3)",
            "(1,3|2)",
        ]

    def test_last_row_at_five_elements(self, spec5):
        assert spec5.row_label(topt_order(spec5).rows[-1]) == "(0,1|∅)"

    def test_priority_blocks(self, spec5):
        sizes = [spec5.triplets[r].K.bit_count() for r in reversed(topt_order(spec5).rows)]
        # blocks in relation order: |K| = 0, 3, 1, 2
        blocks = [s for k, s in enumerate(sizes) if k == 0 or s != sizes[k - 1]]
        assert blocks == [0, 3, 1, 2]


class TestRecursive:
    def test_rec_enumerate(self):
        assert rec_enumerate([2, 3]) == [(2, 3), (2,), (), (3,)]

    def test_rec_enumerate_examples(self):
        assert rec_enumerate([0, 1]) == [(0, 1), (0,), (), (1,)]
        assert rec_enumerate([0, 1, 2]) == [
            (0, 1, 2),
            (0, 1),
            (0,),
            (),
            (1,),
            (0, 2),
            (2,),
            (1, 2),
        ]
        assert rec_enumerate([]) == [()]

    def test_enumeration_prefix_and_suffix(self, spec4):
        labels = [spec4.row_label(r) for r in recursive_enumeration(spec4)]
        assert labels[:5] == ["(0,1|23)", "(0,1|2)", "(0,1|∅)", "(0,1|3)", "(0,2|13)"]
        assert labels[-3:] == ["(2,3|0)", "(2,3|∅)", "(2,3|1)"]
        rows = recursive_order(spec4).rows
        assert spec4.row_label(rows[0]) == "(2,3|1)"
        assert spec4.row_label(rows[-1]) == "(0,1|23)"

    def test_zero_block_is_inserted_last(self, spec4):
        block = zero_block_rows(spec4)
        rows = recursive_order(spec4).rows
        assert set(rows[-len(block) :]) == set(block)
        assert set(rows[: -len(block)]) == set(cstar_rows(spec4))

    def test_cstar_prefix_is_processed_first(self, spec4):
        prefix = cstar_prefix(spec4)
        assert len(prefix) == 15
        assert set(prefix) >= set(cstar_rows(spec4))
        assert cstar_prefix(spec4) is prefix

    def test_rec_enumerate_lists_every_subset_once(self):
        out = rec_enumerate([1, 2, 3, 4])
        assert len(out) == 16
        assert len(set(out)) == 16
        assert out[0] == (1, 2, 3, 4)

    def test_recursive_order_is_permutation(self, spec4):
        order = recursive_order(spec4)
        assert sorted(order.rows) == list(range(spec4.m))
        assert order.rows == tuple(reversed(recursive_enumeration(spec4)))

    def test_recursive_starts_with_full_complement(self, spec4):
        first = spec4.triplets[recursive_enumeration(spec4)[0]]
        assert (first.i, first.j, first.K) == (0, 1, 0b1100)


class TestLexmin:
    def test_rows_ascending(self, spec4):
        rows = lexmin_order(spec4).rows
        vectors = [tuple(spec4.matrix[r].tolist()) for r in rows]
        assert vectors == sorted(vectors)

    def test_shuffle_is_deterministic(self, spec4):
        assert lexmin_order(spec4, 7).rows == lexmin_order(spec4, 7).rows
        assert sorted(lexmin_order(spec4, 7).rows) == list(range(spec4.m))


class TestDynamic:
    def test_dynamic_order_rejects_static_kind(self):
        with pytest.raises(ValueError, match="static"):
            dynamic_order(OrderKind.TOPT)

    @pytest.mark.parametrize("kind", [OrderKind.MAXCUT, OrderKind.MINCUT])
    def test_dynamic_next_picks_extreme_count(self, spec4, kind):
        state = initial_dd_pair(spec4, topt_order(spec4).rows)
        remaining = [r for r in range(spec4.m) if r not in state.processed]
        counts = dict(zip(remaining, negative_counts(spec4.matrix, state.rays, remaining)))
        target = max(counts.values()) if kind == OrderKind.MAXCUT else min(counts.values())
        expected = min(r for r, c in counts.items() if c == target)
        assert dynamic_next(state, remaining, kind) == expected

    def test_dynamic_next_needs_rows(self, spec4):
        state = initial_dd_pair(spec4, range(spec4.m))
        with pytest.raises(ValueError, match="no remaining rows"):
            dynamic_next(state, [], OrderKind.MAXCUT)


class TestHelpers:
    def test_restrict_and_omit(self):
        assert restrict_order((5, 3, 1, 4), {1, 4}) == (1, 4)
        assert omit_row((5, 3, 1, 4), 3) == (5, 1, 4)

    def test_restricted_insertion_order(self, spec4):
        order = topt_order(spec4).restricted({0, 1, 2})
        assert sorted(order.rows) == [0, 1, 2]
        dynamic = InsertionOrder(OrderKind.MINCUT).restricted({4, 2})
        assert dynamic.rows == (2, 4)
        assert dynamic.is_dynamic

    @pytest.mark.parametrize("kind", list(OrderKind))
    def test_build_order(self, spec4, kind):
        order = build_order(kind.value, spec4)
        assert order.kind == kind
        if kind.is_dynamic:
            assert order.rows is None
        else:
            assert sorted(order.rows) == list(range(spec4.m))


@pytest.mark.slow
class TestFiveElementTrajectories:
    @pytest.mark.timeout(600)
    def test_topt_grows_steadily(self, spec5):
        result = run_dd(spec5, topt_order(spec5))
        sizes = [size for _, size in result.trajectory]
        assert sizes[-1] == 117978
        assert max(sizes) <= 1.05 * sizes[-1]

    @pytest.mark.timeout(3600)
    def test_shuffled_lexmin_seeds_agree_on_the_cone(self, spec5):
        trajectories = set()
        for seed in range(5):
            result = run_dd(spec5, lexmin_order(spec5, seed))
            assert result.state.size == 117978
            trajectories.add(tuple(size for _, size in result.trajectory))
        assert len(trajectories) > 1

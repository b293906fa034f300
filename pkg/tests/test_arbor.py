import io
import json
from pathlib import Path

import pytest

from collatz_arbor.arbor import (
    TruncationConfig,
    build,
    classify_edge,
    coverage,
    export,
    path_to,
)
from collatz_arbor.errors import (
    CapacityError,
    DuplicateVertexError,
    MissingVertexError,
    NonEdgeError,
)
from collatz_arbor.forward import trajectory
from collatz_arbor.inverse import g_branch

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="module")
def small_tree():
    return build(TruncationConfig(max_depth=2, value_bound=60))


@pytest.fixture(scope="module")
def deep_tree():
    return build(TruncationConfig(max_depth=6, value_bound=10**6))


class TestConfig:
    def test_needs_some_bound(self):
        with pytest.raises(ValueError):
            TruncationConfig()

    def test_unbounded_values_need_sibling_cap(self):
        with pytest.raises(ValueError):
            TruncationConfig(max_depth=3)
        TruncationConfig(max_depth=3, sibling_cap=4)  # fine

    @pytest.mark.parametrize("kwargs", [
        {"max_depth": -1, "value_bound": 10},
        {"value_bound": 0},
        {"value_bound": 10, "sibling_cap": 0},
        {"value_bound": 10, "max_nodes": 0},
    ])
    def test_rejects_bad_fields(self, kwargs):
        with pytest.raises(ValueError):
            TruncationConfig(**kwargs)


class TestBuild:
    def test_first_level(self):
        tree = build(TruncationConfig(max_depth=1, value_bound=400))
        assert tree.levels[1] == [5, 21, 85, 341]

    def test_trivial_cycle_excluded(self, deep_tree):
        assert deep_tree.nodes[1].parent is None
        assert all(info.parent != 1 or value != 1 for value, info in deep_tree.nodes.items())

    def test_bound_filtered_second_level(self, small_tree):
        # 85 and 341 exceed the bound, so only 5 contributes at depth 2
        assert small_tree.levels[1] == [5, 21]
        assert small_tree.levels[2] == [3, 13, 53]
        assert len(small_tree) == 6

    def test_contains_worked_path(self, deep_tree):
        for v in (5, 13, 17, 11, 7, 9):
            assert v in deep_tree
        assert deep_tree.nodes[9].depth == 6

    def test_root_only(self):
        tree = build(TruncationConfig(max_depth=0, value_bound=100))
        assert len(tree) == 1
        assert tree.levels == {0: [1]}

    def test_node_metadata(self, small_tree):
        info = small_tree.nodes[13]
        assert info.depth == 2
        assert info.parent == 5
        assert info.sibling_index == 2
        assert info.residue == 1
        assert not info.is_leaf
        assert small_tree.nodes[21].is_leaf

    def test_leaves_have_no_children(self, deep_tree):
        leaves = {v for v, info in deep_tree.nodes.items() if info.is_leaf}
        children_of = {info.parent for info in deep_tree.nodes.values() if info.parent}
        assert not leaves & children_of

    def test_sibling_cap(self):
        tree = build(TruncationConfig(max_depth=1, sibling_cap=3))
        assert tree.levels[1] == [5, 21]  # indices 2 and 3 from the root

    def test_capacity_budget(self):
        with pytest.raises(CapacityError):
            build(TruncationConfig(max_depth=6, value_bound=10**6, max_nodes=10))

    def test_duplicate_child_aborts_loudly(self, monkeypatch):
        # cannot happen with the real branch map, so inject a colliding stream
        import collatz_arbor.arbor as arbor_mod
        real = arbor_mod.iter_siblings

        def colliding(parent, first_index=1):
            if parent == 5:
                return iter([(1, 3), (2, 21)])  # 21 already stored under the root
            return real(parent, first_index=first_index)

        monkeypatch.setattr(arbor_mod, "iter_siblings", colliding)
        with pytest.raises(DuplicateVertexError) as excinfo:
            build(TruncationConfig(max_depth=2, value_bound=60))
        assert excinfo.value.value == 21

    def test_depth_bookkeeping_of_late_initial_vertices(self, deep_tree):
        # with the root at depth 0: 29 enters at depth 5 and its first child
        # 19 at depth 6
        assert deep_tree.nodes[29].depth == 5
        assert deep_tree.nodes[19].depth == 6
        assert deep_tree.nodes[19].parent == 29
        assert deep_tree.nodes[19].sibling_index == 1

    def test_parent_links_rederive(self, deep_tree):
        for value, info in deep_tree.nodes.items():
            if info.parent is not None:
                assert g_branch(info.parent, info.sibling_index) == value

    def test_indegree_contract(self, deep_tree):
        # node store keys are unique by construction; every non-root has
        # exactly one stored parent, the root none
        for value, info in deep_tree.nodes.items():
            if value == 1:
                assert info.parent is None
            else:
                assert info.parent in deep_tree.nodes

    def test_at_most_one_leaf_per_path_and_only_terminal(self, deep_tree):
        for value, info in deep_tree.nodes.items():
            if info.is_leaf:
                continue
            # a non-leaf interior vertex never sits below a leaf
            parent = info.parent
            while parent is not None:
                assert not deep_tree.nodes[parent].is_leaf
                parent = deep_tree.nodes[parent].parent


class TestPath:
    def test_path_to_nine(self, deep_tree):
        assert path_to(deep_tree, 9) == [1, 5, 13, 17, 11, 7, 9]

    def test_path_to_fifteen(self, deep_tree):
        assert path_to(deep_tree, 15) == [1, 5, 53, 35, 23, 15]

    def test_path_to_root(self, deep_tree):
        assert path_to(deep_tree, 1) == [1]

    def test_absent_target(self, small_tree):
        with pytest.raises(MissingVertexError):
            path_to(small_tree, 9)

    def test_every_stored_path_reverses_its_orbit(self, small_tree):
        for value in small_tree.nodes:
            path = path_to(small_tree, value)
            assert path == list(reversed(trajectory(value).values))


class TestClassifyEdge:
    def test_ascending_initial_edge(self):
        assert classify_edge(7, 9) == "ascending"

    def test_descending_initial_edge(self):
        assert classify_edge(5, 3) == "descending"

    def test_later_children_ascend_regardless_of_class(self):
        assert classify_edge(5, 13) == "ascending"

    def test_trivial_self_edge_is_lateral(self):
        assert classify_edge(1, 1) == "lateral"

    def test_non_edges_rejected(self):
        with pytest.raises(NonEdgeError):
            classify_edge(5, 7)
        with pytest.raises(NonEdgeError):
            classify_edge(9, 7)   # leaf parent
        with pytest.raises(NonEdgeError):
            classify_edge(7, 13)  # 40 = 8*5, wrong parent

    def test_exponent_recovered_from_power_of_two_quotient(self):
        # 3*53+1 = 160 = 2^5 * 5: index 3 of class-2 parent 5
        assert classify_edge(5, 53) == "ascending"

    def test_even_endpoints_rejected(self):
        with pytest.raises(ValueError):
            classify_edge(53, 140)
        with pytest.raises(ValueError):
            classify_edge(8, 5)

    def test_direction_rule_over_tree(self, deep_tree):
        for value, info in deep_tree.nodes.items():
            if info.parent is None or info.parent == 1:
                continue
            kind = classify_edge(info.parent, value)
            if info.sibling_index == 1:
                expected = "ascending" if info.parent % 3 == 1 else "descending"
                assert kind == expected
            else:
                assert kind == "ascending"


class TestCoverage:
    def test_small_window(self, small_tree):
        report = coverage(small_tree, 25)
        assert report.covered_count == 5
        for v in (1, 3, 5, 13, 21):
            assert report.covers(v)
        assert report.missing == (7, 9, 11, 15, 17, 19, 23, 25)

    def test_gap_values_reached_at_depth_six(self, deep_tree):
        report = coverage(deep_tree, 21)
        for v in (7, 9, 11, 15, 17):
            assert report.covers(v)

    def test_first_depth(self, deep_tree):
        report = coverage(deep_tree, 21)
        assert report.first_depth[1] == 0
        assert report.first_depth[5] == 1
        assert report.first_depth[9] == 6

    def test_level_sizes_count_window_values(self, small_tree):
        report = coverage(small_tree, 25)
        assert report.level_sizes == {0: 1, 1: 2, 2: 2}

    def test_partition_invariant(self, small_tree):
        report = coverage(small_tree, 60)
        covered = {x for x in range(1, 61, 2) if report.covers(x)}
        assert len(covered) == report.covered_count
        assert covered | set(report.missing) == set(range(1, 61, 2))
        assert not covered & set(report.missing)

    def test_window_may_not_exceed_tree_bound(self, small_tree):
        with pytest.raises(ValueError):
            coverage(small_tree, 100)


class TestExport:
    @pytest.mark.parametrize("fmt,name", [
        ("jsonl", "tree_k1_b25.jsonl"),
        ("dot", "tree_k1_b25.dot"),
        ("csv", "tree_k1_b25.csv"),
    ])
    def test_golden(self, fmt, name):
        tree = build(TruncationConfig(max_depth=1, value_bound=25))
        sink = io.BytesIO()
        export(tree, fmt, sink)
        assert sink.getvalue() == (GOLDEN / name).read_bytes()

    def test_jsonl_three_records(self):
        tree = build(TruncationConfig(max_depth=1, value_bound=25))
        sink = io.BytesIO()
        export(tree, "jsonl", sink)
        lines = sink.getvalue().decode().splitlines()
        assert len(lines) == 3
        records = [json.loads(line) for line in lines]
        assert [r["value"] for r in records] == [1, 5, 21]
        assert list(records[0]) == ["value", "depth", "parent", "sibling_index",
                                    "residue", "is_leaf"]
        assert records[0]["parent"] is None
        assert records[2]["is_leaf"] is True

    def test_root_only_single_record(self):
        tree = build(TruncationConfig(max_depth=0, value_bound=10))
        sink = io.BytesIO()
        export(tree, "jsonl", sink)
        assert sink.getvalue().count(b"\n") == 1

    def test_dot_contains_edge(self):
        tree = build(TruncationConfig(max_depth=1, value_bound=25))
        sink = io.BytesIO()
        export(tree, "dot", sink)
        text = sink.getvalue().decode()
        assert text.startswith("digraph collatz_arbor {")
        assert "1 -> 5" in text
        assert "21 [shape=box]" in text

    def test_csv_header_first(self):
        tree = build(TruncationConfig(max_depth=1, value_bound=25))
        sink = io.BytesIO()
        export(tree, "csv", sink)
        first = sink.getvalue().decode().splitlines()[0]
        assert first == "value,depth,parent,sibling_index,residue,is_leaf"

    def test_identical_builds_export_identically(self):
        config = TruncationConfig(max_depth=4, value_bound=5000)
        for fmt in ("jsonl", "dot", "csv"):
            a, b = io.BytesIO(), io.BytesIO()
            export(build(config), fmt, a)
            export(build(config), fmt, b)
            assert a.getvalue() == b.getvalue()

    def test_unknown_format_rejected(self, small_tree):
        with pytest.raises(ValueError):
            export(small_tree, "yaml", io.BytesIO())

from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_colorings, graph_from_edges, oracle_contains, pentagon
from gallairamsey import errors
from gallairamsey.detect import (
    AuditResult,
    Witness,
    WitnessKind,
    audit,
    contains_pattern,
    embedding_edges,
    find_pattern,
    find_rainbow_triangle,
    has_pattern,
    has_pattern_through,
    is_clean,
    is_matching,
)
from gallairamsey.model import (
    ColoredComplete,
    PatternGraph,
    SimpleGraph,
    TargetSpec,
    color_class,
    pair_count,
)

P3 = PatternGraph.path(3)
P5 = PatternGraph.path(5)
P7 = PatternGraph.path(7)
C4 = PatternGraph.cycle(4)
C8 = PatternGraph.cycle(8)
K23 = PatternGraph.complete_bipartite(2, 3)

SUPPORTED = [
    PatternGraph.single_edge(),
    P3,
    PatternGraph.path(4),
    P5,
    PatternGraph.cycle(3),
    C4,
    PatternGraph.cycle(5),
    K23,
    PatternGraph.linear_forest([2, 2]),
    PatternGraph.linear_forest([3, 1]),
]


def complete_bipartite_graph(a: int, b: int) -> SimpleGraph:
    return graph_from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def disjoint_cliques(*sizes: int) -> SimpleGraph:
    edges = []
    offset = 0
    for s in sizes:
        edges.extend(
            (offset + i, offset + j) for i in range(s) for j in range(i + 1, s)
        )
        offset += s
    return graph_from_edges(offset, edges)


class TestContainsPattern:
    def test_k23_contains_p5(self):
        h = complete_bipartite_graph(2, 3)
        assert contains_pattern(h, P5) is not None

    def test_blowup_of_p5_contains_c8(self):
        # double every vertex of a 5-vertex path; adjacency inherited
        path_edges = [(0, 1), (1, 2), (2, 3), (3, 4)]
        edges = []
        for u, v in path_edges:
            for du in (0, 1):
                for dv in (0, 1):
                    edges.append((2 * u + du, 2 * v + dv))
        h = graph_from_edges(10, edges)
        found = contains_pattern(h, C8)
        assert found is not None
        assert oracle_contains(h, C8)

    def test_k73_has_no_c8(self):
        assert contains_pattern(complete_bipartite_graph(7, 3), C8) is None

    def test_disjoint_k7_k3_has_no_c8(self):
        assert contains_pattern(disjoint_cliques(7, 3), C8) is None

    def test_pattern_larger_than_host_is_absent(self):
        assert contains_pattern(disjoint_cliques(3), C8) is None

    def test_witness_edges_exist(self):
        h = disjoint_cliques(6)
        for p in SUPPORTED:
            verts = contains_pattern(h, p)
            if verts is None:
                continue
            assert len(set(verts)) == p.order
            for u, v in embedding_edges(p, verts):
                assert h.has_edge(u, v)

    def test_lexicographically_least_path(self):
        h = graph_from_edges(6, [(2, 3), (3, 4), (0, 5), (5, 1)])
        assert contains_pattern(h, P3) == (0, 5, 1)

    def test_deterministic(self):
        h = disjoint_cliques(5, 4)
        for p in SUPPORTED:
            assert contains_pattern(h, p) == contains_pattern(h, p)


class TestOracleEquivalence:
    @given(st.data())
    @settings(max_examples=120, deadline=None)
    def test_random_graphs_agree_with_naive_embedding(self, data):
        n = data.draw(st.integers(1, 7))
        density = data.draw(st.floats(0.1, 0.9))
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if data.draw(st.floats(0, 1)) < density
        ]
        h = graph_from_edges(n, edges)
        for p in SUPPORTED:
            expected = oracle_contains(h, p)
            assert has_pattern(h, p) == expected
            assert (contains_pattern(h, p) is not None) == expected

    def test_all_two_colorings_of_k5(self):
        patterns = [P3, P5, C4, PatternGraph.cycle(5), K23]
        for g in all_colorings(5, 2):
            for c in (1, 2):
                h = color_class(g, c)
                for p in patterns:
                    assert has_pattern(h, p) == oracle_contains(h, p)


class TestPinnedSearch:
    @given(st.data())
    @settings(max_examples=80, deadline=None)
    def test_through_vertex_agrees_with_deletion_argument(self, data):
        n = data.draw(st.integers(2, 7))
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if data.draw(st.booleans())
        ]
        h = graph_from_edges(n, edges)
        v = data.draw(st.integers(0, n - 1))
        for p in [P3, P5, C4, PatternGraph.cycle(5), K23]:
            # p embeds through v iff it embeds but not into the graph minus v
            expected = False
            m = p.order
            template = embedding_edges(p, tuple(range(m)))
            for verts in itertools.permutations(range(n), m):
                if v in verts and all(
                    h.has_edge(verts[a], verts[b]) for a, b in template
                ):
                    expected = True
                    break
            assert has_pattern_through(h, p, v) == expected


class TestRainbowTriangle:
    def test_all_distinct_triangle(self):
        g = ColoredComplete(3, 3, (1, 2, 3))
        w = find_rainbow_triangle(g)
        assert w is not None and w.vertices == (0, 1, 2)
        assert w.check(g)

    @given(st.data())
    @settings(max_examples=60)
    def test_two_colorings_never_rainbow(self, data):
        n = data.draw(st.integers(2, 7))
        codes = tuple(
            data.draw(st.integers(1, 2)) for _ in range(pair_count(n))
        )
        assert find_rainbow_triangle(ColoredComplete(n, 2, codes)) is None

    def test_least_witness(self):
        # rainbow on (1,2,3) but scan should still report it, not a later one
        codes = {
            (0, 1): 1, (0, 2): 1, (0, 3): 1,
            (1, 2): 1, (1, 3): 2, (2, 3): 3,
        }
        g = ColoredComplete.from_function(4, 3, lambda u, v: codes[(u, v)])
        w = find_rainbow_triangle(g)
        assert w is not None and w.vertices == (1, 2, 3)


class TestAudit:
    def test_pentagon_defeated_by_c4_p5(self):
        g = pentagon()
        spec = TargetSpec.of([C4, P5], [C4, P5])
        result = audit(g, spec)
        assert not result.clean
        assert result.witness is not None and result.witness.check(g)
        assert result.witness.pattern == P5

    def test_monochromatic_k7_clean_for_c8(self):
        g = ColoredComplete.monochromatic(7, 1)
        assert audit(g, TargetSpec.uniform(C8, 1)).clean

    def test_arity_mismatch(self):
        g = ColoredComplete.monochromatic(4, 2)
        with pytest.raises(errors.SpecArityMismatch):
            audit(g, TargetSpec.uniform(C8, 3))

    def test_empty_targets_never_trigger(self):
        g = ColoredComplete.monochromatic(8, 2)
        spec = TargetSpec.of([], [C8])
        assert audit(g, spec).clean

    def test_rainbow_reported_before_mono(self):
        g = ColoredComplete(3, 3, (1, 2, 3))
        result = audit(g, TargetSpec.uniform(PatternGraph.single_edge(), 3))
        assert result.witness.kind is WitnessKind.RAINBOW_TRIANGLE

    @given(st.data())
    @settings(max_examples=60, deadline=None)
    def test_clean_is_monotone_under_vertex_deletion(self, data):
        n = data.draw(st.integers(3, 7))
        codes = tuple(
            data.draw(st.integers(1, 2)) for _ in range(pair_count(n))
        )
        g = ColoredComplete(n, 2, codes)
        spec = TargetSpec.of([C4, P5], [P3])
        if is_clean(g, spec):
            keep = data.draw(
                st.lists(
                    st.integers(0, n - 1), min_size=1, max_size=n, unique=True
                )
            )
            assert is_clean(g.induced(sorted(keep)), spec)

    @given(st.data())
    @settings(max_examples=60, deadline=None)
    def test_is_clean_agrees_with_audit(self, data):
        n = data.draw(st.integers(2, 6))
        k = data.draw(st.integers(1, 3))
        codes = tuple(
            data.draw(st.integers(1, k)) for _ in range(pair_count(n))
        )
        g = ColoredComplete(n, k, codes)
        spec = TargetSpec.uniform(data.draw(st.sampled_from([P3, P5, C4])), k)
        assert is_clean(g, spec) == audit(g, spec).clean


class TestIsMatching:
    def test_empty_graph(self):
        assert is_matching(SimpleGraph(4, (0, 0, 0, 0)))

    def test_single_edge(self):
        assert is_matching(graph_from_edges(3, [(0, 1)]))

    def test_p3_is_not(self):
        h = graph_from_edges(3, [(0, 1), (1, 2)])
        assert not is_matching(h)
        assert contains_pattern(h, P3) is not None

    @given(st.data())
    @settings(max_examples=60)
    def test_equals_p3_freeness(self, data):
        n = data.draw(st.integers(1, 7))
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if data.draw(st.booleans())
        ]
        h = graph_from_edges(n, edges)
        assert is_matching(h) == (not has_pattern(h, P3))

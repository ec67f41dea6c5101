import random
from collections import Counter

import pytest

from kmsgraph import (
    DirectedMultigraph,
    GraphParseError,
    PathLimitError,
    UnknownVertexError,
    enumerate_paths,
    graph_from_json,
    graph_to_json,
    hereditary_closure,
    parse_graph,
    path_counts,
    reaches,
    restrict,
)

from conftest import small_graph_corpus


class TestParse:
    def test_ex61_adjacency(self, ex61):
        assert ex61.vertices == ("v", "w")
        assert ex61.multiplicity("v", "v") == 2
        assert ex61.multiplicity("v", "w") == 1
        assert ex61.multiplicity("w", "v") == 0
        assert ex61.multiplicity("w", "w") == 3
        assert ex61.adjacency_rows() == [[2, 1], [0, 3]]

    def test_isolated_vertex(self):
        g = parse_graph("vertex u")
        assert g.vertices == ("u",)
        assert g.edge_count == 0

    def test_duplicate_edge_lines_accumulate(self):
        g = parse_graph("vertex v\nvertex w\nedge v w\nedge v w")
        assert g.multiplicity("v", "w") == 2

    def test_default_multiplicity_and_comments(self):
        g = parse_graph("# a comment\nvertex a\nvertex b\n\nedge a b\n")
        assert g.multiplicity("a", "b") == 1

    @pytest.mark.parametrize(
        "text,line",
        [
            ("vertex a\nedge a b", 2),
            ("vertex a\nedge a", 2),
            ("vertex a\nedge a a 0", 2),
            ("vertex a\nedge a a -2", 2),
            ("vertex a\nedge a a x", 2),
            ("vertex a\nvertex a", 2),
            ("loop a", 1),
        ],
    )
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(GraphParseError) as err:
            parse_graph(text)
        assert f"line {line}" in str(err.value)

    def test_infinite_multiplicity_rejected(self):
        with pytest.raises(GraphParseError, match="not supported"):
            parse_graph("vertex a\nedge a a inf")

    def test_vertex_must_be_declared_first(self):
        with pytest.raises(GraphParseError):
            parse_graph("edge a a\nvertex a")

    def test_json_mirror_round_trip(self, ex61):
        assert graph_from_json(graph_to_json(ex61)) == ex61
        doc = '{"vertices": ["u"], "edges": []}'
        assert graph_from_json(doc).vertices == ("u",)

    def test_json_mirror_errors(self):
        with pytest.raises(GraphParseError):
            graph_from_json('{"edges": []}')
        with pytest.raises(GraphParseError):
            graph_from_json('{"vertices": ["a"], "edges": [{"from": "a", "to": "b"}]}')


class TestPathCounts:
    def test_ex61_totals_at_v(self, ex61):
        assert path_counts(ex61, "v", 3).totals == (1, 2, 4, 8)

    def test_ex61_totals_at_w(self, ex61):
        assert path_counts(ex61, "w", 2).totals == (1, 4, 14)

    def test_isolated_vertex(self):
        g = parse_graph("vertex u")
        assert path_counts(g, "u", 5).totals == (1, 0, 0, 0, 0, 0)

    def test_zero_length_slice_is_indicator(self, ex61):
        table = path_counts(ex61, "w", 4)
        assert table.count("w", 0) == 1
        assert table.count("v", 0) == 0

    def test_recursion_invariant(self, ex61):
        table = path_counts(ex61, "w", 6)
        for n in range(6):
            for w in ex61.vertices:
                expected = sum(
                    ex61.multiplicity(w, u) * table.count(u, n) for u in ex61.vertices
                )
                assert table.count(w, n + 1) == expected

    def test_unknown_vertex(self, ex61):
        with pytest.raises(UnknownVertexError):
            path_counts(ex61, "nope", 2)

    def test_concatenation_superadditivity(self, ex61):
        table = {v: path_counts(ex61, v, 8) for v in ex61.vertices}
        for w in ex61.vertices:
            for u in ex61.vertices:
                for v in ex61.vertices:
                    for n in range(1, 5):
                        for m in range(1, 4):
                            left = table[v].count(w, n + m)
                            right = path_counts(ex61, u, n).count(w, n) * table[v].count(u, m)
                            assert left >= right


class TestEnumeratePaths:
    def test_ex61_counts_to_depth_two(self, ex61):
        paths = enumerate_paths(ex61, "v", 2)
        assert len(paths) == 7
        assert Counter(len(p) for p in paths) == {0: 1, 1: 2, 2: 4}

    def test_depth_zero_is_the_vertex_itself(self, ex61):
        assert enumerate_paths(ex61, "w", 0) == [()]

    def test_ex61_five_paths_into_w(self, ex61):
        paths = enumerate_paths(ex61, "w", 1)
        assert len(paths) == 5
        loops = [p for p in paths if p and p[0][0] == "w"]
        assert len(loops) == 3
        assert {p[0][2] for p in loops} == {0, 1, 2}

    def test_parallel_edges_distinguished(self):
        g = parse_graph("vertex a\nvertex b\nedge a b 3")
        paths = enumerate_paths(g, "b", 1)
        assert sorted(p[0][2] for p in paths if p) == [0, 1, 2]

    def test_cap_exceeded_is_an_error(self, ex61):
        with pytest.raises(PathLimitError):
            enumerate_paths(ex61, "w", 20, cap=1000)

    def test_histogram_matches_path_counts_on_random_graphs(self):
        rng = random.Random(476)
        names = ("a", "b", "c", "d", "e", "f")
        for _ in range(25):
            nv = rng.randint(1, 6)
            g_names = names[:nv]
            mults = [0] * (nv * nv)
            for _ in range(rng.randint(0, 10)):
                mults[rng.randrange(nv * nv)] += 1
            edges = [
                (g_names[i // nv], g_names[i % nv], k)
                for i, k in enumerate(mults)
                if k
            ]
            g = DirectedMultigraph(g_names, edges)
            v = rng.choice(g_names)
            depth = rng.randint(0, 8)
            try:
                histogram = Counter(len(p) for p in enumerate_paths(g, v, depth))
            except PathLimitError:
                continue
            totals = path_counts(g, v, depth).totals
            for n in range(depth + 1):
                assert histogram.get(n, 0) == totals[n]


class TestReachability:
    def test_ex61_reaches(self, ex61):
        assert reaches(ex61, "v", "w")
        assert not reaches(ex61, "w", "v")
        assert reaches(ex61, "v", "v")

    def test_hereditary_closure(self, ex61):
        assert hereditary_closure(ex61, {"v"}) == {"v", "w"}
        assert hereditary_closure(ex61, {"w"}) == {"w"}

    def test_closure_idempotent_and_monotone(self, corpus):
        for g in corpus[:60]:
            if not g.vertices:
                continue
            seed = {g.vertices[0]}
            once = hereditary_closure(g, seed)
            assert hereditary_closure(g, once) == once
            bigger = hereditary_closure(g, set(g.vertices[:2]))
            assert once <= bigger or not seed <= set(g.vertices[:2])

    def test_restrict_to_w_keeps_the_loop(self, ex61):
        sub = restrict(ex61, {"w"})
        assert sub.vertices == ("w",)
        assert sub.multiplicity("w", "w") == 3

    def test_restrict_full_vertex_set_is_identity(self, corpus):
        for g in corpus[:40]:
            assert restrict(g, set(g.vertices)) == g

    def test_unknown_vertices_rejected(self, ex61):
        with pytest.raises(UnknownVertexError):
            reaches(ex61, "v", "zzz")
        with pytest.raises(UnknownVertexError):
            restrict(ex61, {"zzz"})

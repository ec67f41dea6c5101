import math
import random

import numpy as np
import pytest

from kmsgraph import (
    critical_temperature,
    graph_log_radius,
    parse_graph,
    period,
    reaches,
    scc_decomposition,
    spectral_radius,
    vertex_betas,
)

NEG_INF = float("-inf")


def _oracle_power_radius(rows, iterations=20000):
    """Independent full-matrix power iteration on A + I."""
    a = np.array(rows, dtype=float) + np.eye(len(rows))
    x = np.ones(len(rows))
    rayleigh = 0.0
    for _ in range(iterations):
        y = a @ x
        rayleigh = float(x @ y) / float(x @ x)
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return 0.0
        x = y / norm
    return rayleigh - 1.0


class TestScc:
    def test_ex61_two_components(self, ex61):
        report = scc_decomposition(ex61)
        assert [c.vertices for c in report.components] == [("v",), ("w",)]
        assert report.edges == frozenset({(0, 1)})

    def test_ex62_components_and_reachability(self, ex62):
        report = scc_decomposition(ex62)
        assert len(report.components) == 4
        names = {c.vertices[0][0]: i for i, c in enumerate(report.components)}
        green, orange, blue, red = names["g"], names["o"], names["b"], names["r"]
        assert (blue, orange) in report.edges
        assert (blue, red) in report.edges
        assert (red, green) in report.edges
        assert (orange, green) in report.edges
        assert green in report.reachable[blue]

    def test_single_cycle_is_one_component(self):
        g = parse_graph("vertex a\nvertex b\nvertex c\nedge a b\nedge b c\nedge c a")
        report = scc_decomposition(g)
        assert len(report.components) == 1
        assert report.components[0].vertices == ("a", "b", "c")

    def test_components_partition_vertices(self, corpus):
        for g in corpus[:80]:
            report = scc_decomposition(g)
            seen = [v for c in report.components for v in c.vertices]
            assert sorted(seen) == sorted(g.vertices)

    def test_condensation_is_acyclic(self, corpus):
        for g in corpus[:80]:
            report = scc_decomposition(g)
            for i, j in report.edges:
                assert i not in report.reachable[j]


class TestRadius:
    def test_singleton_loop_short_circuits(self, ex61):
        rho, err = spectral_radius(ex61, ("w",))
        assert rho == 3.0 and err == 0.0

    def test_ex62_blue_and_red(self, ex62):
        report = scc_decomposition(ex62)
        by_color = {c.vertices[0][0]: c for c in report.components}
        assert abs(by_color["b"].radius - 8 ** 0.25) < 1e-9
        assert abs(by_color["o"].radius - 8 ** 0.25) < 1e-9
        assert abs(by_color["r"].radius - 4 ** (1.0 / 3.0)) < 1e-9
        assert by_color["g"].radius == 2.0

    def test_power_iteration_on_dense_component(self):
        # not a pure cycle: golden-ratio matrix [[1,1],[1,0]]
        g = parse_graph("vertex a\nvertex b\nedge a a\nedge a b\nedge b a")
        rho, err = spectral_radius(g, ("a", "b"))
        assert abs(rho - (1 + math.sqrt(5)) / 2) < 1e-9
        assert err < 1e-6

    def test_trivial_component_radius_zero(self):
        g = parse_graph("vertex a")
        assert spectral_radius(g, ("a",)) == (0.0, 0.0)

    def test_row_sum_bounds(self, corpus):
        for g in corpus[:80]:
            report = scc_decomposition(g)
            for comp in report.components:
                if comp.trivial:
                    continue
                inside = set(comp.vertices)
                sums = [
                    sum(k for w, k in g.out_edges(v) if w in inside)
                    for v in comp.vertices
                ]
                assert min(sums) - 1e-9 <= comp.radius <= max(sums) + 1e-9

    def test_whole_graph_radius_is_max_component_radius(self, ex61, ex62, corpus):
        for g in (ex61, ex62):
            report = scc_decomposition(g)
            expected = _oracle_power_radius(g.adjacency_rows())
            assert abs(max(c.radius for c in report.components) - expected) < 1e-6
        for g in corpus[:60]:
            report = scc_decomposition(g)
            from_components = max(c.radius for c in report.components)
            eigen = np.abs(np.linalg.eigvals(np.array(g.adjacency_rows(), dtype=float)))
            assert abs(from_components - (eigen.max() if eigen.size else 0.0)) < 1e-8


class TestPeriod:
    def test_loops_force_period_one(self, ex61):
        assert period(ex61, ("v",)) == 1

    def test_ex62_periods(self, ex62):
        report = scc_decomposition(ex62)
        by_color = {c.vertices[0][0]: c.period for c in report.components}
        assert by_color == {"g": 3, "o": 4, "b": 4, "r": 3}

    def test_cycle_free_component_has_no_period(self):
        g = parse_graph("vertex a")
        with pytest.raises(ValueError, match="no cycle"):
            period(g, ("a",))

    def test_period_divides_sampled_cycle_lengths(self, ex62):
        report = scc_decomposition(ex62)
        rng = random.Random(99)
        for comp in report.components:
            inside = set(comp.vertices)
            start = comp.vertices[0]
            for _ in range(50):
                length = 0
                v = start
                while True:
                    targets = [w for w, _ in ex62.out_edges(v) if w in inside]
                    v = rng.choice(targets)
                    length += 1
                    if v == start:
                        break
                assert length % comp.period == 0


class TestCriticalTemperature:
    def test_ex61_values(self, ex61):
        assert abs(critical_temperature(ex61, "v").value - math.log(2)) < 1e-9
        assert abs(critical_temperature(ex61, "w").value - math.log(3)) < 1e-9

    def test_witness_component(self, ex61):
        crit = critical_temperature(ex61, "w")
        assert crit.witness == ("w",)

    def test_dag_has_no_critical_temperature(self):
        g = parse_graph("vertex a\nvertex b\nedge a b")
        assert critical_temperature(g, "a").value == NEG_INF
        assert critical_temperature(g, "b").value == NEG_INF

    def test_monotone_along_reachability(self, ex61, ex62, corpus):
        for g in [ex61, ex62] + corpus[:60]:
            report = scc_decomposition(g)
            betas = vertex_betas(g, report)
            for u in g.vertices:
                for v in g.vertices:
                    if reaches(g, u, v):
                        assert betas[u].value <= betas[v].value + 1e-9

    def test_max_beta_equals_log_radius(self, ex61, ex62, corpus):
        for g in [ex61, ex62] + corpus[:60]:
            report = scc_decomposition(g)
            if not any(c.has_cycle for c in report.components):
                continue
            top = max(b.value for b in vertex_betas(g, report).values())
            assert abs(top - graph_log_radius(report)) < 1e-9

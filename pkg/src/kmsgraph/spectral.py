"""Strongly connected components, spectral radii, periods, and critical
inverse temperatures.

The critical inverse temperature of a vertex is the maximum of log rho(A_C)
over the components C that reach it and contain a cycle; it is -inf when no
cycle reaches the vertex.  Radii of algebraic multiplicity live on the float
axis, so every comparison goes through an explicit relative tolerance with a
near-tie warning channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, UnknownVertexError
from .graph import DirectedMultigraph

RADIUS_TOL = 1e-9
POWER_TOL = 1e-12
MAX_POWER_ITER = 10**5

NEG_INF = float("-inf")


@dataclass(frozen=True)
class ComponentData:
    """One strongly connected component with its spectral data.

    ``period`` is None exactly when the component contains no cycle (a
    singleton without a loop); reporting a fake gcd would be worse.
    """

    vertices: tuple[str, ...]
    radius: float
    radius_error: float
    period: int | None
    trivial: bool
    has_cycle: bool


@dataclass(frozen=True)
class SccReport:
    """Component list, condensation DAG, and reachability closure.

    Components are indexed by the declaration order of their first vertex.
    ``reachable[i]`` holds every j (including i) such that component i has a
    path into component j.
    """

    components: tuple[ComponentData, ...]
    membership: dict[str, int]
    edges: frozenset[tuple[int, int]]
    reachable: tuple[frozenset[int], ...]

    def component_of(self, v: str) -> int:
        try:
            return self.membership[v]
        except KeyError:
            raise UnknownVertexError(f"unknown vertex {v!r}") from None

    def components_reaching(self, v: str) -> list[int]:
        target = self.component_of(v)
        return [i for i, reach in enumerate(self.reachable) if target in reach]


@dataclass(frozen=True)
class CriticalTemperature:
    """Critical inverse temperature of a vertex.

    ``value`` is -inf when no component with a cycle reaches the vertex;
    ``witness`` names the component attaining the maximum and ``tolerance``
    carries the error bound of its radius estimate, mapped through log.
    """

    value: float
    witness: tuple[str, ...] | None
    tolerance: float


def radii_close(a: float, b: float, tol: float = RADIUS_TOL) -> bool:
    """Relative near-tie test used for every radius comparison."""
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _strongly_connected_components(g: DirectedMultigraph) -> list[list[str]]:
    """Iterative Tarjan; components come out sinks-first."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    components: list[list[str]] = []
    counter = 0

    for root in g.vertices:
        if root in index:
            continue
        work: list[tuple[str, int]] = [(root, 0)]
        while work:
            v, edge_pos = work[-1]
            if edge_pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            advanced = False
            neighbors = g.out_edges(v)
            while edge_pos < len(neighbors):
                w = neighbors[edge_pos][0]
                edge_pos += 1
                if w not in index:
                    work[-1] = (v, edge_pos)
                    work.append((w, 0))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                components.append(comp)
    return components


def _is_pure_cycle(g: DirectedMultigraph, comp: set[str]) -> list[int] | None:
    """Multiplicities around the cycle when each vertex has exactly one
    in-component successor and the successors form a single cycle."""
    succ: dict[str, tuple[str, int]] = {}
    for v in comp:
        inside = [(w, k) for w, k in g.out_edges(v) if w in comp]
        if len(inside) != 1:
            return None
        succ[v] = inside[0]
    start = next(iter(comp))
    mults = []
    v = start
    for _ in range(len(comp)):
        w, k = succ[v]
        mults.append(k)
        v = w
    return mults if v == start else None


def _nth_root(product: int, n: int) -> float:
    root = product ** (1.0 / n)
    nearest = round(root)
    if nearest > 0 and nearest**n == product:
        return float(nearest)
    # one Newton step tightens the float pow to ~1 ulp
    return root - (root**n - product) / (n * root ** (n - 1))


def spectral_radius(
    g: DirectedMultigraph,
    component: tuple[str, ...],
    tol: float = POWER_TOL,
    max_iter: int = MAX_POWER_ITER,
) -> tuple[float, float]:
    """Spectral radius of the adjacency matrix restricted to ``component``.

    Returns (estimate, error bound).  Singletons and pure cycles short-circuit
    to exact values; otherwise runs power iteration on A + I (the shift kills
    periodicity) until successive Rayleigh quotients differ by less than
    ``tol``, with Collatz-Wielandt min/max ratios as the reported bound.
    """
    comp = set(component)
    if len(comp) == 1:
        v = next(iter(comp))
        return float(g.multiplicity(v, v)), 0.0
    cycle_mults = _is_pure_cycle(g, comp)
    if cycle_mults is not None:
        product = 1
        for k in cycle_mults:
            product *= k
        rho = _nth_root(product, len(cycle_mults))
        return rho, 8 * np.finfo(float).eps * rho

    order = [v for v in g.vertices if v in comp]
    pos = {v: i for i, v in enumerate(order)}
    n = len(order)
    shifted = np.zeros((n, n))
    for v in order:
        for w, k in g.out_edges(v):
            if w in comp:
                shifted[pos[v], pos[w]] = k
    shifted += np.eye(n)

    x = np.ones(n)
    previous = None
    lo = hi = None
    for _ in range(max_iter):
        y = shifted @ x
        ratios = y / x
        lo, hi = ratios.min(), ratios.max()
        rayleigh = float(x @ y) / float(x @ x)
        x = y / np.linalg.norm(y)
        if previous is not None and abs(rayleigh - previous) < tol:
            error = max(hi - rayleigh, rayleigh - lo)
            return rayleigh - 1.0, float(error)
        previous = rayleigh
    raise ConvergenceError(
        f"power iteration did not converge within {max_iter} iterations",
        bracket=(float(lo) - 1.0, float(hi) - 1.0),
    )


def period(g: DirectedMultigraph, component: tuple[str, ...]) -> int:
    """Gcd of cycle lengths inside a component, via BFS level differences."""
    comp = set(component)
    start = component[0]
    levels = {start: 0}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for w, _ in g.out_edges(v):
                if w in comp and w not in levels:
                    levels[w] = levels[v] + 1
                    nxt.append(w)
        frontier = nxt
    g_div = 0
    for v in component:
        for w, _ in g.out_edges(v):
            if w in comp:
                g_div = math.gcd(g_div, levels[v] + 1 - levels[w])
    if g_div == 0:
        raise ValueError("period is undefined: component contains no cycle")
    return g_div


def scc_decomposition(
    g: DirectedMultigraph,
    tol: float = POWER_TOL,
    max_iter: int = MAX_POWER_ITER,
) -> SccReport:
    """Component partition plus condensation DAG with transitive reachability."""
    raw = _strongly_connected_components(g)
    raw.sort(key=lambda comp: min(g.index_of(v) for v in comp))

    membership: dict[str, int] = {}
    components: list[ComponentData] = []
    for i, comp in enumerate(raw):
        comp_sorted = tuple(sorted(comp, key=g.index_of))
        for v in comp_sorted:
            membership[v] = i
        has_cycle = len(comp_sorted) > 1 or g.multiplicity(comp_sorted[0], comp_sorted[0]) > 0
        radius, err = spectral_radius(g, comp_sorted, tol=tol, max_iter=max_iter)
        components.append(
            ComponentData(
                vertices=comp_sorted,
                radius=radius,
                radius_error=err,
                period=period(g, comp_sorted) if has_cycle else None,
                trivial=not has_cycle,
                has_cycle=has_cycle,
            )
        )

    edges: set[tuple[int, int]] = set()
    for src, dst, _ in g.edges():
        i, j = membership[src], membership[dst]
        if i != j:
            edges.add((i, j))

    succ: dict[int, list[int]] = {i: [] for i in range(len(components))}
    for i, j in edges:
        succ[i].append(j)
    reachable: list[frozenset[int]] = []
    for i in range(len(components)):
        seen = {i}
        frontier = [i]
        while frontier:
            c = frontier.pop()
            for d in succ[c]:
                if d not in seen:
                    seen.add(d)
                    frontier.append(d)
        reachable.append(frozenset(seen))

    return SccReport(tuple(components), membership, frozenset(edges), tuple(reachable))


def critical_temperature(
    g: DirectedMultigraph,
    v: str,
    report: SccReport | None = None,
    tol: float = RADIUS_TOL,
) -> CriticalTemperature:
    """Max of log rho(A_C) over components with a cycle that reach ``v``."""
    if report is None:
        report = scc_decomposition(g)
    else:
        report.component_of(v)
    best: ComponentData | None = None
    for i in report.components_reaching(v):
        comp = report.components[i]
        if not comp.has_cycle:
            continue
        if best is None or comp.radius > best.radius:
            best = comp
    if best is None:
        return CriticalTemperature(NEG_INF, None, 0.0)
    log_error = best.radius_error / best.radius if best.radius > 0 else 0.0
    return CriticalTemperature(math.log(best.radius), best.vertices, log_error)


def vertex_betas(
    g: DirectedMultigraph, report: SccReport | None = None, tol: float = RADIUS_TOL
) -> dict[str, CriticalTemperature]:
    if report is None:
        report = scc_decomposition(g)
    return {v: critical_temperature(g, v, report, tol) for v in g.vertices}


def graph_log_radius(report: SccReport) -> float:
    """log rho(A_E), derived from component radii; -inf for cycle-free graphs."""
    radii = [c.radius for c in report.components if c.has_cycle]
    return math.log(max(radii)) if radii else NEG_INF

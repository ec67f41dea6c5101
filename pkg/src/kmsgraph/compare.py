"""Path-count fingerprints, invariant comparison, and graph reconstruction.

The per-vertex sequence of fixed-target path counts is an isomorphism
invariant; equality of the count multisets is a necessary condition that can
be refuted level by level.  The deeper table of source-resolved counts
determines the graph completely: its n = 1 slice is the adjacency matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SpectralDataError
from .graph import DirectedMultigraph, path_counts

ISO_VERTEX_CAP = 10


@dataclass(frozen=True)
class Fingerprint:
    """Per-vertex path-count series (|E^n v|) up to a fixed depth."""

    depth: int
    series: dict[str, tuple[int, ...]]

    def multiset(self) -> tuple[tuple[int, ...], ...]:
        """Order-independent view, invariant under vertex renaming."""
        return tuple(sorted(self.series.values()))


def fingerprint(g: DirectedMultigraph, depth: int) -> Fingerprint:
    if depth < 0:
        raise ValueError("depth must be >= 0")
    return Fingerprint(
        depth, {v: path_counts(g, v, depth).totals for v in g.vertices}
    )


@dataclass(frozen=True)
class MatchResult:
    """Outcome of comparing two fingerprint multisets level by level.

    When not refuted, ``classes`` pairs up the vertices with equal series and
    ``bijection_count`` is the number of series-compatible bijections.
    """

    refuted: bool
    refuted_at: int | None
    classes: tuple[tuple[tuple[int, ...], tuple[str, ...], tuple[str, ...]], ...]
    bijection_count: int


def match_vertices(g: DirectedMultigraph, h: DirectedMultigraph, depth: int) -> MatchResult:
    """Refute or constrain bijections between vertex sets via fingerprints."""
    fg = fingerprint(g, depth)
    fh = fingerprint(h, depth)
    for n in range(depth + 1):
        left = sorted(s[: n + 1] for s in fg.series.values())
        right = sorted(s[: n + 1] for s in fh.series.values())
        if left != right:
            return MatchResult(True, n, (), 0)

    by_series_g: dict[tuple[int, ...], list[str]] = {}
    for v, s in fg.series.items():
        by_series_g.setdefault(s, []).append(v)
    by_series_h: dict[tuple[int, ...], list[str]] = {}
    for v, s in fh.series.items():
        by_series_h.setdefault(s, []).append(v)

    classes = []
    count = 1
    for s in sorted(by_series_g):
        classes.append((s, tuple(by_series_g[s]), tuple(by_series_h[s])))
        for k in range(2, len(by_series_g[s]) + 1):
            count *= k
    return MatchResult(False, None, tuple(classes), count)


@dataclass(frozen=True)
class SpectralData:
    """Source-resolved path counts: table[(w, v, n)] = |wE^n v|.

    This is the eigenspace-dimension data attached to the ground state of each
    vertex; the n = 0 slice is the identity.
    """

    vertices: tuple[str, ...]
    depth: int
    table: dict[tuple[str, str, int], int]

    def count(self, w: str, v: str, n: int) -> int:
        return self.table.get((w, v, n), 0)


def spectral_data(g: DirectedMultigraph, depth: int | None = None) -> SpectralData:
    if depth is None:
        depth = max(1, 2 * g.vertex_count)
    table: dict[tuple[str, str, int], int] = {}
    for v in g.vertices:
        counts = path_counts(g, v, depth)
        for n in range(depth + 1):
            for w, c in counts.counts[n].items():
                if c:
                    table[w, v, n] = c
    return SpectralData(g.vertices, depth, table)


def reconstruct(data: SpectralData) -> DirectedMultigraph:
    """Rebuild the graph from its source-resolved count table.

    Only the n = 1 slice defines edges; the deeper slices are validated
    against the power recursion and inconsistent data is rejected.
    """
    if data.depth < 1:
        raise SpectralDataError("reconstruction needs the n = 1 slice")
    vertices = data.vertices
    for key, value in data.table.items():
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise SpectralDataError(f"count at {key!r} must be a nonnegative integer")
    for w in vertices:
        for v in vertices:
            expected = 1 if w == v else 0
            if data.count(w, v, 0) != expected:
                raise SpectralDataError(
                    f"n = 0 slice is not the identity at ({w!r}, {v!r})"
                )

    edges = [
        (w, v, data.count(w, v, 1))
        for w in vertices
        for v in vertices
        if data.count(w, v, 1) > 0
    ]
    g = DirectedMultigraph(vertices, edges)

    for n in range(2, data.depth + 1):
        for v in vertices:
            counts = path_counts(g, v, n)
            for w in vertices:
                if data.count(w, v, n) != counts.count(w, n):
                    raise SpectralDataError(
                        f"slice n = {n} at ({w!r}, {v!r}) is inconsistent with the "
                        "n = 1 slice"
                    )
    return g


NOT_BRATTELI = None


def bratteli_levels(g: DirectedMultigraph) -> dict[str, int] | None:
    """Assign levels of a truncated level diagram, or None when the graph is
    not one (a cycle, several top vertices, or a level that is not filled).

    The level of a vertex is the largest n with a path of length n into it.
    """
    n_limit = g.vertex_count
    levels: dict[str, int] = {}
    for v in g.vertices:
        totals = path_counts(g, v, n_limit).totals
        if totals[n_limit] != 0:
            return NOT_BRATTELI  # a path as long as the vertex count means a cycle
        levels[v] = max(n for n in range(n_limit + 1) if totals[n] != 0)

    by_level: dict[int, set[str]] = {}
    for v, n in levels.items():
        by_level.setdefault(n, set()).add(v)
    top = by_level.get(0, set())
    if len(top) != 1:
        return NOT_BRATTELI
    depth = max(by_level)
    for n in range(depth + 1):
        if n not in by_level:
            return NOT_BRATTELI
    for v in g.vertices:
        targets = {w for w, _ in g.out_edges(v)}
        if targets and any(levels[w] != levels[v] + 1 for w in targets):
            return NOT_BRATTELI
        if not targets and levels[v] != depth:
            return NOT_BRATTELI  # every vertex off the last level must emit
    for n in range(depth):
        ranges = set()
        for v in by_level[n]:
            ranges.update(w for w, _ in g.out_edges(v))
        if ranges != by_level[n + 1]:
            return NOT_BRATTELI
    return levels


def isomorphic(g: DirectedMultigraph, h: DirectedMultigraph) -> bool:
    """Multiplicity-exact isomorphism test for desk-scale graphs.

    Backtracking over bijections, pruned by fingerprint classes; both graphs
    must have at most ISO_VERTEX_CAP vertices.
    """
    if g.vertex_count > ISO_VERTEX_CAP or h.vertex_count > ISO_VERTEX_CAP:
        raise ValueError(f"isomorphism search is capped at {ISO_VERTEX_CAP} vertices")
    if g.vertex_count != h.vertex_count or g.edge_count != h.edge_count:
        return False
    depth = 2 * g.vertex_count
    match = match_vertices(g, h, depth)
    if match.refuted:
        return False

    candidates: dict[str, tuple[str, ...]] = {}
    for _, left, right in match.classes:
        for v in left:
            candidates[v] = right

    order = sorted(g.vertices, key=lambda v: len(candidates[v]))
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def extend(position: int) -> bool:
        if position == len(order):
            return True
        v = order[position]
        for image in candidates[v]:
            if image in used:
                continue
            ok = True
            for placed, placed_image in mapping.items():
                if g.multiplicity(v, placed) != h.multiplicity(image, placed_image):
                    ok = False
                    break
                if g.multiplicity(placed, v) != h.multiplicity(placed_image, image):
                    ok = False
                    break
            if ok and g.multiplicity(v, v) == h.multiplicity(image, image):
                mapping[v] = image
                used.add(image)
                if extend(position + 1):
                    return True
                del mapping[v]
                used.discard(image)
        return False

    return extend(0)

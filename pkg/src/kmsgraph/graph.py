"""Directed multigraphs: text/JSON ingestion, exact path counting, reachability.

Parallel edges are stored as multiplicities, never as named edge objects.
Graphs are immutable after construction and every operation here is a pure
function, so results can be shared freely between threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import GraphParseError, PathLimitError, UnknownVertexError

DEFAULT_PATH_CAP = 10**6

_INFINITY_TOKENS = {"inf", "infinity", "-inf", "oo"}


class DirectedMultigraph:
    """Finite directed multigraph with nonnegative integer multiplicities.

    Vertex order is the declaration order, which fixes matrix indices and
    makes every downstream report deterministic.
    """

    __slots__ = ("vertices", "_index", "_mult", "_out", "_in")

    def __init__(self, vertices, edges=()):
        vertices = tuple(vertices)
        index: dict[str, int] = {}
        for v in vertices:
            if not isinstance(v, str) or not v or any(ch.isspace() for ch in v):
                raise ValueError(f"invalid vertex id {v!r}: ids are nonempty strings without whitespace")
            if v in index:
                raise ValueError(f"duplicate vertex id {v!r}")
            index[v] = len(index)
        mult: dict[tuple[str, str], int] = {}
        for src, dst, k in edges:
            if src not in index:
                raise ValueError(f"edge endpoint {src!r} is not a declared vertex")
            if dst not in index:
                raise ValueError(f"edge endpoint {dst!r} is not a declared vertex")
            if not isinstance(k, int) or isinstance(k, bool) or k < 1:
                raise ValueError(f"edge multiplicity must be a positive integer, got {k!r}")
            mult[src, dst] = mult.get((src, dst), 0) + k

        self.vertices = vertices
        self._index = index
        self._mult = mult
        out: dict[str, list[tuple[str, int]]] = {v: [] for v in vertices}
        inc: dict[str, list[tuple[str, int]]] = {v: [] for v in vertices}
        for (src, dst), k in sorted(mult.items(), key=lambda e: (index[e[0][0]], index[e[0][1]])):
            out[src].append((dst, k))
            inc[dst].append((src, k))
        self._out = {v: tuple(lst) for v, lst in out.items()}
        self._in = {v: tuple(lst) for v, lst in inc.items()}

    # -- basic queries ----------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        """Total number of edges, counting multiplicities."""
        return sum(self._mult.values())

    def index_of(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise UnknownVertexError(f"unknown vertex {v!r}") from None

    def __contains__(self, v) -> bool:
        return v in self._index

    def multiplicity(self, src: str, dst: str) -> int:
        self.index_of(src)
        self.index_of(dst)
        return self._mult.get((src, dst), 0)

    def out_edges(self, v: str) -> tuple[tuple[str, int], ...]:
        """Pairs (target, multiplicity) for edges leaving ``v``, in vertex order."""
        self.index_of(v)
        return self._out[v]

    def in_edges(self, v: str) -> tuple[tuple[str, int], ...]:
        """Pairs (source, multiplicity) for edges entering ``v``, in vertex order."""
        self.index_of(v)
        return self._in[v]

    def edges(self) -> tuple[tuple[str, str, int], ...]:
        return tuple(
            (src, dst, k)
            for (src, dst), k in sorted(
                self._mult.items(), key=lambda e: (self._index[e[0][0]], self._index[e[0][1]])
            )
        )

    def adjacency_rows(self) -> list[list[int]]:
        """Adjacency matrix as nested lists; rows are edge sources."""
        n = len(self.vertices)
        rows = [[0] * n for _ in range(n)]
        for (src, dst), k in self._mult.items():
            rows[self._index[src]][self._index[dst]] = k
        return rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirectedMultigraph):
            return NotImplemented
        return self.vertices == other.vertices and self._mult == other._mult

    def __hash__(self):
        return hash((self.vertices, frozenset(self._mult.items())))

    def __repr__(self) -> str:
        return f"DirectedMultigraph({len(self.vertices)} vertices, {self.edge_count} edges)"


# -- ingestion -------------------------------------------------------------


def parse_graph(text: str) -> DirectedMultigraph:
    """Parse the line-based edge-list format.

    Recognised lines: ``# comment``, ``vertex <id>``, and
    ``edge <src> <dst> [<multiplicity>]`` (default 1, repeats accumulate).
    Vertices must be declared before use; isolated vertices are meaningful.
    """
    vertices: list[str] = []
    declared: set[str] = set()
    edges: list[tuple[str, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "vertex":
            if len(parts) != 2:
                raise GraphParseError("vertex line must be 'vertex <id>'", lineno)
            vid = parts[1]
            if vid in declared:
                raise GraphParseError(f"duplicate vertex {vid!r}", lineno)
            declared.add(vid)
            vertices.append(vid)
        elif parts[0] == "edge":
            if len(parts) not in (3, 4):
                raise GraphParseError("edge line must be 'edge <src> <dst> [<multiplicity>]'", lineno)
            src, dst = parts[1], parts[2]
            for endpoint in (src, dst):
                if endpoint not in declared:
                    raise GraphParseError(f"endpoint {endpoint!r} is not a declared vertex", lineno)
            mult = 1
            if len(parts) == 4:
                token = parts[3]
                if token.lower() in _INFINITY_TOKENS:
                    raise GraphParseError("infinite edge multiplicity is not supported", lineno)
                try:
                    mult = int(token)
                except ValueError:
                    raise GraphParseError(f"multiplicity {token!r} is not an integer", lineno) from None
                if mult < 1:
                    raise GraphParseError(f"multiplicity must be >= 1, got {mult}", lineno)
            edges.append((src, dst, mult))
        else:
            raise GraphParseError(f"unknown directive {parts[0]!r}", lineno)
    return DirectedMultigraph(vertices, edges)


def graph_from_json(document: str | dict) -> DirectedMultigraph:
    """Parse the JSON mirror: {"vertices": [...], "edges": [{"from","to","mult"}]}."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GraphParseError(f"invalid JSON: {exc}") from None
    if not isinstance(document, dict) or "vertices" not in document:
        raise GraphParseError("JSON graph must be an object with a 'vertices' list")
    vertices = document["vertices"]
    edges = []
    for entry in document.get("edges", []):
        try:
            src, dst = entry["from"], entry["to"]
        except (TypeError, KeyError):
            raise GraphParseError(f"edge entry {entry!r} needs 'from' and 'to'") from None
        mult = entry.get("mult", 1)
        if not isinstance(mult, int) or isinstance(mult, bool) or mult < 1:
            raise GraphParseError(f"edge multiplicity {mult!r} must be a positive integer")
        edges.append((src, dst, mult))
    try:
        return DirectedMultigraph(vertices, edges)
    except ValueError as exc:
        raise GraphParseError(str(exc)) from None


def graph_to_json(g: DirectedMultigraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"from": src, "to": dst, "mult": k} for src, dst, k in g.edges()],
    }


# -- exact path counting ----------------------------------------------------


@dataclass(frozen=True)
class PathCountTable:
    """Exact counts of paths ending at ``base``.

    ``counts[n][w]`` is the number of length-``n`` paths from ``w`` into the
    base vertex; ``totals[n]`` sums the row.  All entries are exact integers.
    """

    base: str
    depth: int
    counts: tuple[dict[str, int], ...]
    totals: tuple[int, ...]

    def count(self, w: str, n: int) -> int:
        return self.counts[n].get(w, 0)


def path_counts(g: DirectedMultigraph, v: str, depth: int) -> PathCountTable:
    """Count paths of each length up to ``depth`` ending at ``v``.

    Uses the backward recursion: a length-(n+1) path from ``w`` is an edge
    ``w -> u`` followed by a length-n path from ``u``.
    """
    g.index_of(v)
    if depth < 0:
        raise ValueError("depth must be >= 0")
    current = {v: 1}
    layers = [dict(current)]
    totals = [1]
    for _ in range(depth):
        nxt: dict[str, int] = {}
        for u, c in current.items():
            for w, k in g.in_edges(u):
                nxt[w] = nxt.get(w, 0) + k * c
        layers.append(nxt)
        totals.append(sum(nxt.values()))
        current = nxt
    return PathCountTable(v, depth, tuple(layers), tuple(totals))


def enumerate_paths(
    g: DirectedMultigraph, v: str, depth: int, cap: int = DEFAULT_PATH_CAP
) -> list[tuple[tuple[str, str, int], ...]]:
    """Explicitly list every path of length <= ``depth`` ending at ``v``.

    A path is a tuple of edges (src, dst, copy-index); parallel edges are
    distinguished by index 0..k-1 and the empty tuple is the length-0 path at
    ``v``.  This is the brute-force oracle for :func:`path_counts`; it refuses
    to run past ``cap`` paths rather than truncating silently.
    """
    table = path_counts(g, v, depth)
    expected = sum(table.totals)
    if expected > cap:
        raise PathLimitError(
            f"{expected} paths of length <= {depth} end at {v!r}, cap is {cap}"
        )
    out: list[tuple[tuple[str, str, int], ...]] = []
    stack: list[tuple[tuple[tuple[str, str, int], ...], str]] = [((), v)]
    while stack:
        path, source = stack.pop()
        out.append(path)
        if len(path) < depth:
            for u, k in g.in_edges(source):
                for copy in range(k):
                    stack.append((((u, source, copy),) + path, u))
    return out


# -- reachability and hereditary sets ----------------------------------------


def reaches(g: DirectedMultigraph, u: str, v: str) -> bool:
    """True when there is a path (possibly of length 0) from ``u`` to ``v``."""
    g.index_of(v)
    seen = {u}
    frontier = [u]
    g.index_of(u)
    while frontier:
        w = frontier.pop()
        if w == v:
            return True
        for x, _ in g.out_edges(w):
            if x not in seen:
                seen.add(x)
                frontier.append(x)
    return v in seen


def hereditary_closure(g: DirectedMultigraph, seed: set[str] | frozenset[str]) -> set[str]:
    """Least superset of ``seed`` closed under forward reachability."""
    closure = set()
    frontier = []
    for v in seed:
        g.index_of(v)
        closure.add(v)
        frontier.append(v)
    while frontier:
        w = frontier.pop()
        for x, _ in g.out_edges(w):
            if x not in closure:
                closure.add(x)
                frontier.append(x)
    return closure


def restrict(g: DirectedMultigraph, keep: set[str] | frozenset[str]) -> DirectedMultigraph:
    """Subgraph on ``keep``: retains only edges with both endpoints inside."""
    for v in keep:
        g.index_of(v)
    vertices = [v for v in g.vertices if v in keep]
    edges = [(src, dst, k) for src, dst, k in g.edges() if src in keep and dst in keep]
    return DirectedMultigraph(vertices, edges)

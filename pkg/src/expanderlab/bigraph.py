"""Immutable bipartite multigraphs with indexed edge access and text-file I/O.

Vertices on each side are dense 0-based integers.  Multi-edges are allowed
(and matter: unique neighbours are defined by incident *edge* count), while
self-loops cannot occur since every edge joins a left vertex to a right
vertex.  Graphs are frozen after construction and safe to share between
concurrent workers.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path


class GraphFormatError(ValueError):
    """Base class for problems with the on-disk graph formats."""


class MalformedHeaderError(GraphFormatError):
    """Magic line or header fields do not match the expected format."""


class TruncatedFileError(GraphFormatError):
    """File ends before the header is complete."""


class IndexOutOfRangeError(GraphFormatError):
    """An edge endpoint falls outside the declared vertex ranges."""


LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True)
class VertexSet:
    """A duplicate-free, sorted set of vertex indices on one side of a bipartition."""

    side: str
    members: tuple[int, ...]

    def __post_init__(self):
        if self.side not in (LEFT, RIGHT):
            raise ValueError(f"side must be {LEFT!r} or {RIGHT!r}, got {self.side!r}")
        norm = tuple(sorted(set(int(m) for m in self.members)))
        if norm and norm[0] < 0:
            raise ValueError("vertex indices must be nonnegative")
        object.__setattr__(self, "members", norm)

    @classmethod
    def left(cls, members) -> "VertexSet":
        return cls(LEFT, tuple(members))

    @classmethod
    def right(cls, members) -> "VertexSet":
        return cls(RIGHT, tuple(members))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, v) -> bool:
        return v in set(self.members)


@dataclass(frozen=True)
class BipartiteMultigraph:
    """Bipartite multigraph stored as an ordered edge list.

    The edge order is significant: for each right vertex v the i-th incident
    edge (in list order) defines the indexed neighbour map E(v, i) used by the
    routed product.
    """

    n_left: int
    n_right: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n_left < 0 or self.n_right < 0:
            raise ValueError("side sizes must be nonnegative")
        norm = tuple((int(u), int(v)) for u, v in self.edges)
        for u, v in norm:
            if not (0 <= u < self.n_left):
                raise ValueError(f"left endpoint {u} out of range [0, {self.n_left})")
            if not (0 <= v < self.n_right):
                raise ValueError(f"right endpoint {v} out of range [0, {self.n_right})")
        object.__setattr__(self, "edges", norm)

    # -- derived views (computed once; the graph is immutable) --

    @cached_property
    def left_degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n_left
        for u, _ in self.edges:
            deg[u] += 1
        return tuple(deg)

    @cached_property
    def right_degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n_right
        for _, v in self.edges:
            deg[v] += 1
        return tuple(deg)

    @cached_property
    def right_ports(self) -> tuple[tuple[int, ...], ...]:
        """For each right vertex v, the ordered left endpoints E(v, 0), E(v, 1), ..."""
        ports: list[list[int]] = [[] for _ in range(self.n_right)]
        for u, v in self.edges:
            ports[v].append(u)
        return tuple(tuple(p) for p in ports)

    @cached_property
    def left_neighbour_counts(self) -> tuple[dict[int, int], ...]:
        """For each left vertex, a map right-vertex -> edge multiplicity."""
        counts: list[Counter] = [Counter() for _ in range(self.n_left)]
        for u, v in self.edges:
            counts[u][v] += 1
        return tuple(dict(c) for c in counts)

    def port(self, v: int, i: int) -> int:
        """The indexed neighbour E(v, i)."""
        return self.right_ports[v][i]

    def biregularity(self) -> tuple[int, int] | None:
        """(c, d) when every left degree is c and every right degree is d, else None."""
        if self.n_left == 0 or self.n_right == 0:
            return None
        cs = set(self.left_degrees)
        ds = set(self.right_degrees)
        if len(cs) == 1 and len(ds) == 1:
            return cs.pop(), ds.pop()
        return None

    def require_biregular(self) -> tuple[int, int]:
        bireg = self.biregularity()
        if bireg is None:
            raise ValueError("graph is not biregular")
        return bireg

    def is_connected(self) -> bool:
        """True when the underlying bipartite graph is connected (ignoring multiplicity)."""
        n = self.n_left + self.n_right
        if n == 0:
            return True
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in set(self.edges):
            adj[u].append(self.n_left + v)
            adj[self.n_left + v].append(u)
        seen = [False] * n
        stack = [0]
        seen[0] = True
        while stack:
            w = stack.pop()
            for x in adj[w]:
                if not seen[x]:
                    seen[x] = True
                    stack.append(x)
        return all(seen)

    def biadjacency(self):
        """Dense integer biadjacency matrix B with B[u, v] = multiplicity of (u, v).

        Rows are left vertices, columns right vertices.  dtype=object keeps all
        downstream operator arithmetic in exact (arbitrary precision) integers.
        """
        import numpy as np

        B = np.zeros((self.n_left, self.n_right), dtype=object)
        for u, v in self.edges:
            B[u, v] += 1
        return B


def degrees(g: BipartiteMultigraph) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Per-vertex incident-edge counts, multi-edges counted with multiplicity."""
    return g.left_degrees, g.right_degrees


def _require_left(s: VertexSet, g: BipartiteMultigraph):
    if s.side != LEFT:
        raise ValueError("vertex set must live on the left side")
    if s.members and s.members[-1] >= g.n_left:
        raise ValueError(f"vertex {s.members[-1]} out of range for left side of size {g.n_left}")


def _edge_counts_into(g: BipartiteMultigraph, s: VertexSet) -> Counter:
    counts: Counter = Counter()
    for u in s:
        for v, mult in g.left_neighbour_counts[u].items():
            counts[v] += mult
    return counts


def neighbourhood(g: BipartiteMultigraph, s: VertexSet) -> VertexSet:
    """N(S): right vertices adjacent to at least one member of S."""
    _require_left(s, g)
    return VertexSet.right(_edge_counts_into(g, s).keys())


def unique_neighbours(g: BipartiteMultigraph, s: VertexSet) -> VertexSet:
    """Right vertices with exactly one incident edge into S.

    Edge multiplicities count: a right vertex joined to a single u in S by a
    double edge is *not* a unique neighbour.
    """
    _require_left(s, g)
    counts = _edge_counts_into(g, s)
    return VertexSet.right(v for v, k in counts.items() if k == 1)


# -- BIGRAPH v1 file format -------------------------------------------------
#
# Line 1: "BIGRAPH v1"
# Line 2: "nl=<int> nr=<int>"
# Then one "u v" pair per line (ASCII decimal, single space, LF endings).
# Repeated lines encode multi-edges; line order defines E(v, i).

_BIGRAPH_MAGIC = "BIGRAPH v1"


def _parse_header_fields(line: str, keys: tuple[str, str]) -> tuple[int, int]:
    parts = line.split(" ")
    if len(parts) != 2:
        raise MalformedHeaderError(f"expected '{keys[0]}=<int> {keys[1]}=<int>', got {line!r}")
    values = []
    for part, key in zip(parts, keys):
        prefix = key + "="
        if not part.startswith(prefix) or not part[len(prefix):].isdigit():
            raise MalformedHeaderError(f"bad header field {part!r} (expected {prefix}<int>)")
        values.append(int(part[len(prefix):]))
    return values[0], values[1]


def _parse_edge_lines(lines: list[str], start_line: int) -> list[tuple[int, int]]:
    edges = []
    for offset, line in enumerate(lines):
        parts = line.split(" ")
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise GraphFormatError(f"line {start_line + offset}: bad edge line {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return edges


def loads_graph(text: str) -> BipartiteMultigraph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 2:
        raise TruncatedFileError("file ends before the two header lines")
    if lines[0] != _BIGRAPH_MAGIC:
        raise MalformedHeaderError(f"expected {_BIGRAPH_MAGIC!r}, got {lines[0]!r}")
    nl, nr = _parse_header_fields(lines[1], ("nl", "nr"))
    edges = _parse_edge_lines(lines[2:], start_line=3)
    for u, v in edges:
        if u >= nl or v >= nr:
            raise IndexOutOfRangeError(f"edge ({u}, {v}) outside ranges nl={nl}, nr={nr}")
    return BipartiteMultigraph(nl, nr, tuple(edges))


def dumps_graph(g: BipartiteMultigraph) -> str:
    lines = [_BIGRAPH_MAGIC, f"nl={g.n_left} nr={g.n_right}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_graph(path) -> BipartiteMultigraph:
    """Read a BIGRAPH v1 file.  Raises the distinct parse errors above."""
    return loads_graph(Path(path).read_text(encoding="ascii"))


def write_graph(g: BipartiteMultigraph, path) -> None:
    """Write bit-exact BIGRAPH v1 (LF endings); read_graph(write_graph(g)) == g."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dumps_graph(g))

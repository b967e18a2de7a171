"""Singular spectrum of the biadjacency operator and bipartite-Ramanujan certification.

A connected (c,d)-biregular graph has top singular value sqrt(cd); it is
bipartite Ramanujan when every other singular value sigma satisfies
sigma = 0 or sqrt(d-1) - sqrt(c-1) <= sigma <= sqrt(d-1) + sqrt(c-1),
the spectrum of the infinite (c,d)-biregular tree.  Also builds edge-vertex
incidence graphs of regular graphs, which are (2,d)-biregular and inherit
Ramanujan-ness from the base graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from expanderlab.bigraph import (
    BipartiteMultigraph,
    GraphFormatError,
    IndexOutOfRangeError,
    MalformedHeaderError,
    TruncatedFileError,
    _parse_edge_lines,
    _parse_header_fields,
)

# Dense symmetric eigensolver contract: absolute eigenvalue error <= 1e-9 is
# comfortably met by LAPACK dsyevd at these sizes; larger inputs are rejected.
MAX_DENSE_DIM = 2000

DEFAULT_TOLERANCE = 1e-6

TRIVIAL = "trivial"
ZERO = "zero"
IN_BAND = "nontrivial-in-band"
VIOLATION = "violation"


@dataclass(frozen=True)
class RegularGraph:
    """d-regular multigraph without self-loops, stored as an unordered edge list."""

    n: int
    d: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        norm = []
        deg = [0] * self.n
        for u, v in self.edges:
            u, v = int(u), int(v)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range [0, {self.n})")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            norm.append((u, v))
            deg[u] += 1
            deg[v] += 1
        if any(x != self.d for x in deg):
            raise ValueError(f"graph is not {self.d}-regular (degrees {sorted(set(deg))})")
        object.__setattr__(self, "edges", tuple(norm))

    @cached_property
    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for u, v in self.edges:
            A[u, v] += 1
            A[v, u] += 1
        return A


@dataclass(frozen=True)
class SpectrumReport:
    c: int
    d: int
    singular_values: tuple[float, ...]
    classifications: tuple[str, ...]
    trivial_multiplicity: int
    ramanujan: bool
    tolerance: float
    band: tuple[float, float]

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "d": self.d,
            "singular_values": list(self.singular_values),
            "classifications": list(self.classifications),
            "trivial_multiplicity": self.trivial_multiplicity,
            "ramanujan": self.ramanujan,
            "tolerance": self.tolerance,
            "band": list(self.band),
        }


def ramanujan_band(c: int, d: int) -> tuple[float, float]:
    return (math.sqrt(d - 1) - math.sqrt(c - 1), math.sqrt(d - 1) + math.sqrt(c - 1))


def spectrum(g: BipartiteMultigraph, tolerance: float = DEFAULT_TOLERANCE) -> SpectrumReport:
    """Singular values of the biadjacency matrix, classified against the tree spectrum.

    The n_left singular values are the square roots of the eigenvalues of
    B B^T.  Requires a connected biregular input: the trivial/nontrivial split
    presumes the top singular value sqrt(cd) has multiplicity one.
    """
    c, d = g.require_biregular()
    if max(g.n_left, g.n_right) > MAX_DENSE_DIM:
        raise ValueError(f"graph too large for the dense eigensolver contract ({MAX_DENSE_DIM})")
    if not g.is_connected():
        raise ValueError("graph is disconnected; trivial multiplicity would exceed 1")
    B = g.biadjacency().astype(float)
    eigs = np.linalg.eigvalsh(B @ B.T)
    sigmas = np.sqrt(np.clip(eigs, 0.0, None))[::-1]

    top = math.sqrt(c * d)
    lo, hi = ramanujan_band(c, d)
    classifications = []
    for s in sigmas:
        if abs(s - top) <= tolerance:
            classifications.append(TRIVIAL)
        elif s <= tolerance:
            classifications.append(ZERO)
        elif lo - tolerance <= s <= hi + tolerance:
            classifications.append(IN_BAND)
        else:
            classifications.append(VIOLATION)

    return SpectrumReport(
        c=c,
        d=d,
        singular_values=tuple(float(s) for s in sigmas),
        classifications=tuple(classifications),
        trivial_multiplicity=classifications.count(TRIVIAL),
        ramanujan=VIOLATION not in classifications,
        tolerance=tolerance,
        band=(lo, hi),
    )


def is_ramanujan(g: BipartiteMultigraph, tolerance: float = DEFAULT_TOLERANCE) -> bool:
    return spectrum(g, tolerance).ramanujan


def incidence_graph(g: RegularGraph) -> BipartiteMultigraph:
    """Edge-vertex incidence graph: left = edges of g (degree 2), right = vertices (degree d)."""
    if g.d < 2:
        raise ValueError("need d >= 2 (d = 1 gives a degenerate Ramanujan band)")
    edges = []
    for e_idx, (u, v) in enumerate(g.edges):
        edges.append((e_idx, u))
        edges.append((e_idx, v))
    return BipartiteMultigraph(len(g.edges), g.n, tuple(edges))


@dataclass(frozen=True)
class IncidenceIdentityReport:
    d: int
    max_residual: float
    squared_singular_values: tuple[float, ...]
    shifted_adjacency_eigenvalues: tuple[float, ...]

    @property
    def ok(self) -> bool:
        return self.max_residual < 1e-8

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "max_residual": self.max_residual,
            "squared_singular_values": list(self.squared_singular_values),
            "shifted_adjacency_eigenvalues": list(self.shifted_adjacency_eigenvalues),
            "ok": self.ok,
        }


def incidence_spectrum_identity_check(g: RegularGraph) -> IncidenceIdentityReport:
    """Check that the incidence graph's squared singular values are d + spec(A).

    Both sides are computed through the float eigensolver, so the residual
    measures the numerical path, not the combinatorial identity.
    """
    inc = incidence_graph(g)
    B = inc.biadjacency().astype(float)
    # B^T B is n x n; the remaining |E| - n squared singular values of B are zeros
    # forced by rank, not covered by the identity.
    sq = np.sort(np.linalg.eigvalsh(B.T @ B))
    shifted = np.sort(g.d + np.linalg.eigvalsh(g.adjacency))
    residual = float(np.max(np.abs(sq - shifted)))
    return IncidenceIdentityReport(
        d=g.d,
        max_residual=residual,
        squared_singular_values=tuple(float(x) for x in sq[::-1]),
        shifted_adjacency_eigenvalues=tuple(float(x) for x in shifted[::-1]),
    )


def kahale_bound(d: int, eps: float) -> float:
    """Average-degree bound 1 + (1+eps) * sqrt(d-1) for small sets in d-regular Ramanujan graphs."""
    if d < 2:
        raise ValueError("need d >= 2")
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return 1.0 + (1.0 + eps) * math.sqrt(d - 1)


# -- GRAPH v1 file format (regular graphs) ----------------------------------
#
# Line 1: "GRAPH v1"; line 2: "n=<int> d=<int>"; then one "u v" line per edge.

_GRAPH_MAGIC = "GRAPH v1"


def loads_regular_graph(text: str) -> RegularGraph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 2:
        raise TruncatedFileError("file ends before the two header lines")
    if lines[0] != _GRAPH_MAGIC:
        raise MalformedHeaderError(f"expected {_GRAPH_MAGIC!r}, got {lines[0]!r}")
    n, d = _parse_header_fields(lines[1], ("n", "d"))
    edges = _parse_edge_lines(lines[2:], start_line=3)
    for u, v in edges:
        if u >= n or v >= n:
            raise IndexOutOfRangeError(f"edge ({u}, {v}) outside range n={n}")
    try:
        return RegularGraph(n, d, tuple(edges))
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from exc


def dumps_regular_graph(g: RegularGraph) -> str:
    lines = [_GRAPH_MAGIC, f"n={g.n} d={g.d}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_regular_graph(path) -> RegularGraph:
    return loads_regular_graph(Path(path).read_text(encoding="ascii"))


def write_regular_graph(g: RegularGraph, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dumps_regular_graph(g))

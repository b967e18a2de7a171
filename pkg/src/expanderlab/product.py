"""The routed product of a big biregular graph with a fixed-size gadget.

One gadget copy is planted per right vertex v of the big graph: the gadget's
left side indexes v's ports (so the gadget must have exactly d left
vertices), and v is replaced by the gadget's right side.  Product edges are

    E' = {(E(v,i), (v,j)) : v in R, (i,j) gadget edge}

with the product right vertex (v,j) stored at index v*|R0| + j, which makes
file output bit-exact across runs.  Unique neighbours are inherited: if the
port set of v in S has a unique neighbour j in the gadget, then (v,j) is a
unique neighbour of S in the product.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from expanderlab.bigraph import (
    BipartiteMultigraph,
    VertexSet,
    _require_left,
    neighbourhood,
    unique_neighbours,
)


@dataclass(frozen=True)
class RoutedProduct:
    big: BipartiteMultigraph
    gadget: BipartiteMultigraph
    product: BipartiteMultigraph
    c: int
    d: int
    c0: int
    d0: int

    @property
    def r0(self) -> int:
        return self.gadget.n_right

    def product_right_index(self, v: int, j: int) -> int:
        return v * self.r0 + j


def routed_product(big: BipartiteMultigraph, gadget: BipartiteMultigraph) -> RoutedProduct:
    """Route every edge of the big graph through the gadget.

    The resulting graph is (c*c0, d0)-biregular with left side L(big) and
    right side R(big) x R(gadget).
    """
    c, d = big.require_biregular()
    c0, d0 = gadget.require_biregular()
    if gadget.n_left != d:
        raise ValueError(
            f"port-count mismatch: gadget has {gadget.n_left} left vertices, "
            f"big graph right-regularity is {d}"
        )
    r0 = gadget.n_right
    ports = big.right_ports
    edges = []
    for v in range(big.n_right):
        pv = ports[v]
        base = v * r0
        for i, j in gadget.edges:
            edges.append((pv[i], base + j))
    product = BipartiteMultigraph(big.n_left, big.n_right * r0, tuple(edges))
    return RoutedProduct(big=big, gadget=gadget, product=product, c=c, d=d, c0=c0, d0=d0)


def port_set(big: BipartiteMultigraph, v: int, s: VertexSet) -> VertexSet:
    """S' = {i : E(v,i) in S}, as left vertices of the gadget indexing v's ports."""
    _require_left(s, big)
    if not 0 <= v < big.n_right:
        raise ValueError(f"right vertex {v} out of range")
    sset = set(s.members)
    return VertexSet.left(i for i, u in enumerate(big.right_ports[v]) if u in sset)


@dataclass(frozen=True)
class InheritanceReport:
    v: int
    ports: tuple[int, ...]
    gadget_unique: tuple[int, ...]
    counterexample: tuple[int, int] | None
    vacuous: bool

    @property
    def ok(self) -> bool:
        return self.counterexample is None

    def to_dict(self) -> dict:
        return {
            "v": self.v,
            "ports": list(self.ports),
            "gadget_unique": list(self.gadget_unique),
            "counterexample": list(self.counterexample) if self.counterexample else None,
            "vacuous": self.vacuous,
            "ok": self.ok,
        }


def inheritance_check(rp: RoutedProduct, s: VertexSet, v: int) -> InheritanceReport:
    """Check unique-neighbour inheritance at right vertex v of the big graph.

    For every unique neighbour j of the port set S' in the gadget, (v,j) must
    be a unique neighbour of S in the product.  A counterexample would falsify
    the inheritance lemma; vacuous means S' had no unique neighbour to test.
    """
    _require_left(s, rp.big)
    sprime = port_set(rp.big, v, s)
    if not sprime.members:
        raise ValueError(f"right vertex {v} is not a neighbour of the set")
    uj = unique_neighbours(rp.gadget, sprime)
    sset = set(s.members)
    counterexample = None
    for j in uj:
        target = rp.product_right_index(v, j)
        incident = sum(1 for u, w in rp.product.edges if w == target and u in sset)
        if incident != 1:
            counterexample = (v, j)
            break
    return InheritanceReport(
        v=v,
        ports=sprime.members,
        gadget_unique=uj.members,
        counterexample=counterexample,
        vacuous=len(uj) == 0,
    )


def per_vertex_isomorphism_check(rp: RoutedProduct) -> bool:
    """Each right-vertex block of the product, relabelled through the port map,
    must reproduce the gadget's edge multiset exactly."""
    r0 = rp.r0
    blocks: list[Counter] = [Counter() for _ in range(rp.big.n_right)]
    for u, w in rp.product.edges:
        blocks[w // r0][(u, w % r0)] += 1
    for v in range(rp.big.n_right):
        pv = rp.big.right_ports[v]
        expected = Counter((pv[i], j) for i, j in rp.gadget.edges)
        if blocks[v] != expected:
            return False
    return True


def product_unique_neighbour_via_gadget(rp: RoutedProduct, s: VertexSet) -> tuple[int, int] | None:
    """Find a product unique neighbour of S through the inheritance route.

    Scans v over N(S) in the big graph; returns the first (v, j) where the
    port set has a gadget unique neighbour, or None when no block yields one.
    """
    for v in neighbourhood(rp.big, s):
        sprime = port_set(rp.big, v, s)
        uj = unique_neighbours(rp.gadget, sprime)
        if uj.members:
            return (v, uj.members[0])
    return None


def export_parity_check(g: BipartiteMultigraph, path) -> None:
    """Write the biadjacency as sparse triplets '<row> <col> <mult>'.

    Rows are right vertices (checks), columns left vertices (variables);
    multiplicities preserve the Tanner-code semantics of repeated edges.
    """
    counts: Counter = Counter()
    for u, v in g.edges:
        counts[(v, u)] += 1
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for (row, col) in sorted(counts):
            fh.write(f"{row} {col} {counts[(row, col)]}\n")

from collections import Counter

import numpy as np
import pytest

from expanderlab.bigraph import BipartiteMultigraph, VertexSet, neighbourhood, unique_neighbours
from expanderlab.gadget import sample_biregular
from expanderlab.product import (
    export_parity_check,
    inheritance_check,
    per_vertex_isomorphism_check,
    port_set,
    product_unique_neighbour_via_gadget,
    routed_product,
)

from graphs import c4, k21, k32


def test_c4_routed_through_k21_is_c4():
    rp = routed_product(c4(), k21())
    assert rp.product.biregularity() == (2, 2)
    assert (rp.product.n_left, rp.product.n_right) == (2, 2)
    assert Counter(rp.product.edges) == Counter(c4().edges)


def test_matching_gadget_gives_private_checks():
    # a perfect-matching gadget (c0 = d0 = 1) assigns each big edge its own right vertex
    big = sample_biregular(6, 3, 2, 4, seed=3)
    matching = BipartiteMultigraph(4, 4, tuple((i, i) for i in range(4)))
    rp = routed_product(big, matching)
    assert set(rp.product.left_degrees) == {2}
    assert set(rp.product.right_degrees) == {1}
    assert len(rp.product.edges) == len(big.edges)


def test_port_mismatch_rejected():
    with pytest.raises(ValueError, match="port-count mismatch"):
        routed_product(k32(), k21())  # gadget left 2 != d = 3


def test_product_edge_order_is_reproducible():
    big = sample_biregular(6, 3, 2, 4, seed=1)
    gadget = sample_biregular(4, 2, 1, 2, seed=2)
    assert routed_product(big, gadget).product.edges == routed_product(big, gadget).product.edges


def test_right_indexing_convention():
    big = sample_biregular(6, 3, 2, 4, seed=1)
    gadget = sample_biregular(4, 2, 2, 4, seed=5)
    rp = routed_product(big, gadget)
    assert rp.product_right_index(2, 1) == 2 * gadget.n_right + 1
    # every edge from block v lands in [v*r0, (v+1)*r0)
    for u, w in rp.product.edges:
        assert 0 <= w < big.n_right * gadget.n_right


def test_port_set_examples():
    g = c4()
    assert port_set(g, 0, VertexSet.left([0])).members == (0,)
    assert port_set(g, 0, VertexSet.left([0, 1])).members == (0, 1)
    assert port_set(g, 0, VertexSet.left([])).members == ()


def test_port_set_with_multi_edges():
    g = BipartiteMultigraph(2, 1, ((0, 0), (0, 0), (1, 0)))
    assert port_set(g, 0, VertexSet.left([0])).members == (0, 1)
    assert port_set(g, 0, VertexSet.left([1])).members == (2,)


def test_inheritance_c4_k21():
    rp = routed_product(c4(), k21())
    rep = inheritance_check(rp, VertexSet.left([0]), 0)
    assert rep.ports == (0,)
    assert rep.gadget_unique == (0,)
    assert rep.ok and not rep.vacuous


def test_inheritance_vacuous():
    rp = routed_product(c4(), k21())
    # both ports of v = 0 are occupied: the K21 gadget has no unique neighbour
    rep = inheritance_check(rp, VertexSet.left([0, 1]), 0)
    assert rep.vacuous and rep.ok


def test_inheritance_requires_neighbour():
    big = sample_biregular(6, 3, 2, 4, seed=1)
    gadget = sample_biregular(4, 2, 1, 2, seed=0)
    rp = routed_product(big, gadget)
    s = VertexSet.left([0])
    non_neighbours = set(range(big.n_right)) - set(neighbourhood(big, s).members)
    for v in non_neighbours:
        with pytest.raises(ValueError, match="not a neighbour"):
            inheritance_check(rp, s, v)


def _random_pairs(count):
    big_params = [(6, 3, 2, 4), (8, 4, 2, 4), (6, 4, 2, 3), (4, 4, 2, 2), (8, 2, 2, 8)]
    gadget_params = {
        4: [(4, 2, 1, 2), (4, 2, 2, 4), (4, 4, 2, 2)],
        3: [(3, 1, 1, 3), (3, 3, 2, 2)],
        2: [(2, 1, 1, 2), (2, 2, 2, 2)],
        8: [(8, 4, 2, 4), (8, 2, 1, 4)],
    }
    made = 0
    seed = 0
    while made < count:
        for bp in big_params:
            for gp in gadget_params[bp[3]]:
                if made >= count:
                    return
                seed += 1
                big = sample_biregular(*bp, seed=seed)
                gadget = sample_biregular(*gp, seed=seed + 1000)
                yield big, gadget
                made += 1


def test_product_laws_random_pairs():
    for big, gadget in _random_pairs(40):
        c, d = big.require_biregular()
        c0, d0 = gadget.require_biregular()
        rp = routed_product(big, gadget)
        assert set(rp.product.left_degrees) == {c * c0}
        assert set(rp.product.right_degrees) == {d0}
        assert len(rp.product.edges) == big.n_right * len(gadget.edges)
        assert per_vertex_isomorphism_check(rp)


def test_inheritance_randomized_trials():
    rng = np.random.Generator(np.random.Philox(2024))
    counterexamples = 0
    trials = 0
    for big, gadget in _random_pairs(25):
        rp = routed_product(big, gadget)
        for _ in range(40):
            size = int(rng.integers(1, min(3, big.n_left) + 1))
            members = sorted(int(x) for x in rng.choice(big.n_left, size=size, replace=False))
            s = VertexSet.left(members)
            nbhd = neighbourhood(big, s).members
            v = int(nbhd[int(rng.integers(0, len(nbhd)))])
            trials += 1
            if not inheritance_check(rp, s, v).ok:
                counterexamples += 1
    assert trials == 1000
    assert counterexamples == 0


def test_end_to_end_unique_neighbour_via_gadget():
    # whenever some block's port set is nonempty and within the gadget's
    # verified size, the product set must have a unique neighbour
    from expanderlab.gadget import verify_unique_neighbour_upto

    big = sample_biregular(6, 3, 2, 4, seed=8)
    gadget = sample_biregular(4, 2, 2, 4, seed=1)
    cert = verify_unique_neighbour_upto(gadget, 1)
    assert cert.verified_k == 1
    rp = routed_product(big, gadget)
    conclusive = 0
    for u in range(big.n_left):
        s = VertexSet.left([u])
        small_ports = [
            v for v in neighbourhood(big, s)
            if 1 <= len(port_set(big, v, s)) <= cert.verified_k
        ]
        if not small_ports:
            continue  # every neighbour sees u through a multi-edge
        conclusive += 1
        assert product_unique_neighbour_via_gadget(rp, s) is not None
        assert len(unique_neighbours(rp.product, s)) > 0
    assert conclusive > 0


def test_parity_check_export(tmp_path):
    g = BipartiteMultigraph(3, 2, ((0, 0), (0, 0), (1, 0), (1, 1), (2, 1)))
    path = tmp_path / "pcm.txt"
    export_parity_check(g, path)
    assert path.read_text() == "0 0 2\n0 1 1\n1 1 1\n1 2 1\n"

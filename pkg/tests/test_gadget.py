from fractions import Fraction

import mpmath as mp
import pytest

from expanderlab.bigraph import VertexSet, unique_neighbours
from expanderlab.gadget import (
    METHOD_NAIVE,
    METHOD_PRUNED,
    GadgetParams,
    lemma7_k_bound,
    lemma7_series_report,
    repeats_probability_bound,
    sample_biregular,
    sample_gadget,
    verify_unique_neighbour_upto,
)

from graphs import GADGET_PARAMS, cycle, k21, k31


# -- the probabilistic-method size bound ---------------------------------------


def test_k_bound_rhs_below_one_gives_zero():
    # R/(3ec) <= 1 forces the right side below 1, so no k >= 1 qualifies
    assert lemma7_k_bound(10, 5, 4) == 0


def test_k_bound_example_zero():
    assert lemma7_k_bound(1000, 200, 6) == 0


def test_k_bound_first_nontrivial():
    # hand-checked desk-scale instance where exactly k = 1 is certified
    assert lemma7_k_bound(13200, 11000, 5) == 1


def test_k_bound_requires_c_above_three():
    with pytest.raises(ValueError):
        lemma7_k_bound(100, 50, 3)


def test_k_bound_monotonic_in_R():
    base = lemma7_k_bound(13200, 11000, 5)
    # growing R (fixing L, c) can only help
    assert lemma7_k_bound(13200, 12000, 5) >= base
    # growing L (fixing R, c) can only hurt
    assert lemma7_k_bound(20000, 11000, 5) <= base


def test_k_bound_accepts_fraction_R():
    q, alpha, c0 = 18908, Fraction(2), 10
    L = q ** 3 + 1
    R = Fraction(L) / (alpha * (q + 1))
    # just above the threshold the certified size reaches q + 1
    assert lemma7_k_bound(L, R, c0) >= q + 1


# -- sampling -------------------------------------------------------------------


def test_sample_unique_matching():
    p = GadgetParams(L=2, R=1, c=1, d=2)
    assert sample_gadget(p).edges == k21().edges


def test_sample_deterministic():
    p = GadgetParams(L=12, R=8, c=4, d=6, seed=77)
    assert sample_gadget(p) == sample_gadget(p)


def test_sample_seed_changes_output():
    a = sample_biregular(12, 8, 4, 6, seed=0)
    b = sample_biregular(12, 8, 4, 6, seed=1)
    assert a != b


def test_sample_biregular_degree_audit():
    for seed in range(100):
        g = sample_biregular(12, 8, 4, 6, seed=seed)
        assert set(g.left_degrees) == {4}
        assert set(g.right_degrees) == {6}


def test_params_validation():
    with pytest.raises(ValueError):
        GadgetParams(L=4, R=4, c=2, d=2)  # L must exceed R
    with pytest.raises(ValueError):
        GadgetParams(L=4, R=2, c=2, d=3)  # slot mismatch
    with pytest.raises(ValueError):
        sample_biregular(4, 2, 2, 3)


# -- exhaustive verification -----------------------------------------------------


def test_verify_k31():
    cert = verify_unique_neighbour_upto(k31(), 2)
    assert cert.verified_k == 1
    assert cert.witness == (0, 1)
    assert len(cert.witness) == cert.verified_k + 1


def test_verify_c6_gadget():
    cert = verify_unique_neighbour_upto(cycle(3), 3)
    assert cert.verified_k == 2
    assert cert.witness == (0, 1, 2)


def test_verify_vacuous():
    cert = verify_unique_neighbour_upto(k31(), 0)
    assert cert.verified_k == 0
    assert cert.witness is None
    assert not cert.budget_exhausted


def test_verify_budget_exhaustion():
    g = sample_biregular(8, 4, 2, 4, seed=0)
    # budget covers the 8 singletons but not the 28 pairs
    cert = verify_unique_neighbour_upto(g, 3, budget=8)
    assert cert.budget_exhausted
    assert cert.verified_k == 1
    assert cert.witness is None
    assert cert.subsets_checked == 8


def test_verify_k_cap():
    with pytest.raises(ValueError, match="cap"):
        verify_unique_neighbour_upto(k31(), 13)


def test_witness_has_no_unique_neighbour():
    for idx, (L, R, c, d) in enumerate(GADGET_PARAMS):
        g = sample_biregular(L, R, c, d, seed=idx)
        cert = verify_unique_neighbour_upto(g, min(L, 6))
        if cert.witness is not None:
            assert len(unique_neighbours(g, VertexSet.left(cert.witness))) == 0
            # everything strictly below the failing size passed
            assert len(cert.witness) == cert.verified_k + 1


def test_pruned_equals_naive_small():
    for idx, (L, R, c, d) in enumerate(GADGET_PARAMS[:5]):
        for seed in range(4):
            g = sample_biregular(L, R, c, d, seed=seed * 31 + idx)
            a = verify_unique_neighbour_upto(g, min(L, 6), method=METHOD_NAIVE)
            b = verify_unique_neighbour_upto(
                g, min(L, 6), method=METHOD_PRUNED, audit_pruning=True
            )
            assert a.verified_k == b.verified_k
            assert a.witness == b.witness
            assert b.prune_counterexamples == 0


def test_methods_enumerate_same_count_when_unpruned():
    g = sample_biregular(6, 3, 2, 4, seed=5)
    a = verify_unique_neighbour_upto(g, 6, method=METHOD_NAIVE)
    b = verify_unique_neighbour_upto(g, 6, method=METHOD_PRUNED)
    assert a.subsets_checked == b.subsets_checked


# -- repeats probability bound ----------------------------------------------------


def test_repeats_bound_k0_convention():
    assert repeats_probability_bound(100, 50, 4, 0) == 1.0


def test_repeats_bound_clamped_to_one():
    assert repeats_probability_bound(1000, 200, 6, 1) == 1.0


def test_repeats_bound_matches_direct_evaluation():
    # small instance where the expression is genuinely below 1
    L, R, c, k = 13200, 11000, 5, 1
    got = repeats_probability_bound(L, R, c, k)
    with mp.workdps(60):
        direct = (mp.mpf(L) * mp.e / k * (3 * mp.e * c * k / mp.mpf(R)) ** (mp.mpf(c - 1) / 2)) ** k
    assert got == pytest.approx(float(direct), rel=1e-12)


def test_repeats_bound_precision_stable():
    low = repeats_probability_bound(13200, 11000, 5, 1, precision=30)
    high = repeats_probability_bound(13200, 11000, 5, 1, precision=90)
    assert low == pytest.approx(high, rel=1e-12)


def test_series_report_certifies_existence():
    rep = lemma7_series_report(13200, 11000, 5, 1)
    assert rep["inner"] <= 0.5
    assert rep["existence_certified"]
    assert rep["per_size_sum"] < 1
    assert rep["geometric_sum"] < 1


def test_repeats_bound_requires_c3():
    with pytest.raises(ValueError):
        repeats_probability_bound(10, 5, 2, 1)


# -- the probabilistic method meets reality ---------------------------------------


@pytest.mark.slow
def test_empirical_success_rate_at_certified_k():
    # smallest desk-scale parameters where the bound certifies k = 1; sampled
    # gadgets should then pass verification at k = 1 with positive frequency
    L, R, c, d = 13200, 11000, 5, 6
    k = lemma7_k_bound(L, R, c)
    assert k == 1
    successes = 0
    trials = 3
    for seed in range(trials):
        g = sample_biregular(L, R, c, d, seed=seed)
        cert = verify_unique_neighbour_upto(g, k)
        if cert.verified_k == k:
            successes += 1
    assert successes > 0

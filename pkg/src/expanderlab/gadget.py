"""Random biregular gadgets and exhaustive unique-neighbour verification.

A gadget is a fixed-size (c,d)-biregular bipartite graph whose small left
sets all have unique neighbours.  Sampling follows the uniform half-edge
matching model: the L*c left slots are matched to the R*d right slots by a
uniformly random bijection (multi-edges allowed; rejecting them would change
the distribution).  The probabilistic method certifies set sizes up to the
largest k with

    k^((c-3)/2) <= 1/(2Le) * (R/(3ec))^((c-1)/2)

and verification below that scale is plain subset enumeration, optionally
pruned by the counting argument: a set whose neighbourhood exceeds half its
outgoing edge count must have a unique neighbour.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
import numpy as np

from expanderlab.bigraph import BipartiteMultigraph, VertexSet

DEFAULT_SUBSET_BUDGET = 10 ** 8
MAX_VERIFY_K = 12

METHOD_NAIVE = "exhaustive"
METHOD_PRUNED = "exhaustive-pruned"

# comparisons of log-domain quantities closer than this are re-run at
# triple precision before deciding (transcendental constants preclude
# exact arithmetic)
COMPARISON_MARGIN = 1e-12


@dataclass(frozen=True)
class GadgetParams:
    """Side sizes, regularities and RNG seed for a gadget draw.

    Requires L > R >= 1 and Lc = Rd.  (c > 3 is needed only by the Lemma-7
    style bound, not for sampling.)
    """

    L: int
    R: int
    c: int
    d: int
    seed: int = 0

    def __post_init__(self):
        if not self.L > self.R >= 1:
            raise ValueError("need L > R >= 1")
        if self.c < 1 or self.d < 1:
            raise ValueError("regularities must be positive")
        if self.L * self.c != self.R * self.d:
            raise ValueError(f"slot mismatch: L*c = {self.L_c} != R*d = {self.R * self.d}")

    @property
    def L_c(self) -> int:
        return self.L * self.c

    def to_dict(self) -> dict:
        return {"L": self.L, "R": self.R, "c": self.c, "d": self.d, "seed": self.seed}


def _log_rhs(L, R, c) -> mp.mpf:
    """log of 1/(2Le) * (R/(3ec))^((c-1)/2), with R allowed rational."""
    if isinstance(R, Fraction):
        log_r = mp.log(R.numerator) - mp.log(R.denominator)
    else:
        log_r = mp.log(R)
    return -(mp.log(2 * L) + 1) + mp.mpf(c - 1) / 2 * (log_r - (mp.log(3) + 1 + mp.log(c)))


def lemma7_k_bound(L: int, R, c: int, precision: int = 30) -> int:
    """Largest integer k with k^((c-3)/2) <= 1/(2Le) * (R/(3ec))^((c-1)/2).

    Evaluated in log domain at the requested precision; 0 means the
    probabilistic method certifies nothing.  R may be a Fraction (the routed
    construction evaluates this at rational gadget side sizes).
    """
    if c <= 3:
        raise ValueError("the probabilistic bound needs c > 3")
    if not L > R >= 1:
        raise ValueError("need L > R >= 1")

    def solve(dps: int) -> tuple[int, mp.mpf]:
        with mp.workdps(dps):
            rhs = _log_rhs(L, R, c)
            if rhs < 0:
                return 0, mp.mpf(1)
            half = mp.mpf(c - 3) / 2
            k = max(1, int(mp.floor(mp.e ** (rhs / half))))
            while half * mp.log(k + 1) <= rhs:
                k += 1
            while k >= 1 and half * mp.log(k) > rhs:
                k -= 1
            margin = abs(half * mp.log(max(k, 1)) - rhs)
            return k, margin

    k, margin = solve(precision)
    if margin < COMPARISON_MARGIN:
        k, _ = solve(3 * precision)
    return k


def sample_biregular(n_left: int, n_right: int, c: int, d: int, seed: int = 0) -> BipartiteMultigraph:
    """Uniform (c,d)-biregular multigraph via a random bijection of half-edge slots.

    Deterministic for a fixed seed (Philox 4x64 counter-based generator).
    """
    if n_left < 1 or n_right < 1 or c < 1 or d < 1:
        raise ValueError("sides and regularities must be positive")
    if n_left * c != n_right * d:
        raise ValueError(f"slot mismatch: {n_left}*{c} != {n_right}*{d}")
    rng = np.random.Generator(np.random.Philox(seed))
    perm = rng.permutation(n_right * d)
    edges = tuple((t // c, int(perm[t]) // d) for t in range(n_left * c))
    return BipartiteMultigraph(n_left, n_right, edges)


def sample_gadget(p: GadgetParams) -> BipartiteMultigraph:
    return sample_biregular(p.L, p.R, p.c, p.d, p.seed)


@dataclass(frozen=True)
class GadgetCertificate:
    """Outcome of exhaustive unique-neighbour verification up to a target size.

    verified_k is the largest size k such that *every* nonempty left set of
    size <= k has a unique neighbour.  When verification failed, witness is
    the lexicographically smallest bad set at the smallest failing size
    (so |witness| = verified_k + 1); minimality is by size only.
    """

    graph: BipartiteMultigraph
    target_k: int
    verified_k: int
    witness: tuple[int, ...] | None
    method: str
    subsets_checked: int
    budget_exhausted: bool
    prune_counterexamples: int = 0

    def to_dict(self) -> dict:
        return {
            "target_k": self.target_k,
            "verified_k": self.verified_k,
            "witness": list(self.witness) if self.witness is not None else None,
            "method": self.method,
            "subsets_checked": self.subsets_checked,
            "budget_exhausted": self.budget_exhausted,
            "prune_counterexamples": self.prune_counterexamples,
        }


def _verify_naive(g: BipartiteMultigraph, k: int, budget: int):
    """Reference enumerator: recount neighbour multiplicities for every subset."""
    counts_by_vertex = g.left_neighbour_counts
    checked = 0
    for size in range(1, k + 1):
        if math.comb(g.n_left, size) > budget - checked:
            return size - 1, None, checked, True
        for comb in itertools.combinations(range(g.n_left), size):
            checked += 1
            merged: dict[int, int] = {}
            for u in comb:
                for v, mult in counts_by_vertex[u].items():
                    merged[v] = merged.get(v, 0) + mult
            if not any(m == 1 for m in merged.values()):
                return size - 1, comb, checked, False
    return k, None, checked, False


def _verify_pruned(g: BipartiteMultigraph, k: int, budget: int, audit: bool):
    """DFS enumerator with incremental counts and the counting-argument prune.

    Visits subsets of each size in lexicographic order, like the naive
    enumerator, so both report identical witnesses.  When the neighbourhood of
    S is larger than half the edges leaving S, S is accepted without the exact
    test; with audit=True the exact test runs anyway and disagreements are
    counted (soundness check of the prune).
    """
    counts_by_vertex = [sorted(c.items()) for c in g.left_neighbour_counts]
    degree = g.left_degrees
    counts = [0] * g.n_right
    state = {"covered": 0, "unique": 0, "edges": 0, "checked": 0,
             "prune_bad": 0, "witness": None}

    def push(u: int):
        for v, mult in counts_by_vertex[u]:
            old = counts[v]
            counts[v] = old + mult
            if old == 0:
                state["covered"] += 1
            if old == 1:
                state["unique"] -= 1
            if counts[v] == 1:
                state["unique"] += 1
        state["edges"] += degree[u]

    def pop(u: int):
        for v, mult in counts_by_vertex[u]:
            old = counts[v]
            counts[v] = old - mult
            if counts[v] == 0:
                state["covered"] -= 1
            if old == 1:
                state["unique"] -= 1
            if counts[v] == 1:
                state["unique"] += 1
        state["edges"] -= degree[u]

    def dfs(start: int, remaining: int, stack: list[int]) -> bool:
        """Returns False when a witness was found (abort)."""
        if remaining == 0:
            state["checked"] += 1
            if 2 * state["covered"] > state["edges"]:
                if audit and state["unique"] == 0:
                    state["prune_bad"] += 1
                return True
            if state["unique"] == 0:
                state["witness"] = tuple(stack)
                return False
            return True
        for u in range(start, g.n_left - remaining + 1):
            push(u)
            stack.append(u)
            ok = dfs(u + 1, remaining - 1, stack)
            stack.pop()
            pop(u)
            if not ok:
                return False
        return True

    for size in range(1, k + 1):
        if math.comb(g.n_left, size) > budget - state["checked"]:
            return size - 1, None, state["checked"], True, state["prune_bad"]
        if not dfs(0, size, []):
            return size - 1, state["witness"], state["checked"], False, state["prune_bad"]
    return k, None, state["checked"], False, state["prune_bad"]


def verify_unique_neighbour_upto(
    g: BipartiteMultigraph,
    k: int,
    budget: int = DEFAULT_SUBSET_BUDGET,
    method: str = METHOD_PRUNED,
    audit_pruning: bool = False,
) -> GadgetCertificate:
    """Exhaustively check that every nonempty left set of size <= k has a unique neighbour.

    k = 0 passes vacuously.  If a size would blow the subset budget the
    certificate reports the largest fully enumerated size with
    budget_exhausted set, rather than raising.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k > MAX_VERIFY_K:
        raise ValueError(f"k = {k} exceeds the enumeration cap {MAX_VERIFY_K}")
    if method not in (METHOD_NAIVE, METHOD_PRUNED):
        raise ValueError(f"unknown method {method!r}")
    k = min(k, g.n_left)
    if method == METHOD_NAIVE:
        verified_k, witness, checked, exhausted = _verify_naive(g, k, budget)
        prune_bad = 0
    else:
        verified_k, witness, checked, exhausted, prune_bad = _verify_pruned(
            g, k, budget, audit_pruning
        )
    return GadgetCertificate(
        graph=g,
        target_k=k,
        verified_k=verified_k,
        witness=witness,
        method=method,
        subsets_checked=checked,
        budget_exhausted=exhausted,
        prune_counterexamples=prune_bad,
    )


def has_unique_neighbour(g: BipartiteMultigraph, s: VertexSet) -> bool:
    from expanderlab.bigraph import unique_neighbours

    return len(unique_neighbours(g, s)) > 0


def _log_inner(L: int, R, c: int, k: int) -> mp.mpf:
    """log of (Le/k) * (3eck/R)^((c-1)/2), the per-size union bound base."""
    if isinstance(R, Fraction):
        log_r = mp.log(R.numerator) - mp.log(R.denominator)
    else:
        log_r = mp.log(R)
    return (mp.log(L) + 1 - mp.log(k)
            + mp.mpf(c - 1) / 2 * (mp.log(3) + 1 + mp.log(c) + mp.log(k) - log_r))


def repeats_probability_bound(L: int, R, c: int, k: int, precision: int = 30) -> float:
    """Union-bound probability that some size-k left set has no unique neighbour.

    Evaluates ((Le/k) (3eck/R)^((c-1)/2))^k in log domain and clamps to [0, 1].
    k = 0 returns 1 by convention (no certificate).
    """
    if c < 3:
        raise ValueError("the repeats argument needs c >= 3")
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return 1.0
    with mp.workdps(precision):
        log_total = k * _log_inner(L, R, c, k)
        if log_total >= 0:
            return 1.0
        return float(mp.e ** log_total)


def lemma7_series_report(L: int, R, c: int, k: int, precision: int = 30) -> dict:
    """Replicate the geometric-series step of the existence proof.

    inner is the union-bound base at size k; when inner <= 1/2 the total
    failure probability over all sizes 1..k is strictly below 1, so a good
    gadget exists.  per_size_sum is the exact sum of the per-size bounds.
    """
    if c < 3:
        raise ValueError("needs c >= 3")
    if k < 1:
        raise ValueError("k must be >= 1")
    with mp.workdps(precision):
        inner = mp.e ** _log_inner(L, R, c, k)
        per_size = mp.mpf(0)
        for a in range(1, k + 1):
            per_size += mp.e ** (a * _log_inner(L, R, c, a))
        geometric = inner / (1 - inner) if inner < 1 else mp.inf
        return {
            "inner": float(inner),
            "per_size_sum": float(per_size),
            "geometric_sum": float(geometric),
            "existence_certified": bool(inner <= mp.mpf(1) / 2),
        }

"""Small-support subcodes of a linear code: counting bounds and ISD search.

A d-dimensional subcode with support size w packs d independent parity
equations into w coordinates. Counting bounds say when such a subcode
exists in a random code; the randomized search below finds one by
permuting coordinates, putting the generator in systematic form, and
scanning d-row subsets for small joint support.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations
from math import ceil, expm1, inf, log, log1p, log2

import numpy as np

from .fieldmath import rank, solve_row_combination
from .logmath import log2_comb, log2_qpow_m1, log2_sum
from . import backend


class SubcodeSearchError(RuntimeError):
    """Iteration budget exhausted without finding a qualifying subcode."""


@dataclass(frozen=True)
class Subcode:
    """d-dimensional subspace with support confined to w coordinates."""

    generator: np.ndarray  # d x n
    support: np.ndarray  # sorted column indices carrying a nonzero entry

    @property
    def dimension(self) -> int:
        return self.generator.shape[0]

    @property
    def support_size(self) -> int:
        return len(self.support)


@dataclass(frozen=True)
class SubcodeCountBounds:
    """log2 bounds on the expected number of (w, d) subcodes of a random code."""

    lower_log2: float
    upper_log2: float


def gaussian_binomial_log2(k: int, d: int, q: int) -> float:
    """log2 of the q-binomial [k, d]_q, the number of d-dim subspaces of F_q^k."""
    if not 0 <= d <= k:
        raise ValueError(f"need 0 <= d <= k, got k={k}, d={d}")
    out = 0.0
    for i in range(d):
        out += log2_qpow_m1(q, k - i) - log2_qpow_m1(q, i + 1)
    return out


def count_bounds(n: int, k: int, w: int, d: int, q: int) -> SubcodeCountBounds:
    """Expected-count bounds for dimension-d, support-w subcodes of a random
    [n, k] code over GF(q). For d = 1 the two bounds coincide exactly.
    """
    if d < 1 or d > min(w, k) or w > n:
        raise ValueError(f"need 1 <= d <= min(w, k) and w <= n; got n={n} k={k} w={w} d={d}")
    ratio = gaussian_binomial_log2(k, d, q) - gaussian_binomial_log2(n, d, q)
    base = log2_comb(n, w) + ratio
    lower = base + (w - d) * log2_qpow_m1(q, d)
    upper = base + w * log2_qpow_m1(q, d)
    for i in range(d):
        # q^d - q^i = q^i (q^(d-i) - 1)
        upper -= i * log2(q) + log2_qpow_m1(q, d - i)
    return SubcodeCountBounds(lower_log2=lower, upper_log2=upper)


def success_probability(n: int, k: int, d: int, w: int) -> float:
    """Chance that one ISD iteration lands a given (w, d) subcode: the
    random information set must meet its support in exactly d positions.
    """
    lp = log2_comb(w, d) + log2_comb(n - w, k - d) - log2_comb(n, k)
    return 2.0**lp


def _systematic_form(G: np.ndarray, sigma: np.ndarray, q: int) -> np.ndarray | None:
    """RREF of the column-permuted generator on its first k columns."""
    work = np.ascontiguousarray(G[:, sigma]) % q
    if not backend.impl.rref_in_place(work, np.arange(G.shape[0], dtype=np.int64), q):
        return None
    return work


def isd_iteration(G: np.ndarray, w: int, d: int, q: int, rng) -> Subcode | None:
    """One randomized search round; None on the (frequent, retried) misses.

    Deterministic given the rng state: row subsets are scanned in
    lexicographic order and the first qualifying one is returned. The
    returned support size is matched to w exactly, never below.
    """
    return _isd_iteration(G, w, d, q, rng)


def find_subcode(
    G: np.ndarray,
    w: int,
    d: int,
    q: int,
    rng,
    max_iters: int | None = None,
) -> Subcode:
    """Repeat ISD iterations until a (w, d) subcode of the row space shows up.

    The default budget targets a residual failure probability of 2^-10
    given the expected subcode count; raises SubcodeSearchError past it.
    """
    k, n = G.shape
    _check_isd_feasible(n, k, w, d)
    bounds = count_bounds(n, k, w, d, q)
    if bounds.lower_log2 <= 0.0:
        warnings.warn(
            f"expected subcode count 2^{bounds.lower_log2:.2f} <= 1 for "
            f"(n={n}, k={k}, w={w}, d={d}); search will likely exhaust",
            stacklevel=2,
        )
    if max_iters is None:
        max_iters = default_iteration_budget(n, k, w, d, q)
    for _ in range(max_iters):
        sub = _isd_iteration(G, w, d, q, rng)
        if sub is None:
            continue
        if sub.support_size != w or rank(sub.generator, q) != d:
            raise AssertionError("ISD returned a malformed subcode")
        if solve_row_combination(sub.generator, G, q) is None:
            raise AssertionError("ISD returned rows outside the row space")
        return sub
    raise SubcodeSearchError(
        f"no (w={w}, d={d}) subcode found in {max_iters} iterations"
    )


def default_iteration_budget(n: int, k: int, w: int, d: int, q: int) -> int:
    p_hat = _per_iteration_success(n, k, w, d, q)
    if p_hat <= 0.0:
        return 1
    return max(1, ceil(10.0 * log(2.0) / p_hat))


def _per_iteration_success(n: int, k: int, w: int, d: int, q: int) -> float:
    p = success_probability(n, k, d, w)
    if p >= 1.0:
        return 1.0
    count = 2.0 ** count_bounds(n, k, w, d, q).lower_log2
    return -expm1(max(count, 1.0) * log1p(-p))


def _check_isd_feasible(n: int, k: int, w: int, d: int):
    if not 1 <= d <= k:
        raise ValueError(f"need 1 <= d <= k, got d={d}, k={k}")
    if not d <= w <= n + d - k:
        raise ValueError(f"need d <= w <= n + d - k, got w={w} (n={n}, k={k}, d={d})")


def _isd_iteration(G: np.ndarray, w: int, d: int, q: int, rng) -> Subcode | None:
    k, n = G.shape
    sigma = rng.permutation(n)
    work = _systematic_form(G, sigma, q)
    if work is None:
        return None
    nonzero = work[:, k:] != 0
    rows = None
    if d == 1:
        hits = np.flatnonzero(nonzero.sum(axis=1) == w - 1)
        if len(hits):
            rows = (int(hits[0]),)
    else:
        for subset in combinations(range(k), d):
            if int(nonzero[list(subset)].any(axis=0).sum()) == w - d:
                rows = subset
                break
    if rows is None:
        return None
    generator = np.zeros((d, n), dtype=np.int64)
    generator[:, sigma] = work[list(rows)]
    support = np.flatnonzero(generator.any(axis=0))
    return Subcode(generator=generator, support=support)


def isd_cost_log2(n: int, k: int, w: int, d: int, q: int) -> float:
    """log2 cost of the subcode search: one iteration is an RREF (~k^3) plus
    a scan of C(k, d) row subsets, divided by the per-iteration success rate.
    The hidden constant is taken as 1.
    """
    _check_isd_feasible(n, k, w, d)
    numerator = log2_sum([3.0 * log2(k), log2_comb(k, d)])
    p = success_probability(n, k, d, w)
    if p >= 1.0:
        return numerator
    count = 2.0 ** count_bounds(n, k, w, d, q).lower_log2
    denominator = -expm1(count * log1p(-p))
    if denominator <= 0.0:
        return inf
    return numerator - log2(denominator)

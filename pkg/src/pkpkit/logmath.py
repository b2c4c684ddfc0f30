"""log2-domain arithmetic for counts that overflow any integer type."""

from math import inf, lgamma, log, log1p, log2

_LN2 = log(2.0)


def log2_factorial(n: int) -> float:
    return lgamma(n + 1) / _LN2


def log2_perm(n: int, j: int) -> float:
    """log2 of n!/(n-j)!, the number of ordered j-tuples of distinct items."""
    if not 0 <= j <= n:
        raise ValueError(f"falling factorial undefined for n={n}, j={j}")
    return log2_factorial(n) - log2_factorial(n - j)


def log2_comb(n: int, k: int) -> float:
    if not 0 <= k <= n:
        return -inf
    return log2_factorial(n) - log2_factorial(k) - log2_factorial(n - k)


def log2_sum(terms) -> float:
    """log2 of a sum given the log2 of each term."""
    terms = [t for t in terms if t != -inf]
    if not terms:
        return -inf
    top = max(terms)
    if top == inf:
        return inf
    return top + log2(sum(2.0 ** (t - top) for t in terms))


def log2_qpow_m1(q: int, e: int) -> float:
    """log2(q^e - 1), stable for exponents far beyond float range."""
    if e <= 0:
        raise ValueError("need e >= 1")
    x = float(q) ** -e  # underflows harmlessly to 0 for huge e
    return e * log2(q) + log1p(-x) / _LN2

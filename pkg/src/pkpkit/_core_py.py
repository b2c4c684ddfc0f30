"""Pure-NumPy implementations of the hot kernels.

Same contract as the compiled extension ``pkpkit._core``; selected by
``pkpkit.backend`` when the extension is unavailable (or forced via
``PKPKIT_BACKEND=python``). Correctness first, speed second: the compiled
module exists precisely because these loops dominate solver runtime.
"""

from itertools import islice, permutations

import numpy as np

# Largest entry count for which a float64 matmul of residues is exact:
# j * (q-1)^2 must stay below 2^53.
_FLOAT_EXACT = 2**53


def rref_in_place(a, cols, q):
    """Reduce ``a`` so the columns listed in ``cols`` become, in order, the
    identity. Returns True on success, False as soon as a pivot column has
    no usable nonzero entry (callers resample).
    """
    rows = a.shape[0]
    for t in range(len(cols)):
        col = cols[t]
        pivot = -1
        for i in range(t, rows):
            if a[i, col] % q:
                pivot = i
                break
        if pivot < 0:
            return False
        if pivot != t:
            a[[t, pivot]] = a[[pivot, t]]
        inv = pow(int(a[t, col]) % q, -1, q)
        a[t] = (a[t] * inv) % q
        for i in range(rows):
            if i != t and a[i, col]:
                a[i] = (a[i] - a[i, col] * a[t]) % q
    return True


def rank_mod(a, q):
    """Rank of ``a`` over GF(q). Destroys ``a``."""
    rows, cols = a.shape
    r = 0
    for col in range(cols):
        pivot = -1
        for i in range(r, rows):
            if a[i, col] % q:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != r:
            a[[r, pivot]] = a[[pivot, r]]
        inv = pow(int(a[r, col]) % q, -1, q)
        a[r] = (a[r] * inv) % q
        for i in range(r + 1, rows):
            if a[i, col]:
                a[i] = (a[i] - a[i, col] * a[r]) % q
        r += 1
        if r == rows:
            break
    return r


def _tags_of(vals, coeff, base, sign, q):
    # vals: M x j residues, coeff: t x j -> M x t tags
    j = vals.shape[1]
    if j * (q - 1) ** 2 < _FLOAT_EXACT:
        prod = vals.astype(np.float64) @ coeff.T.astype(np.float64)
        prod = prod.astype(np.int64)
    else:
        prod = np.zeros((vals.shape[0], coeff.shape[0]), dtype=np.int64)
        for b in range(j):
            prod = (prod + vals[:, b, None] * coeff[None, :, b]) % q
    return (base[None, :] + sign * prod) % q


def enumerate_tagged(values, coeff, base, sign, q, group, out_idx, out_keys, out_mask):
    """Fill per-tuple index rows, packed tag keys, and index bitmasks for
    every ordered tuple of distinct indices, in lexicographic tuple order.

    ``coeff`` is t x j; the tag of value tuple x is (base + sign * x coeff^T)
    mod q, packed little-endian base q into ``group`` digits per key word.
    """
    n = len(values)
    j = coeff.shape[1]
    t = coeff.shape[0]
    nkeys = out_keys.shape[1]
    qpow = q ** np.arange(group, dtype=np.int64)
    row = 0
    chunk = 1 << 15
    it = permutations(range(n), j)
    while True:
        block = np.array(list(islice(it, chunk)), dtype=np.int64)
        if block.size == 0:
            break
        m = block.shape[0]
        tags = _tags_of(values[block], coeff, base, sign, q)
        out_idx[row : row + m] = block.astype(out_idx.dtype)
        for g in range(nkeys):
            digits = tags[:, g * group : min((g + 1) * group, t)]
            out_keys[row : row + m, g] = digits @ qpow[: digits.shape[1]]
        np.bitwise_or.reduce(
            (np.uint64(1) << block.astype(np.uint64)), axis=1, out=out_mask[row : row + m]
        )
        row += m


def _group_starts(keys):
    if keys.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    changed = np.flatnonzero((keys[1:] != keys[:-1]).any(axis=1)) + 1
    return np.concatenate(([0], changed))


def _matched_groups(keys_a, keys_b):
    """Pairs of (start, end) slices of equal-key groups across both inputs.

    Inputs must be lexicographically sorted by key row.
    """
    sa = _group_starts(keys_a)
    sb = _group_starts(keys_b)
    if len(sa) == 0 or len(sb) == 0:
        return []
    ua, ub = keys_a[sa], keys_b[sb]
    allk = np.vstack([ua, ub])
    side = np.concatenate([np.zeros(len(sa), np.int8), np.ones(len(sb), np.int8)])
    gidx = np.concatenate([np.arange(len(sa)), np.arange(len(sb))])
    order = np.lexsort(allk.T[::-1])
    allk, side, gidx = allk[order], side[order], gidx[order]
    eq = (allk[1:] == allk[:-1]).all(axis=1) & (side[1:] != side[:-1])
    ends_a = np.concatenate((sa[1:], [keys_a.shape[0]]))
    ends_b = np.concatenate((sb[1:], [keys_b.shape[0]]))
    out = []
    for i in np.flatnonzero(eq):
        ga, gb = (gidx[i], gidx[i + 1]) if side[i] == 0 else (gidx[i + 1], gidx[i])
        out.append((sa[ga], ends_a[ga], sb[gb], ends_b[gb]))
    return out


def join_sorted(keys_a, mask_a, keys_b, mask_b, cap):
    """All (i, k) with equal keys and disjoint masks, in (key, i, k) order.

    Returns (rows_a, rows_b) index arrays, or None once the output would
    exceed ``cap`` pairs.
    """
    groups = _matched_groups(keys_a, keys_b)
    parts_a, parts_b = [], []
    total = 0
    for a0, a1, b0, b1 in groups:
        ia = np.repeat(np.arange(a0, a1), b1 - b0)
        ib = np.tile(np.arange(b0, b1), a1 - a0)
        ok = (mask_a[ia] & mask_b[ib]) == 0
        ia, ib = ia[ok], ib[ok]
        total += len(ia)
        if cap >= 0 and total > cap:
            return None
        parts_a.append(ia)
        parts_b.append(ib)
    if not parts_a:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy()
    return np.concatenate(parts_a), np.concatenate(parts_b)

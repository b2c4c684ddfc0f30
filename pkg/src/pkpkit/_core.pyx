# Hot kernels: GF(q) row reduction, distinct-tuple enumeration with packed
# syndrome tags, and the sorted-list collision join. Mirrors the contract of
# pkpkit._core_py; q < 2^31 keeps every product inside long long.

import numpy as np


cdef inline long long _inv_mod(long long a, long long q) noexcept:
    # extended Euclid; a is nonzero mod q, q prime
    cdef long long old_r = a % q, r = q
    cdef long long old_s = 1, s = 0
    cdef long long quot, tmp
    while r != 0:
        quot = old_r / r
        tmp = old_r - quot * r; old_r = r; r = tmp
        tmp = old_s - quot * s; old_s = s; s = tmp
    old_s %= q
    if old_s < 0:
        old_s += q
    return old_s


def rref_in_place(long long[:, ::1] a, long long[::1] cols, long long q):
    """Make the listed columns the identity, in order; False if singular."""
    cdef Py_ssize_t rows = a.shape[0], width = a.shape[1]
    cdef Py_ssize_t t, i, piv, col, cc
    cdef long long inv, factor, v
    for t in range(cols.shape[0]):
        col = cols[t]
        piv = -1
        for i in range(t, rows):
            if a[i, col] % q != 0:
                piv = i
                break
        if piv < 0:
            return False
        if piv != t:
            for cc in range(width):
                v = a[t, cc]; a[t, cc] = a[piv, cc]; a[piv, cc] = v
        inv = _inv_mod(a[t, col], q)
        for cc in range(width):
            a[t, cc] = (a[t, cc] * inv) % q
        for i in range(rows):
            if i == t:
                continue
            factor = a[i, col] % q
            if factor == 0:
                continue
            for cc in range(width):
                a[i, cc] = (a[i, cc] - factor * a[t, cc]) % q
                if a[i, cc] < 0:
                    a[i, cc] += q
    return True


def rank_mod(long long[:, ::1] a, long long q):
    """Rank over GF(q); destroys a."""
    cdef Py_ssize_t rows = a.shape[0], width = a.shape[1]
    cdef Py_ssize_t r = 0, col, i, piv, cc
    cdef long long inv, factor, v
    for col in range(width):
        piv = -1
        for i in range(r, rows):
            if a[i, col] % q != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for cc in range(width):
                v = a[r, cc]; a[r, cc] = a[piv, cc]; a[piv, cc] = v
        inv = _inv_mod(a[r, col], q)
        for cc in range(width):
            a[r, cc] = (a[r, cc] * inv) % q
        for i in range(r + 1, rows):
            factor = a[i, col] % q
            if factor == 0:
                continue
            for cc in range(width):
                a[i, cc] = (a[i, cc] - factor * a[r, cc]) % q
                if a[i, cc] < 0:
                    a[i, cc] += q
        r += 1
        if r == rows:
            break
    return r


def enumerate_tagged(long long[::1] values, long long[:, ::1] coeff,
                     long long[::1] base, int sign, long long q, int group,
                     signed char[:, ::1] out_idx, long long[:, ::1] out_keys,
                     unsigned long long[::1] out_mask):
    """Every ordered tuple of distinct indices, lexicographic, with packed
    tags (base + sign * x coeff^T mod q) and 64-bit occupancy masks.
    """
    cdef Py_ssize_t n = values.shape[0]
    cdef int t = coeff.shape[0]
    cdef int j = coeff.shape[1]
    cdef int nkeys = out_keys.shape[1]
    cdef long long row = 0
    cdef int depth = 0
    cdef Py_ssize_t i
    cdef int a, g, b, lo, hi
    cdef unsigned long long used = 0
    cdef long long tagv, key

    scratch_partial = np.zeros((j + 1, max(t, 1)), dtype=np.int64)
    scratch_choice = np.zeros(j + 1, dtype=np.int64)
    scratch_picked = np.zeros(max(j, 1), dtype=np.int64)
    qpow_arr = np.ones(max(group, 1), dtype=np.int64)
    for g in range(1, group):
        qpow_arr[g] = qpow_arr[g - 1] * q
    cdef long long[:, ::1] partial = scratch_partial
    cdef long long[::1] choice = scratch_choice
    cdef long long[::1] picked = scratch_picked
    cdef long long[::1] qpow = qpow_arr

    if j == 0:
        return
    while True:
        i = choice[depth]
        if i >= n:
            depth -= 1
            if depth < 0:
                break
            used ^= (<unsigned long long>1) << picked[depth]
            choice[depth] += 1
            continue
        if used & ((<unsigned long long>1) << i):
            choice[depth] += 1
            continue
        for a in range(t):
            partial[depth + 1, a] = (partial[depth, a] + values[i] * coeff[a, depth]) % q
        picked[depth] = i
        if depth == j - 1:
            for b in range(j):
                out_idx[row, b] = <signed char>picked[b]
            out_mask[row] = used | ((<unsigned long long>1) << i)
            for g in range(nkeys):
                key = 0
                lo = g * group
                hi = lo + group
                if hi > t:
                    hi = t
                for b in range(lo, hi):
                    tagv = (base[b] + sign * partial[depth + 1, b]) % q
                    if tagv < 0:
                        tagv += q
                    key += tagv * qpow[b - lo]
                out_keys[row, g] = key
            row += 1
            choice[depth] += 1
        else:
            used |= (<unsigned long long>1) << i
            depth += 1
            choice[depth] = 0


cdef inline int _cmp_rows(long long[:, ::1] a, Py_ssize_t i,
                          long long[:, ::1] b, Py_ssize_t k, int width) noexcept:
    cdef int c
    for c in range(width):
        if a[i, c] < b[k, c]:
            return -1
        if a[i, c] > b[k, c]:
            return 1
    return 0


cdef long long _join_pass(long long[:, ::1] keys_a, unsigned long long[::1] mask_a,
                          long long[:, ::1] keys_b, unsigned long long[::1] mask_b,
                          long long cap, bint fill,
                          long long[::1] out_a, long long[::1] out_b) noexcept:
    cdef Py_ssize_t na = keys_a.shape[0], nb = keys_b.shape[0]
    cdef int width = keys_a.shape[1]
    cdef Py_ssize_t a = 0, b = 0, ea, eb, i, k
    cdef long long total = 0
    cdef int cmp
    while a < na and b < nb:
        cmp = _cmp_rows(keys_a, a, keys_b, b, width)
        if cmp < 0:
            a += 1
            continue
        if cmp > 0:
            b += 1
            continue
        ea = a + 1
        while ea < na and _cmp_rows(keys_a, ea, keys_a, a, width) == 0:
            ea += 1
        eb = b + 1
        while eb < nb and _cmp_rows(keys_b, eb, keys_b, b, width) == 0:
            eb += 1
        for i in range(a, ea):
            for k in range(b, eb):
                if (mask_a[i] & mask_b[k]) == 0:
                    if fill:
                        out_a[total] = i
                        out_b[total] = k
                    total += 1
                    if cap >= 0 and total > cap:
                        return -1
        a = ea
        b = eb
    return total


def join_sorted(keys_a, mask_a, keys_b, mask_b, cap):
    """Index pairs with equal keys and disjoint masks; None past the cap."""
    cdef long long[:, ::1] ka = np.ascontiguousarray(keys_a, dtype=np.int64)
    cdef long long[:, ::1] kb = np.ascontiguousarray(keys_b, dtype=np.int64)
    cdef unsigned long long[::1] ma = np.ascontiguousarray(mask_a, dtype=np.uint64)
    cdef unsigned long long[::1] mb = np.ascontiguousarray(mask_b, dtype=np.uint64)
    cdef long long[::1] dummy = np.empty(0, dtype=np.int64)
    cdef long long count = _join_pass(ka, ma, kb, mb, cap, False, dummy, dummy)
    if count < 0:
        return None
    out_a_arr = np.empty(count, dtype=np.int64)
    out_b_arr = np.empty(count, dtype=np.int64)
    cdef long long[::1] oa = out_a_arr
    cdef long long[::1] ob = out_b_arr
    if count:
        _join_pass(ka, ma, kb, mb, -1, True, oa, ob)
    return out_a_arr, out_b_arr

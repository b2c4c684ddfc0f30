"""Exact dense linear algebra over prime fields GF(q).

Matrices are 2-D ``numpy.int64`` arrays with entries reduced into [0, q).
q is restricted to primes below 2^31 so that products of residues stay
inside int64. Everything here is pure: inputs are never mutated.
"""

from __future__ import annotations

import numpy as np

from . import backend


class PrimeField:
    """GF(q) for a prime q, 2 < q < 2^31."""

    __slots__ = ("q",)

    def __init__(self, q: int):
        q = int(q)
        if not 2 < q < 2**31:
            raise ValueError(f"q={q} out of supported range (2, 2^31)")
        if not _is_prime(q):
            raise ValueError(f"q={q} is not prime")
        self.q = q

    def element(self, value: int) -> int:
        return int(value) % self.q

    def add(self, a, b):
        return (a + b) % self.q

    def sub(self, a, b):
        return (a - b) % self.q

    def mul(self, a, b):
        return (a * b) % self.q

    def neg(self, a):
        return (-a) % self.q

    def inv(self, a):
        a = int(a) % self.q
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, -1, self.q)

    def reduce(self, arr) -> np.ndarray:
        return np.asarray(arr, dtype=np.int64) % self.q

    def random_vector(self, length: int, rng) -> np.ndarray:
        return rng.integers(0, self.q, size=length, dtype=np.int64)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self):
        return hash(("PrimeField", self.q))

    def __repr__(self):
        return f"PrimeField({self.q})"


def _is_prime(n: int) -> bool:
    # Deterministic trial division; q < 2^31 keeps the bound at ~46341.
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def rref(mat: np.ndarray, cols, q: int) -> np.ndarray | None:
    """A_J^{-1} A for J = ``cols``: the listed columns become, in that order,
    the identity. Returns None when the column block is singular.

    Pivoting is deterministic: columns are processed in the order given,
    taking the first usable row at or below the current pivot row.
    """
    mat = np.ascontiguousarray(np.asarray(mat, dtype=np.int64) % q)
    cols = np.ascontiguousarray(cols, dtype=np.int64)
    if len(cols) != mat.shape[0]:
        raise ValueError("need exactly one pivot column per row")
    if len(cols) and (cols.min() < 0 or cols.max() >= mat.shape[1]):
        raise ValueError("pivot column index out of range")
    if not backend.impl.rref_in_place(mat, cols, q):
        return None
    return mat


def rank(mat: np.ndarray, q: int) -> int:
    work = np.ascontiguousarray(np.asarray(mat, dtype=np.int64) % q)
    if work.size == 0:
        return 0
    return backend.impl.rank_mod(work, q)


def random_matrix(rows: int, cols: int, q: int, rng) -> np.ndarray:
    return rng.integers(0, q, size=(rows, cols), dtype=np.int64)


def random_full_rank(rows: int, cols: int, q: int, rng) -> np.ndarray:
    """Uniform full-row-rank matrix, by rejection from uniform matrices."""
    if rows > cols:
        raise ValueError("rows must not exceed cols")
    while True:
        mat = random_matrix(rows, cols, q, rng)
        if rank(mat, q) == rows:
            return mat


def solve_row_combination(target: np.ndarray, basis: np.ndarray, q: int) -> np.ndarray | None:
    """S with target = S basis, for ``basis`` of full row rank.

    None when some target row is outside the row space.
    """
    target = np.atleast_2d(np.asarray(target, dtype=np.int64)) % q
    basis = np.asarray(basis, dtype=np.int64) % q
    b = basis.shape[0]
    # Eliminate on [basis^T | target^T]; consistency leaves zero residual rows.
    aug = np.concatenate([basis.T, target.T], axis=1) % q
    rows = aug.shape[0]
    pivots = []
    r = 0
    for col in range(b):
        pivot = -1
        for i in range(r, rows):
            if aug[i, col] % q:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != r:
            aug[[r, pivot]] = aug[[pivot, r]]
        inv = pow(int(aug[r, col]) % q, -1, q)
        aug[r] = (aug[r] * inv) % q
        for i in range(rows):
            if i != r and aug[i, col]:
                aug[i] = (aug[i] - aug[i, col] * aug[r]) % q
        pivots.append(col)
        r += 1
    if np.any(aug[r:, b:] % q):
        return None
    sol = np.zeros((b, target.shape[0]), dtype=np.int64)
    for row_i, col in enumerate(pivots):
        sol[col] = aug[row_i, b:]
    return sol.T % q


def kernel_basis(mat: np.ndarray, q: int) -> np.ndarray:
    """Rows form a basis of the right kernel {x : mat x^T = 0};
    (cols - rank) rows.
    """
    mat = np.array(mat, dtype=np.int64) % q
    rows, cols = mat.shape
    work = mat.copy()
    pivots = []
    r = 0
    for col in range(cols):
        pivot = -1
        for i in range(r, rows):
            if work[i, col] % q:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != r:
            work[[r, pivot]] = work[[pivot, r]]
        inv = pow(int(work[r, col]) % q, -1, q)
        work[r] = (work[r] * inv) % q
        for i in range(rows):
            if i != r and work[i, col]:
                work[i] = (work[i] - work[i, col] * work[r]) % q
        pivots.append(col)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for out_row, col in enumerate(free):
        basis[out_row, col] = 1
        for row_i, pcol in enumerate(pivots):
            basis[out_row, pcol] = (-work[row_i, col]) % q
    return basis


def matmul_mod(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    """a @ b mod q, using exact float64 BLAS when the sizes permit."""
    a = np.asarray(a, dtype=np.int64) % q
    b = np.asarray(b, dtype=np.int64) % q
    inner = a.shape[-1]
    if inner * (q - 1) ** 2 < 2**53:
        return (a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64) % q
    out = np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
    for i in range(inner):
        out = (out + a[..., i, None] * b[i]) % q
    return out

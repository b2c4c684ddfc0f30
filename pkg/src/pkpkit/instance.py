"""PKP instances: generation, normalization, verification, oracles.

An instance is (q, n, m, A, c): find a permutation p with p(c) A^T = 0.
``extend`` appends the all-ones row (every rearrangement of c preserves
the entry sum), giving the (H, s) system the solvers actually attack.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import permutations as iter_permutations
from math import factorial

import numpy as np

from .fieldmath import PrimeField, kernel_basis, matmul_mod, random_full_rank, rank


class GenerationError(RuntimeError):
    """Resample budget exhausted while planting a distinct-entry kernel vector."""


class RankDeficientError(RuntimeError):
    """All-ones row fell inside the row space of A (probability ~ q^-m)."""


class Permutation:
    """Bijection on {0..n-1}; applying to a vector a gives (a[p[0]], ..., a[p[n-1]])."""

    __slots__ = ("idx",)

    def __init__(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        n = len(idx)
        if not np.array_equal(np.sort(idx), np.arange(n)):
            raise ValueError("not a bijection on {0..n-1}")
        self.idx = idx
        self.idx.setflags(write=False)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n))

    @classmethod
    def random(cls, n: int, rng) -> "Permutation":
        return cls(rng.permutation(n))

    @classmethod
    def from_one_based(cls, seq) -> "Permutation":
        return cls(np.asarray(seq, dtype=np.int64) - 1)

    def to_one_based(self) -> list[int]:
        return [int(i) + 1 for i in self.idx]

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return np.asarray(vec)[self.idx]

    def apply_to_columns(self, mat: np.ndarray) -> np.ndarray:
        return np.asarray(mat)[:, self.idx]

    def inverse(self) -> "Permutation":
        return Permutation(np.argsort(self.idx))

    def __len__(self):
        return len(self.idx)

    def __eq__(self, other):
        return isinstance(other, Permutation) and np.array_equal(self.idx, other.idx)

    def __hash__(self):
        return hash(tuple(int(i) for i in self.idx))

    def __repr__(self):
        return f"Permutation({list(self.idx)})"


@dataclass(frozen=True)
class PkpInstance:
    field: PrimeField
    A: np.ndarray
    c: np.ndarray
    planted: Permutation | None = None

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def q(self) -> int:
        return self.field.q


@dataclass(frozen=True)
class ExtendedSystem:
    """(H, s) with H = A stacked over the all-ones row, s = (0,..,0, sum c)."""

    field: PrimeField
    H: np.ndarray
    s: np.ndarray

    @property
    def n(self) -> int:
        return self.H.shape[1]

    @property
    def r(self) -> int:
        return self.H.shape[0]


class SampleSet:
    """Length-j tuples of distinct entries of c, never materialized.

    Iteration follows lexicographic order of the underlying index tuples;
    there are exactly n!/(n-j)! of them.
    """

    def __init__(self, c, length: int):
        self.c = np.asarray(c)
        self.length = int(length)
        if not 0 <= self.length <= len(self.c):
            raise ValueError("tuple length out of range")

    def __len__(self):
        n = len(self.c)
        return factorial(n) // factorial(n - self.length)

    def index_tuples(self):
        return iter_permutations(range(len(self.c)), self.length)

    def __iter__(self):
        for idx in self.index_tuples():
            yield tuple(int(self.c[i]) for i in idx)


def expected_solutions(n: int, m: int, q: int) -> float:
    """Average count n!/q^m of spurious rearrangements in the kernel."""
    out = 1.0
    for i in range(2, n + 1):
        out *= i
    return out / float(q) ** m


def generate_instance(q: int, n: int, m: int, rng, max_resample: int = 2_000_000) -> PkpInstance:
    """Hardest-case instance: uniform full-rank A, a planted distinct-entry
    kernel vector, and c a uniform shuffle of it.

    The kernel vector (never the matrix) is resampled until its entries are
    pairwise distinct; for q close to n the acceptance rate drops like a
    birthday bound, so draws run in batches against a large total budget.
    Warns (does not fail) when n!/q^m >= 1: such parameters admit many
    solutions and test fixtures use them deliberately.
    """
    if not m < n:
        raise ValueError("need m < n")
    field = PrimeField(q)
    if n > q:
        raise ValueError(f"cannot pick {n} distinct entries from GF({q})")
    if expected_solutions(n, m, q) >= 1.0:
        warnings.warn(
            f"n!/q^m = {expected_solutions(n, m, q):.3g} >= 1: instance is not hard mode",
            stacklevel=2,
        )
    A = random_full_rank(m, n, q, rng)
    ker = kernel_basis(A, q)
    planted_vec = None
    drawn = 0
    while drawn < max_resample:
        batch = min(4096, max_resample - drawn)
        drawn += batch
        coeffs = rng.integers(0, q, size=(batch, ker.shape[0]), dtype=np.int64)
        cands = matmul_mod(coeffs, ker, q)
        ordered = np.sort(cands, axis=1)
        distinct = np.flatnonzero((ordered[:, 1:] != ordered[:, :-1]).all(axis=1))
        if len(distinct):
            planted_vec = cands[distinct[0]]
            break
    if planted_vec is None:
        raise GenerationError(
            f"no distinct-entry kernel vector in {max_resample} draws (q={q}, n={n}, m={m})"
        )
    pi = Permutation.random(n, rng)
    c = planted_vec[np.argsort(pi.idx)]  # planted(c) recovers the kernel vector
    inst = PkpInstance(field=field, A=A, c=c, planted=pi)
    assert verify(inst, pi)
    return inst


def extend(instance: PkpInstance) -> ExtendedSystem:
    q = instance.q
    ones = np.ones((1, instance.n), dtype=np.int64)
    H = np.vstack([instance.A % q, ones])
    if rank(H, q) != instance.m + 1:
        raise RankDeficientError("all-ones row lies in the row space of A; regenerate")
    s = np.zeros(instance.m + 1, dtype=np.int64)
    s[-1] = int(instance.c.sum()) % q
    return ExtendedSystem(field=instance.field, H=H, s=s)


def syndrome(system: ExtendedSystem, vec: np.ndarray) -> np.ndarray:
    return matmul_mod(vec, system.H.T, system.field.q)


def reconstruct(system: ExtendedSystem, J, partial) -> np.ndarray:
    """Fill in the full candidate from its entries on J.

    The r entries off J are forced by the syndrome equations once H
    restricted to the complement of J is nonsingular; propagates the
    singular case as ValueError.
    """
    from .fieldmath import rref

    q = system.field.q
    n = system.n
    J = np.asarray(sorted(int(j) for j in J), dtype=np.int64)
    if len(J) != n - system.r:
        raise ValueError("J must have size n - r")
    partial = np.asarray(partial, dtype=np.int64) % q
    comp = np.setdiff1d(np.arange(n), J)
    aug = np.concatenate([system.H, system.s.reshape(-1, 1)], axis=1)
    red = rref(aug, comp, q)
    if red is None:
        raise ValueError("H restricted to the complement of J is singular")
    out = np.zeros(n, dtype=np.int64)
    out[J] = partial
    s_red = red[:, -1]
    out[comp] = (s_red - matmul_mod(red[:, J], partial, q)) % q
    return out


def verify(instance: PkpInstance, candidate: Permutation) -> bool:
    if len(candidate) != instance.n:
        raise ValueError("permutation length does not match instance")
    image = candidate.apply(instance.c)
    return not np.any(matmul_mod(image, instance.A.T, instance.q))


def brute_force_solve(instance: PkpInstance, cap: int = 10) -> list[Permutation]:
    """All solutions by exhaustive search over S_n. Test oracle; n <= cap."""
    n = instance.n
    if n > cap:
        raise ValueError(f"brute force capped at n={cap}")
    perms = np.array(list(iter_permutations(range(n))), dtype=np.int64)
    images = instance.c[perms]
    synd = matmul_mod(images, instance.A.T, instance.q)
    good = np.flatnonzero(~synd.any(axis=1))
    return [Permutation(perms[i]) for i in good]


def permutation_from_values(c: np.ndarray, target: np.ndarray) -> Permutation:
    """The unique p with p(c) = target, for distinct-entry c."""
    order = {int(v): i for i, v in enumerate(c)}
    try:
        return Permutation(np.array([order[int(v)] for v in target], dtype=np.int64))
    except KeyError as exc:
        raise ValueError("target is not a rearrangement of c") from exc


def write_instance(instance: PkpInstance) -> str:
    lines = [f"PKP {instance.q} {instance.n} {instance.m}"]
    for row in instance.A:
        lines.append(" ".join(str(int(v)) for v in row))
    lines.append(" ".join(str(int(v)) for v in instance.c))
    if instance.planted is not None:
        lines.append("SOLUTION " + " ".join(str(i) for i in instance.planted.to_one_based()))
    return "\n".join(lines) + "\n"


def read_instance(text: str) -> PkpInstance:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if len(head) != 4 or head[0] != "PKP":
        raise ValueError("bad header; expected 'PKP q n m'")
    q, n, m = (int(v) for v in head[1:])
    field = PrimeField(q)
    if len(lines) < m + 2:
        raise ValueError("truncated instance file")
    A = np.array([[int(v) for v in lines[1 + i].split()] for i in range(m)], dtype=np.int64)
    c = np.array([int(v) for v in lines[m + 1].split()], dtype=np.int64)
    if A.shape != (m, n) or c.shape != (n,):
        raise ValueError("matrix or vector dimensions disagree with header")
    planted = None
    if len(lines) > m + 2:
        tail = lines[m + 2].split()
        if tail[0] != "SOLUTION":
            raise ValueError(f"unexpected trailing line: {lines[m + 2]!r}")
        planted = Permutation.from_one_based([int(v) for v in tail[1:]])
    return PkpInstance(field=field, A=A % q, c=c % q, planted=planted)

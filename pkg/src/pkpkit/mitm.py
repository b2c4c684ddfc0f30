"""Tagged-list construction and collision merging.

A tagged list holds ordered tuples of distinct positions of c alongside a
short syndrome tag. Tags are packed little-endian base q into int64 key
words so sorting and the two-pointer join work on machine integers no
matter the tag width. Canonical order is (packed keys, insertion order);
insertion order is itself deterministic (lexicographic index tuples), so
any two runs produce identical lists.

Position tuples are also summarized as 64-bit occupancy masks, which makes
the disjointness filter of the join a single AND (c has distinct entries,
so disjoint value sets and disjoint position sets are the same thing).
This caps solver instances at n <= 64; list sizes rule out anything close
to that long before the mask does.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from math import factorial

import numpy as np

from . import backend
from .fieldmath import matmul_mod

DEFAULT_MEM_CAP = 1 << 28


class MemoryCapError(RuntimeError):
    """Predicted list or merge size exceeds the configured entry cap."""


@dataclass(frozen=True)
class StageStat:
    """One line of the structured run log."""

    stage: str
    predicted_log2: float | None
    measured: int
    elapsed: float

    def format(self) -> str:
        pred = "" if self.predicted_log2 is None else f"{self.predicted_log2:.4f}"
        return (
            f"stage={self.stage} predicted_log2={pred} "
            f"measured={self.measured} elapsed={self.elapsed:.3f}"
        )


@dataclass(frozen=True)
class TaggedList:
    idx: np.ndarray  # N x j int8 position tuples
    keys: np.ndarray  # N x K packed tags, lexicographically sorted
    masks: np.ndarray  # N uint64 position occupancy
    tag_width: int
    q: int

    def __len__(self):
        return self.idx.shape[0]

    @property
    def tuple_length(self) -> int:
        return self.idx.shape[1]


def key_layout(q: int, tag_width: int) -> tuple[int, int]:
    """(digits per key word, number of key words) for base-q packing."""
    group = 1
    while q ** (group + 1) < 2**63:
        group += 1
    if tag_width == 0:
        return group, 1
    return group, -(-tag_width // group)


def _pack_keys(tags: np.ndarray, q: int) -> np.ndarray:
    n_rows, width = tags.shape
    group, nkeys = key_layout(q, width)
    keys = np.zeros((n_rows, nkeys), dtype=np.int64)
    qpow = q ** np.arange(group, dtype=np.int64)
    for g in range(nkeys):
        digits = tags[:, g * group : min((g + 1) * group, width)]
        if digits.shape[1]:
            keys[:, g] = digits @ qpow[: digits.shape[1]]
    return keys


def _sorted_by_keys(idx, keys, masks):
    if keys.shape[1] == 1:
        order = np.argsort(keys[:, 0], kind="stable")
    else:
        order = np.lexsort(keys.T[::-1])
    return idx[order], keys[order], masks[order]


def list_size(n: int, tuple_length: int) -> int:
    return factorial(n) // factorial(n - tuple_length)


def build_list(
    c: np.ndarray,
    coeff: np.ndarray,
    *,
    q: int,
    rhs: np.ndarray | None = None,
    mem_cap: int = DEFAULT_MEM_CAP,
) -> TaggedList:
    """Tagged list over all ordered tuples of distinct entries of c.

    Tag of a tuple x is x coeff^T, or rhs - x coeff^T when rhs is given
    (the right-list convention: colliding tags then mean the combined
    tuple hits rhs exactly).
    """
    c = np.asarray(c, dtype=np.int64) % q
    n = len(c)
    if n > 64:
        raise ValueError("tagged lists support n <= 64 (position masks are 64-bit)")
    coeff = np.ascontiguousarray(np.asarray(coeff, dtype=np.int64) % q)
    width, j = coeff.shape
    base = np.zeros(width, dtype=np.int64) if rhs is None else np.asarray(rhs, dtype=np.int64) % q
    if base.shape != (width,):
        raise ValueError("rhs width does not match coefficient rows")
    sign = 1 if rhs is None else -1
    total = list_size(n, j)
    if total > mem_cap:
        raise MemoryCapError(
            f"list over {j}-tuples of {n} values needs {total} entries (cap {mem_cap})"
        )
    group, nkeys = key_layout(q, width)
    if j == 0:
        idx = np.zeros((1, 0), dtype=np.int8)
        keys = _pack_keys(base.reshape(1, -1), q) if width else np.zeros((1, 1), dtype=np.int64)
        masks = np.zeros(1, dtype=np.uint64)
        return TaggedList(idx=idx, keys=keys, masks=masks, tag_width=width, q=q)
    idx = np.empty((total, j), dtype=np.int8)
    keys = np.zeros((total, nkeys), dtype=np.int64)
    masks = np.empty(total, dtype=np.uint64)
    backend.impl.enumerate_tagged(c, coeff, base, sign, q, group, idx, keys, masks)
    idx, keys, masks = _sorted_by_keys(idx, keys, masks)
    return TaggedList(idx=idx, keys=keys, masks=masks, tag_width=width, q=q)


def retag(
    tlist: TaggedList,
    c: np.ndarray,
    coeff: np.ndarray,
    *,
    rhs: np.ndarray | None = None,
) -> TaggedList:
    """Same entries, fresh tags from a new coefficient block, re-sorted."""
    q = tlist.q
    c = np.asarray(c, dtype=np.int64) % q
    coeff = np.asarray(coeff, dtype=np.int64) % q
    width = coeff.shape[0]
    if coeff.shape[1] != tlist.tuple_length:
        raise ValueError("coefficient columns must match tuple length")
    vals = c[tlist.idx.astype(np.int64)]
    tags = matmul_mod(vals, coeff.T, q) if width else np.zeros((len(tlist), 0), dtype=np.int64)
    if rhs is not None:
        tags = (np.asarray(rhs, dtype=np.int64) % q - tags) % q
    keys = _pack_keys(tags, q) if width else np.zeros((len(tlist), 1), dtype=np.int64)
    idx, keys, masks = _sorted_by_keys(tlist.idx, keys, tlist.masks)
    return TaggedList(idx=idx, keys=keys, masks=masks, tag_width=width, q=q)


def merge(left: TaggedList, right: TaggedList, mem_cap: int = DEFAULT_MEM_CAP) -> TaggedList:
    """Join on equal tags, keep pairs with disjoint positions, concatenate.

    Output tags are dropped (width 0); re-tag for the next stage as needed.
    Raises MemoryCapError as soon as the output would exceed mem_cap pairs.
    """
    if left.q != right.q:
        raise ValueError("merging lists over different fields")
    if left.tag_width != right.tag_width:
        raise ValueError("merging lists of different tag widths")
    res = backend.impl.join_sorted(left.keys, left.masks, right.keys, right.masks, int(mem_cap))
    if res is None:
        raise MemoryCapError(f"merge output exceeds cap of {mem_cap} entries")
    ia, ib = res
    idx = np.concatenate([left.idx[ia], right.idx[ib]], axis=1)
    masks = left.masks[ia] | right.masks[ib]
    keys = np.zeros((len(ia), 1), dtype=np.int64)
    return TaggedList(idx=idx, keys=keys, masks=masks, tag_width=0, q=left.q)


def collision_count(left: TaggedList, right: TaggedList) -> int:
    """Number of equal-tag pairs before the disjointness filter."""
    counts = 0
    ga, ka = _group_reps(left.keys)
    gb, kb = _group_reps(right.keys)
    if not len(ka) or not len(kb):
        return 0
    allk = np.vstack([ka, kb])
    side = np.concatenate([np.zeros(len(ka), np.int8), np.ones(len(kb), np.int8)])
    sizes = np.concatenate([ga, gb])
    order = np.lexsort(allk.T[::-1])
    allk, side, sizes = allk[order], side[order], sizes[order]
    eq = (allk[1:] == allk[:-1]).all(axis=1) & (side[1:] != side[:-1])
    for i in np.flatnonzero(eq):
        counts += int(sizes[i]) * int(sizes[i + 1])
    return counts


def _group_reps(keys):
    if keys.shape[0] == 0:
        return np.zeros(0, np.int64), keys
    starts = np.concatenate(([0], np.flatnonzero((keys[1:] != keys[:-1]).any(axis=1)) + 1))
    ends = np.concatenate((starts[1:], [keys.shape[0]]))
    return ends - starts, keys[starts]


def timed_stage(name, predicted_log2, fn):
    """Run fn(), returning (result, StageStat sized by len(result))."""
    start = time.perf_counter()
    result = fn()
    elapsed = time.perf_counter() - start
    return result, StageStat(
        stage=name,
        predicted_log2=predicted_log2,
        measured=len(result),
        elapsed=elapsed,
    )

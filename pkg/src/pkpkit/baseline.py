"""Split-list meet-in-the-middle solver.

Brings (H, s) to systematic form on the last r columns, tags partial
assignments of the first n-r+l positions by l syndrome coordinates, joins
the two halves, and completes each survivor through the forced equations.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import log2

import numpy as np

from .fieldmath import matmul_mod, rref
from .instance import ExtendedSystem, Permutation, permutation_from_values
from .logmath import log2_perm
from .mitm import (
    DEFAULT_MEM_CAP,
    StageStat,
    TaggedList,
    build_list,
    collision_count,
    merge,
    timed_stage,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BaselineParams:
    """l tag coordinates; the n-r+l list positions split as l1 + l2."""

    l: int
    l1: int
    l2: int

    def validate(self, n: int, r: int):
        if not 1 <= self.l <= r:
            raise ValueError(f"need 1 <= l <= r={r}, got l={self.l}")
        if self.l1 < 1 or self.l2 < 1:
            raise ValueError("both list lengths must be >= 1")
        if self.l1 + self.l2 != n - r + self.l:
            raise ValueError(
                f"l1 + l2 must equal n - r + l = {n - r + self.l}, got {self.l1 + self.l2}"
            )
        if max(self.l1, self.l2) > n:
            raise ValueError("list tuple length exceeds n")


@dataclass
class SolveOutcome:
    permutation: Permutation | None
    permutations: list[Permutation] = field(default_factory=list)
    stages: list[StageStat] = field(default_factory=list)


def systematic_with_syndrome(system: ExtendedSystem, rng, budget: int = 64):
    """RREF of [H | s^T] on the last r columns of H.

    The fixed column block can be singular; retried under a tracked random
    column permutation. Returns (systematic H, reduced s, column map).
    """
    q = system.field.q
    n, r = system.n, system.r
    pivot_cols = np.arange(n - r, n)
    col_perm = np.arange(n)
    for _ in range(budget):
        work = np.concatenate(
            [system.H[:, col_perm], system.s.reshape(-1, 1)], axis=1
        )
        red = rref(work, pivot_cols, q)
        if red is not None:
            return red[:, :n], red[:, n], col_perm
        col_perm = rng.permutation(n)
    raise RuntimeError(f"no nonsingular column block found in {budget} attempts")


def build_baseline_lists(
    system: ExtendedSystem,
    c: np.ndarray,
    params: BaselineParams,
    *,
    rng=None,
    mem_cap: int = DEFAULT_MEM_CAP,
):
    """The two tagged lists plus the reduction context needed to finish.

    Context carries the systematic form, reduced syndrome, and the column
    map applied (identity unless the fixed block was singular).
    """
    if rng is None:
        rng = np.random.default_rng(0)
    q = system.field.q
    n, r = system.n, system.r
    params.validate(n, r)
    h_sys, s_sys, col_perm = systematic_with_syndrome(system, rng)
    tag_block = h_sys[: params.l, : n - r + params.l]
    s_tag = s_sys[: params.l]
    left = build_list(c, tag_block[:, : params.l1], q=q, mem_cap=mem_cap)
    right = build_list(c, tag_block[:, params.l1 :], q=q, rhs=s_tag, mem_cap=mem_cap)
    return left, right, {"h_sys": h_sys, "s_sys": s_sys, "col_perm": col_perm}


def complete_candidates(h_sys, s_sys, c, survivors: TaggedList, q: int) -> np.ndarray:
    """Finish each survivor through the forced equations, keeping those
    whose completion rearranges c. Rows come back in permuted coordinates.
    """
    n = h_sys.shape[1]
    r = h_sys.shape[0]
    if len(survivors) == 0:
        return np.zeros((0, n), dtype=np.int64)
    vals = np.asarray(c, dtype=np.int64)[survivors.idx.astype(np.int64)]
    front = vals[:, : n - r]
    forced = (s_sys[None, :] - matmul_mod(front, h_sys[:, : n - r].T, q)) % q
    full = np.concatenate([front, forced], axis=1)
    reference = np.sort(np.asarray(c, dtype=np.int64) % q)
    ok = (np.sort(full, axis=1) == reference[None, :]).all(axis=1)
    return full[ok]


def solve_baseline(
    system: ExtendedSystem,
    c: np.ndarray,
    params: BaselineParams,
    *,
    rng=None,
    exhaustive: bool = False,
    mem_cap: int = DEFAULT_MEM_CAP,
) -> SolveOutcome:
    """Run the full pipeline; first verified permutation wins unless
    exhaustive mode collects them all.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    q = system.field.q
    n, r = system.n, system.r
    params.validate(n, r)
    l, l1 = params.l, params.l1
    stages: list[StageStat] = []

    h_sys, s_sys, col_perm = systematic_with_syndrome(system, rng)
    tag_block = h_sys[:l, : n - r + l]
    s_tag = s_sys[:l]
    left, stat = timed_stage(
        "list1",
        log2_perm(n, l1),
        lambda: build_list(c, tag_block[:, :l1], q=q, mem_cap=mem_cap),
    )
    stages.append(stat)
    right, stat = timed_stage(
        "list2",
        log2_perm(n, params.l2),
        lambda: build_list(c, tag_block[:, l1:], q=q, rhs=s_tag, mem_cap=mem_cap),
    )
    stages.append(stat)

    pred_coll = log2_perm(n, l1) + log2_perm(n, params.l2) - l * log2(q)
    stages.append(StageStat("collisions", pred_coll, collision_count(left, right), 0.0))

    merged, stat = timed_stage(
        "merge", log2_perm(n, n - r + l) - l * log2(q), lambda: merge(left, right, mem_cap)
    )
    stages.append(stat)

    completed = complete_candidates(h_sys, s_sys, c, merged, q)
    outcome = SolveOutcome(permutation=None, stages=stages)
    seen = set()
    for row in completed:
        original = np.empty(n, dtype=np.int64)
        original[col_perm] = row
        key = tuple(int(v) for v in original)
        if key in seen:
            continue
        seen.add(key)
        perm = permutation_from_values(c, original)
        outcome.permutations.append(perm)
        if outcome.permutation is None:
            outcome.permutation = perm
        if not exhaustive:
            break
    stages.append(StageStat("solutions", None, len(outcome.permutations), 0.0))
    for entry in stages:
        logger.info(entry.format())
    return outcome

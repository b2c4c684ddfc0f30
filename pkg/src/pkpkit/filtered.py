"""Subcode-filtered meet-in-the-middle solver.

A d-dimensional small-support subcode of the dual pins d syndrome
equations to w coordinates. A first collision stage enumerates only the
w-coordinate block against those equations; the surviving block
assignments then feed the usual list merge, which therefore starts from a
list q^d times shorter than the plain solver's.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from math import log2

import numpy as np

from .baseline import SolveOutcome, complete_candidates
from .fieldmath import matmul_mod, rank, rref, solve_row_combination
from .instance import ExtendedSystem, permutation_from_values
from .logmath import log2_perm
from .mitm import (
    DEFAULT_MEM_CAP,
    StageStat,
    TaggedList,
    build_list,
    collision_count,
    merge,
    retag,
    timed_stage,
)
from .subcodes import Subcode, find_subcode

logger = logging.getLogger(__name__)


class AlignmentError(RuntimeError):
    """Could not reach a usable permuted systematic form within budget."""


@dataclass(frozen=True)
class FilteredParams:
    """Subcode dimension d and support w = w1 + w2; l tag coordinates."""

    d: int
    w: int
    w1: int
    w2: int
    l: int

    def validate(self, n: int, r: int):
        if self.d < 1:
            raise ValueError("need d >= 1")
        if self.d > r:
            raise ValueError(f"need d <= r={r}, got d={self.d}")
        if not self.d <= self.l:
            raise ValueError(f"need d <= l, got d={self.d}, l={self.l}")
        if self.l > n - r:
            raise ValueError(f"need l <= n - r = {n - r}, got l={self.l}")
        if self.l > r:
            raise ValueError(f"need l <= r = {r} (systematic rows d+1..l must exist)")
        if self.w1 < 1 or self.w2 < 1 or self.w1 + self.w2 != self.w:
            raise ValueError("need w = w1 + w2 with both parts >= 1")
        if self.w < self.d:
            raise ValueError(f"need w >= d, got w={self.w}, d={self.d}")
        if self.w > n:
            raise ValueError(f"need w <= n, got w={self.w}")
        if self.w > n - r + self.l:
            raise ValueError(
                f"need w <= n - r + l = {n - r + self.l}, got w={self.w}"
            )
        if self.w > n + self.d - r:
            raise ValueError(
                f"ISD needs w <= n + d - r = {n + self.d - r}, got w={self.w}"
            )


@dataclass(frozen=True)
class AlignedSystem:
    """Subcode and parity system brought to the solver's column layout.

    Work position j holds original column sigma[j]; the subcode support
    occupies positions span-w .. span-1 with span = n-r+l, and
    M sigma(H) = (U | I_r) with the block rows d..l-1 providing the l-d
    second-stage tag equations.
    """

    q: int
    Z: np.ndarray  # d x n permuted subcode generator
    s_hat: np.ndarray  # d, subcode syndrome
    sigma: np.ndarray
    M: np.ndarray  # r x r
    h_sys: np.ndarray  # r x n, (U | I_r)
    s_sys: np.ndarray  # r
    block: np.ndarray  # (l-d) x span
    s_block: np.ndarray  # l-d

    @property
    def span(self) -> int:
        return self.block.shape[1]


def align(
    system: ExtendedSystem,
    subcode: Subcode,
    params: FilteredParams,
    rng=None,
    budget: int = 64,
) -> AlignedSystem:
    """Choose sigma placing the subcode support on the last w of the first
    n-r+l positions (ascending original index within the support), then
    derive the systematic form.

    Retries reshuffle which non-support columns sit under the identity
    block, both when the block is singular and when the subcode rows are
    not independent of the block rows (joint rank < l would silently break
    the second-stage filtering).
    """
    if rng is None:
        rng = np.random.default_rng(0)
    q = system.field.q
    n, r = system.n, system.r
    d, w, l = params.d, params.w, params.l
    span = n - r + l
    if subcode.dimension != d or subcode.support_size != w:
        raise ValueError("subcode shape disagrees with params")
    S = solve_row_combination(subcode.generator, system.H, q)
    if S is None:
        raise ValueError("subcode rows are not in the row space of H")
    s_hat = matmul_mod(system.s, S.T, q)
    support = np.sort(subcode.support)
    non_support = np.setdiff1d(np.arange(n), support)
    free_positions = np.concatenate([np.arange(span - w), np.arange(span, n)])
    pivot_cols = np.arange(n - r, n)
    order = non_support
    for _ in range(budget):
        sigma = np.empty(n, dtype=np.int64)
        sigma[span - w : span] = support
        sigma[free_positions] = order
        aug = np.concatenate(
            [system.H[:, sigma], np.eye(r, dtype=np.int64), system.s.reshape(-1, 1)],
            axis=1,
        )
        red = rref(aug, pivot_cols, q)
        if red is not None:
            h_sys = red[:, :n]
            M = red[:, n : n + r]
            s_sys = red[:, n + r]
            Z = subcode.generator[:, sigma]
            if rank(np.vstack([Z, h_sys[d:l]]), q) == l:
                return AlignedSystem(
                    q=q,
                    Z=Z,
                    s_hat=s_hat,
                    sigma=sigma,
                    M=M,
                    h_sys=h_sys,
                    s_sys=s_sys,
                    block=h_sys[d:l, :span],
                    s_block=s_sys[d:l],
                )
        order = rng.permutation(non_support)
    raise AlignmentError(f"no usable alignment in {budget} attempts")


def k_stage(
    aligned: AlignedSystem,
    c: np.ndarray,
    params: FilteredParams,
    *,
    mem_cap: int = DEFAULT_MEM_CAP,
    stages: list[StageStat] | None = None,
) -> TaggedList:
    """Collision-filter the w-coordinate block through the subcode equations."""
    q = aligned.q
    n = len(c)
    span = aligned.span
    lo = span - params.w
    left, stat = timed_stage(
        "k_list1",
        log2_perm(n, params.w1),
        lambda: build_list(c, aligned.Z[:, lo : lo + params.w1], q=q, mem_cap=mem_cap),
    )
    _push(stages, stat)
    right, stat = timed_stage(
        "k_list2",
        log2_perm(n, params.w2),
        lambda: build_list(
            c,
            aligned.Z[:, lo + params.w1 : span],
            q=q,
            rhs=aligned.s_hat,
            mem_cap=mem_cap,
        ),
    )
    _push(stages, stat)
    pred = log2_perm(n, params.w1) + log2_perm(n, params.w2) - params.d * log2(q)
    _push(stages, StageStat("k_collisions", pred, collision_count(left, right), 0.0))
    merged, stat = timed_stage(
        "k_merge",
        log2_perm(n, params.w) - params.d * log2(q),
        lambda: merge(left, right, mem_cap),
    )
    _push(stages, stat)
    return merged


def solve_filtered(
    system: ExtendedSystem,
    c: np.ndarray,
    params: FilteredParams,
    *,
    rng=None,
    exhaustive: bool = False,
    mem_cap: int = DEFAULT_MEM_CAP,
    max_isd_iters: int | None = None,
) -> SolveOutcome:
    """ISD, align, block filter, list merge, completion. First verified
    permutation wins unless exhaustive mode collects them all.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    q = system.field.q
    n, r = system.n, system.r
    params.validate(n, r)
    d, w, l = params.d, params.w, params.l
    span = n - r + l
    stages: list[StageStat] = []

    start = time.perf_counter()
    subcode = find_subcode(system.H, w, d, q, rng, max_iters=max_isd_iters)
    _push(stages, StageStat("isd", None, 1, time.perf_counter() - start))
    aligned = align(system, subcode, params, rng)

    block_assignments = k_stage(aligned, c, params, mem_cap=mem_cap, stages=stages)

    left, stat = timed_stage(
        "l_list1",
        log2_perm(n, span - w),
        lambda: build_list(c, aligned.block[:, : span - w], q=q, mem_cap=mem_cap),
    )
    _push(stages, stat)
    right = retag(
        block_assignments, c, aligned.block[:, span - w :], rhs=aligned.s_block
    )
    pred = (
        log2_perm(n, span - w)
        + log2_perm(n, w)
        - d * log2(q)
        - (l - d) * log2(q)
    )
    _push(stages, StageStat("l_collisions", pred, collision_count(left, right), 0.0))
    merged, stat = timed_stage(
        "l_merge",
        log2_perm(n, span) - l * log2(q),
        lambda: merge(left, right, mem_cap),
    )
    _push(stages, stat)

    completed = complete_candidates(aligned.h_sys, aligned.s_sys, c, merged, q)
    outcome = SolveOutcome(permutation=None, stages=stages)
    seen = set()
    for row in completed:
        original = np.empty(n, dtype=np.int64)
        original[aligned.sigma] = row
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
    _push(stages, StageStat("solutions", None, len(outcome.permutations), 0.0))
    for entry in stages:
        logger.info(entry.format())
    return outcome


def _push(stages, stat):
    if stages is not None:
        stages.append(stat)

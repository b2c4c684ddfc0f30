"""Closed-form attack-cost models and the exhaustive parameter optimizer.

All counts are carried as log2 doubles via log-gamma; nothing here ever
materializes a factorial. Costs are abstract operation counts: the models
deliberately take every hidden constant as 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import inf, log2

from .baseline import BaselineParams
from .filtered import FilteredParams
from .logmath import log2_perm, log2_sum
from .subcodes import count_bounds, isd_cost_log2

CSV_HEADER = (
    "n,m,q,solver,d,w,w1,w2,l,l1,l2,"
    "log2_t_isd,log2_t_k,log2_t_l,log2_t_final,log2_total"
)

DEFAULT_D_MAX = 8


class InfeasibleParamsError(ValueError):
    """Parameter set outside the model's hypotheses (e.g. expected subcode
    count <= 1, where the filtered cost formula is not backed by anything)."""


@dataclass(frozen=True)
class CostBreakdown:
    t_isd: float
    t_k: float
    t_l: float
    t_final: float
    total: float
    params: FilteredParams

    def terms(self) -> dict[str, float]:
        return {
            "log2_t_isd": self.t_isd,
            "log2_t_k": self.t_k,
            "log2_t_l": self.t_l,
            "log2_t_final": self.t_final,
            "log2_total": self.total,
        }


@dataclass(frozen=True)
class SweepPoint:
    n: int
    m: int
    q: int
    solver: str
    params: BaselineParams | FilteredParams | None
    breakdown: CostBreakdown | None
    total_log2: float | None


def cost_baseline(n: int, m: int, q: int, l1: int, l2: int) -> float:
    """log2 operation count of the split-list solver: two list builds plus
    the expected tag collisions.
    """
    r = m + 1
    l = l1 + l2 - (n - r)
    BaselineParams(l=l, l1=l1, l2=l2).validate(n, r)
    lq = log2(q)
    t1 = log2_perm(n, l1)
    t2 = log2_perm(n, l2)
    return log2_sum([t1, t2, t1 + t2 - l * lq])


def cost_filtered(n: int, m: int, q: int, params: FilteredParams) -> CostBreakdown:
    """Cost terms of the subcode-filtered solver.

    Rejects parameter sets whose expected subcode count is not above 1:
    the model's collision statistics assume the subcode exists.
    """
    r = m + 1
    params.validate(n, r)
    d, w, w1, w2, l = params.d, params.w, params.w1, params.w2, params.l
    if count_bounds(n, r, w, d, q).lower_log2 <= 0.0:
        raise InfeasibleParamsError(
            f"expected subcode count <= 1 for (n={n}, r={r}, w={w}, d={d}, q={q})"
        )
    lq = log2(q)
    t_isd = isd_cost_log2(n, r, w, d, q)
    k1 = log2_perm(n, w1)
    k2 = log2_perm(n, w2)
    t_k = log2_sum([k1, k2, k1 + k2 - d * lq])
    span = n - r + l
    l1_size = log2_perm(n, span - w)
    l2_size = log2_perm(n, w) - d * lq
    t_l = log2_sum([l1_size, l2_size, l1_size + l2_size - (l - d) * lq])
    t_final = log2_perm(n, span) - l * lq
    total = log2_sum([t_isd, t_k, t_l, t_final])
    return CostBreakdown(
        t_isd=t_isd, t_k=t_k, t_l=t_l, t_final=t_final, total=total, params=params
    )


def optimize(n: int, m: int, q: int, solver: str, d_max: int = DEFAULT_D_MAX) -> SweepPoint:
    """Exhaustive scan of the parameter grid; deterministic tie-break by
    taking the first strictly better point in lexicographic parameter order.
    """
    if solver == "baseline":
        return _optimize_baseline(n, m, q)
    if solver == "filtered":
        return _optimize_filtered(n, m, q, d_max)
    raise ValueError(f"unknown solver kind {solver!r}")


def _optimize_baseline(n: int, m: int, q: int) -> SweepPoint:
    r = m + 1
    best_total = inf
    best = None
    for l in range(1, r + 1):
        span = n - r + l
        for l1 in range(1, span):
            l2 = span - l1
            if max(l1, l2) > n:
                continue
            total = cost_baseline(n, m, q, l1, l2)
            if total < best_total:
                best_total = total
                best = BaselineParams(l=l, l1=l1, l2=l2)
    if best is None:
        raise InfeasibleParamsError(f"empty baseline grid for (n={n}, m={m}, q={q})")
    return SweepPoint(
        n=n, m=m, q=q, solver="baseline", params=best, breakdown=None, total_log2=best_total
    )


def _optimize_filtered(n: int, m: int, q: int, d_max: int) -> SweepPoint:
    r = m + 1
    best: CostBreakdown | None = None
    for d in range(1, min(d_max, r) + 1):
        for w in range(max(d, 2), min(n, n + d - r) + 1):
            if count_bounds(n, r, w, d, q).lower_log2 <= 0.0:
                continue
            for l in range(d, min(r, n - r) + 1):
                if w > n - r + l:
                    continue
                for w1 in range(1, w):
                    params = FilteredParams(d=d, w=w, w1=w1, w2=w - w1, l=l)
                    breakdown = cost_filtered(n, m, q, params)
                    if best is None or breakdown.total < best.total:
                        best = breakdown
    if best is None:
        raise InfeasibleParamsError(f"empty filtered grid for (n={n}, m={m}, q={q})")
    return SweepPoint(
        n=n,
        m=m,
        q=q,
        solver="filtered",
        params=best.params,
        breakdown=best,
        total_log2=best.total,
    )


def sweep(n: int, q: int, m_values, solvers, d_max: int = DEFAULT_D_MAX) -> list[SweepPoint]:
    """One point per (m, solver); infeasible grids produce an empty point
    rather than aborting the sweep.
    """
    points = []
    for m in m_values:
        for solver in solvers:
            try:
                points.append(optimize(n, m, q, solver, d_max))
            except InfeasibleParamsError:
                points.append(
                    SweepPoint(
                        n=n, m=m, q=q, solver=solver, params=None, breakdown=None, total_log2=None
                    )
                )
    return points


def csv_rows(points) -> list[str]:
    """Fixed-order CSV serialization; unused columns stay empty, log values
    carry 4 decimals.
    """
    rows = []
    for p in points:
        cells = {name: "" for name in CSV_HEADER.split(",")}
        cells.update({"n": str(p.n), "m": str(p.m), "q": str(p.q), "solver": p.solver})
        if isinstance(p.params, BaselineParams):
            cells["l"] = str(p.params.l)
            cells["l1"] = str(p.params.l1)
            cells["l2"] = str(p.params.l2)
        elif isinstance(p.params, FilteredParams):
            cells["d"] = str(p.params.d)
            cells["w"] = str(p.params.w)
            cells["w1"] = str(p.params.w1)
            cells["w2"] = str(p.params.w2)
            cells["l"] = str(p.params.l)
        if p.breakdown is not None:
            for name, value in p.breakdown.terms().items():
                cells[name] = f"{value:.4f}"
        elif p.total_log2 is not None:
            cells["log2_total"] = f"{p.total_log2:.4f}"
        rows.append(",".join(cells[name] for name in CSV_HEADER.split(",")))
    return rows

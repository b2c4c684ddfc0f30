"""Toolkit for the Permuted Kernel Problem: instance generation, two
meet-in-the-middle solvers, small-support subcode search, and closed-form
attack-cost estimation over prime fields.
"""

from . import backend
from .baseline import BaselineParams, SolveOutcome, solve_baseline
from .estimator import (
    CostBreakdown,
    InfeasibleParamsError,
    SweepPoint,
    cost_baseline,
    cost_filtered,
    optimize,
    sweep,
)
from .fieldmath import PrimeField
from .filtered import FilteredParams, align, k_stage, solve_filtered
from .instance import (
    ExtendedSystem,
    Permutation,
    PkpInstance,
    SampleSet,
    brute_force_solve,
    extend,
    generate_instance,
    read_instance,
    reconstruct,
    verify,
    write_instance,
)
from .mitm import MemoryCapError, TaggedList, build_list, merge
from .subcodes import (
    Subcode,
    SubcodeCountBounds,
    count_bounds,
    find_subcode,
    gaussian_binomial_log2,
    isd_cost_log2,
    isd_iteration,
)

__version__ = "0.1.0"
BACKEND = backend.NAME

__all__ = [
    "BACKEND",
    "BaselineParams",
    "CostBreakdown",
    "ExtendedSystem",
    "FilteredParams",
    "InfeasibleParamsError",
    "MemoryCapError",
    "Permutation",
    "PkpInstance",
    "PrimeField",
    "SampleSet",
    "SolveOutcome",
    "Subcode",
    "SubcodeCountBounds",
    "SweepPoint",
    "TaggedList",
    "align",
    "brute_force_solve",
    "build_list",
    "cost_baseline",
    "cost_filtered",
    "count_bounds",
    "extend",
    "find_subcode",
    "gaussian_binomial_log2",
    "generate_instance",
    "isd_cost_log2",
    "isd_iteration",
    "k_stage",
    "merge",
    "optimize",
    "read_instance",
    "reconstruct",
    "solve_baseline",
    "solve_filtered",
    "sweep",
    "verify",
    "write_instance",
]

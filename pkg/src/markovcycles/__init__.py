"""Values of modular functions at Markov quadratics via cycle integrals.

The package computes "values" f(w) of modular functions at real quadratic
irrationals as integrals along the associated closed geodesics, specialised
to the quadratics of the Markov tree, and verifies the convergence,
explicit-bound and interlacing behaviour of the normalised values along
tree branches.
"""

from .analysis import (
    BranchScan,
    ScanRecord,
    branch_scan,
    check_convergence,
    check_interlacing,
    check_growth_bound,
    check_step_bound,
    delta1,
    delta2,
)
from .contfrac import (
    MINUS,
    PLUS,
    PeriodicCF,
    coincide_distance_bound,
    conjugate_cf,
    format_cf,
    minus_expand,
    parse_cf,
    plus_expand,
    plus_to_minus,
    rotate_period,
    value_of,
)
from .cycleint import (
    CycleValue,
    QuadratureRule,
    arc_integral,
    normalized_value,
    segment_integral,
)
from .exact import QuadSurd, UnimodularMap, format_surd, parse_surd
from .geodesic import CycleData, orientation_sign, pell_fundamental, rotate_cycle, tv_cycle
from .kernels import BACKEND as KERNEL_BACKEND
from .markov import (
    Branch,
    MarkovTriple,
    TreeNode,
    conjunction,
    enumerate_tree,
    markov_constant,
    markov_constant_reciprocal,
    markov_numbers,
    parse_branch,
    theta_from_triple,
    vieta_children,
)
from .modfun import (
    ModularFunctionSpec,
    eval_const_one,
    eval_j,
    eval_j_mp,
    j_function,
    max_on_arc,
    one_function,
)

__version__ = "0.1.0"

__all__ = [
    "QuadSurd", "UnimodularMap", "parse_surd", "format_surd",
    "PeriodicCF", "PLUS", "MINUS", "minus_expand", "plus_expand",
    "plus_to_minus", "value_of", "conjugate_cf", "rotate_period",
    "coincide_distance_bound", "parse_cf", "format_cf",
    "MarkovTriple", "TreeNode", "Branch", "vieta_children", "enumerate_tree",
    "markov_numbers", "theta_from_triple", "markov_constant",
    "markov_constant_reciprocal", "conjunction", "parse_branch",
    "CycleData", "tv_cycle", "rotate_cycle", "pell_fundamental",
    "orientation_sign",
    "ModularFunctionSpec", "eval_j", "eval_j_mp", "eval_const_one",
    "j_function", "one_function", "max_on_arc",
    "QuadratureRule", "CycleValue", "arc_integral", "segment_integral",
    "normalized_value",
    "BranchScan", "ScanRecord", "branch_scan", "check_convergence",
    "check_growth_bound", "check_step_bound", "check_interlacing",
    "delta1", "delta2",
    "KERNEL_BACKEND",
]

"""Exact-arithmetic toolkit for secant defects, osculating spaces and
curvilinear tangency on polynomially parametrized projective varieties.

All geometry reduces to exact rank computations over Q; randomized pieces
(general-point sampling, polynomial identity testing) are seeded and
carry explicit witnesses and error bounds in their reports.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .catalog import make_random_variety, make_segre, make_veronese
from .chart import (
    Chart,
    CurvilinearJet,
    FiveJet,
    curve_derivatives,
    jet_normalize,
    load_chart,
    project_generic,
    save_chart,
)
from .curvilinear import generic_speciality, hyperplane_system, tangent_along
from .exactlin import Matrix, MultiPoly, Rational, rank_exact, rank_modular
from .gamma15 import (
    defect_pipeline,
    equivalence_audit,
    five_jet_rank_check,
    gamma15_det,
    gamma15_identically_zero,
    gamma15_matrix,
    pi_constancy_check,
    pi_space,
)
from .secants import (
    LinearSpan,
    osc2_regular,
    osc2_regular_coordinate,
    osc_variety_dim,
    osculating_space,
    secant_defect,
    tangent_space,
)

__version__ = "0.1.0"

__all__ = [
    "Chart",
    "CurvilinearJet",
    "FiveJet",
    "KERNEL_BACKEND",
    "LinearSpan",
    "Matrix",
    "MultiPoly",
    "Rational",
    "curve_derivatives",
    "defect_pipeline",
    "equivalence_audit",
    "five_jet_rank_check",
    "gamma15_det",
    "gamma15_identically_zero",
    "gamma15_matrix",
    "generic_speciality",
    "hyperplane_system",
    "jet_normalize",
    "load_chart",
    "make_random_variety",
    "make_segre",
    "make_veronese",
    "osc2_regular",
    "osc2_regular_coordinate",
    "osc_variety_dim",
    "osculating_space",
    "pi_constancy_check",
    "pi_space",
    "project_generic",
    "rank_exact",
    "rank_modular",
    "save_chart",
    "secant_defect",
    "tangent_space",
]

"""Exact relative optimal transport on metric pairs.

A metric pair is a finite metric space together with a reservoir subset that
can absorb or emit mass at cost equal to the distance to it.
"""
from .errors import (GeometryError, InstanceTooLargeError, MeasureError, PairMismatchError,
                     RelotError, SolverError)
from .metric_pair import MetricPair, dbar, dist, dist_to_reservoir, dp_cost
from .measure import (DiscreteMeasure, SignedMeasure, absolute, add, band, dirac, inf_measure,
                      integrate, jordan, le, make_measure, make_signed, moment, residual,
                      retract_measure, scale, sup_measure, total_mass, truncate_lower,
                      truncate_upper, zero)
from .coupling import (Coupling, add_couplings, cost, diagonal_coupling, marginals,
                       retract_coupling, transpose, trivial_coupling, trivial_extension)
from .solver import OTResult, kr_norm, min_cost_coupling, oracle_enumerate, oracle_lp, \
    solve_w1, solve_wp
from .duality import (DualCertificate, PairCost, c_transform, double_conjugate, kr_dual,
                      kr_feasible, mk_dual, mk_feasible, op_norm)

__version__ = "0.1.0"

__all__ = [
    "Coupling",
    "DiscreteMeasure",
    "DualCertificate",
    "GeometryError",
    "InstanceTooLargeError",
    "MeasureError",
    "MetricPair",
    "OTResult",
    "PairCost",
    "PairMismatchError",
    "RelotError",
    "SignedMeasure",
    "SolverError",
    "absolute",
    "add",
    "add_couplings",
    "band",
    "c_transform",
    "cost",
    "dbar",
    "diagonal_coupling",
    "dirac",
    "dist",
    "dist_to_reservoir",
    "double_conjugate",
    "dp_cost",
    "inf_measure",
    "integrate",
    "jordan",
    "kr_dual",
    "kr_feasible",
    "kr_norm",
    "le",
    "make_measure",
    "make_signed",
    "marginals",
    "min_cost_coupling",
    "mk_dual",
    "mk_feasible",
    "moment",
    "op_norm",
    "oracle_enumerate",
    "oracle_lp",
    "residual",
    "retract_coupling",
    "retract_measure",
    "scale",
    "solve_w1",
    "solve_wp",
    "sup_measure",
    "total_mass",
    "transpose",
    "trivial_coupling",
    "trivial_extension",
    "truncate_lower",
    "truncate_upper",
    "zero",
]

"""Classical, quantum and postquantum bounds of exclusivity-graph tasks,
their ququart realization, and a photon-counting simulation of the
polarization/OAM experiment."""

from .bounds import bounds_report, fractional_packing, lovasz_theta
from .graph import (ExclusivityGraph, best_classical_assignment, independence_number,
                    maximal_cliques, orthogonality_graph)
from .realization import (ProjectorFamily, StateVector, overlap_classification, quantum_sum,
                          verify_compatibility, vertex_probability)

__all__ = [
    "ExclusivityGraph",
    "ProjectorFamily",
    "StateVector",
    "best_classical_assignment",
    "bounds_report",
    "fractional_packing",
    "independence_number",
    "lovasz_theta",
    "maximal_cliques",
    "orthogonality_graph",
    "overlap_classification",
    "quantum_sum",
    "verify_compatibility",
    "vertex_probability",
]

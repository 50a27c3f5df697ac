"""Classical, quantum and postquantum bounds of an exclusivity graph.

* classical: independence number (exact branch and bound)
* quantum: Lovász number (interior point SDP, certified gap)
* postquantum: fractional packing number (exact rational simplex over
  the maximal-clique constraints)
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import format_fraction
from .graph import ExclusivityGraph, IndependentSet, independence_number, maximal_cliques
from .lp import solve_packing_lp
from .sdp import DEFAULT_TOL, SolverError, ThetaResult, lovasz_theta

__all__ = [
    "BoundsReport",
    "FractionalPackingCertificate",
    "GraphTooLargeError",
    "SolverError",
    "ThetaResult",
    "bounds_report",
    "fractional_packing",
    "lovasz_theta",
]

MAX_LP_VERTICES = 64
MAX_CLIQUES = 20_000


class GraphTooLargeError(ValueError):
    """Clique enumeration is too large for the exact LP."""


@dataclass(frozen=True)
class FractionalPackingCertificate:
    value: Fraction
    weights: dict[int, Fraction]
    cliques: tuple[tuple[int, ...], ...]
    dual: tuple[Fraction, ...]  # one multiplier per clique

    def clique_loads(self) -> list[Fraction]:
        return [sum((self.weights[v] for v in q), Fraction(0)) for q in self.cliques]

    def dual_is_certificate(self) -> bool:
        """True iff ``dual`` is a feasible cover of value ``value``."""
        if any(y < 0 for y in self.dual):
            return False
        cover = {v: Fraction(0) for v in self.weights}
        for q, y in zip(self.cliques, self.dual):
            for v in q:
                cover[v] += y
        return all(c >= 1 for c in cover.values()) and sum(self.dual) == self.value


def fractional_packing(g: ExclusivityGraph) -> FractionalPackingCertificate:
    """Exact optimum of max sum w subject to every maximal clique summing to <= 1.

    The optimum is certified by the simplex duals: a nonnegative clique
    cover with the same objective value.
    """
    if g.n > MAX_LP_VERTICES:
        raise GraphTooLargeError(f"n={g.n} exceeds the exact-LP limit of {MAX_LP_VERTICES}")
    cliques = maximal_cliques(g)
    if len(cliques) > MAX_CLIQUES:
        raise GraphTooLargeError(f"{len(cliques)} maximal cliques exceed limit {MAX_CLIQUES}")
    rows = [c.sorted() for c in cliques]
    A = [[int(v in q) for v in g.vertices] for q in rows]
    sol = solve_packing_lp([1] * g.n, A, [1] * len(rows))
    weights = {v: sol.x[v - 1] for v in g.vertices}
    cert = FractionalPackingCertificate(sol.value, weights, tuple(rows), sol.y)
    assert cert.dual_is_certificate(), "simplex returned a non-optimal basis"
    return cert


@dataclass(frozen=True)
class BoundsReport:
    alpha: int
    alpha_witness: IndependentSet
    theta: ThetaResult
    alpha_star: FractionalPackingCertificate
    no_postquantum_advantage: bool

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "alpha_witness": sorted(self.alpha_witness.members),
            "theta": float(f"{self.theta.value:.12g}"),
            "theta_gap": float(f"{self.theta.duality_gap:.12g}"),
            "alpha_star": format_fraction(self.alpha_star.value),
            "weights": [format_fraction(self.alpha_star.weights[v])
                        for v in sorted(self.alpha_star.weights)],
            "no_postquantum_advantage": self.no_postquantum_advantage,
        }


def bounds_report(g: ExclusivityGraph, tol: float = DEFAULT_TOL) -> BoundsReport:
    """All three bounds plus the verdict alpha < theta = alpha*.

    The theta/alpha* comparison is allowed the larger of ``tol`` and the
    certified SDP gap.
    """
    alpha, witness = independence_number(g)
    theta = lovasz_theta(g, tol=tol)
    packing = fractional_packing(g)
    slack = max(tol, theta.duality_gap)
    verdict = abs(theta.value - float(packing.value)) <= slack and alpha < packing.value
    return BoundsReport(alpha, witness, theta, packing, verdict)

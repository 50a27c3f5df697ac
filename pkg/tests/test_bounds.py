from fractions import Fraction

import numpy as np
import pytest

from exclusivity.bounds import (GraphTooLargeError, bounds_report, fractional_packing,
                                lovasz_theta)
from exclusivity.graph import ExclusivityGraph, maximal_cliques
from exclusivity.lp import UnboundedLP, solve_packing_lp
from exclusivity.sdp import SolverError

from oracles import cvx_theta, float_packing, random_graph

VERTEX_TABLE = [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4), Fraction(1, 2), Fraction(1, 4),
          Fraction(1, 2), Fraction(1, 4), Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)]


def test_fractional_packing_ten_vertex(ten_vertex):
    cert = fractional_packing(ten_vertex)
    assert cert.value == Fraction(7, 2)
    assert isinstance(cert.value, Fraction)
    assert cert.dual_is_certificate()
    assert sum(cert.weights.values()) == cert.value
    assert all(load <= 1 and isinstance(load, Fraction) for load in cert.clique_loads())
    assert all(0 <= w <= 1 for w in cert.weights.values())


def test_vertex_table_weights_are_feasible(ten_vertex):
    w = dict(zip(ten_vertex.vertices, VERTEX_TABLE))
    for c in maximal_cliques(ten_vertex):
        assert sum(w[v] for v in c.members) <= 1
    assert sum(VERTEX_TABLE) == Fraction(7, 2)


def test_fractional_packing_small_graphs():
    assert fractional_packing(ExclusivityGraph.complete(3)).value == 1
    c5 = fractional_packing(ExclusivityGraph.cycle(5))
    assert c5.value == Fraction(5, 2)
    assert set(c5.weights.values()) == {Fraction(1, 2)}
    # matching dual: every edge-clique carries 1/2
    assert set(c5.dual) == {Fraction(1, 2)} and c5.dual_is_certificate()
    assert fractional_packing(ExclusivityGraph.edgeless(4)).value == 4


def test_fractional_packing_matches_float_lp_on_random_graphs():
    rng = np.random.default_rng(11)
    for _ in range(15):
        g = random_graph(rng, int(rng.integers(3, 11)), float(rng.uniform(0.2, 0.8)))
        cert = fractional_packing(g)
        assert cert.dual_is_certificate()
        assert abs(float(cert.value) - float_packing(g)) < 1e-9


def test_fractional_packing_size_guard():
    with pytest.raises(GraphTooLargeError):
        fractional_packing(ExclusivityGraph.edgeless(65))


def test_lp_unbounded_and_validation():
    with pytest.raises(UnboundedLP):
        solve_packing_lp([1, 1], [[1, 0]], [1])
    with pytest.raises(ValueError):
        solve_packing_lp([1], [[1]], [-1])


def test_theta_ten_vertex(ten_vertex):
    r = lovasz_theta(ten_vertex, tol=1e-6)
    assert abs(r.value - 3.5) <= 1e-4
    assert r.duality_gap <= 1e-6
    assert r.value <= r.upper_bound + 1e-12
    eig = np.linalg.eigvalsh(r.feasible_matrix)
    assert eig.min() >= -10 * 1e-6
    assert all(r.feasible_matrix[i - 1, j - 1] == 0 for i, j in ten_vertex.edges)
    assert abs(np.trace(r.feasible_matrix) - 1) < 1e-12


def test_theta_small_graphs():
    assert abs(lovasz_theta(ExclusivityGraph.complete(5)).value - 1) < 1e-6
    c5 = lovasz_theta(ExclusivityGraph.cycle(5)).value
    assert abs(c5 - 2.23607) < 1e-4
    assert abs(c5 - 5 ** 0.5) < 1e-6
    assert 2 <= c5 <= 2.5
    assert abs(lovasz_theta(ExclusivityGraph.edgeless(7)).value - 7) < 1e-6


def test_theta_matches_independent_solver():
    rng = np.random.default_rng(3)
    for _ in range(8):
        g = random_graph(rng, int(rng.integers(4, 13)), float(rng.uniform(0.2, 0.7)))
        assert abs(lovasz_theta(g).value - cvx_theta(g)) < 1e-5


def test_theta_reports_nonconvergence(ten_vertex):
    with pytest.raises(SolverError):
        lovasz_theta(ten_vertex, tol=1e-6, max_iterations=1)


def test_bounds_report_examples(ten_vertex):
    r = bounds_report(ten_vertex)
    assert (r.alpha, r.alpha_star.value, r.no_postquantum_advantage) == (3, Fraction(7, 2), True)
    assert abs(r.theta.value - 3.5) < 1e-4
    k4 = bounds_report(ExclusivityGraph.complete(4))
    assert (k4.alpha, k4.alpha_star.value, k4.no_postquantum_advantage) == (1, 1, False)
    assert abs(k4.theta.value - 1) < 1e-6
    c5 = bounds_report(ExclusivityGraph.cycle(5))
    assert (c5.alpha, c5.alpha_star.value, c5.no_postquantum_advantage) == (2, Fraction(5, 2), False)
    assert 2 < c5.theta.value < 2.5


def test_bounds_json_schema(ten_vertex):
    d = bounds_report(ten_vertex).to_dict()
    assert set(d) == {"alpha", "alpha_witness", "theta", "theta_gap", "alpha_star", "weights",
                      "no_postquantum_advantage"}
    assert d["alpha_star"] == "7/2"
    assert sum(Fraction(w) for w in d["weights"]) == Fraction(7, 2)
    assert d["alpha_witness"] == [1, 4, 6]

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from exclusivity.graph import (ExclusivityGraph, GraphFormatError, best_classical_assignment,
                               independence_number, maximal_cliques, orthogonality_graph)

from conftest import EQ3_VECTORS
from oracles import (brute_alpha, brute_best_assignment, brute_maximal_cliques, random_graph)


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return ExclusivityGraph(n, frozenset(chosen))


def test_eq3_orthogonality_graph_counts():
    # oracle: integer inner products over all 45 pairs
    zero = {(i + 1, j + 1) for i in range(10) for j in range(i + 1, 10)
            if sum(a * b for a, b in zip(EQ3_VECTORS[i], EQ3_VECTORS[j])) == 0}
    g = orthogonality_graph(EQ3_VECTORS, tol=0)
    assert g.n == 10
    assert g.edges == zero
    assert len(g.edges) == 21
    assert (1, 2) in g.edges and (9, 10) in g.edges
    assert (1, 4) not in g.edges


def test_bundled_graph_is_the_orthogonality_graph(ten_vertex):
    assert ten_vertex == orthogonality_graph(EQ3_VECTORS)


def test_standard_basis_gives_complete_graph():
    basis = [tuple(int(i == k) for i in range(4)) for k in range(4)]
    assert orthogonality_graph(basis) == ExclusivityGraph.complete(4)


def test_identical_vectors_have_no_edge():
    assert orthogonality_graph([(1, 2, 3), (1, 2, 3)]).edges == frozenset()


def test_complex_and_float_inputs():
    g = orthogonality_graph([(1, 1j), (1, -1j), (1, 0)])
    assert g.edges == {(1, 2)}
    g = orthogonality_graph([(1.0, 1e-9), (0.0, 1.0)], tol=1e-6)
    assert g.edges == {(1, 2)}
    assert orthogonality_graph([(1.0, 1e-3), (0.0, 1.0)], tol=1e-6).edges == frozenset()


def test_orthogonality_graph_errors():
    with pytest.raises(ValueError, match="dimension"):
        orthogonality_graph([(1, 0), (1, 0, 0)])
    with pytest.raises(ValueError, match="empty"):
        orthogonality_graph([])


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-5, 5).filter(bool), min_size=10, max_size=10))
def test_orthogonality_graph_scale_invariant(scales):
    scaled = [tuple(s * x for x in v) for s, v in zip(scales, EQ3_VECTORS)]
    assert orthogonality_graph(scaled) == orthogonality_graph(EQ3_VECTORS)
    cplx = [tuple(complex(x) * 1j for x in v) for v in scaled]
    assert orthogonality_graph(cplx, tol=1e-12) == orthogonality_graph(EQ3_VECTORS)


def test_independence_number_examples(ten_vertex):
    value, witness = independence_number(ten_vertex)
    assert value == 3 and len(witness) == 3 and ten_vertex.is_independent(witness.members)
    assert brute_alpha(ten_vertex) == 3
    assert independence_number(ExclusivityGraph.edgeless(10))[0] == 10
    assert independence_number(ExclusivityGraph.cycle(5))[0] == brute_alpha(ExclusivityGraph.cycle(5)) == 2


def test_witness_is_lexicographically_smallest(ten_vertex):
    from oracles import all_subsets
    best = min(s for s in all_subsets(10) if len(s) == 3 and ten_vertex.is_independent(s))
    assert tuple(sorted(independence_number(ten_vertex)[1].members)) == best


def test_branch_and_bound_matches_enumeration_up_to_16():
    rng = np.random.default_rng(5)
    for n in (13, 14, 15, 16):
        g = random_graph(rng, n, 0.3)
        value, witness = independence_number(g)
        assert g.is_independent(witness.members)
        assert value == brute_best_assignment(g)


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_alpha_and_classical_assignment_agree(g):
    value, witness = independence_number(g)
    assert value == len(witness) == brute_alpha(g)
    assert g.is_independent(witness.members)
    total, assignment = best_classical_assignment(g)
    assert total == value == sum(assignment.values())
    assert all(not (assignment[i] and assignment[j]) for i, j in g.edges)


def test_best_classical_assignment_examples(ten_vertex):
    total, assignment = best_classical_assignment(ten_vertex)
    assert total == 3 == brute_best_assignment(ten_vertex)
    assert best_classical_assignment(ExclusivityGraph(1)) == (1, {1: 1})


def test_maximal_cliques_examples(ten_vertex):
    k4 = maximal_cliques(ExclusivityGraph.complete(4))
    assert [c.sorted() for c in k4] == [(1, 2, 3, 4)]
    assert [c.sorted() for c in maximal_cliques(ExclusivityGraph.edgeless(5))] == [(v,) for v in range(1, 6)]
    assert [c.sorted() for c in maximal_cliques(ten_vertex)] == brute_maximal_cliques(ten_vertex)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=10))
def test_maximal_cliques_property(g):
    cliques = [c.sorted() for c in maximal_cliques(g)]
    assert cliques == sorted(set(cliques))
    for c in cliques:
        assert g.is_clique(c)
        assert not any(g.is_clique(c + (v,)) for v in g.vertices if v not in c)
    assert cliques == brute_maximal_cliques(g)


@settings(max_examples=50, deadline=None)
@given(graphs())
def test_json_round_trip(g):
    assert ExclusivityGraph.from_json(g.to_json()) == g


@pytest.mark.parametrize("payload, field", [
    ({"n": 3, "edges": [[1, 1]]}, "edges[0]"),
    ({"n": 3, "edges": [[1, 4]]}, "edges[0]"),
    ({"n": 3, "edges": [[1, 2], [2, 1]]}, "edges[1]"),
    ({"n": 0, "edges": []}, "n"),
    ({"edges": []}, "n"),
    ({"n": 3}, "edges"),
    ({"n": 3, "edges": [[1, "2"]]}, "edges[0]"),
])
def test_reader_rejects_bad_graphs(payload, field):
    with pytest.raises(GraphFormatError, match=field.replace("[", r"\[")):
        ExclusivityGraph.from_json(json.dumps(payload))


def test_tolerance_threshold_on_exact_vectors():
    # normalized overlap of (1,0) and (1,1) is 1/sqrt2 = 0.70710678...
    assert orthogonality_graph([(1, 0), (1, 1)], tol=0.7072).edges == {(1, 2)}
    assert orthogonality_graph([(1, 0), (1, 1)], tol=0.7071).edges == frozenset()

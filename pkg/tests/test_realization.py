import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from exclusivity.bounds import fractional_packing
from exclusivity.exact import GaussianRational
from exclusivity.graph import ExclusivityGraph, orthogonality_graph
from exclusivity.realization import (OTHER, ORTHOGONAL, UNBIASED, ProjectorFamily,
                                     RealizationFormatError, StateVector, overlap_classification,
                                     quantum_sum, realization_from_dict, realization_report,
                                     realization_to_dict, verify_compatibility, vertex_probability)

from conftest import EQ3_VECTORS

PSI = (0, 0, 0, 1)


def test_vertex_probability_examples():
    assert vertex_probability(PSI, (0, 0, 1, 1)) == Fraction(1, 2)
    assert vertex_probability(PSI, (1, -1, 1, -1)) == Fraction(1, 4)
    assert vertex_probability(PSI, (1, 0, 0, 0)) == 0
    assert isinstance(vertex_probability(PSI, (0, 0, 1, 1)), Fraction)


def test_vertex_probability_errors():
    with pytest.raises(ValueError, match="dimension"):
        vertex_probability(PSI, (1, 0))
    with pytest.raises(ValueError, match="zero"):
        vertex_probability(PSI, (0, 0, 0, 0))
    with pytest.raises(ValueError):
        StateVector((0, 0))


def test_vertex_table_theory_column(realization):
    psi, fam = realization
    probs = {k: vertex_probability(psi, fam[k]) for k in fam.vectors}
    assert {k for k, p in probs.items() if p == Fraction(1, 2)} == {1, 4, 6, 8}
    assert {k for k, p in probs.items() if p == Fraction(1, 4)} == {2, 3, 5, 7, 9, 10}
    assert quantum_sum(psi, fam) == Fraction(7, 2)


def test_quantum_sum_self_projection():
    assert quantum_sum(PSI, ProjectorFamily.from_list([PSI])) == 1


def test_quantum_sum_uniform_state(realization):
    _, fam = realization
    psi = (Fraction(1, 2),) * 4
    exact = quantum_sum(psi, fam)
    # float oracle, independent of the exact path
    s = np.full(4, 0.5)
    approx = sum(abs(np.dot(np.array(v, float), s)) ** 2 / np.dot(v, v) for v in EQ3_VECTORS)
    assert exact == Fraction(11, 4)
    assert abs(float(exact) - approx) < 1e-12


def test_float_and_exact_agree(realization):
    psi, fam = realization
    fpsi = tuple(float(x) for x in psi.amplitudes)
    for k in fam.vectors:
        f = vertex_probability(fpsi, tuple(float(x) for x in fam[k]))
        assert isinstance(f, float)
        assert abs(f - float(vertex_probability(psi, fam[k]))) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-7, 7).filter(bool), min_size=10, max_size=10),
       st.sampled_from([(1, 0), (0, 1), (-1, 0), (0, -1), (3, 4)]))
def test_probabilities_invariant_under_rescaling_and_phase(scales, phase):
    fam = ProjectorFamily.from_list([tuple(s * x for x in v) for s, v in zip(scales, EQ3_VECTORS)])
    z = GaussianRational(*phase)
    psi = tuple(z * x for x in PSI)
    for k, v in enumerate(EQ3_VECTORS, start=1):
        assert vertex_probability(psi, fam[k]) == vertex_probability(PSI, v)


def test_complex_gaussian_rational_probability():
    i = GaussianRational(0, 1)
    # |<(1, i)|(1, 1)>|^2 / (2 * 2) = |1 - i|^2 / 4 = 1/2
    assert vertex_probability((1, i), (1, 1)) == Fraction(1, 2)
    assert vertex_probability((1, i), (1, -i)) == 0


def test_verify_compatibility(realization, ten_vertex):
    _, fam = realization
    assert verify_compatibility(fam, ten_vertex, tol=0) == []
    basis = ProjectorFamily.from_list([tuple(int(i == k) for i in range(4)) for k in range(4)])
    assert verify_compatibility(basis, ExclusivityGraph.complete(4)) == []


def test_corrupted_vector_violations(realization, ten_vertex):
    _, fam = realization
    bad = fam.replace(1, (0, 0, 1, 2))
    violations = verify_compatibility(bad, ten_vertex, tol=0)
    # direct computation: every neighbor of vertex 1 now has overlap 1/(2 sqrt5)
    v1 = np.array([0, 0, 1, 2.0])
    expected = {}
    for i, j in ten_vertex.sorted_edges():
        if 1 in (i, j):
            other = np.array(EQ3_VECTORS[(j if i == 1 else i) - 1], float)
            expected[(i, j)] = abs(v1 @ other) / (np.linalg.norm(v1) * np.linalg.norm(other))
    assert {e for e, _ in violations} == {e for e, o in expected.items() if o > 0}
    assert {e for e, _ in violations} == {(1, 2), (1, 3), (1, 9), (1, 10)}
    for e, o in violations:
        assert o == pytest.approx(expected[e], abs=1e-12)
        assert o == pytest.approx(1 / (2 * 5 ** 0.5), abs=1e-12)


def test_overlap_classification(realization):
    _, fam = realization
    cls = overlap_classification(fam)
    assert cls[(1, 4)] == (UNBIASED, Fraction(1, 4))
    assert cls[(1, 2)] == (ORTHOGONAL, 0)
    assert cls[(3, 3)] == (OTHER, 1)
    assert cls[(1, 5)] == (OTHER, Fraction(1, 2))
    labels = [lab for (i, j), (lab, _) in cls.items() if i < j]
    assert labels.count(ORTHOGONAL) == 21


def test_report_sum_matches_components(realization, ten_vertex):
    psi, fam = realization
    rep = realization_report(psi, fam, ten_vertex)
    assert rep.quantum_sum == sum(rep.per_vertex_probabilities.values())
    assert rep.compatible and rep.dimension == 4
    assert rep.to_dict()["quantum_sum"] == "7/2"


def test_quantum_sum_below_packing_number():
    rng = np.random.default_rng(8)
    for _ in range(10):
        vecs = [tuple(int(x) for x in rng.integers(-1, 2, 3)) for _ in range(7)]
        vecs = [v if any(v) else (1, 0, 0) for v in vecs]
        g = orthogonality_graph(vecs)
        fam = ProjectorFamily.from_list(vecs)
        psi = tuple(int(x) for x in rng.integers(-2, 3, 3))
        if not any(psi):
            psi = (1, 1, 1)
        assert quantum_sum(psi, fam) <= fractional_packing(g).value


def test_file_format_round_trip(realization):
    psi, fam = realization
    d = realization_to_dict(psi, fam)
    psi2, fam2 = realization_from_dict(json.loads(json.dumps(d)))
    assert psi2 == psi and fam2 == fam


def test_file_format_accepts_rational_pairs():
    data = {"dimension": 2, "state": [["1/2", "0"], ["0", "1/2"]], "vectors": {"1": [1, 0], "2": ["1/3", [0, "-1"]]}}
    psi, fam = realization_from_dict(data)
    assert psi.amplitudes[1] == GaussianRational(0, Fraction(1, 2))
    assert fam[2][1] == GaussianRational(0, -1)


@pytest.mark.parametrize("data, field", [
    ({"state": [1], "vectors": {}}, "dimension"),
    ({"dimension": 2, "state": [1], "vectors": {"1": [1, 0]}}, "state"),
    ({"dimension": 2, "state": [1, 0], "vectors": {"1": [1, "x"]}}, r"vectors\[1\]"),
    ({"dimension": 2, "state": [1, 0], "vectors": {"2": [1, 0]}}, "keys"),
])
def test_file_format_errors(data, field):
    with pytest.raises(RealizationFormatError, match=field):
        realization_from_dict(data)

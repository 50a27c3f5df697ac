"""Quantum realizations of an exclusivity graph.

A realization is a state plus one (unnormalized) vector per vertex. All
quantities are evaluated exactly when every amplitude is rational or
Gaussian-rational, and in floating point otherwise.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence, Union

import numpy as np

from .exact import (
    GaussianRational,
    as_exact_vector,
    format_fraction,
    inner,
    is_exact_vector,
    norm_sq,
    parse_fraction,
)
from .graph import ExclusivityGraph

Probability = Union[Fraction, float]

ORTHOGONAL = "orthogonal"
UNBIASED = "unbiased"
OTHER = "other"


class RealizationFormatError(ValueError):
    pass


def _is_zero(v) -> bool:
    if is_exact_vector(v):
        return all(GaussianRational.coerce(x).is_zero() for x in v)
    return not np.any(np.asarray(v, dtype=complex))


@dataclass(frozen=True)
class StateVector:
    amplitudes: tuple

    def __post_init__(self):
        amps = tuple(self.amplitudes)
        if not amps:
            raise ValueError("state: empty amplitude list")
        if _is_zero(amps):
            raise ValueError("state: all-zero vector")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dimension(self) -> int:
        return len(self.amplitudes)


@dataclass(frozen=True)
class ProjectorFamily:
    """Vertex-indexed vectors; vertex k maps to ``vectors[k]``, keys 1..n."""

    vectors: Mapping[int, tuple]

    def __post_init__(self):
        vecs = {int(k): tuple(v) for k, v in self.vectors.items()}
        if sorted(vecs) != list(range(1, len(vecs) + 1)):
            raise ValueError("vectors: keys must be exactly 1..n")
        dims = {len(v) for v in vecs.values()}
        if len(dims) > 1:
            raise ValueError(f"vectors: dimension mismatch {sorted(dims)}")
        for k, v in vecs.items():
            if _is_zero(v):
                raise ValueError(f"vectors[{k}]: zero vector")
        object.__setattr__(self, "vectors", vecs)

    @classmethod
    def from_list(cls, vectors: Sequence[Sequence]) -> "ProjectorFamily":
        return cls({i + 1: tuple(v) for i, v in enumerate(vectors)})

    @property
    def dimension(self) -> int:
        return len(next(iter(self.vectors.values())))

    @property
    def size(self) -> int:
        return len(self.vectors)

    def __getitem__(self, k: int) -> tuple:
        return self.vectors[k]

    def replace(self, k: int, v: Sequence) -> "ProjectorFamily":
        vecs = dict(self.vectors)
        vecs[k] = tuple(v)
        return ProjectorFamily(vecs)


def _normalized_overlap_sq(a: Sequence, b: Sequence) -> Probability:
    """|<a|b>|^2 / (|a|^2 |b|^2), exact when possible."""
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    if _is_zero(a) or _is_zero(b):
        raise ValueError("zero vector")
    if is_exact_vector(a) and is_exact_vector(b):
        ea, eb = as_exact_vector(a), as_exact_vector(b)
        return inner(ea, eb).abs_sq() / (norm_sq(ea) * norm_sq(eb))
    fa = np.asarray([complex(x) for x in a])
    fb = np.asarray([complex(x) for x in b])
    return float(abs(np.vdot(fa, fb)) ** 2 / (np.vdot(fa, fa).real * np.vdot(fb, fb).real))


def vertex_probability(psi: StateVector | Sequence, v: Sequence) -> Probability:
    """Yes-probability of the projector onto ``v`` for state ``psi``."""
    amps = psi.amplitudes if isinstance(psi, StateVector) else tuple(psi)
    return _normalized_overlap_sq(amps, v)


def quantum_sum(psi: StateVector | Sequence, fam: ProjectorFamily) -> Probability:
    probs = [vertex_probability(psi, fam[k]) for k in sorted(fam.vectors)]
    if all(isinstance(p, Fraction) for p in probs):
        return sum(probs, Fraction(0))
    return float(sum(float(p) for p in probs))


def edge_overlap(fam: ProjectorFamily, i: int, j: int) -> float:
    """|<v_i|v_j>| / (|v_i| |v_j|) as a float."""
    return float(_normalized_overlap_sq(fam[i], fam[j])) ** 0.5


@dataclass
class RealizationReport:
    per_vertex_probabilities: dict[int, Probability]
    quantum_sum: Probability
    orthogonality_violations: list[tuple[tuple[int, int], float]]
    dimension: int
    edge_overlaps: dict[tuple[int, int], float] = field(default_factory=dict)

    @property
    def compatible(self) -> bool:
        return not self.orthogonality_violations

    def to_dict(self) -> dict:
        def fmt(p):
            return format_fraction(p) if isinstance(p, Fraction) else float(f"{p:.12g}")

        return {
            "dimension": self.dimension,
            "per_vertex_probabilities": {str(k): fmt(p) for k, p in sorted(self.per_vertex_probabilities.items())},
            "quantum_sum": fmt(self.quantum_sum),
            "orthogonality_violations": [
                {"edge": list(e), "overlap": float(f"{o:.12g}")} for e, o in self.orthogonality_violations
            ],
            "compatible": self.compatible,
        }


def verify_compatibility(fam: ProjectorFamily, g: ExclusivityGraph,
                         tol: float = 0.0) -> list[tuple[tuple[int, int], float]]:
    """Edges whose normalized overlap exceeds ``tol``, with the overlap value.

    With exact inputs the comparison is exact (overlap^2 > tol^2).
    """
    if fam.size != g.n:
        raise ValueError(f"index mismatch: {fam.size} vectors for a {g.n}-vertex graph")
    violations = []
    tol_sq = Fraction(tol) ** 2
    for i, j in g.sorted_edges():
        o2 = _normalized_overlap_sq(fam[i], fam[j])
        bad = o2 > tol_sq if isinstance(o2, Fraction) else o2 ** 0.5 > tol
        if bad:
            violations.append(((i, j), float(o2) ** 0.5))
    return violations


def realization_report(psi: StateVector, fam: ProjectorFamily, g: ExclusivityGraph,
                       tol: float = 0.0) -> RealizationReport:
    if psi.dimension != fam.dimension:
        raise ValueError(f"dimension mismatch: state {psi.dimension}, vectors {fam.dimension}")
    probs = {k: vertex_probability(psi, fam[k]) for k in sorted(fam.vectors)}
    violations = verify_compatibility(fam, g, tol)
    overlaps = {e: edge_overlap(fam, *e) for e in g.sorted_edges()}
    return RealizationReport(probs, quantum_sum(psi, fam), violations, fam.dimension, overlaps)


def overlap_classification(fam: ProjectorFamily) -> dict[tuple[int, int], tuple[str, Probability]]:
    """Label every ordered pair by its normalized squared overlap.

    0 -> orthogonal, 1/d -> unbiased, anything else -> other (the diagonal
    is always 'other' with value 1).
    """
    d = fam.dimension
    out = {}
    keys = sorted(fam.vectors)
    for i in keys:
        for j in keys:
            o2 = _normalized_overlap_sq(fam[i], fam[j])
            if isinstance(o2, Fraction):
                label = ORTHOGONAL if o2 == 0 else UNBIASED if o2 == Fraction(1, d) else OTHER
            else:
                label = (ORTHOGONAL if abs(o2) < 1e-12
                         else UNBIASED if abs(o2 - 1 / d) < 1e-12 else OTHER)
            if i == j:
                label = OTHER
            out[(i, j)] = (label, o2)
    return out


# -- file format ---------------------------------------------------------

def _parse_amplitude(x, where: str):
    try:
        if isinstance(x, list):
            if len(x) != 2:
                raise ValueError("expected [real, imaginary]")
            re, im = parse_fraction(x[0]), parse_fraction(x[1])
            return re if im == 0 else GaussianRational(re, im)
        return parse_fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise RealizationFormatError(f"{where}: bad amplitude {x!r} ({exc})") from exc


def _format_amplitude(x):
    z = GaussianRational.coerce(x)
    if z.im == 0 and z.re.denominator == 1:
        return int(z.re)
    return [format_fraction(z.re), format_fraction(z.im)]


def load_realization(path: str | Path) -> tuple[StateVector, ProjectorFamily]:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise RealizationFormatError(f"realization: invalid JSON ({exc})") from exc
    return realization_from_dict(data)


def realization_from_dict(data) -> tuple[StateVector, ProjectorFamily]:
    if not isinstance(data, Mapping):
        raise RealizationFormatError("realization: expected a JSON object")
    for key in ("dimension", "state", "vectors"):
        if key not in data:
            raise RealizationFormatError(f"{key}: missing field")
    d = data["dimension"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise RealizationFormatError(f"dimension: expected a positive integer, got {d!r}")
    if not isinstance(data["state"], list) or len(data["state"]) != d:
        raise RealizationFormatError(f"state: expected a list of {d} amplitudes")
    state = tuple(_parse_amplitude(x, f"state[{k}]") for k, x in enumerate(data["state"]))
    raw = data["vectors"]
    if not isinstance(raw, Mapping):
        raise RealizationFormatError("vectors: expected an object keyed by vertex label")
    vecs = {}
    for key, vec in raw.items():
        try:
            k = int(key)
        except ValueError:
            raise RealizationFormatError(f"vectors: non-integer key {key!r}") from None
        if not isinstance(vec, list) or len(vec) != d:
            raise RealizationFormatError(f"vectors[{key}]: expected a list of {d} amplitudes")
        vecs[k] = tuple(_parse_amplitude(x, f"vectors[{key}][{n}]") for n, x in enumerate(vec))
    try:
        return StateVector(state), ProjectorFamily(vecs)
    except ValueError as exc:
        raise RealizationFormatError(str(exc)) from exc


def realization_to_dict(psi: StateVector, fam: ProjectorFamily) -> dict:
    return {
        "dimension": fam.dimension,
        "state": [_format_amplitude(x) for x in psi.amplitudes],
        "vectors": {str(k): [_format_amplitude(x) for x in fam[k]] for k in sorted(fam.vectors)},
    }

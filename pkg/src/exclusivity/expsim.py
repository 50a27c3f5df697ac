"""Monte Carlo model of the photon-counting experiment.

Every measurement setting (prepared state, analyzer) owns its random
stream, derived from ``(seed, table, i[, j])`` with ``numpy.random.SeedSequence``
spawn keys. Results therefore do not depend on evaluation order or on the
number of worker threads.

Noise model:

* depolarizing weight w on the prepared state: p -> (1 - w) p + w / d
* Gaussian misalignment of each analyzer: v -> exp(i sigma H) v with H drawn
  from the Gaussian unitary ensemble (unit-variance off-diagonal entries),
  redrawn for every setting
* binomial photon counting with ``shots_per_setting`` detections; error bars
  are Poissonian, sqrt(counts) / shots
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
import scipy.linalg

from .graph import ExclusivityGraph, independence_number
from .realization import ProjectorFamily, StateVector, vertex_probability

TABLE_STREAM = 0
MATRIX_STREAM = 1
DEFAULT_BIN_WIDTH = 0.005
DEFAULT_HIST_UPPER = 0.08


def calibrated_depolarizing_weight(fidelity: float, d: int = 4) -> float:
    """w such that (1 - w) + w/d equals the target self-fidelity."""
    return (1.0 - fidelity) * d / (d - 1)


@dataclass(frozen=True)
class NoiseModel:
    depolarizing_weight: float = 0.0
    misalignment_sigma: float = 0.0
    shots_per_setting: int = 1_000_000
    dimension: int = 4

    def __post_init__(self):
        if not 0.0 <= self.depolarizing_weight <= 1.0:
            raise ValueError("depolarizing_weight must lie in [0, 1]")
        if self.misalignment_sigma < 0:
            raise ValueError("misalignment_sigma must be nonnegative")
        if int(self.shots_per_setting) != self.shots_per_setting or self.shots_per_setting < 1:
            raise ValueError("shots_per_setting must be a positive integer")

    def to_dict(self) -> dict:
        return {"depolarizing_weight": self.depolarizing_weight,
                "misalignment_sigma": self.misalignment_sigma,
                "shots_per_setting": int(self.shots_per_setting),
                "dimension": self.dimension}


@dataclass(frozen=True)
class EstimatedProbability:
    value: float
    error: float
    counts: int
    shots: int

    def to_dict(self) -> dict:
        return {"value": _f12(self.value), "error": _f12(self.error),
                "counts": self.counts, "shots": self.shots}


def _f12(x: float) -> float:
    return float(f"{x:.12g}")


def setting_rng(seed: int, *stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(stream)))


def depolarize(p: float, noise: NoiseModel) -> float:
    w = noise.depolarizing_weight
    return (1.0 - w) * p + w / noise.dimension


def expected_probability(p: float, noise: NoiseModel) -> float:
    """Infinite-shot limit of the estimator without misalignment."""
    return depolarize(p, noise)


def random_misalignment(d: int, sigma: float, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    h = (g + g.conj().T) / 2.0  # off-diagonal E|h_jk|^2 = 1
    return scipy.linalg.expm(1j * sigma * h)


def _count(p: float, shots: int, rng: np.random.Generator) -> EstimatedProbability:
    p = min(max(p, 0.0), 1.0)
    counts = int(rng.binomial(shots, p))
    # zero counts get the one-count error bar rather than a zero-width interval
    error = math.sqrt(max(counts, 1)) / shots
    return EstimatedProbability(counts / shots, error, counts, shots)


def simulate_counts(p: float, noise: NoiseModel, seed: int,
                    stream: Sequence[int] = ()) -> EstimatedProbability:
    """Depolarize an ideal probability and draw photon counts for it."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    rng = setting_rng(seed, *stream)
    return _count(depolarize(p, noise), noise.shots_per_setting, rng)


def simulate_setting(state: Sequence[complex], analyzer: Sequence[complex], ideal: float,
                     noise: NoiseModel, seed: int, stream: Sequence[int]) -> EstimatedProbability:
    """One (state, analyzer) setting; ``ideal`` is used unless misalignment is on."""
    rng = setting_rng(seed, *stream)
    p = ideal
    if noise.misalignment_sigma > 0:
        a = np.asarray([complex(x) for x in analyzer])
        s = np.asarray([complex(x) for x in state])
        u = random_misalignment(len(a), noise.misalignment_sigma, rng)
        a = u @ a
        p = float(abs(np.vdot(a, s)) ** 2 / (np.vdot(a, a).real * np.vdot(s, s).real))
    return _count(depolarize(p, noise), noise.shots_per_setting, rng)


def _map(fn, jobs, workers: int):
    if workers <= 1:
        return [fn(*j) for j in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda j: fn(*j), jobs))


@dataclass
class VertexTableResult:
    ideal: dict[int, float]
    estimates: dict[int, EstimatedProbability]

    @property
    def sigma(self) -> float:
        return float(sum(e.value for e in self.estimates.values()))

    @property
    def sigma_error(self) -> float:
        return math.sqrt(sum(e.error ** 2 for e in self.estimates.values()))

    @property
    def ideal_sigma(self) -> float:
        return float(sum(self.ideal.values()))

    def to_dict(self) -> dict:
        return {
            "rows": [{"vertex": k, "theory": _f12(self.ideal[k]), **self.estimates[k].to_dict()}
                     for k in sorted(self.estimates)],
            "sigma": _f12(self.sigma),
            "sigma_error": _f12(self.sigma_error),
        }


def run_vertex_table(psi: StateVector, fam: ProjectorFamily, noise: NoiseModel, seed: int,
               workers: int = 1) -> VertexTableResult:
    """Estimate every vertex probability on the fixed input state."""
    ideal = {k: float(vertex_probability(psi, fam[k])) for k in sorted(fam.vectors)}
    jobs = [(psi.amplitudes, fam[k], ideal[k], noise, seed, (TABLE_STREAM, k)) for k in sorted(ideal)]
    est = _map(simulate_setting, jobs, workers)
    return VertexTableResult(ideal, dict(zip(sorted(ideal), est)))


@dataclass
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    overflow: int

    def rows(self) -> list[tuple[float, float, int]]:
        return [(_f12(self.edges[k]), _f12(self.edges[k + 1]), int(self.counts[k]))
                for k in range(len(self.counts))]

    def to_csv(self) -> str:
        lines = ["bin_left,bin_right,occurrences"]
        lines += [f"{l:.12g},{r:.12g},{c}" for l, r, c in self.rows()]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"bins": [list(r) for r in self.rows()], "overflow": self.overflow}


def histogram(values: Sequence[float], bin_width: float = DEFAULT_BIN_WIDTH,
              upper: float = DEFAULT_HIST_UPPER) -> Histogram:
    nbins = int(round(upper / bin_width))
    edges = np.linspace(0.0, nbins * bin_width, nbins + 1)
    values = np.asarray(values, dtype=float)
    counts, _ = np.histogram(values[values <= edges[-1]], bins=edges)
    return Histogram(edges, counts, int(np.sum(values > edges[-1])))


@dataclass
class ExclusivityMatrix:
    n: int
    entries: dict[tuple[int, int], EstimatedProbability]
    graph: ExclusivityGraph

    def value(self, i: int, j: int) -> float:
        return self.entries[(i, j)].value

    def as_array(self) -> np.ndarray:
        return np.array([[self.value(i, j) for j in range(1, self.n + 1)] for i in range(1, self.n + 1)])

    def diagonal(self) -> list[EstimatedProbability]:
        return [self.entries[(i, i)] for i in range(1, self.n + 1)]

    @property
    def mean_fidelity(self) -> float:
        return float(np.mean([e.value for e in self.diagonal()]))

    def edge_pair_estimates(self) -> dict[tuple[int, int], EstimatedProbability]:
        """The 2|E| ordered pairs (i, j) with i, j adjacent."""
        return {p: self.entries[p] for p in self.graph.ordered_pairs()}

    def per_edge_epsilon(self) -> tuple[dict[tuple[int, int], float], dict[tuple[int, int], float]]:
        """Symmetrized edge epsilon (p(i,j) + p(j,i))/2 and its error."""
        eps, err = {}, {}
        for i, j in self.graph.sorted_edges():
            a, b = self.entries[(i, j)], self.entries[(j, i)]
            eps[(i, j)] = (a.value + b.value) / 2
            err[(i, j)] = math.hypot(a.error, b.error) / 2
        return eps, err

    def histogram(self, bin_width: float = DEFAULT_BIN_WIDTH, upper: float = DEFAULT_HIST_UPPER) -> Histogram:
        return histogram([e.value for e in self.edge_pair_estimates().values()], bin_width, upper)


def run_exclusivity_matrix(fam: ProjectorFamily, g: ExclusivityGraph, noise: NoiseModel, seed: int,
                           workers: int = 1) -> ExclusivityMatrix:
    """Prepare every v_i, analyze with every v_j.

    Diagonal entries are the generation/analysis fidelities; entries on
    edges measure the non-orthogonality of the implemented projectors.
    """
    keys = sorted(fam.vectors)
    if len(keys) != g.n:
        raise ValueError(f"index mismatch: {len(keys)} vectors for a {g.n}-vertex graph")
    jobs = []
    for i in keys:
        for j in keys:
            ideal = float(vertex_probability(fam[i], fam[j]))
            jobs.append((fam[i], fam[j], ideal, noise, seed, (MATRIX_STREAM, i, j)))
    est = _map(simulate_setting, jobs, workers)
    entries = {(i, j): e for (i, j), e in zip(((i, j) for i in keys for j in keys), est)}
    return ExclusivityMatrix(len(keys), entries, g)


@dataclass
class EpsilonReport:
    sigma_measured: float
    classical_bound: int
    vertex_count: int
    epsilon_threshold: float
    per_edge_epsilon: dict[tuple[int, int], float]
    mean_epsilon: float
    mean_epsilon_error: float
    certified: bool
    verdict: str
    sigma_error: float = 0.0
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "sigma_measured": _f12(self.sigma_measured),
            "sigma_error": _f12(self.sigma_error),
            "classical_bound": self.classical_bound,
            "vertex_count": self.vertex_count,
            "epsilon_threshold": _f12(self.epsilon_threshold),
            "per_edge_epsilon": [{"edge": list(e), "epsilon": _f12(v)}
                                 for e, v in sorted(self.per_edge_epsilon.items())],
            "mean_epsilon": _f12(self.mean_epsilon),
            "mean_epsilon_error": _f12(self.mean_epsilon_error),
            "certified": self.certified,
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def epsilon_threshold(sigma: float, classical_bound: int, vertex_count: int) -> float:
    """Largest epsilon with C (1 - eps) + n eps < sigma, i.e. (sigma - C)/(n - C)."""
    if vertex_count <= classical_bound:
        raise ValueError("vertex_count must exceed classical_bound")
    return (sigma - classical_bound) / (vertex_count - classical_bound)


def epsilon_certify(sigma_measured: float, classical_bound: int, vertex_count: int,
                    per_edge_epsilon: Mapping[tuple[int, int], float],
                    per_edge_error: Mapping[tuple[int, int], float] | None = None,
                    sigma_error: float = 0.0) -> EpsilonReport:
    """Decide whether imperfect exclusivity can explain the observed sum.

    Certified iff sigma exceeds the classical bound and every per-edge
    epsilon lies strictly below the threshold. A sum at or below the
    classical bound is a negative verdict, not an error.
    """
    threshold = epsilon_threshold(sigma_measured, classical_bound, vertex_count)
    values = list(per_edge_epsilon.values())
    mean = float(np.mean(values)) if values else 0.0
    if per_edge_error and values:
        mean_err = math.sqrt(sum(per_edge_error[e] ** 2 for e in per_edge_epsilon)) / len(values)
    else:
        mean_err = 0.0
    notes = []
    if sigma_measured <= classical_bound:
        certified, verdict = False, "no advantage"
    elif all(v < threshold for v in values):
        certified, verdict = True, "certified"
    else:
        worst = max(per_edge_epsilon, key=per_edge_epsilon.get)
        certified, verdict = False, "not certified"
        notes.append(f"edge {list(worst)} has epsilon {per_edge_epsilon[worst]:.6g} >= threshold")
    return EpsilonReport(sigma_measured, classical_bound, vertex_count, threshold,
                         dict(per_edge_epsilon), mean, mean_err, certified, verdict, sigma_error, notes)


@dataclass
class ExperimentReport:
    seed: int
    noise: NoiseModel
    table: VertexTableResult
    matrix: ExclusivityMatrix
    epsilon: EpsilonReport
    bin_width: float = DEFAULT_BIN_WIDTH
    hist_upper: float = DEFAULT_HIST_UPPER

    @property
    def hist(self) -> Histogram:
        return self.matrix.histogram(self.bin_width, self.hist_upper)

    def to_dict(self) -> dict:
        m = self.matrix
        keys = range(1, m.n + 1)
        return {
            "seed": self.seed,
            "noise": self.noise.to_dict(),
            "table": self.table.to_dict(),
            "matrix": {
                "values": [[_f12(m.value(i, j)) for j in keys] for i in keys],
                "errors": [[_f12(m.entries[(i, j)].error) for j in keys] for i in keys],
                "mean_fidelity": _f12(m.mean_fidelity),
            },
            "histogram": {"bin_width": self.bin_width, "upper": self.hist_upper, **self.hist.to_dict()},
            "epsilon": self.epsilon.to_dict(),
        }


def run_experiment(psi: StateVector, fam: ProjectorFamily, g: ExclusivityGraph, noise: NoiseModel,
                   seed: int, classical_bound: int | None = None, workers: int = 1,
                   bin_width: float = DEFAULT_BIN_WIDTH,
                   hist_upper: float = DEFAULT_HIST_UPPER) -> ExperimentReport:
    if classical_bound is None:
        classical_bound = independence_number(g)[0]
    table = run_vertex_table(psi, fam, noise, seed, workers)
    matrix = run_exclusivity_matrix(fam, g, noise, seed, workers)
    eps, err = matrix.per_edge_epsilon()
    report = epsilon_certify(table.sigma, classical_bound, g.n, eps, err, table.sigma_error)
    ideal = (float(table.ideal_sigma) - classical_bound) / (g.n - classical_bound)
    report.notes.append(f"threshold at the ideal sum {table.ideal_sigma:.6g} would be {ideal:.6g}")
    return ExperimentReport(seed, noise, table, matrix, report, bin_width, hist_upper)


def certify_from_report(data: Mapping) -> EpsilonReport:
    """Rebuild the epsilon verdict from a serialized experiment report."""
    eps = data["epsilon"]
    per_edge = {tuple(r["edge"]): float(r["epsilon"]) for r in eps["per_edge_epsilon"]}
    errors = data["matrix"]["errors"]
    per_err = {(i, j): math.hypot(errors[i - 1][j - 1], errors[j - 1][i - 1]) / 2 for i, j in per_edge}
    return epsilon_certify(float(data["table"]["sigma"]), int(eps["classical_bound"]),
                           int(eps["vertex_count"]), per_edge, per_err,
                           float(data["table"]["sigma_error"]))

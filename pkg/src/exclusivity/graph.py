"""Exclusivity graphs and their exact combinatorial quantities.

Vertices are 1-based so that labels line up with the proposition codes
1..n used throughout the package (fixtures, reports, CLI output).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence


class GraphFormatError(ValueError):
    """Raised when a graph description is malformed."""


@dataclass(frozen=True)
class ExclusivityGraph:
    """Undirected simple graph; an edge joins two mutually exclusive propositions."""

    n: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise GraphFormatError(f"n: expected a positive integer, got {self.n!r}")
        normalized = set()
        for e in self.edges:
            i, j = e
            if i == j:
                raise GraphFormatError(f"edges: self-loop at vertex {i}")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise GraphFormatError(f"edges: endpoint of {list(e)} outside 1..{self.n}")
            normalized.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(normalized))
        tmp = {v: set() for v in self.vertices}
        for i, j in normalized:
            tmp[i].add(j)
            tmp[j].add(i)
        object.__setattr__(self, "_adj", {v: frozenset(s) for v, s in tmp.items()})

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def adjacent(self, i: int, j: int) -> bool:
        return j in self._adj[i]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def ordered_pairs(self) -> list[tuple[int, int]]:
        """Both orientations of every edge, sorted."""
        return sorted([(i, j) for i, j in self.edges] + [(j, i) for i, j in self.edges])

    def complement(self) -> "ExclusivityGraph":
        return ExclusivityGraph(
            self.n,
            frozenset(p for p in combinations(self.vertices, 2) if p not in self.edges),
        )

    def is_independent(self, members: Iterable[int]) -> bool:
        members = list(members)
        return all(not self.adjacent(i, j) for i, j in combinations(members, 2))

    def is_clique(self, members: Iterable[int]) -> bool:
        members = list(members)
        return all(self.adjacent(i, j) for i, j in combinations(members, 2))

    # -- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "ExclusivityGraph":
        if not isinstance(data, Mapping):
            raise GraphFormatError("graph: expected a JSON object with fields 'n' and 'edges'")
        if "n" not in data:
            raise GraphFormatError("n: missing field")
        if "edges" not in data:
            raise GraphFormatError("edges: missing field")
        n = data["n"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise GraphFormatError(f"n: expected a positive integer, got {n!r}")
        raw = data["edges"]
        if not isinstance(raw, list):
            raise GraphFormatError("edges: expected a list of [i, j] pairs")
        seen = set()
        for k, e in enumerate(raw):
            if (not isinstance(e, list) or len(e) != 2
                    or not all(isinstance(x, int) and not isinstance(x, bool) for x in e)):
                raise GraphFormatError(f"edges[{k}]: expected a pair of integers, got {e!r}")
            i, j = e
            if i == j:
                raise GraphFormatError(f"edges[{k}]: self-loop at vertex {i}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise GraphFormatError(f"edges[{k}]: endpoint outside 1..{n} in {e}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise GraphFormatError(f"edges[{k}]: duplicate edge {e}")
            seen.add(key)
        return cls(n, frozenset(seen))

    @classmethod
    def from_json(cls, text: str) -> "ExclusivityGraph":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"graph: invalid JSON ({exc})") from exc
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: str | Path) -> "ExclusivityGraph":
        return cls.from_json(Path(path).read_text())

    # -- common families -----------------------------------------------

    @classmethod
    def complete(cls, n: int) -> "ExclusivityGraph":
        return cls(n, frozenset(combinations(range(1, n + 1), 2)))

    @classmethod
    def edgeless(cls, n: int) -> "ExclusivityGraph":
        return cls(n, frozenset())

    @classmethod
    def cycle(cls, n: int) -> "ExclusivityGraph":
        return cls(n, frozenset((i, i % n + 1) for i in range(1, n + 1)))


@dataclass(frozen=True)
class IndependentSet:
    members: frozenset[int]

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class Clique:
    members: frozenset[int]

    def __len__(self):
        return len(self.members)

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))


def orthogonality_graph(vectors: Mapping[int, Sequence] | Sequence[Sequence],
                        tol: float = 0.0) -> ExclusivityGraph:
    """Graph with an edge (i, j) iff |<v_i|v_j>| <= tol * |v_i| |v_j|.

    ``vectors`` is either a mapping vertex -> vector (keys 1..n) or a sequence
    (vertex i is element i-1). Rational/integer entries are compared exactly;
    anything else goes through floating point.
    """
    from .exact import as_exact_vector, inner, is_exact_vector, norm_sq

    if isinstance(vectors, Mapping):
        keys = sorted(vectors)
        if keys != list(range(1, len(keys) + 1)):
            raise ValueError("vectors: keys must be exactly 1..n")
        family = [vectors[k] for k in keys]
    else:
        family = list(vectors)
    if not family:
        raise ValueError("vectors: empty family")
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    dims = {len(v) for v in family}
    if len(dims) != 1:
        raise ValueError(f"vectors: dimension mismatch {sorted(dims)}")
    if 0 in dims:
        raise ValueError("vectors: dimension must be at least 1")

    edges = set()
    if all(is_exact_vector(v) for v in family):
        ex = [as_exact_vector(v) for v in family]
        tol_sq = Fraction(tol) ** 2
        for i, j in combinations(range(len(ex)), 2):
            # |<a|b>|^2 <= tol^2 |a|^2 |b|^2, all exact
            if inner(ex[i], ex[j]).abs_sq() <= tol_sq * norm_sq(ex[i]) * norm_sq(ex[j]):
                edges.add((i + 1, j + 1))
    else:
        import numpy as np

        arr = [np.asarray([complex(x) for x in v]) for v in family]
        for i, j in combinations(range(len(arr)), 2):
            lhs = abs(np.vdot(arr[i], arr[j]))
            if lhs <= tol * np.linalg.norm(arr[i]) * np.linalg.norm(arr[j]):
                edges.add((i + 1, j + 1))
    return ExclusivityGraph(len(family), frozenset(edges))


def _clique_cover_bound(g: ExclusivityGraph, candidates: list[int]) -> int:
    # greedy clique partition: each part holds at most one member of an independent set
    parts: list[list[int]] = []
    for v in candidates:
        for part in parts:
            if all(g.adjacent(v, u) for u in part):
                part.append(v)
                break
        else:
            parts.append([v])
    return len(parts)


def independence_number(g: ExclusivityGraph) -> tuple[int, IndependentSet]:
    """Exact maximum independent set by branch and bound.

    Branches on the lowest-index candidate (include first), so the returned
    witness is the lexicographically smallest maximum independent set.
    Pruning uses a greedy clique-cover bound on the remaining candidates.
    """
    best: list[int] = []

    def search(current: list[int], candidates: list[int]):
        nonlocal best
        if not candidates:
            if len(current) > len(best):
                best = list(current)
            return
        if len(current) + _clique_cover_bound(g, candidates) <= len(best):
            return
        v, rest = candidates[0], candidates[1:]
        nbrs = g.neighbors(v)
        current.append(v)
        search(current, [u for u in rest if u not in nbrs])
        current.pop()
        search(current, rest)

    search([], list(g.vertices))
    return len(best), IndependentSet(frozenset(best))


def maximal_cliques(g: ExclusivityGraph) -> list[Clique]:
    """All inclusion-maximal cliques (Bron-Kerbosch with Tomita pivoting).

    Output is sorted lexicographically by the sorted member tuples.
    """
    found: list[tuple[int, ...]] = []

    def expand(r: set[int], p: set[int], x: set[int]):
        if not p and not x:
            found.append(tuple(sorted(r)))
            return
        pivot = max(sorted(p | x), key=lambda u: len(p & g.neighbors(u)))
        for v in sorted(p - g.neighbors(pivot)):
            nv = g.neighbors(v)
            expand(r | {v}, p & nv, x & nv)
            p = p - {v}
            x = x | {v}

    expand(set(), set(g.vertices), set())
    return [Clique(frozenset(c)) for c in sorted(found)]


def best_classical_assignment(g: ExclusivityGraph) -> tuple[int, dict[int, int]]:
    """Deterministic 0/1 answers maximizing the number of yes answers.

    Yes-answers sit on a maximum independent set, so no two exclusive
    propositions are both true.
    """
    value, witness = independence_number(g)
    assignment = {v: int(v in witness.members) for v in g.vertices}
    return value, assignment

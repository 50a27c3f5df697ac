"""Lovász theta by a small dense primal-dual interior point method.

Primal (standard form, minimization):

    min <-J, X>   s.t.  tr X = 1,  X_ij = 0 for every edge ij,  X >= 0

Dual:

    max y_0       s.t.  y_0 I + sum_e y_e (E_ij + E_ji) + Z = -J,  Z >= 0

Search direction is HKM with a Mehrotra predictor-corrector step. After
convergence both sides are certified independently of the iteration: the
primal iterate is projected onto the exact affine constraints and shifted
into the PSD cone, and any edge multipliers y_e give the rigorous upper
bound lambda_max(J + sum_e y_e (E_ij + E_ji)).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .graph import ExclusivityGraph

MAX_ITERATIONS = 10_000
DEFAULT_TOL = 1e-6


class SolverError(RuntimeError):
    """The SDP did not reach the requested accuracy within the budget."""


@dataclass(frozen=True)
class ThetaResult:
    value: float
    feasible_matrix: np.ndarray
    duality_gap: float
    upper_bound: float
    edge_multipliers: np.ndarray
    min_eigenvalue: float
    max_edge_residual: float
    trace_residual: float
    iterations: int


def _constraint_matrices(g: ExclusivityGraph) -> tuple[list[tuple[int, int]], np.ndarray]:
    n = g.n
    edges = g.sorted_edges()
    A = np.zeros((1 + len(edges), n, n))
    A[0] = np.eye(n)
    for k, (i, j) in enumerate(edges, start=1):
        A[k, i - 1, j - 1] = A[k, j - 1, i - 1] = 1.0
    return edges, A


def _max_step(X: np.ndarray, dX: np.ndarray) -> float:
    # largest alpha with X + alpha dX >= 0
    lam = scipy.linalg.eigh(-dX, X, eigvals_only=True)[-1]
    return np.inf if lam <= 0 else 1.0 / lam


def _certify(g: ExclusivityGraph, X: np.ndarray, y_edges: np.ndarray):
    n = g.n
    edges = g.sorted_edges()
    Xc = 0.5 * (X + X.T)
    for i, j in edges:
        Xc[i - 1, j - 1] = Xc[j - 1, i - 1] = 0.0
    lo = np.linalg.eigvalsh(Xc)[0]
    if lo < 0:
        Xc = Xc - lo * np.eye(n)  # keeps edge entries at zero
    Xc = Xc / np.trace(Xc)
    lower = float(Xc.sum())
    S = np.ones((n, n))
    for (i, j), y in zip(edges, y_edges):
        S[i - 1, j - 1] += y
        S[j - 1, i - 1] += y
    upper = float(np.linalg.eigvalsh(S)[-1])
    return Xc, lower, upper


def lovasz_theta(g: ExclusivityGraph, tol: float = DEFAULT_TOL,
                 max_iterations: int = MAX_ITERATIONS) -> ThetaResult:
    """Lovász number of ``g`` with a primal/dual certificate.

    Raises SolverError when the certified gap stays above ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = g.n
    edges, A = _constraint_matrices(g)
    m = len(A)
    Aflat = A.reshape(m, n * n)
    b = np.zeros(m)
    b[0] = 1.0
    C = -np.ones((n, n))

    def op(X):
        return Aflat @ X.reshape(-1)

    def adj(y):
        return (y @ Aflat).reshape(n, n)

    # strictly feasible start on both sides
    X = np.eye(n) / n
    y = np.zeros(m)
    y[0] = -(n + 1.0)
    Z = C - adj(y)

    inner_tol = min(tol, 1e-8) * 1e-2
    for it in range(1, max_iterations + 1):
        rp = b - op(X)
        Rd = C - Z - adj(y)
        mu = float(np.sum(X * Z)) / n
        pobj = float(np.sum(C * X))
        dobj = float(b @ y)
        relgap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        infeas = max(np.linalg.norm(rp), np.linalg.norm(Rd))
        if relgap < inner_tol and infeas < inner_tol:
            break

        G = np.linalg.inv(Z)
        G = 0.5 * (G + G.T)
        XA = np.einsum("ij,kjl->kil", X, A)  # X A_l
        W = np.einsum("kij,jl->kil", XA, G)  # X A_l G
        M = Aflat @ W.transpose(0, 2, 1).reshape(m, -1).T
        M = 0.5 * (M + M.T)
        try:
            factor = scipy.linalg.cho_factor(M)

            def solve(r):
                return scipy.linalg.cho_solve(factor, r)
        except np.linalg.LinAlgError:
            def solve(r):
                return np.linalg.lstsq(M, r, rcond=None)[0]

        def direction(sigma, corr):
            inner = sigma * mu * G - X - X @ Rd @ G
            if corr is not None:
                inner = inner - corr @ G
            dy = solve(rp - op(inner))
            dZ = Rd - adj(dy)
            dX = inner + X @ adj(dy) @ G
            return 0.5 * (dX + dX.T), dy, dZ

        dXp, dyp, dZp = direction(0.0, None)
        ap = min(1.0, _max_step(X, dXp))
        ad = min(1.0, _max_step(Z, dZp))
        mu_aff = float(np.sum((X + ap * dXp) * (Z + ad * dZp))) / n
        sigma = min(1.0, (mu_aff / mu) ** 3) if mu > 0 else 0.0

        dX, dy, dZ = direction(sigma, dXp @ dZp)
        ap = min(1.0, 0.98 * _max_step(X, dX))
        ad = min(1.0, 0.98 * _max_step(Z, dZ))
        X = X + ap * dX
        X = 0.5 * (X + X.T)
        y = y + ad * dy
        Z = Z + ad * dZ
        Z = 0.5 * (Z + Z.T)
    else:
        it = max_iterations

    Xc, lower, upper = _certify(g, X, y[1:])
    gap = upper - lower
    if gap > tol:
        raise SolverError(f"certified gap {gap:.3e} exceeds tol {tol:.1e} after {it} iterations")
    return ThetaResult(
        value=lower,
        feasible_matrix=Xc,
        duality_gap=max(gap, 0.0),
        upper_bound=upper,
        edge_multipliers=y[1:].copy(),
        min_eigenvalue=float(np.linalg.eigvalsh(Xc)[0]),
        max_edge_residual=max((abs(Xc[i - 1, j - 1]) for i, j in edges), default=0.0),
        trace_residual=abs(float(np.trace(Xc)) - 1.0),
        iterations=it,
    )

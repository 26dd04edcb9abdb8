"""Exact primal transportation simplex for dense balanced problems.

Solves min sum f_ij c_ij subject to row sums = supply, column sums =
demand, f >= 0. The basis is maintained as a spanning tree over the
p + q bipartite nodes; pivots use the most-negative reduced cost and
fall back to Bland's smallest-index rule while pivots are degenerate,
which prevents cycling.
"""

import numpy as np

from .errors import SolverError

ENTER_TOL = 1e-11
DEGENERATE_EPS = 1e-15


def _northwest_corner(supply: np.ndarray, demand: np.ndarray):
    """Initial basic feasible solution with exactly p + q - 1 basis cells."""
    p, q = supply.size, demand.size
    flows = np.zeros((p, q))
    basis = []
    a = supply.copy()
    b = demand.copy()
    i = j = 0
    while True:
        f = min(a[i], b[j])
        flows[i, j] = f
        basis.append((i, j))
        a[i] -= f
        b[j] -= f
        if i == p - 1 and j == q - 1:
            break
        if a[i] <= b[j] and i < p - 1:
            i += 1
        else:
            j += 1
    return flows, basis


def _adjacency(basis, p):
    adj = {}
    for i, j in basis:
        adj.setdefault(i, []).append((p + j, (i, j)))
        adj.setdefault(p + j, []).append((i, (i, j)))
    return adj


def _potentials(basis, cost, p, q):
    u = np.full(p, np.nan)
    v = np.full(q, np.nan)
    u[0] = 0.0
    adj = _adjacency(basis, p)
    stack = [0]
    while stack:
        node = stack.pop()
        for other, (ci, cj) in adj.get(node, ()):
            if other < p:
                if np.isnan(u[other]):
                    u[other] = cost[ci, cj] - v[cj]
                    stack.append(other)
            else:
                if np.isnan(v[other - p]):
                    v[other - p] = cost[ci, cj] - u[ci]
                    stack.append(other)
    if np.isnan(u).any() or np.isnan(v).any():
        raise SolverError("basis tree lost connectivity")
    return u, v


def _tree_path(basis, p, start, goal):
    """Cells along the unique tree path from node ``start`` to ``goal``."""
    adj = _adjacency(basis, p)
    parent = {start: None}
    stack = [start]
    while stack:
        node = stack.pop()
        if node == goal:
            break
        for other, cell in adj.get(node, ()):
            if other not in parent:
                parent[other] = (node, cell)
                stack.append(other)
    if goal not in parent:
        raise SolverError("entering cell is disconnected from the basis tree")
    path = []
    node = goal
    while parent[node] is not None:
        prev, cell = parent[node]
        path.append(cell)
        node = prev
    return path


def solve_transport(supply: np.ndarray, demand: np.ndarray, cost: np.ndarray) -> np.ndarray:
    """Optimal flow matrix for a balanced transportation problem.

    Parameters
    ----------
    supply, demand : np.ndarray
        Non-negative masses with equal totals (demand is rescaled to the
        supply total to absorb round-off).
    cost : np.ndarray
        ``(p, q)`` unit transport costs.

    Returns
    -------
    np.ndarray
        ``(p, q)`` optimal flows.
    """
    supply = np.asarray(supply, dtype=np.float64)
    demand = np.asarray(demand, dtype=np.float64)
    cost = np.asarray(cost, dtype=np.float64)
    p, q = cost.shape
    if supply.shape != (p,) or demand.shape != (q,):
        raise SolverError("cost shape does not match supply/demand lengths")
    if (supply < 0).any() or (demand < 0).any():
        raise SolverError("negative mass")
    if not (np.isfinite(supply).all() and np.isfinite(demand).all() and np.isfinite(cost).all()):
        raise SolverError("non-finite solver input")
    total_s, total_d = supply.sum(), demand.sum()
    if total_s <= 0 or total_d <= 0:
        raise SolverError("zero total mass")
    if abs(total_s - total_d) > 1e-6 * max(total_s, total_d):
        raise SolverError("unbalanced transportation problem")
    demand = demand * (total_s / total_d)

    flows, basis = _northwest_corner(supply, demand)
    in_basis = np.zeros((p, q), dtype=bool)
    for cell in basis:
        in_basis[cell] = True

    enter_tol = ENTER_TOL * max(1.0, float(np.abs(cost).max()))
    bland = False
    max_iter = 20 * p * q + 2000
    for _ in range(max_iter):
        u, v = _potentials(basis, cost, p, q)
        reduced = cost - u[:, None] - v[None, :]
        reduced[in_basis] = 0.0
        candidates = reduced < -enter_tol
        if not candidates.any():
            return flows
        if bland:
            flat = int(np.argmax(candidates.ravel()))
        else:
            flat = int(np.argmin(reduced.ravel()))
        ei, ej = divmod(flat, q)

        path = _tree_path(basis, p, p + ej, ei)
        cycle = [(ei, ej)] + path
        minus = cycle[1::2]
        theta = min(flows[c] for c in minus)
        leaving = min(c for c in minus if flows[c] == theta)
        for idx, cell in enumerate(cycle):
            flows[cell] += theta if idx % 2 == 0 else -theta
        flows[leaving] = 0.0
        flows[ei, ej] = max(flows[ei, ej], 0.0)

        basis.remove(leaving)
        basis.append((ei, ej))
        in_basis[leaving] = False
        in_basis[ei, ej] = True
        bland = theta <= DEGENERATE_EPS
    raise SolverError(f"no convergence after {max_iter} pivots")

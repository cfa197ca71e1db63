"""Seeded instance generators at desk scale."""

from __future__ import annotations

import numpy as np

from ..rng import make_rng, resolve_seed
from ..setfunctions import CutModel
from .io import InstanceSpec, load_graph

#: start point at which coordinate ascent stalls on the pathology graph
PATHOLOGY_POINT = (0.5, 1.0, 0.0, 0.5)


def _unit(n):
    return {"lower": [0.0] * n, "upper": [1.0] * n}


def gen_sqp(n: int, m: int, seed: int | None = None) -> InstanceSpec:
    """Monotone DR quadratic with h = -H^T ubar over {Ax <= 1, 0 <= x <= 1}."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    seed = resolve_seed(seed)
    rng = make_rng(seed)
    H = -100.0 * rng.random((n, n))
    H = (H + H.T) / 2
    ubar = np.ones(n)
    h = -H.T @ ubar
    A = rng.random((m, n))
    objective = {"family": "quadratic", "params": {"H": H.tolist(), "h": h.tolist(), "c": 0.0}, "domain": _unit(n)}
    constraint = {"type": "polytope", "A": A.tolist(), "b": [1.0] * m, "ubar": ubar.tolist()}
    return InstanceSpec(objective, constraint, f"sqp-n{n}-m{m}-s{seed}", seed)


def random_orthogonal(n: int, rng) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs


def gen_softmax(n: int, budget_frac: float = 0.5, seed: int | None = None) -> InstanceSpec:
    """Softmax extension with eigenvalues U[0, 10] and a budget 1^T x <= budget_frac * n."""
    if n < 1:
        raise ValueError("n must be positive")
    if not 0 < budget_frac <= 1:
        raise ValueError("budget_frac must lie in (0, 1]")
    seed = resolve_seed(seed)
    rng = make_rng(seed)
    d = 10.0 * rng.random(n)
    U = random_orthogonal(n, rng)
    L = (U * d) @ U.T
    L = (L + L.T) / 2
    objective = {"family": "softmax", "params": {"L": L.tolist()}, "domain": _unit(n)}
    constraint = {"type": "polytope", "A": [[1.0] * n], "b": [budget_frac * n], "ubar": [1.0] * n}
    return InstanceSpec(objective, constraint, f"softmax-n{n}-s{seed}", seed, {"eigenvalues": d.tolist()})


def gen_revenue(graph_path, q: float = 0.75, budget_frac: float = 0.2, u: float = 1.0, undirected: bool = False) -> InstanceSpec:
    """Influence-and-exploit revenue on a weighted graph with budget 1^T x <= budget_frac * n * u."""
    if not 0 < q < 1:
        raise ValueError("q must lie strictly inside (0, 1)")
    W = load_graph(graph_path, undirected=undirected)
    n = W.shape[0]
    objective = {
        "family": "revenue_ie",
        "params": {"W": W.tolist(), "q": q},
        "domain": {"lower": [0.0] * n, "upper": [u] * n},
    }
    constraint = {"type": "polytope", "A": [[1.0] * n], "b": [budget_frac * n * u], "ubar": [u] * n}
    return InstanceSpec(objective, constraint, f"revenue-n{n}-q{q}", 0)


def gen_pathology(c: float = 50.0, b: float = 10.0) -> CutModel:
    """Directed 4-node cut on which coordinate ascent stalls at PATHOLOGY_POINT."""
    if not (c > 0 and b > 0):
        raise ValueError("c and b must be positive")
    W = np.zeros((4, 4))
    W[0, 1] = c
    W[1, 2] = c
    W[2, 3] = c
    W[2, 1] = b * c
    return CutModel(W, directed=True)


def gen_bipartite_influence(n_users: int, n_actions: int, seed: int | None = None, budget_frac: float = 0.2) -> InstanceSpec:
    """Facility-location influence over users; W[i, j] > 0 links user i to action j.

    Each user's activation probability is sigmoid(-degree), so highly
    connected users are harder to activate directly.
    """
    if n_users < 1 or n_actions < 1:
        raise ValueError("sizes must be positive")
    seed = resolve_seed(seed)
    rng = make_rng(seed)
    links = rng.random((n_users, n_actions)) < 0.5
    W = np.where(links, rng.random((n_users, n_actions)), 0.0)
    degree = links.sum(axis=1)
    p = 1.0 / (1.0 + np.exp(degree))
    n = n_users
    objective = {"family": "influence", "params": {"W": W.tolist(), "p": p.tolist()}, "domain": _unit(n)}
    constraint = {"type": "polytope", "A": [[1.0] * n], "b": [max(budget_frac * n, 1.0)], "ubar": [1.0] * n}
    return InstanceSpec(objective, constraint, f"influence-u{n_users}-a{n_actions}-s{seed}", seed)

"""Set functions on a ground set ``{0, ..., n-1}`` and their multilinear extensions.

Every model exposes a direct set oracle (``value``/``values``) written from the
combinatorial definition, and a separate closed-form multilinear extension.
The two are deliberately independent so that one can check the other.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .errors import BadSet, DimensionMismatch, StructuralViolation, TooLarge, TooLargeForTable
from .kernels import flid_value_grad, multilinear_sum, subset_bits

MAX_ENUM = 20


def _as_matrix(a, name: str) -> np.ndarray:
    arr = np.array(a, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be a matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise StructuralViolation(f"{name} has non-finite entries")
    return arr


def _as_vector(a, name: str, n: int | None = None) -> np.ndarray:
    arr = np.array(a, dtype=np.float64).reshape(-1)
    if n is not None and arr.shape[0] != n:
        raise DimensionMismatch(f"{name} has length {arr.shape[0]}, expected {n}")
    if not np.all(np.isfinite(arr)):
        raise StructuralViolation(f"{name} has non-finite entries")
    return arr


class SetFunctionModel:
    """Base class: a set function F over ``n`` items."""

    family = "abstract"
    #: True/False when known from theory, None when unknown (explicit tables).
    submodular: bool | None = True
    monotone = False

    def __init__(self, n: int):
        if n < 1:
            raise DimensionMismatch("ground set must have at least one element")
        self.n = int(n)

    # -- set oracle ---------------------------------------------------------
    def mask(self, S) -> np.ndarray:
        """Boolean membership vector for ``S`` (a mask or an iterable of indices)."""
        arr = np.asarray(S)
        if arr.dtype == bool:
            if arr.shape != (self.n,):
                raise BadSet(f"mask has shape {arr.shape}, expected ({self.n},)")
            return arr.copy()
        items = list(int(i) for i in np.ravel(arr)) if arr.size else []
        if len(set(items)) != len(items):
            raise BadSet(f"duplicate elements in {items}")
        out = np.zeros(self.n, dtype=bool)
        for i in items:
            if not 0 <= i < self.n:
                raise BadSet(f"element {i} outside ground set of size {self.n}")
            out[i] = True
        return out

    def value(self, S) -> float:
        return float(self.values(self.mask(S)[None, :])[0])

    def values(self, masks: np.ndarray) -> np.ndarray:
        """F evaluated on each row of a ``(k, n)`` boolean matrix."""
        raise NotImplementedError

    def table(self) -> np.ndarray:
        """All ``2**n`` values, indexed so that bit ``i`` of the index marks item ``i``."""
        if self.n > MAX_ENUM:
            raise TooLarge(f"n={self.n} exceeds enumeration limit {MAX_ENUM}")
        return self.values(subset_bits(self.n))

    # -- multilinear extension ---------------------------------------------
    def multilinear(self, x: np.ndarray) -> float:
        raise NotImplementedError

    def multilinear_grad(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def multilinear_partial(self, x: np.ndarray, i: int) -> float:
        return float(self.multilinear_grad(x)[i])

    # -- serialization -----------------------------------------------------
    def params(self) -> dict:
        raise NotImplementedError

    def to_spec(self) -> dict:
        return {"family": self.family, "n": self.n, "params": self.params()}

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n})"


class ModularModel(SetFunctionModel):
    """F(S) = sum of theta over S."""

    family = "modular"

    def __init__(self, theta):
        theta = _as_vector(theta, "theta")
        super().__init__(theta.shape[0])
        self.theta = theta
        self.monotone = bool(np.all(theta >= 0))

    def values(self, masks):
        return masks.astype(np.float64) @ self.theta

    def multilinear(self, x):
        return float(self.theta @ x)

    def multilinear_grad(self, x):
        return self.theta.copy()

    def multilinear_partial(self, x, i):
        return float(self.theta[i])

    def params(self):
        return {"theta": self.theta.tolist()}


class CutModel(SetFunctionModel):
    """Weighted graph cut. Self loops are never cut and are ignored.

    For an undirected graph ``W`` must be symmetric and each edge is counted
    once: F(S) = sum over i in S, j not in S of W[i, j].
    """

    family = "cut"

    def __init__(self, W, directed: bool = False):
        W = _as_matrix(W, "W")
        if W.shape[0] != W.shape[1]:
            raise DimensionMismatch(f"W must be square, got {W.shape}")
        if np.any(W < 0):
            raise StructuralViolation("cut weights must be nonnegative")
        if not directed and not np.array_equal(W, W.T):
            raise StructuralViolation("undirected cut needs a symmetric W")
        super().__init__(W.shape[0])
        self.W = W.copy()
        np.fill_diagonal(self.W, 0.0)
        self.directed = bool(directed)
        self._out = self.W.sum(axis=1)
        self._in = self.W.sum(axis=0)

    def values(self, masks):
        M = masks.astype(np.float64)
        return np.einsum("ki,ij,kj->k", M, self.W, 1.0 - M)

    def multilinear(self, x):
        if self.directed:
            return float(x @ self._out - x @ self.W @ x)
        # half the sum over ordered pairs of W_ij (x_i + x_j - 2 x_i x_j)
        return float(0.5 * (x @ self._out + self._in @ x) - x @ self.W @ x)

    def multilinear_grad(self, x):
        if self.directed:
            return self._out - self.W @ x - self.W.T @ x
        return 0.5 * (self._out + self._in) - self.W @ x - self.W.T @ x

    def multilinear_partial(self, x, i):
        if self.directed:
            return float(self._out[i] - self.W[i] @ x - self.W[:, i] @ x)
        return float(0.5 * (self._out[i] + self._in[i]) - self.W[i] @ x - self.W[:, i] @ x)

    def params(self):
        return {"W": self.W.tolist(), "directed": self.directed}


class IsingModel(SetFunctionModel):
    """F(S) = sum_{s in S} theta_s + sum_{s<t, both in S} pairwise[s, t], pairwise <= 0."""

    family = "ising"

    def __init__(self, theta, pairwise):
        theta = _as_vector(theta, "theta")
        P = _as_matrix(pairwise, "pairwise")
        n = theta.shape[0]
        if P.shape != (n, n):
            raise DimensionMismatch(f"pairwise must be {n}x{n}, got {P.shape}")
        if not np.array_equal(P, P.T):
            raise StructuralViolation("pairwise weights must be symmetric")
        off = P[~np.eye(n, dtype=bool)]
        if np.any(off > 0):
            raise StructuralViolation("pairwise weights must be nonpositive")
        super().__init__(n)
        self.theta = theta
        self.pairwise = P.copy()
        np.fill_diagonal(self.pairwise, 0.0)
        # worst-case marginal gain is theta_i plus all negative couplings
        self.monotone = bool(np.all(theta + self.pairwise.sum(axis=1) >= 0))

    def values(self, masks):
        M = masks.astype(np.float64)
        return M @ self.theta + 0.5 * np.einsum("ki,ij,kj->k", M, self.pairwise, M)

    def multilinear(self, x):
        return float(self.theta @ x + 0.5 * x @ self.pairwise @ x)

    def multilinear_grad(self, x):
        return self.theta + self.pairwise @ x

    def multilinear_partial(self, x, i):
        return float(self.theta[i] + self.pairwise[i] @ x)

    def params(self):
        return {"theta": self.theta.tolist(), "pairwise": self.pairwise.tolist()}


class FlidModel(SetFunctionModel):
    """Facility location diversity: F(S) = sum_{i in S} u_i + sum_d max_{i in S} W[i, d]."""

    family = "flid"

    def __init__(self, W, u=None):
        W = _as_matrix(W, "W")
        if np.any(W < 0):
            raise StructuralViolation("FLID weights must be nonnegative")
        n = W.shape[0]
        u = np.zeros(n) if u is None else _as_vector(u, "u", n)
        super().__init__(n)
        self.W = np.ascontiguousarray(W)
        self.u = u
        self.order = np.ascontiguousarray(np.argsort(W, axis=0, kind="stable").T)
        self.monotone = bool(np.all(u >= 0))

    def values(self, masks):
        M = masks.astype(np.float64)
        if self.W.shape[1] == 0:
            return M @ self.u
        # W >= 0, so zeroing excluded rows leaves max over the empty set at 0
        return M @ self.u + (M[:, :, None] * self.W[None, :, :]).max(axis=1).sum(axis=1)

    def multilinear(self, x):
        return flid_value_grad(self.W, self.order, self.u, x)[0]

    def multilinear_grad(self, x):
        return flid_value_grad(self.W, self.order, self.u, x)[1]

    def params(self):
        return {"W": self.W.tolist(), "u": self.u.tolist()}


class SetCoverModel(SetFunctionModel):
    """F(S) = total credit of concepts covered by at least one item of S."""

    family = "setcover"

    def __init__(self, credits, cover: Iterable[Iterable[int]], n: int | None = None):
        credits = _as_vector(credits, "credits")
        cover = [sorted(int(i) for i in c) for c in cover]
        if len(cover) != credits.shape[0]:
            raise DimensionMismatch("one item list per concept is required")
        if np.any(credits < 0):
            raise StructuralViolation("concept credits must be nonnegative")
        top = max((max(c) for c in cover if c), default=-1)
        n = top + 1 if n is None else int(n)
        if top >= n or any(i < 0 for c in cover for i in c):
            raise DimensionMismatch("cover references items outside the ground set")
        super().__init__(n)
        self.credits = credits
        self.cover = cover
        self.incidence = np.zeros((len(cover), n), dtype=bool)
        for c, items in enumerate(cover):
            self.incidence[c, items] = True
        self.monotone = True

    def values(self, masks):
        covered = (masks.astype(np.int64) @ self.incidence.T.astype(np.int64)) > 0
        return covered.astype(np.float64) @ self.credits

    def _miss(self, x):
        # probability that concept c stays uncovered
        return np.where(self.incidence, 1.0 - x, 1.0).prod(axis=1)

    def multilinear(self, x):
        return float(self.credits @ (1.0 - self._miss(x)))

    def multilinear_grad(self, x):
        return np.array([self.multilinear_partial(x, i) for i in range(self.n)])

    def multilinear_partial(self, x, i):
        rows = self.incidence[:, i]
        if not rows.any():
            return 0.0
        others = np.where(self.incidence[rows], 1.0 - x, 1.0)
        others[:, i] = 1.0
        return float(self.credits[rows] @ others.prod(axis=1))

    def params(self):
        return {"credits": self.credits.tolist(), "cover": [list(c) for c in self.cover]}


class TableModel(SetFunctionModel):
    """Explicit table of all 2**n values (bit i of the index marks item i)."""

    family = "table"
    submodular = None

    def __init__(self, values, n: int | None = None):
        vals = _as_vector(values, "values")
        size = vals.shape[0]
        bits = size.bit_length() - 1
        if size < 2 or (1 << bits) != size:
            raise DimensionMismatch(f"table length {size} is not 2**n with n >= 1")
        if n is not None and int(n) != bits:
            raise DimensionMismatch(f"table length {size} does not match n={n}")
        if bits > MAX_ENUM:
            raise TooLargeForTable(f"explicit tables are limited to n <= {MAX_ENUM}")
        super().__init__(bits)
        self._table = vals
        self._weights = 1 << np.arange(bits, dtype=np.int64)

    def values(self, masks):
        return self._table[masks.astype(np.int64) @ self._weights]

    def table(self):
        return self._table.copy()

    def multilinear(self, x):
        return multilinear_sum(self._table, x)

    def multilinear_grad(self, x):
        return np.array([self.multilinear_partial(x, i) for i in range(self.n)])

    def multilinear_partial(self, x, i):
        hi, lo = x.copy(), x.copy()
        hi[i], lo[i] = 1.0, 0.0
        return multilinear_sum(self._table, hi) - multilinear_sum(self._table, lo)

    def params(self):
        return {"values": self._table.tolist()}


class ZeroModel(ModularModel):
    """F = 0; handy as a neutral partner in PA objectives."""

    def __init__(self, n: int):
        super().__init__(np.zeros(n))


_FAMILIES = {
    "modular": lambda p, n: ModularModel(p["theta"]),
    "cut": lambda p, n: CutModel(p["W"], directed=bool(p.get("directed", False))),
    "ising": lambda p, n: IsingModel(p["theta"], p["pairwise"]),
    "flid": lambda p, n: FlidModel(p["W"], p.get("u")),
    "setcover": lambda p, n: SetCoverModel(p["credits"], p["cover"], n=n),
    "table": lambda p, n: TableModel(p["values"], n=n),
}


def model_from_spec(spec: dict) -> SetFunctionModel:
    """Inverse of :meth:`SetFunctionModel.to_spec`."""
    family = spec.get("family")
    if family not in _FAMILIES:
        raise StructuralViolation(f"unknown model family {family!r}")
    n = spec.get("n")
    model = _FAMILIES[family](spec.get("params", {}), n)
    if n is not None and model.n != int(n):
        raise DimensionMismatch(f"model has n={model.n}, file says n={n}")
    return model

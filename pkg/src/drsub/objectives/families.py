"""Concrete objective families."""

from __future__ import annotations

import numpy as np

from ..errors import DimensionMismatch, SingularMatrix, StructuralViolation
from ..rng import make_rng
from ..setfunctions import FlidModel, SetFunctionModel, _as_matrix, _as_vector
from .base import BoxDomain, Objective, ObjectiveMeta

DET_FLOOR = 1e-300


def _domain_or_unit(domain: BoxDomain | None, n: int) -> BoxDomain:
    if domain is None:
        return BoxDomain.unit(n)
    if domain.n != n:
        raise DimensionMismatch(f"parameters imply n={n}, domain has n={domain.n}")
    return domain


def _require_unit_cube(domain: BoxDomain, family: str):
    if np.any(domain.lower < 0) or np.any(domain.upper > 1):
        raise DimensionMismatch(f"{family} is defined on subsets of [0, 1]^n")


class Quadratic(Objective):
    """f(x) = 0.5 x'Hx + h'x + c.

    ``require`` may be ``"dr"`` or ``"submodular"``; the matching sign
    condition on H is then enforced at construction.
    """

    family = "quadratic"

    def __init__(self, H, h, c: float = 0.0, domain: BoxDomain | None = None, require: str | None = None):
        H = _as_matrix(H, "H")
        n = H.shape[0]
        if H.shape != (n, n):
            raise DimensionMismatch(f"H must be square, got {H.shape}")
        h = _as_vector(h, "h", n)
        if not np.allclose(H, H.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(H).max(initial=0.0))):
            raise StructuralViolation("H must be symmetric")
        domain = _domain_or_unit(domain, n)
        off = H[~np.eye(n, dtype=bool)]
        submodular = bool(np.all(off <= 0))
        dr = submodular and bool(np.all(np.diag(H) <= 0))
        if require == "dr" and not dr:
            raise StructuralViolation("DR-submodular quadratic needs every entry of H <= 0")
        if require == "submodular" and not submodular:
            raise StructuralViolation("submodular quadratic needs off-diagonal entries of H <= 0")
        if require not in (None, "dr", "submodular"):
            raise StructuralViolation(f"unknown requirement {require!r}")
        # the gradient is affine, so its smallest value over the box sits at a vertex
        grad_min = h + np.minimum(H * domain.lower, H * domain.upper).sum(axis=1)
        monotone = bool(np.all(grad_min >= 0)) if n else True
        lip = float(np.linalg.norm(H, 2)) if n else 0.0
        super().__init__(domain, ObjectiveMeta(n=n, monotone=monotone, dr=dr, lipschitz=lip, submodular=submodular))
        self.H, self.h, self.c = H, h, float(c)
        self.require = require

    def _value(self, x):
        return 0.5 * x @ self.H @ x + self.h @ x + self.c

    def _grad(self, x):
        return self.H @ x + self.h

    def _partial(self, x, i):
        return float(self.H[i] @ x + self.h[i])

    def coordinate_concave(self, i):
        return bool(self.H[i, i] <= 0)

    def params(self):
        p = {"H": self.H.tolist(), "h": self.h.tolist(), "c": self.c}
        if self.require:
            p["require"] = self.require
        return p


class Softmax(Objective):
    """f(x) = log det(diag(x)(L - I) + I) for a PSD kernel L."""

    family = "softmax"

    def __init__(self, L, domain: BoxDomain | None = None):
        L = _as_matrix(L, "L")
        n = L.shape[0]
        if L.shape != (n, n):
            raise DimensionMismatch(f"L must be square, got {L.shape}")
        if not np.array_equal(L, L.T):
            raise StructuralViolation("softmax kernel must be symmetric")
        if n and np.linalg.eigvalsh(L).min() < -1e-10:
            raise StructuralViolation("softmax kernel must be positive semidefinite")
        domain = _domain_or_unit(domain, n)
        _require_unit_cube(domain, self.family)
        super().__init__(domain, ObjectiveMeta(n=n, monotone=False, dr=True))
        self.L = L
        self._D = L - np.eye(n)

    def _matrix(self, x):
        return x[:, None] * self._D + np.eye(self.n)

    def _value(self, x):
        sign, logdet = np.linalg.slogdet(self._matrix(x))
        if sign <= 0 or logdet <= np.log(DET_FLOOR):
            raise SingularMatrix("determinant vanished in the softmax extension")
        return float(logdet)

    def _grad(self, x):
        M = self._matrix(x)
        sign, logdet = np.linalg.slogdet(M)
        if sign <= 0 or logdet <= np.log(DET_FLOOR):
            raise SingularMatrix("determinant vanished in the softmax extension")
        C = np.linalg.inv(M)
        return np.einsum("ij,ji->i", self._D, C)

    def params(self):
        return {"L": self.L.tolist()}


def multilinear_value(model: SetFunctionModel, x: np.ndarray) -> float:
    """Closed form inside the cube; the set-function oracle itself at 0/1 vertices."""
    if np.all((x == 0.0) | (x == 1.0)):
        return float(model.value(x == 1.0))
    return model.multilinear(x)


class Multilinear(Objective):
    """Closed-form multilinear extension of a set-function model."""

    def __init__(self, model: SetFunctionModel, domain: BoxDomain | None = None):
        domain = _domain_or_unit(domain, model.n)
        _require_unit_cube(domain, "multilinear extension")
        meta = ObjectiveMeta(
            n=model.n,
            monotone=bool(model.monotone),
            dr=model.submodular is True,
            submodular=model.submodular is True,
        )
        super().__init__(domain, meta)
        self.model = model
        self.family = f"{model.family}_mt"

    def _value(self, x):
        return multilinear_value(self.model, x)

    def _grad(self, x):
        return self.model.multilinear_grad(x)

    def _partial(self, x, i):
        return self.model.multilinear_partial(x, i)

    def coordinate_concave(self, i):
        return True  # affine in every coordinate

    def params(self):
        return {"model": self.model.to_spec()}


class SampledMultilinear(Objective):
    """Monte-Carlo estimate of a multilinear extension from ``k`` samples.

    Stream ``j`` of seed ``s`` always draws the same uniforms, so
    ``estimate(x, j)`` is deterministic; ``value`` uses stream 0.
    """

    family = "sampled_mt"

    def __init__(self, model: SetFunctionModel, k: int, seed: int = 0, domain: BoxDomain | None = None):
        if k < 1:
            raise StructuralViolation("sample count must be positive")
        domain = _domain_or_unit(domain, model.n)
        _require_unit_cube(domain, self.family)
        meta = ObjectiveMeta(
            n=model.n,
            monotone=bool(model.monotone),
            dr=model.submodular is True,
            submodular=model.submodular is True,
            stochastic=True,
        )
        super().__init__(domain, meta)
        self.model, self.k, self.seed = model, int(k), int(seed)

    def _uniforms(self, stream: int) -> np.ndarray:
        return make_rng(self.seed, stream).random((self.k, self.n))

    def estimate(self, x, stream: int = 0) -> float:
        x = self.point(x)
        return float(self.model.values(self._uniforms(stream) < x).mean())

    def _value(self, x):
        return float(self.model.values(self._uniforms(0) < x).mean())

    def _grad(self, x):
        S = self._uniforms(0) < x
        g = np.empty(self.n)
        for i in range(self.n):
            with_i, without_i = S.copy(), S.copy()
            with_i[:, i], without_i[:, i] = True, False
            g[i] = (self.model.values(with_i) - self.model.values(without_i)).mean()
        return g

    def coordinate_concave(self, i):
        return True

    def params(self):
        return {"model": self.model.to_spec(), "k": self.k, "seed": self.seed}


class Influence(Objective):
    """Facility-location multilinear extension composed with activation probabilities.

    Independent actions (``p`` of length n_users): a_i(x) = 1 - (1 - p_i)^{x_i}.
    Bipartite actions (``p`` of shape n_actions x n_users):
    a_t(x) = 1 - prod_s (1 - p[s, t])^{x_s}. ``W`` (n_users x D) holds the
    facility-location weights over users.
    """

    family = "influence"

    def __init__(self, W, p, domain: BoxDomain | None = None):
        self.inner = FlidModel(W)
        p = np.array(p, dtype=np.float64)
        if np.any(p < 0) or np.any(p >= 1) or not np.all(np.isfinite(p)):
            raise StructuralViolation("activation probabilities must lie in [0, 1)")
        n_users = self.inner.n
        if p.ndim == 1:
            if p.shape[0] != n_users:
                raise DimensionMismatch("one activation probability per user is required")
            self.bipartite = False
            n = n_users
        elif p.ndim == 2 and p.shape[1] == n_users:
            self.bipartite = True
            n = p.shape[0]
        else:
            raise DimensionMismatch(f"activation probabilities have shape {p.shape}")
        domain = _domain_or_unit(domain, n)
        if np.any(domain.lower < 0):
            raise DimensionMismatch("influence investments must be nonnegative")
        super().__init__(domain, ObjectiveMeta(n=n, monotone=True, dr=True))
        self.p = p
        self._log1mp = np.log1p(-p)

    def activation(self, x: np.ndarray) -> np.ndarray:
        if self.bipartite:
            return -np.expm1(x @ self._log1mp)
        return -np.expm1(x * self._log1mp)

    def _value(self, x):
        return self.inner.multilinear(self.activation(x))

    def _grad(self, x):
        a = self.activation(x)
        ga = self.inner.multilinear_grad(a)
        if self.bipartite:
            return (-self._log1mp) @ (ga * (1.0 - a))
        return ga * (-self._log1mp) * (1.0 - a)

    def params(self):
        return {"W": self.inner.W.tolist(), "p": self.p.tolist()}


class RevenueIE(Objective):
    """Expected revenue sum_i sum_{j != i} W_ij (1 - q^{x_i}) q^{x_j}."""

    family = "revenue_ie"

    def __init__(self, W, q: float, domain: BoxDomain | None = None):
        W = _as_matrix(W, "W")
        n = W.shape[0]
        if W.shape != (n, n):
            raise DimensionMismatch(f"W must be square, got {W.shape}")
        if not 0.0 < q < 1.0:
            raise StructuralViolation("q must lie strictly inside (0, 1)")
        if np.any(W < 0):
            raise StructuralViolation("revenue weights must be nonnegative")
        if np.any(np.diag(W) != 0):
            raise StructuralViolation("revenue weights need a zero diagonal")
        domain = _domain_or_unit(domain, n)
        if np.any(domain.lower < 0):
            raise DimensionMismatch("investments must be nonnegative")
        super().__init__(domain, ObjectiveMeta(n=n, monotone=False, dr=False, submodular=True))
        self.W, self.q = W, float(q)
        self._logq = np.log(self.q)

    def _parts(self, x):
        b = np.exp(x * self._logq)
        return -np.expm1(x * self._logq), b

    def _value(self, x):
        a, b = self._parts(x)
        return float(a @ self.W @ b)

    def _grad(self, x):
        a, b = self._parts(x)
        return self._logq * b * (self.W.T @ a - self.W @ b)

    def _partial(self, x, i):
        a, b = self._parts(x)
        return float(self._logq * b[i] * (self.W[:, i] @ a - self.W[i] @ b))

    def coordinate_concave(self, i):
        return False

    def params(self):
        return {"W": self.W.tolist(), "q": self.q}


class RevenueMixed(Objective):
    """Support-dependent revenue, exactly as written (no smoothing).

    f(x) = alpha * sum_{s: x_s = 0} sqrt(sum_t x_t W[s, t])
         + beta * sum_t W[t, t] x_t - gamma * sum_t x_t
    Discontinuous wherever a coordinate reaches 0, hence non-differentiable.
    """

    family = "revenue_mixed"

    def __init__(self, W, alpha: float = 1.0, beta: float = 1.0, gamma: float = 1.0, domain: BoxDomain | None = None):
        W = _as_matrix(W, "W")
        n = W.shape[0]
        if W.shape != (n, n):
            raise DimensionMismatch(f"W must be square, got {W.shape}")
        if np.any(W < 0) or not np.array_equal(W, W.T):
            raise StructuralViolation("revenue weights must be symmetric and nonnegative")
        if min(alpha, beta, gamma) < 0:
            raise StructuralViolation("alpha, beta, gamma must be nonnegative")
        domain = _domain_or_unit(domain, n)
        if np.any(domain.lower < 0):
            raise DimensionMismatch("investments must be nonnegative")
        meta = ObjectiveMeta(n=n, monotone=False, dr=False, differentiable=False, submodular=True)
        super().__init__(domain, meta)
        self.W = W
        self.alpha, self.beta, self.gamma = float(alpha), float(beta), float(gamma)

    def _value(self, x):
        idle = x == 0
        reach = np.sqrt(np.maximum(self.W[idle] @ x, 0.0))
        return float(self.alpha * reach.sum() + self.beta * np.diag(self.W) @ x - self.gamma * x.sum())

    def coordinate_concave(self, i):
        return False

    def params(self):
        return {"W": self.W.tolist(), "alpha": self.alpha, "beta": self.beta, "gamma": self.gamma}

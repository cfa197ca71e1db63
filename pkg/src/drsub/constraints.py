"""Feasible regions: boxes and down-closed polytopes {x : Ax <= b, 0 <= x <= ubar}."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, MalformedInput, NegativeCap
from .objectives.base import BoxDomain

PIVOT_TOL = 1e-9
PROJECT_ITERS = 500
PROJECT_GAP = 1e-8


@dataclass(frozen=True)
class LpSolution:
    vertex: np.ndarray
    value: float
    status: str = "optimal"


def simplex_max(A, b, ubar, g) -> LpSolution:
    """Maximize <g, x> subject to Ax <= b, 0 <= x <= ubar.

    Bounded-variable primal simplex started from the all-slack basis at the
    origin (feasible because b >= 0). Bland's rule picks the lowest-index
    improving variable and, among tied ratio-test blockers, the lowest-index
    leaving variable, so every call is deterministic and cycling cannot occur.
    """
    A = np.array(A, dtype=np.float64, ndmin=2)
    b = np.array(b, dtype=np.float64).reshape(-1)
    ubar = np.array(ubar, dtype=np.float64).reshape(-1)
    g = np.array(g, dtype=np.float64).reshape(-1)
    n = ubar.shape[0]
    if A.size == 0:
        A = np.zeros((0, n))
    m = A.shape[0]
    if A.shape[1] != n or b.shape[0] != m or g.shape[0] != n:
        raise MalformedInput(f"inconsistent LP shapes A{A.shape} b{b.shape} ubar{ubar.shape} g{g.shape}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b)) and np.all(np.isfinite(g)) and np.all(np.isfinite(ubar))):
        raise MalformedInput("LP data must be finite")
    if np.any(A < 0) or np.any(b < 0) or np.any(ubar < 0):
        raise MalformedInput("down-closed polytope needs A >= 0, b >= 0, ubar >= 0")

    N = n + m
    cost = np.concatenate([g, np.zeros(m)])
    upper = np.concatenate([ubar, np.full(m, np.inf)])
    T = np.hstack([A, np.eye(m)])  # B^{-1} [A I]; the basis starts as the slacks
    basis = list(range(n, N))
    x = np.concatenate([np.zeros(n), b])
    is_basic = np.zeros(N, dtype=bool)
    is_basic[n:] = True
    at_upper = np.zeros(N, dtype=bool)

    for _ in range(50 * (N + 1) ** 2):
        reduced = cost - cost[basis] @ T
        enter, direction = -1, 0
        for j in range(N):
            if is_basic[j] or upper[j] == 0.0:
                continue  # fixed variables never move
            if not at_upper[j] and reduced[j] > PIVOT_TOL:
                enter, direction = j, 1
                break
            if at_upper[j] and reduced[j] < -PIVOT_TOL:
                enter, direction = j, -1
                break
        if enter < 0:
            break

        col = direction * T[:, enter]
        blockers = []  # (ratio, leaving variable, row, leaves at upper bound)
        for r in range(m):
            var = basis[r]
            if col[r] > PIVOT_TOL:
                blockers.append((max(x[var], 0.0) / col[r], var, r, False))
            elif col[r] < -PIVOT_TOL and np.isfinite(upper[var]):
                blockers.append((max(upper[var] - x[var], 0.0) / -col[r], var, r, True))
        flip = upper[enter]
        best = min((t for t, *_ in blockers), default=np.inf)
        if not np.isfinite(best) and not np.isfinite(flip):
            raise MalformedInput("LP is unbounded; the polytope is not down-closed and bounded")

        if flip < best - PIVOT_TOL:
            x[basis] -= flip * col
            x[enter] = upper[enter] if direction > 0 else 0.0
            at_upper[enter] = direction > 0
            continue

        # Bland: lowest-index leaving variable among the tied blockers
        step, leaving, row, to_upper = min(
            (blk for blk in blockers if blk[0] <= best + PIVOT_TOL), key=lambda blk: blk[1]
        )
        x[basis] -= step * col
        x[enter] += direction * step
        x[leaving] = upper[leaving] if to_upper else 0.0
        at_upper[leaving] = to_upper
        at_upper[enter] = False
        T[row] /= T[row, enter]
        for r in range(m):
            if r != row and T[r, enter] != 0.0:
                T[r] -= T[r, enter] * T[row]
        basis[row] = enter
        is_basic[leaving], is_basic[enter] = False, True
    else:  # pragma: no cover - Bland's rule terminates
        raise MalformedInput("simplex iteration limit reached")

    vertex = np.clip(x[:n], 0.0, ubar)
    return LpSolution(vertex=vertex, value=float(g @ vertex))


class Constraint:
    """Common interface of :class:`Box` and :class:`Polytope`."""

    kind = "abstract"

    @property
    def n(self) -> int:
        raise NotImplementedError

    @property
    def lower(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def upper(self) -> np.ndarray:
        """Coordinate-wise upper bound (ubar)."""
        raise NotImplementedError

    @property
    def down_closed(self) -> bool:
        return bool(np.all(self.lower == 0))

    def _vector(self, v, name="vector") -> np.ndarray:
        v = np.array(v, dtype=np.float64).reshape(-1)
        if v.shape[0] != self.n:
            raise DimensionMismatch(f"{name} has length {v.shape[0]}, expected {self.n}")
        return v

    def lmo(self, g) -> np.ndarray:
        raise NotImplementedError

    def lmo_shrunken(self, g, cap) -> np.ndarray:
        raise NotImplementedError

    def project(self, y) -> np.ndarray:
        raise NotImplementedError

    def contains(self, x, tol: float = 1e-9) -> bool:
        raise NotImplementedError

    def diameter(self) -> float:
        raise NotImplementedError

    def capped(self, cap) -> "Constraint":
        """This region intersected with {y <= cap}."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


def _check_cap(cap, n) -> np.ndarray:
    cap = np.array(cap, dtype=np.float64).reshape(-1)
    if cap.shape[0] != n:
        raise DimensionMismatch(f"cap has length {cap.shape[0]}, expected {n}")
    if np.any(cap < -1e-12):
        raise NegativeCap(f"cap must be nonnegative, got min {cap.min()}")
    return np.maximum(cap, 0.0)


class Box(Constraint):
    kind = "box"

    def __init__(self, lower, upper):
        self.box = BoxDomain(lower, upper)

    @classmethod
    def from_domain(cls, domain: BoxDomain) -> "Box":
        return cls(domain.lower, domain.upper)

    @property
    def n(self):
        return self.box.n

    @property
    def lower(self):
        return self.box.lower

    @property
    def upper(self):
        return self.box.upper

    def lmo(self, g):
        g = self._vector(g, "g")
        return np.where(g > 0, self.upper, self.lower)

    def lmo_shrunken(self, g, cap):
        g = self._vector(g, "g")
        cap = _check_cap(cap, self.n)
        top = np.maximum(np.minimum(self.upper, cap), self.lower)
        return np.where(g > 0, top, self.lower)

    def project(self, y):
        return np.clip(self._vector(y, "y"), self.lower, self.upper)

    def contains(self, x, tol=1e-9):
        x = np.asarray(x, dtype=np.float64)
        return x.shape == (self.n,) and self.box.contains(x, tol)

    def diameter(self):
        return float(np.linalg.norm(self.upper - self.lower))

    def capped(self, cap):
        cap = _check_cap(cap, self.n)
        return Box(self.lower, np.maximum(np.minimum(self.upper, cap), self.lower))

    def to_dict(self):
        return {"type": "box", "lower": self.lower.tolist(), "upper": self.upper.tolist()}

    def __repr__(self):
        return f"Box(n={self.n})"


class Polytope(Constraint):
    """Down-closed polytope; the origin is always feasible."""

    kind = "polytope"

    def __init__(self, A, b, ubar):
        A = np.array(A, dtype=np.float64, ndmin=2)
        b = np.array(b, dtype=np.float64).reshape(-1)
        ubar = np.array(ubar, dtype=np.float64).reshape(-1)
        if A.size == 0:
            A = np.zeros((b.shape[0], ubar.shape[0]))
        if A.shape != (b.shape[0], ubar.shape[0]):
            raise MalformedInput(f"A{A.shape} does not match b{b.shape} and ubar{ubar.shape}")
        if np.any(A < 0) or np.any(b < 0) or np.any(ubar < 0):
            raise MalformedInput("down-closed polytope needs A >= 0, b >= 0, ubar >= 0")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b)) and np.all(np.isfinite(ubar))):
            raise MalformedInput("polytope data must be finite")
        for arr in (A, b, ubar):
            arr.setflags(write=False)
        self.A, self.b, self.ubar = A, b, ubar

    @property
    def n(self):
        return self.ubar.shape[0]

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def lower(self):
        return np.zeros(self.n)

    @property
    def upper(self):
        return self.ubar

    def lmo(self, g):
        g = self._vector(g, "g")
        return simplex_max(self.A, self.b, self.ubar, g).vertex

    def lmo_shrunken(self, g, cap):
        g = self._vector(g, "g")
        cap = _check_cap(cap, self.n)
        return simplex_max(self.A, self.b, np.minimum(self.ubar, cap), g).vertex

    def contains(self, x, tol=1e-9):
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.n,):
            return False
        return bool(
            np.all(x >= -tol) and np.all(x <= self.ubar + tol) and np.all(self.A @ x <= self.b + tol)
        )

    def diameter(self):
        return float(np.linalg.norm(self.ubar))

    def capped(self, cap):
        cap = _check_cap(cap, self.n)
        return Polytope(self.A, self.b, np.minimum(self.ubar, cap))

    def _feasible_start(self, y):
        x = np.clip(y, 0.0, self.ubar)
        load = self.A @ x
        over = load > self.b
        if over.any():
            # shrinking towards the origin stays feasible in a down-closed set
            x = x * np.min(self.b[over] / load[over])
        return x

    def project(self, y):
        """Euclidean projection by away-step Frank-Wolfe on 0.5 ||x - y||^2.

        The iterate is tracked as a convex combination of LMO vertices (plus
        the warm start), so away steps can drop weight from bad vertices; this
        gives linear convergence on polytopes. Stops after 500 iterations or
        once the Frank-Wolfe gap is at most 1e-8.
        """
        y = self._vector(y, "y")
        x0 = self._feasible_start(y)
        atoms = [x0]
        weights = [1.0]
        x = x0.copy()
        for _ in range(PROJECT_ITERS):
            r = y - x  # negative gradient
            v = self.lmo(r)
            fw_dir = v - x
            gap = float(r @ fw_dir)
            if gap <= PROJECT_GAP:
                break
            scores = [float(r @ a) for a in atoms]
            k = int(np.argmin(scores))
            away_dir = x - atoms[k]
            if gap >= float(r @ away_dir):
                d, gmax, fw = fw_dir, 1.0, True
            else:
                wk = weights[k]
                d, gmax, fw = away_dir, wk / (1.0 - wk) if wk < 1.0 else np.inf, False
            dd = float(d @ d)
            if dd == 0.0:
                break
            step = min(float(r @ d) / dd, gmax)
            x = x + step * d
            if fw:
                weights = [w * (1.0 - step) for w in weights]
                for idx, a in enumerate(atoms):
                    if np.array_equal(a, v):
                        weights[idx] += step
                        break
                else:
                    atoms.append(v)
                    weights.append(step)
            else:
                weights = [w * (1.0 + step) for w in weights]
                weights[k] -= step
            keep = [i for i, w in enumerate(weights) if w > 1e-15]
            atoms = [atoms[i] for i in keep]
            weights = [weights[i] for i in keep]
        return x

    def to_dict(self):
        return {"type": "polytope", "A": self.A.tolist(), "b": self.b.tolist(), "ubar": self.ubar.tolist()}

    def __repr__(self):
        return f"Polytope(n={self.n}, m={self.m})"


def constraint_from_dict(spec: dict) -> Constraint:
    kind = spec.get("type")
    if kind == "box":
        return Box(spec["lower"], spec["upper"])
    if kind == "polytope":
        return Polytope(spec["A"], spec["b"], spec["ubar"])
    raise MalformedInput(f"unknown constraint type {kind!r}")


def lmo(constraint: Constraint, g) -> np.ndarray:
    return constraint.lmo(g)


def lmo_shrunken(constraint: Constraint, g, cap) -> np.ndarray:
    return constraint.lmo_shrunken(g, cap)


def project(constraint: Constraint, y) -> np.ndarray:
    return constraint.project(y)


def contains(constraint: Constraint, x, tol: float = 1e-9) -> bool:
    return constraint.contains(x, tol)


def diameter(constraint: Constraint) -> float:
    return constraint.diameter()

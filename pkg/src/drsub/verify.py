"""Independent oracles and sampling-based property checkers.

Checkers are falsifiers: a ``pass`` verdict means no violation above ``tol``
was found in ``trials`` seeded draws.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .constraints import Box, Constraint, Polytope
from .errors import MissingGap, TooCloseToBoundary, TooHighDimensional, TooLarge
from .objectives import Objective, Quadratic, Reflected, orthant_reflect
from .rng import make_rng, resolve_seed
from .setfunctions import SetFunctionModel
from .solvers.report import SolveReport

MT_EXHAUSTIVE_MAX = 12
GRID_MAX_DIM = 4
GRID_TOL = 1e-12
FD_STEP = 1e-5


@dataclass
class CheckReport:
    property: str
    passed: bool
    worst_violation: float
    witness: dict = field(default_factory=dict)
    trials: int = 0
    tol: float = 0.0
    seed: int = 0
    by_kind: dict = field(default_factory=dict)  # worst violation per sub-check

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "verdict": self.verdict,
            "worst_violation": self.worst_violation,
            "witness": {k: (v.tolist() if isinstance(v, np.ndarray) else v) for k, v in self.witness.items()},
            "trials": self.trials,
            "tol": self.tol,
            "seed": self.seed,
            "by_kind": self.by_kind,
        }


class _Worst:
    """Tracks the largest violation and the points that produced it."""

    def __init__(self):
        self.value = -math.inf
        self.witness: dict = {}
        self.by_kind: dict = {}

    def offer(self, violation: float, **witness):
        kind = witness.get("kind", "inequality")
        self.by_kind[kind] = max(self.by_kind.get(kind, -math.inf), float(violation))
        if violation > self.value:
            self.value = float(violation)
            self.witness = {k: (np.array(v, dtype=np.float64) if isinstance(v, np.ndarray) else v) for k, v in witness.items()}

    def report(self, name, trials, tol, seed) -> CheckReport:
        passed = self.value <= tol
        return CheckReport(name, passed, self.value, self.witness, trials, tol, seed, self.by_kind)


class _Sampler:
    """Random points in a box, biased to also hit faces (and zeros) often."""

    def __init__(self, lower, upper, seed):
        self.lo, self.up = np.asarray(lower, float), np.asarray(upper, float)
        self.n = self.lo.shape[0]
        self.rng = make_rng(seed)

    def point(self) -> np.ndarray:
        x = self.lo + (self.up - self.lo) * self.rng.random(self.n)
        r = self.rng.random(self.n)
        x[r < 0.1] = self.lo[r < 0.1]
        x[r > 0.9] = self.up[r > 0.9]
        return x

    def pair(self):
        p, q = self.point(), self.point()
        return np.minimum(p, q), np.maximum(p, q)

    def coordinate(self) -> int:
        return int(self.rng.integers(self.n))

    def uniform(self, a, b) -> float:
        return float(a + (b - a) * self.rng.random())

    def interior(self, margin) -> np.ndarray:
        room = self.up - self.lo
        lo = self.lo + np.minimum(margin, room / 2)
        up = self.up - np.minimum(margin, room / 2)
        return lo + (up - lo) * self.rng.random(self.n)


def _hessian_entry(obj: Objective, x, i, j, h=FD_STEP) -> float:
    """d/dx_j of the analytic partial along i, by differences of the gradient."""
    lo, up = obj.domain.lower[j], obj.domain.upper[j]
    hp = min(h, up - x[j])
    hm = min(h, x[j] - lo)
    if hp + hm == 0:
        return 0.0
    xp, xm = x.copy(), x.copy()
    xp[j] += hp
    xm[j] -= hm
    return (obj._partial(xp, i) - obj._partial(xm, i)) / (hp + hm)


def _smooth(obj: Objective) -> bool:
    return obj.meta.differentiable and not obj.meta.stochastic


def check_weak_dr(obj: Objective, trials: int = 1000, tol: float = 1e-7, seed: int | None = None) -> CheckReport:
    """Diminishing returns along coordinates on which a <= b agree; plus Hessian off-diagonal signs."""
    seed = resolve_seed(seed)
    s = _Sampler(obj.domain.lower, obj.domain.upper, seed)
    worst = _Worst()
    f = obj._value
    for _ in range(trials):
        a, b = s.pair()
        i = s.coordinate()
        if s.up[i] == s.lo[i]:
            continue
        c = s.uniform(s.lo[i], s.up[i])
        a[i] = b[i] = c
        k = s.uniform(0.0, s.up[i] - c)
        ak, bk = a.copy(), b.copy()
        ak[i] += k
        bk[i] += k
        worst.offer((f(bk) - f(b)) - (f(ak) - f(a)), a=a, b=b, coordinate=i, k=k, kind="weak-dr")
    if _smooth(obj) and obj.n >= 2:
        for _ in range(trials):
            x = s.interior(FD_STEP)
            i, j = s.rng.choice(obj.n, size=2, replace=False)
            worst.offer(_hessian_entry(obj, x, int(i), int(j)), x=x, coordinate=int(i), other=int(j), kind="hessian")
    return worst.report("weak-dr", trials, tol, seed)


def check_dr(obj: Objective, trials: int = 1000, tol: float = 1e-7, seed: int | None = None) -> CheckReport:
    """Full diminishing returns, coordinate-wise concavity, antitone gradient, Hessian signs."""
    seed = resolve_seed(seed)
    s = _Sampler(obj.domain.lower, obj.domain.upper, seed)
    worst = _Worst()
    f = obj._value
    for _ in range(trials):
        # DR inequality for arbitrary a <= b
        a, b = s.pair()
        i = s.coordinate()
        if s.up[i] == s.lo[i]:
            continue
        c1, c2 = sorted((s.uniform(s.lo[i], s.up[i]), s.uniform(s.lo[i], s.up[i])))
        a[i], b[i] = c1, c2
        k = s.uniform(0.0, s.up[i] - c2)
        ak, bk = a.copy(), b.copy()
        ak[i] += k
        bk[i] += k
        worst.offer((f(bk) - f(b)) - (f(ak) - f(a)), a=a, b=b, coordinate=i, k=k, kind="dr")
        # concavity along coordinate i
        x = s.point()
        x[i] = s.uniform(s.lo[i], s.up[i])
        room = s.up[i] - x[i]
        k, l = s.uniform(0.0, room), 0.0
        l = s.uniform(0.0, room - k)
        xk, xl, xkl = x.copy(), x.copy(), x.copy()
        xk[i] += k
        xl[i] += l
        xkl[i] += k + l
        worst.offer((f(xkl) - f(xl)) - (f(xk) - f(x)), x=x, coordinate=i, k=k, l=l, kind="concavity")
    if _smooth(obj):
        for _ in range(trials):
            a, b = s.pair()
            diff = obj._grad(b) - obj._grad(a)
            j = int(np.argmax(diff))
            worst.offer(float(diff[j]), a=a, b=b, coordinate=j, kind="antitone")
            x = s.interior(FD_STEP)
            i, j = int(s.coordinate()), int(s.coordinate())
            worst.offer(_hessian_entry(obj, x, i, j), x=x, coordinate=i, other=j,
                        kind="hessian-diagonal" if i == j else "hessian")
    return worst.report("dr", trials, tol, seed)


def check_submodular_0th(obj: Objective, trials: int = 1000, tol: float = 1e-7, seed: int | None = None) -> CheckReport:
    """f(x) + f(y) >= f(x v y) + f(x ^ y) on random pairs; needs no derivatives."""
    seed = resolve_seed(seed)
    s = _Sampler(obj.domain.lower, obj.domain.upper, seed)
    worst = _Worst()
    f = obj._value
    for _ in range(trials):
        x, y = s.point(), s.point()
        worst.offer(f(np.maximum(x, y)) + f(np.minimum(x, y)) - f(x) - f(y), x=x, y=y)
    return worst.report("submodular", trials, tol, seed)


def check_monotone(obj: Objective, trials: int = 1000, tol: float = 1e-7, seed: int | None = None) -> CheckReport:
    seed = resolve_seed(seed)
    s = _Sampler(obj.domain.lower, obj.domain.upper, seed)
    worst = _Worst()
    f = obj._value
    for _ in range(trials):
        a, b = s.pair()
        worst.offer(f(a) - f(b), a=a, b=b)
    return worst.report("monotone", trials, tol, seed)


def check_alpha_dr(obj: Objective, alpha, trials: int = 1000, tol: float = 1e-7, seed: int | None = None) -> CheckReport:
    """DR check of x -> f(diag(alpha) x), with witnesses mapped back to the original coordinates."""
    refl = orthant_reflect(obj, alpha)
    rep = check_dr(refl, trials, tol, seed)
    a = refl.alpha
    witness = {k: (a * v if isinstance(v, np.ndarray) else v) for k, v in rep.witness.items()}
    witness["alpha"] = a.tolist()
    return CheckReport("alpha-dr", rep.passed, rep.worst_violation, witness, rep.trials, tol, rep.seed, rep.by_kind)


CHECKS = {
    "weak-dr": check_weak_dr,
    "dr": check_dr,
    "submodular": check_submodular_0th,
    "monotone": check_monotone,
}


def finite_diff_grad(obj: Objective, x, h: float = FD_STEP) -> np.ndarray:
    """Central differences; coordinates within h of the boundary use a one-sided stencil (with a warning)."""
    x = obj.point(x)
    lo, up = obj.domain.lower, obj.domain.upper
    g = np.empty(obj.n)
    flagged = []
    for i in range(obj.n):
        xp, xm = x.copy(), x.copy()
        if x[i] - h >= lo[i] and x[i] + h <= up[i]:
            xp[i] += h
            xm[i] -= h
            g[i] = (obj._value(xp) - obj._value(xm)) / (2 * h)
        elif x[i] + h <= up[i]:
            xp[i] += h
            g[i] = (obj._value(xp) - obj._value(x)) / h
            flagged.append(i)
        else:
            xm[i] -= h
            g[i] = (obj._value(x) - obj._value(xm)) / h
            flagged.append(i)
    if flagged:
        warnings.warn(f"one-sided differences used for coordinates {flagged}", TooCloseToBoundary, stacklevel=2)
    return g


def _bounding_box(obj: Objective, constraint: Constraint | None):
    if constraint is None:
        return obj.domain.lower, obj.domain.upper
    return np.asarray(constraint.lower, float), np.asarray(constraint.upper, float)


def grid_max(obj: Objective, constraint: Constraint | None = None, resolution: int = 201):
    """Best point of the regular grid over the constraint's bounding box.

    Returns ``(x, f)``; ties go to the lexicographically first grid point.
    Quadratics are maximized exactly on the grid by a compiled kernel.
    """
    n = obj.n
    if n > GRID_MAX_DIM:
        raise TooHighDimensional(f"grid search is limited to n <= {GRID_MAX_DIM}, got {n}")
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    lo, up = _bounding_box(obj, constraint)
    grid = np.linspace(lo, up, resolution).T  # (n, R)
    if isinstance(constraint, Polytope):
        A, b = constraint.A, constraint.b
    else:
        A, b = np.zeros((0, n)), np.zeros(0)

    quad = obj.quadratic if isinstance(obj, Reflected) else obj
    if isinstance(quad, Quadratic) and n >= 1:
        idx, val = kernels.grid_max_quadratic(quad.H, quad.h, quad.c, grid, A, b, GRID_TOL)
        if idx[0] < 0:
            raise ValueError("no grid point is feasible")
        x = grid[np.arange(n), idx]
        return x, float(obj._value(x))

    best_x, best_v = None, -math.inf
    for combo in itertools.product(range(resolution), repeat=n):
        x = grid[np.arange(n), list(combo)]
        if A.shape[0] and np.any(A @ x > b + GRID_TOL):
            continue
        v = obj._value(x)
        if v > best_v:
            best_x, best_v = x, v
    if best_x is None:
        raise ValueError("no grid point is feasible")
    return best_x, float(best_v)


def mt_exhaustive(model: SetFunctionModel, x) -> float:
    """Multilinear extension by summing over all 2**n subsets (n <= 12)."""
    if model.n > MT_EXHAUSTIVE_MAX:
        raise TooLarge(f"exhaustive sums are limited to n <= {MT_EXHAUSTIVE_MAX}")
    return kernels.multilinear_sum(model.table(), np.asarray(x, dtype=np.float64))


def vertex_enumeration(A, b, ubar, g):
    """Brute-force LP oracle: best feasible intersection of n active constraints."""
    A = np.array(A, dtype=np.float64, ndmin=2)
    b = np.asarray(b, dtype=np.float64)
    ubar = np.asarray(ubar, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    n = ubar.shape[0]
    eye = np.eye(n)
    rows = np.vstack([A.reshape(-1, n), eye, -eye])
    rhs = np.concatenate([b, ubar, np.zeros(n)])
    best_x, best_v = None, -math.inf
    for active in itertools.combinations(range(rows.shape[0]), n):
        M = rows[list(active)]
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        x = np.linalg.solve(M, rhs[list(active)])
        if np.all(rows @ x <= rhs + 1e-9) and g @ x > best_v:
            best_x, best_v = x, float(g @ x)
    return best_x, best_v


def _gap_of(report: SolveReport, key: str = "gap") -> float:
    if key in report.extras and report.extras[key] is not None and math.isfinite(report.extras[key]):
        return float(report.extras[key])
    for rec in report.trajectory:
        if np.array_equal(rec.x, report.solution) and math.isfinite(rec.gap):
            return float(rec.gap)
    raise MissingGap(f"report from {report.algorithm} carries no gap for its output")


def local_global_audit(report: SolveReport, constraint: Constraint | None, f_star: float, mu: float = 0.0,
                       x_star=None, tol: float = 1e-6) -> CheckReport:
    """Check the stationarity-to-global bounds for a returned point.

    Two-phase reports: max(f(x), f(z)) >= 1/4 (f* - g_P(x) - g_Q(z)) [+ mu/8 terms].
    Otherwise (monotone case): f(x) >= 1/2 (f* - g(x)) [+ mu/4 ||x - x*||^2].
    """
    if mu and x_star is None:
        raise ValueError("a strong-DR modulus needs the maximizer x_star")
    if report.algorithm == "two-phase":
        gp, gq = _gap_of(report, "gap_P"), _gap_of(report, "gap_Q")
        x, z = report.extras["x"], report.extras["z"]
        lhs = max(report.extras["f_x"], report.extras["f_z"])
        rhs = 0.25 * (f_star - gp - gq)
        if mu:
            xs = np.asarray(x_star, float)
            z_star = np.maximum(x, xs) - x
            rhs += mu / 8 * (np.sum((x - xs) ** 2) + np.sum((z - z_star) ** 2))
        witness = {"x": x, "z": z, "gap_P": gp, "gap_Q": gq, "lhs": lhs, "rhs": rhs}
    else:
        g = _gap_of(report)
        x = report.solution
        lhs = report.solution_f
        rhs = 0.5 * (f_star - g)
        if mu:
            rhs += mu / 4 * float(np.sum((x - np.asarray(x_star, float)) ** 2))
        witness = {"x": x, "gap": g, "lhs": lhs, "rhs": rhs}
    violation = float(rhs - lhs)
    return CheckReport("local-global", violation <= tol, violation, witness, 1, tol, 0)

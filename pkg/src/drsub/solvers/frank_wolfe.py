"""Frank-Wolfe style methods and projected gradient ascent."""

from __future__ import annotations

import math
import time
from dataclasses import replace

import numpy as np

from ..constraints import Constraint
from ..errors import BadConstraint, InvariantViolation, MissingLipschitz, NonDifferentiable, NotDr, NotMonotone
from ..objectives.base import Objective
from .onedim import golden_section
from .report import Certificate, IterRecord, SolveReport, SolverConfig

CAP_SLACK = 1e-9


def stationarity_gap(obj: Objective, constraint: Constraint, x: np.ndarray, g: np.ndarray | None = None) -> float:
    """max over v in the constraint of <v - x, grad f(x)>; NaN without a gradient."""
    if not obj.meta.differentiable:
        return math.nan
    if g is None:
        g = obj.grad(x)
    return float((constraint.lmo(g) - x) @ g)


def _lipschitz(obj: Objective, cfg: SolverConfig) -> float | None:
    return cfg.lipschitz if cfg.lipschitz is not None else obj.meta.lipschitz


def _require_differentiable(obj: Objective):
    if not obj.meta.differentiable:
        raise NonDifferentiable(f"{obj.family} has no gradient")


def _require_down_closed(constraint: Constraint):
    if not constraint.down_closed:
        raise BadConstraint("this method needs a down-closed constraint (lower bound 0)")


def _check_dims(obj: Objective, constraint: Constraint):
    if obj.n != constraint.n:
        raise BadConstraint(f"objective has n={obj.n}, constraint has n={constraint.n}")
    if not (np.all(constraint.lower >= obj.domain.lower - 1e-12) and np.all(constraint.upper <= obj.domain.upper + 1e-12)):
        raise BadConstraint("constraint must lie inside the objective's domain")


def _finish(name, trajectory, solution, solution_f, cert, cfg, start, **extras) -> SolveReport:
    return SolveReport(
        algorithm=name,
        trajectory=trajectory,
        solution=solution,
        solution_f=float(solution_f),
        certificate=cert.with_f_star(cfg.f_star),
        wallclock=time.perf_counter() - start,
        extras=extras,
    )


def local_global_certificate(gap: float, name: str = "local-global (monotone)") -> Certificate:
    return Certificate(name, "f >= 1/2 f* - 1/2 g", 0.5, -0.5 * gap)


def submodular_fw(obj: Objective, polytope: Constraint, cfg: SolverConfig | None = None) -> SolveReport:
    """Frank-Wolfe variant for monotone DR-submodular maximization from the origin.

    Takes K steps of size 1/K along LMO vertices, so the output is the average
    of the K vertices and t lands on exactly 1.
    """
    cfg = cfg or SolverConfig()
    start = time.perf_counter()
    if not obj.meta.monotone:
        raise NotMonotone(f"{obj.family} is not flagged monotone")
    if not obj.meta.dr:
        raise NotDr(f"{obj.family} is not flagged DR-submodular")
    _require_down_closed(polytope)
    _check_dims(obj, polytope)
    K = cfg.iterations
    x = np.zeros(obj.n)
    f0 = obj.value(x)
    traj = []
    vsum = np.zeros(obj.n)
    for k in range(K + 1):
        fx = obj.value(x)
        g = obj.grad(x)
        v = polytope.lmo(g)
        gap = float((v - x) @ g) if cfg.record_gap else math.nan
        traj.append(IterRecord(k, k / K if K else 0.0, x.copy(), fx, gap, 1.0 / K if (K and k) else 0.0))
        if k == K:
            break
        vsum += v
        x = vsum / K
    alpha, delta = cfg.lmo_mult_error, cfg.additive_error
    L = _lipschitz(obj, cfg)
    D = polytope.diameter()
    ea = math.exp(-alpha)
    offset = -L * D * D * (1 + delta) / (2 * K) + ea * f0 if (L is not None and K) else -math.inf
    cert = Certificate(
        "monotone frank-wolfe",
        "f >= (1 - e^-alpha) f* - L D^2 (1 + delta) / (2K) + e^-alpha f(0)",
        1 - ea,
        offset,
    )
    return _finish("submodular-fw", traj, x, traj[-1].f, cert, cfg, start, L=L, D=D)


def _fw_step(rule, k, gap, d, obj, x, cfg) -> float:
    if rule == "constant":
        return cfg.gamma if cfg.gamma is not None else 1.0 / max(cfg.iterations, 1)
    if rule == "oblivious":
        return 2.0 / (k + 2.0)
    if rule == "curvature":
        return min(gap / cfg.curvature_bound, 1.0)
    if rule == "lipschitz":
        L = _lipschitz(obj, cfg)
        if L is None:
            raise MissingLipschitz("the Lipschitz step rule needs L")
        norm = float(np.linalg.norm(d))
        return 1.0 if L * norm == 0 else min(1.0, gap / (L * norm))
    if rule == "adaptive":
        return min(1.0, cfg.step_scale / math.sqrt(k + 1))
    # exact-ish line search over [0, 1]
    return golden_section(lambda s: obj._value(x + s * d), 0.0, 1.0, 1e-10).argmax


def nonconvex_fw(obj: Objective, constraint: Constraint, cfg: SolverConfig | None = None, x0=None) -> SolveReport:
    """Frank-Wolfe for smooth non-concave maximization; returns the minimum-gap iterate."""
    cfg = cfg or SolverConfig()
    start = time.perf_counter()
    _require_differentiable(obj)
    _check_dims(obj, constraint)
    rule = cfg.step_rule or ("curvature" if cfg.curvature_bound else "linesearch")
    if rule == "curvature" and not cfg.curvature_bound:
        raise ValueError("the curvature step rule needs curvature_bound")
    x0 = x0 if x0 is not None else cfg.x0
    x = constraint.lower.copy() if x0 is None else np.array(x0, dtype=np.float64)
    if not constraint.contains(x, 1e-9):
        raise BadConstraint("start point is infeasible")
    traj = []
    t, step = 0.0, 0.0
    best_k, best_gap = 0, math.inf
    for k in range(cfg.iterations + 1):
        g = obj.grad(x)
        v = constraint.lmo(g)
        d = v - x
        gap = float(d @ g)
        traj.append(IterRecord(k, t, x.copy(), obj.value(x), gap, step))
        if gap < best_gap:
            best_k, best_gap = k, gap
        if gap <= cfg.epsilon or k == cfg.iterations:
            break
        step = _fw_step(rule, k, gap, d, obj, x, cfg)
        x = x + step * d
        t += step
    rec = traj[best_k]
    cert = local_global_certificate(rec.gap)
    return _finish("nonconvex-fw", traj, rec.x, rec.f, cert, cfg, start, gap=rec.gap, output_index=best_k)


def pga(obj: Objective, constraint: Constraint, cfg: SolverConfig | None = None) -> SolveReport:
    """Projected gradient ascent; returns the best iterate."""
    cfg = cfg or SolverConfig()
    start = time.perf_counter()
    _require_differentiable(obj)
    _check_dims(obj, constraint)
    L = _lipschitz(obj, cfg)
    rule = cfg.step_rule or ("lipschitz" if L is not None else "adaptive")
    if rule == "lipschitz" and L is None:
        raise MissingLipschitz("step 1/L needs a Lipschitz constant")
    x = constraint.lower.copy() if cfg.x0 is None else np.array(cfg.x0, dtype=np.float64)
    traj, t, step = [], 0.0, 0.0
    for k in range(cfg.iterations + 1):
        g = obj.grad(x)
        gap = float((constraint.lmo(g) - x) @ g) if cfg.record_gap else math.nan
        traj.append(IterRecord(k, t, x.copy(), obj.value(x), gap, step))
        if k == cfg.iterations:
            break
        if rule == "lipschitz":
            step = 1.0 / L if L > 0 else 1.0
        elif rule == "adaptive":
            step = cfg.step_scale / math.sqrt(k + 1)
        elif rule == "constant":
            step = cfg.gamma if cfg.gamma is not None else 1.0 / max(cfg.iterations, 1)
        elif rule == "oblivious":
            step = 2.0 / (k + 2.0)
        else:
            raise ValueError(f"step rule {rule!r} is not available for projected gradient ascent")
        x = constraint.project(x + step * g)
        t += step
    best = int(np.argmax([r.f for r in traj]))
    rec = traj[best]
    cert = local_global_certificate(rec.gap)
    return _finish("pga", traj, rec.x, rec.f, cert, cfg, start, gap=rec.gap, output_index=best)


def two_phase(obj: Objective, polytope: Constraint, cfg: SolverConfig | None = None) -> SolveReport:
    """Frank-Wolfe on P, then Frank-Wolfe on Q = P with y <= ubar - x; best of the two."""
    cfg = cfg or SolverConfig()
    start = time.perf_counter()
    _require_differentiable(obj)
    _require_down_closed(polytope)
    first = nonconvex_fw(obj, polytope, cfg, x0=polytope.lower)
    x, gx = first.solution, first.extras["gap"]
    Q = polytope.capped(np.maximum(polytope.upper - x, 0.0))
    cfg2 = replace(
        cfg,
        iterations=cfg.iterations if cfg.iterations2 is None else cfg.iterations2,
        epsilon=cfg.epsilon if cfg.epsilon2 is None else cfg.epsilon2,
    )
    second = nonconvex_fw(obj, Q, cfg2, x0=Q.lower)
    z, gz = second.solution, second.extras["gap"]
    fx, fz = first.solution_f, second.solution_f
    offset_k = len(first.trajectory)
    t_end = first.trajectory[-1].t
    traj = list(first.trajectory) + [
        IterRecord(r.k + offset_k, t_end + r.t, r.x, r.f, r.gap, r.gamma) for r in second.trajectory
    ]
    sol, sol_f = (x, fx) if fx >= fz else (z, fz)
    cert = Certificate("two-phase", "max(f(x), f(z)) >= 1/4 (f* - g_P(x) - g_Q(z))", 0.25, -0.25 * (gx + gz))
    return _finish("two-phase", traj, sol, sol_f, cert, cfg, start, x=x, z=z, f_x=fx, f_z=fz, gap_P=gx, gap_Q=gz)


def shrunken_fw(obj: Objective, polytope: Constraint, cfg: SolverConfig | None = None) -> SolveReport:
    """Frank-Wolfe with the LMO restricted to {v <= ubar - x}, for non-monotone DR objectives.

    Asserts the growth cap x_i <= ubar_i (1 - (1 - gamma)^k) + 1e-9 at every iterate.
    """
    cfg = cfg or SolverConfig()
    start = time.perf_counter()
    if not obj.meta.dr:
        raise NotDr(f"{obj.family} is not flagged DR-submodular")
    _require_down_closed(polytope)
    _check_dims(obj, polytope)
    K = cfg.iterations
    gamma = 1.0 / K if K else 0.0
    ubar = polytope.upper
    x = np.zeros(obj.n)
    traj = []
    for k in range(K + 1):
        cap_bound = ubar * (1.0 - (1.0 - gamma) ** k) + CAP_SLACK
        if np.any(x > cap_bound):
            i = int(np.argmax(x - cap_bound))
            raise InvariantViolation(f"growth cap exceeded at k={k}, coordinate {i}: {x[i]} > {cap_bound[i]}")
        g = obj.grad(x)
        gap = float((polytope.lmo(g) - x) @ g) if cfg.record_gap else math.nan
        traj.append(IterRecord(k, k * gamma, x.copy(), obj.value(x), gap, gamma if k else 0.0))
        if k == K:
            break
        v = polytope.lmo_shrunken(g, np.maximum(ubar - x, 0.0))
        x = x + gamma * v
    L = _lipschitz(obj, cfg)
    D = polytope.diameter()
    offset = -L * D * D / (2 * K) if (L is not None and K) else -math.inf
    cert = Certificate("shrunken frank-wolfe", "f >= f*/e - L D^2 / (2K)", math.exp(-1.0), offset)
    return _finish("shrunken-fw", traj, x, traj[-1].f, cert, cfg, start, L=L, D=D)

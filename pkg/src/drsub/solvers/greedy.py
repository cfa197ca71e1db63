"""Double-greedy algorithms, coordinate ascent and their mean-field combination."""

from __future__ import annotations

import math
import time
from dataclasses import replace

import numpy as np

from ..constraints import Box, Constraint
from ..errors import BadConstraint, NotDr, PreconditionViolated
from ..objectives.base import Objective
from ..rng import make_rng
from .onedim import maximize_1d
from .report import Certificate, IterRecord, SolveReport, SolverConfig


def _box(obj: Objective, box: Constraint | None) -> Box:
    if box is None:
        return Box.from_domain(obj.domain)
    if not isinstance(box, Box):
        raise BadConstraint("coordinate-wise methods need a box constraint")
    if box.n != obj.n or not (np.all(box.lower >= obj.domain.lower) and np.all(box.upper <= obj.domain.upper)):
        raise BadConstraint("box must lie inside the objective's domain")
    return box


def coordinate_order(n: int, cfg: SolverConfig) -> np.ndarray:
    if cfg.coordinate_order == "random":
        return make_rng(cfg.seed, stream=1).permutation(n)
    return np.arange(n)


def _box_gap(obj: Objective, box: Box, x: np.ndarray) -> float:
    if not obj.meta.differentiable or obj.meta.stochastic:
        return math.nan
    g = obj.grad(x)
    if not np.all(np.isfinite(g)):
        return math.nan
    return float((box.lmo(g) - x) @ g)


def _solve_coordinate(obj, box, point, i, tol):
    handle = obj.restrict_1d(point, i)
    return maximize_1d(handle, box.lower[i], box.upper[i], tol)


def _double_greedy(obj: Objective, box: Box, cfg: SolverConfig, blend: bool):
    n = obj.n
    x, y = box.lower.copy(), box.upper.copy()
    order = coordinate_order(n, cfg)
    traj = [IterRecord(0, 0.0, x.copy(), obj.value(x), _box_gap(obj, box, x) if cfg.record_gap else math.nan, 0.0)]
    steps, max_err = [], 0.0
    for k, i in enumerate(order, start=1):
        a = _solve_coordinate(obj, box, x, i, cfg.onedim_tolerance)
        b = _solve_coordinate(obj, box, y, i, cfg.onedim_tolerance)
        delta_a = a.value - obj.value(x)
        delta_b = b.value - obj.value(y)
        max_err = max(max_err, a.error, b.error)
        if blend:
            wa, wb = max(delta_a, 0.0), max(delta_b, 0.0)
            if wa + wb == 0.0 or a.argmax == b.argmax:
                u = a.argmax
            else:
                u = (wa * a.argmax + wb * b.argmax) / (wa + wb)
        else:
            u = a.argmax if delta_a >= delta_b else b.argmax
        x[i] = y[i] = u
        steps.append(
            {"coordinate": int(i), "u_a": a.argmax, "delta_a": delta_a, "u_b": b.argmax, "delta_b": delta_b, "u": u}
        )
        gap = _box_gap(obj, box, x) if cfg.record_gap else math.nan
        traj.append(IterRecord(k, k / n, x.copy(), obj.value(x), gap, 0.0))
    if not np.array_equal(x, y):  # pragma: no cover - both particles are written together
        raise AssertionError("double-greedy particles did not meet")
    return x, traj, steps, max_err


def submodular_double_greedy(
    obj: Objective, box: Constraint | None = None, cfg: SolverConfig | None = None, strict: bool = True
) -> SolveReport:
    """Double greedy for non-monotone continuous submodular functions on a box.

    Each coordinate is set to the better of the two 1-D maximizers (ties go to
    the lower particle). The guarantee needs f(lower) + f(upper) >= 0; with
    ``strict=False`` the run proceeds anyway and ``extras["precondition"]``
    records whether it held.
    """
    cfg = cfg or SolverConfig()
    start = time.perf_counter()
    box = _box(obj, box)
    f_lo, f_up = obj.value(box.lower), obj.value(box.upper)
    if strict and f_lo + f_up < 0:
        raise PreconditionViolated(f"f(lower) + f(upper) = {f_lo + f_up} < 0")
    x, traj, steps, delta = _double_greedy(obj, box, cfg, blend=False)
    n = obj.n
    cert = Certificate("submodular double greedy", "f >= 1/3 f* - 4n/3 delta", 1.0 / 3.0, -4.0 * n / 3.0 * delta)
    return SolveReport(
        "sub-dg", traj, x, traj[-1].f, cert.with_f_star(cfg.f_star), time.perf_counter() - start,
        {"steps": steps, "delta": delta, "precondition": bool(f_lo + f_up >= 0)},
    )


def dr_double_greedy(obj: Objective, box: Constraint | None = None, cfg: SolverConfig | None = None) -> SolveReport:
    """Double greedy for DR-submodular functions: each coordinate takes the
    gain-weighted average of the two 1-D maximizers (gains clamped at 0)."""
    cfg = cfg or SolverConfig()
    start = time.perf_counter()
    if not obj.meta.dr:
        raise NotDr(f"{obj.family} is not flagged DR-submodular")
    box = _box(obj, box)
    f_lo, f_up = obj.value(box.lower), obj.value(box.upper)
    x, traj, steps, max_err = _double_greedy(obj, box, cfg, blend=True)
    # each of the n subproblems is solved within max_err, so the total budget is n * max_err
    delta = obj.n * max_err
    cert = Certificate(
        "DR double greedy", "f >= 1/2 f* + 1/4 (f(a) + f(b)) - 5/4 delta", 0.5, 0.25 * (f_lo + f_up) - 1.25 * delta
    )
    return SolveReport(
        "dr-dg", traj, x, traj[-1].f, cert.with_f_star(cfg.f_star), time.perf_counter() - start,
        {"steps": steps, "delta": delta, "f_lower": f_lo, "f_upper": f_up},
    )


def _initial_point(obj: Objective, box: Box, cfg: SolverConfig) -> np.ndarray:
    init = cfg.initializer
    if isinstance(init, str):
        if init == "zeros":
            return box.lower.copy()
        if init == "ones":
            return box.upper.copy()
        if init in ("uniform", "random"):
            return box.lower + (box.upper - box.lower) * make_rng(cfg.seed, stream=2).random(obj.n)
        raise ValueError(f"unknown initializer {init!r}")
    x = np.array(init, dtype=np.float64).reshape(-1)
    if not box.contains(x, 1e-12):
        raise BadConstraint("initial point lies outside the box")
    return x


def coordinate_ascent(obj: Objective, box: Constraint | None = None, cfg: SolverConfig | None = None, x0=None) -> SolveReport:
    """Cyclic exact coordinate maximization.

    Runs ``epochs * n`` steps when ``cfg.epochs`` is set, else ``cfg.iterations``
    steps. A coordinate only moves when that strictly increases f, so the
    trajectory is nondecreasing.
    """
    cfg = cfg or SolverConfig()
    start = time.perf_counter()
    box = _box(obj, box)
    x = _initial_point(obj, box, cfg) if x0 is None else np.array(x0, dtype=np.float64)
    n = obj.n
    steps = cfg.epochs * n if cfg.epochs is not None else cfg.iterations
    order = coordinate_order(n, cfg)
    fx = obj.value(x)
    traj = [IterRecord(0, 0.0, x.copy(), fx, _box_gap(obj, box, x) if cfg.record_gap else math.nan, 0.0)]
    max_err = 0.0
    for k in range(1, steps + 1 if n else 1):
        i = order[(k - 1) % n]
        res = _solve_coordinate(obj, box, x, i, cfg.onedim_tolerance)
        max_err = max(max_err, res.error)
        if res.value > fx:
            x[i] = res.argmax
            fx = obj.value(x)
        gap = _box_gap(obj, box, x) if cfg.record_gap else math.nan
        traj.append(IterRecord(k, k / n, x.copy(), fx, gap, 0.0))
    cert = Certificate("coordinate ascent", "no approximation guarantee", 0.0, -math.inf)
    return SolveReport(
        "coord-ascent", traj, x, fx, cert.with_f_star(cfg.f_star), time.perf_counter() - start, {"delta": max_err}
    )


def dg_meanfield(obj: Objective, box: Constraint | None = None, cfg: SolverConfig | None = None, variant: str = "1/2") -> SolveReport:
    """One double-greedy epoch followed by ``cfg.epochs`` coordinate-ascent epochs."""
    cfg = cfg or SolverConfig()
    start = time.perf_counter()
    if variant == "1/2":
        init = dr_double_greedy(obj, box, cfg)
    elif variant == "1/3":
        # mean-field objectives need not satisfy f(lower) + f(upper) >= 0; the flag is kept in extras
        init = submodular_double_greedy(obj, box, cfg, strict=False)
    else:
        raise ValueError(f"unknown variant {variant!r}; use '1/2' or '1/3'")
    T = cfg.epochs or 0
    traj = list(init.trajectory)
    x, fx = init.solution, init.solution_f
    if T and obj.n:
        ca = coordinate_ascent(obj, box, replace(cfg, epochs=T), x0=x.copy())
        base_k, base_t = traj[-1].k, traj[-1].t
        traj += [IterRecord(base_k + r.k, base_t + r.t, r.x, r.f, r.gap, r.gamma) for r in ca.trajectory[1:]]
        x, fx = ca.solution, ca.solution_f
    return SolveReport(
        f"dg-meanfield-{variant}", traj, x, fx, init.certificate, time.perf_counter() - start,
        {**init.extras, "initializer": init.algorithm, "epochs": T},
    )

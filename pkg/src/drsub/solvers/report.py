"""Solver configuration, trajectories, reports and guarantee certificates."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

STEP_RULES = ("constant", "oblivious", "lipschitz", "adaptive", "linesearch", "curvature")
ORDERS = ("natural", "random")


@dataclass
class SolverConfig:
    """Knobs shared by all solvers; each solver reads the ones it needs.

    ``iterations`` is K (Frank-Wolfe steps, PGA steps, or coordinate steps for
    coordinate ascent when ``epochs`` is None). ``iterations2``/``epsilon2``
    configure the second phase of the two-phase method and default to the
    first-phase values.
    """

    iterations: int = 100
    epochs: int | None = None
    step_rule: str | None = None
    gamma: float | None = None
    step_scale: float = 1.0
    epsilon: float = 1e-8
    lmo_mult_error: float = 1.0
    additive_error: float = 0.0
    curvature_bound: float | None = None
    lipschitz: float | None = None
    onedim_tolerance: float = 1e-12
    seed: int | None = None
    coordinate_order: str = "natural"
    initializer: object = "zeros"
    x0: object = None
    iterations2: int | None = None
    epsilon2: float | None = None
    f_star: float | None = None
    record_gap: bool = True

    def __post_init__(self):
        if self.iterations < 0 or (self.iterations2 is not None and self.iterations2 < 0):
            raise ValueError("iteration counts must be nonnegative")
        if self.epochs is not None and self.epochs < 0:
            raise ValueError("epochs must be nonnegative")
        if self.gamma is not None and not 0.0 < self.gamma <= 1.0:
            raise ValueError("gamma must lie in (0, 1]")
        if not 0.0 < self.lmo_mult_error <= 1.0:
            raise ValueError("lmo_mult_error must lie in (0, 1]")
        if self.additive_error < 0:
            raise ValueError("additive_error must be nonnegative")
        if self.step_rule is not None and self.step_rule not in STEP_RULES:
            raise ValueError(f"unknown step rule {self.step_rule!r}")
        if self.coordinate_order not in ORDERS:
            raise ValueError(f"unknown coordinate order {self.coordinate_order!r}")

    def to_dict(self) -> dict:
        out = asdict(self)
        for key in ("initializer", "x0"):
            if isinstance(out[key], np.ndarray):
                out[key] = out[key].tolist()
        return out


@dataclass
class IterRecord:
    k: int
    t: float
    x: np.ndarray
    f: float
    gap: float
    gamma: float

    def to_dict(self) -> dict:
        return {"k": self.k, "t": self.t, "x": self.x.tolist(), "f": self.f, "gap": self.gap, "gamma": self.gamma}


@dataclass
class Certificate:
    """A guarantee of the form ``f(output) >= coef * f_star + offset``."""

    name: str
    expression: str
    coef: float
    offset: float
    f_star: float | None = None

    @property
    def rhs(self) -> float | None:
        if self.f_star is None or not math.isfinite(self.offset):
            return None
        return self.coef * self.f_star + self.offset

    def with_f_star(self, f_star: float | None) -> "Certificate":
        return Certificate(self.name, self.expression, self.coef, self.offset, f_star)

    def holds(self, value: float, tol: float = 0.0) -> bool | None:
        rhs = self.rhs
        return None if rhs is None else bool(value >= rhs - tol)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "expression": self.expression,
            "coef": self.coef,
            "offset": self.offset,
            "f_star": "unknown" if self.f_star is None else self.f_star,
            "rhs": self.rhs,
        }


@dataclass
class SolveReport:
    """Trajectory plus the algorithm's designated output.

    ``solution`` is what the algorithm returns (e.g. the minimum-gap iterate
    for non-convex Frank-Wolfe); ``best_x``/``best_f`` is the best iterate seen.
    """

    algorithm: str
    trajectory: list[IterRecord]
    solution: np.ndarray
    solution_f: float
    certificate: Certificate
    wallclock: float = 0.0
    extras: dict = field(default_factory=dict)

    @property
    def best_index(self) -> int:
        return int(np.argmax([r.f for r in self.trajectory]))

    @property
    def best_x(self) -> np.ndarray:
        return self.trajectory[self.best_index].x

    @property
    def best_f(self) -> float:
        return self.trajectory[self.best_index].f

    @property
    def x(self) -> np.ndarray:
        return self.solution

    @property
    def f(self) -> float:
        return self.solution_f

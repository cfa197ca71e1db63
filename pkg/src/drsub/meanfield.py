"""Mean-field objectives for log-submodular models and exact/bounded partition functions.

A model with set function F defines p(S) proportional to exp(beta F(S)). The
ELBO of a fully factorized surrogate with marginals x is the multilinear
extension of F plus the binary entropies of x; it lower-bounds log Z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadSet, DimensionMismatch, ElementInSet, StructuralViolation, TooLargeForTable
from .objectives.base import BoxDomain, Objective, ObjectiveMeta, Restriction
from .objectives.families import multilinear_value
from .setfunctions import (
    MAX_ENUM,
    CutModel,
    FlidModel,
    IsingModel,
    ModularModel,
    SetCoverModel,
    SetFunctionModel,
    TableModel,
    ZeroModel,
    model_from_spec,
)
from .solvers import SolverConfig, dg_meanfield

# grad of the entropy is infinite at 0 and 1; it is evaluated at this distance instead
_EDGE = 1e-12


def sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    e = np.exp(-np.abs(z))
    return np.where(z >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def binary_entropy(x) -> np.ndarray:
    """Entropy in nats with 0 log 0 = 0."""
    x = np.asarray(x, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(x > 0, x * np.log(np.where(x > 0, x, 1.0)), 0.0)
        b = np.where(x < 1, (1 - x) * np.log(np.where(x < 1, 1 - x, 1.0)), 0.0)
    return -(a + b)


def logsumexp(z: np.ndarray) -> float:
    m = float(np.max(z))
    return m + math.log(float(np.sum(np.exp(z - m))))


@dataclass(frozen=True)
class PaModel:
    """Two models trained on perturbed copies of the data, sharing inverse temperature beta."""

    model_a: SetFunctionModel
    model_b: SetFunctionModel
    beta: float = 1.0

    def __post_init__(self):
        if self.model_a.n != self.model_b.n:
            raise DimensionMismatch(f"models have n={self.model_a.n} and n={self.model_b.n}")
        if not self.beta > 0:
            raise StructuralViolation("beta must be positive")


class MeanFieldObjective(Objective):
    """sum_k beta_k f_mt^k(x) + sum_i H(x_i) on [0, 1]^n."""

    def __init__(self, models: list[SetFunctionModel], betas: list[float], family: str):
        n = models[0].n
        if any(m.n != n for m in models):
            raise DimensionMismatch("all models must share the ground set")
        for m in models:
            if isinstance(m, TableModel) and m.n > MAX_ENUM:  # pragma: no cover - TableModel refuses these
                raise TooLargeForTable(f"explicit tables are limited to n <= {MAX_ENUM}")
        super().__init__(BoxDomain.unit(n), ObjectiveMeta(n=n, monotone=False, dr=True))
        self.models, self.betas = list(models), [float(b) for b in betas]
        self.family = family

    def multilinear_part(self, x) -> float:
        return sum(b * multilinear_value(m, x) for m, b in zip(self.models, self.betas))

    def multilinear_partial(self, x, i) -> float:
        return sum(b * m.multilinear_partial(x, i) for m, b in zip(self.models, self.betas))

    def _value(self, x):
        return self.multilinear_part(x) + float(binary_entropy(x).sum())

    def _grad(self, x):
        g = sum(b * m.multilinear_grad(x) for m, b in zip(self.models, self.betas))
        xc = np.clip(x, _EDGE, 1 - _EDGE)
        return g + np.log1p(-xc) - np.log(xc)

    def _partial(self, x, i):
        xc = min(max(x[i], _EDGE), 1 - _EDGE)
        return self.multilinear_partial(x, i) + math.log1p(-xc) - math.log(xc)

    def coordinate_concave(self, i):
        return True

    def restrict_1d(self, x, i) -> Restriction:
        r = super().restrict_1d(x, i)
        # the multilinear part is affine in x_i, so the coordinate optimum is a sigmoid
        slope = self.multilinear_partial(self.point(x), i)
        r.closed_form = lambda lo, hi: float(np.clip(sigmoid(slope), lo, hi))
        r.tag = "elbo"
        r.extra["slope"] = slope
        return r

    def params(self):
        if self.family == "elbo":
            return {"model": self.models[0].to_spec()}
        return {"model_a": self.models[0].to_spec(), "model_b": self.models[1].to_spec(), "beta": self.betas[0]}


def build_elbo(model: SetFunctionModel) -> MeanFieldObjective:
    if isinstance(model, TableModel) and model.n > MAX_ENUM:  # pragma: no cover
        raise TooLargeForTable(f"explicit tables are limited to n <= {MAX_ENUM}")
    return MeanFieldObjective([model], [1.0], "elbo")


def build_pa_elbo(pa: PaModel) -> MeanFieldObjective:
    return MeanFieldObjective([pa.model_a, pa.model_b], [pa.beta, pa.beta], "pa_elbo")


def log_partition_exact(model: SetFunctionModel, beta: float = 1.0) -> float:
    """log sum_S exp(beta F(S)) by enumeration (n <= 20)."""
    return logsumexp(beta * model.table())


def log_pa_exact(pa: PaModel) -> float:
    """log sum_S p(S | a) p(S | b) with both posteriors normalized exactly."""
    ta, tb = pa.model_a.table(), pa.model_b.table()
    b = pa.beta
    return logsumexp(b * (ta + tb)) - logsumexp(b * ta) - logsumexp(b * tb)


def marginal_gain(model: SetFunctionModel, i: int, S) -> float:
    """F(S + i) - F(S) for i not in S."""
    mask = model.mask(S)
    if not 0 <= int(i) < model.n:
        raise BadSet(f"element {i} outside ground set of size {model.n}")
    if mask[i]:
        raise ElementInSet(f"element {i} already belongs to S")
    grown = mask.copy()
    grown[i] = True
    vals = model.values(np.stack([grown, mask]))
    return float(vals[0] - vals[1])


def bar_supergradient(model: SetFunctionModel, beta: float, A) -> np.ndarray:
    """beta * F(i | V - i) for i in A and beta * F(i | empty) otherwise."""
    mask = model.mask(A)
    n = model.n
    eye = np.eye(n, dtype=bool)
    full = np.ones(n, dtype=bool)
    empty = np.zeros(n, dtype=bool)
    base = model.values(np.stack([full, empty]))
    top = base[0] - model.values(~eye)
    bottom = model.values(eye) - base[1]
    return beta * np.where(mask, top, bottom)


def bar_supergradient_bound(model: SetFunctionModel, beta: float, A) -> float:
    """Upper bound on log Z from the modular upper bound of F anchored at A.

    Valid whenever F is submodular.
    """
    mask = model.mask(A)
    s = bar_supergradient(model, beta, mask)
    return float(beta * model.value(mask) - s[mask].sum() + np.logaddexp(0.0, s).sum())


@dataclass(frozen=True)
class PaBound:
    value: float
    pa_elbo: float
    upper_a: float
    upper_b: float
    x: np.ndarray
    candidates: tuple


def pa_bound(pa: PaModel, solver_cfg: SolverConfig | None = None, candidate_sets=None) -> PaBound:
    obj = build_pa_elbo(pa)
    cfg = solver_cfg or SolverConfig(epochs=5)
    report = dg_meanfield(obj, None, cfg, "1/2")
    x = report.best_x
    if candidate_sets is None:
        n = pa.model_a.n
        candidate_sets = [np.zeros(n, dtype=bool), np.ones(n, dtype=bool), x >= 0.5]
    candidate_sets = [pa.model_a.mask(c) for c in candidate_sets]
    if not candidate_sets:
        raise BadSet("at least one candidate set is required")
    ua = min(bar_supergradient_bound(pa.model_a, pa.beta, c) for c in candidate_sets)
    ub = min(bar_supergradient_bound(pa.model_b, pa.beta, c) for c in candidate_sets)
    return PaBound(report.best_f - ua - ub, report.best_f, ua, ub, x, tuple(candidate_sets))


def pa_lower_bound(pa: PaModel, solver_cfg: SolverConfig | None = None, candidate_sets=None) -> float:
    """Lower bound on log PA: max PA-ELBO minus bar-supergradient upper bounds of both log Z."""
    return pa_bound(pa, solver_cfg, candidate_sets).value


__all__ = [
    "CutModel",
    "FlidModel",
    "IsingModel",
    "MeanFieldObjective",
    "ModularModel",
    "PaBound",
    "PaModel",
    "SetCoverModel",
    "SetFunctionModel",
    "TableModel",
    "ZeroModel",
    "bar_supergradient",
    "bar_supergradient_bound",
    "binary_entropy",
    "build_elbo",
    "build_pa_elbo",
    "log_pa_exact",
    "log_partition_exact",
    "marginal_gain",
    "model_from_spec",
    "pa_bound",
    "pa_lower_bound",
    "sigmoid",
]

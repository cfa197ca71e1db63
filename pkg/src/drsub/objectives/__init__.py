"""Objective families with exact values, gradients and 1-D restrictions."""

from .base import BoxDomain, Objective, ObjectiveMeta, Restriction
from .factory import FAMILIES, build_objective, objective_equal, objective_to_spec
from .families import Influence, Multilinear, Quadratic, RevenueIE, RevenueMixed, SampledMultilinear, Softmax
from .reflect import Reflected, orthant_reflect


def evaluate(obj: Objective, x) -> float:
    return obj.value(x)


def grad(obj: Objective, x):
    return obj.grad(x)


def partial(obj: Objective, x, i: int) -> float:
    return obj.partial(x, i)


def restrict_1d(obj: Objective, x, i: int) -> Restriction:
    return obj.restrict_1d(x, i)


__all__ = [
    "BoxDomain",
    "FAMILIES",
    "Influence",
    "Multilinear",
    "Objective",
    "ObjectiveMeta",
    "Quadratic",
    "Reflected",
    "Restriction",
    "RevenueIE",
    "RevenueMixed",
    "SampledMultilinear",
    "Softmax",
    "build_objective",
    "evaluate",
    "grad",
    "objective_equal",
    "objective_to_spec",
    "orthant_reflect",
    "partial",
    "restrict_1d",
]

"""Build objectives from JSON-style specs and back."""

from __future__ import annotations

import numpy as np

from ..errors import DimensionMismatch, StructuralViolation
from ..setfunctions import model_from_spec
from .base import BoxDomain, Objective
from .families import Influence, Multilinear, Quadratic, RevenueIE, RevenueMixed, SampledMultilinear, Softmax
from .reflect import Reflected


def _domain(spec) -> BoxDomain | None:
    if spec is None:
        return None
    if isinstance(spec, BoxDomain):
        return spec
    return BoxDomain(spec["lower"], spec["upper"])


def _mt(family: str):
    def build(p, dom):
        model = model_from_spec(p["model"]) if "model" in p else model_from_spec({"family": family, "params": p})
        if model.family != family:
            raise StructuralViolation(f"{family}_mt needs a {family} model, got {model.family}")
        return Multilinear(model, dom)

    return build


def _elbo(p, dom):
    from ..meanfield import build_elbo

    return build_elbo(model_from_spec(p["model"]))


def _pa_elbo(p, dom):
    from ..meanfield import PaModel, build_pa_elbo

    pa = PaModel(model_from_spec(p["model_a"]), model_from_spec(p["model_b"]), float(p.get("beta", 1.0)))
    return build_pa_elbo(pa)


_BUILDERS = {
    "quadratic": lambda p, d: Quadratic(p["H"], p["h"], p.get("c", 0.0), d, require=p.get("require")),
    "softmax": lambda p, d: Softmax(p["L"], d),
    "cut_mt": _mt("cut"),
    "ising_mt": _mt("ising"),
    "flid_mt": _mt("flid"),
    "setcover_mt": _mt("setcover"),
    "modular_mt": _mt("modular"),
    "table_mt": _mt("table"),
    "sampled_mt": lambda p, d: SampledMultilinear(model_from_spec(p["model"]), p["k"], p.get("seed", 0), d),
    "influence": lambda p, d: Influence(p["W"], p["p"], d),
    "revenue_ie": lambda p, d: RevenueIE(p["W"], p["q"], d),
    "revenue_mixed": lambda p, d: RevenueMixed(
        p["W"], p.get("alpha", 1.0), p.get("beta", 1.0), p.get("gamma", 1.0), d
    ),
    "elbo": _elbo,
    "pa_elbo": _pa_elbo,
    "reflected": lambda p, d: Reflected(build_objective(p["inner"]), p["alpha"]),
}

FAMILIES = tuple(_BUILDERS)


def build_objective(family_spec: dict, domain=None) -> Objective:
    """Construct and validate an objective.

    ``family_spec`` has keys ``family`` and ``params`` (and optionally
    ``domain``); an explicit ``domain`` argument takes precedence. Reflected
    objectives derive their box from the inner objective.
    """
    family = family_spec.get("family")
    if family not in _BUILDERS:
        raise StructuralViolation(f"unknown objective family {family!r}")
    dom = _domain(domain if domain is not None else family_spec.get("domain"))
    obj = _BUILDERS[family](family_spec.get("params", {}), dom)
    if dom is not None and family in ("reflected", "elbo", "pa_elbo") and obj.domain != dom:
        raise DimensionMismatch(f"{family} fixes its own domain; the supplied box differs")
    return obj


def objective_to_spec(obj: Objective) -> dict:
    return obj.to_spec()


def objective_equal(a: Objective, b: Objective) -> bool:
    """Bitwise equality of two objectives through their serialized form."""
    return _deep_equal(a.to_spec(), b.to_spec())


def _deep_equal(x, y) -> bool:
    if isinstance(x, dict) and isinstance(y, dict):
        return x.keys() == y.keys() and all(_deep_equal(x[k], y[k]) for k in x)
    if isinstance(x, (list, tuple)) and isinstance(y, (list, tuple)):
        return len(x) == len(y) and all(_deep_equal(u, v) for u, v in zip(x, y))
    if isinstance(x, float) or isinstance(y, float):
        return np.float64(x).tobytes() == np.float64(y).tobytes()
    return x == y

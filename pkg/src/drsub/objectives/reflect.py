"""Orthant reflection: g(x) = f(diag(alpha) x) for a sign vector alpha."""

from __future__ import annotations

import numpy as np

from ..errors import BadSignVector, DimensionMismatch
from .base import BoxDomain, Objective, ObjectiveMeta, Restriction
from .families import Quadratic


def _sign_vector(alpha, n: int) -> np.ndarray:
    a = np.array(alpha, dtype=np.float64).reshape(-1)
    if a.shape[0] != n:
        raise DimensionMismatch(f"sign vector has length {a.shape[0]}, expected {n}")
    if not np.all((a == 1.0) | (a == -1.0)):
        raise BadSignVector(f"sign vector entries must be +1 or -1, got {a}")
    return a


class Reflected(Objective):
    family = "reflected"

    def __init__(self, inner: Objective, alpha):
        a = _sign_vector(alpha, inner.n)
        lo = np.minimum(a * inner.domain.lower, a * inner.domain.upper)
        up = np.maximum(a * inner.domain.lower, a * inner.domain.upper)
        domain = BoxDomain(lo, up)
        self.inner, self.alpha = inner, a
        self.quadratic = None
        if isinstance(inner, Quadratic):
            # the reflected Hessian is A H A, so the sign tests apply to it directly
            AHA = inner.H * np.outer(a, a)
            self.quadratic = Quadratic(AHA, a * inner.h, inner.c, domain)
            meta = self.quadratic.meta
        elif np.all(a == 1):
            meta = inner.meta
        else:
            m = inner.meta
            meta = ObjectiveMeta(
                n=m.n, monotone=False, dr=False, lipschitz=m.lipschitz,
                differentiable=m.differentiable, submodular=False, stochastic=m.stochastic,
            )
        super().__init__(domain, meta)

    @property
    def H(self):
        if self.quadratic is None:
            raise AttributeError("only reflected quadratics expose a Hessian")
        return self.quadratic.H

    def _value(self, x):
        return self.inner._value(self.alpha * x)

    def _grad(self, x):
        return self.alpha * self.inner._grad(self.alpha * x)

    def _partial(self, x, i):
        return float(self.alpha[i] * self.inner._partial(self.alpha * x, i))

    def coordinate_concave(self, i):
        # flipping one axis preserves concavity along it
        return self.inner.coordinate_concave(i)

    def restrict_1d(self, x, i) -> Restriction:
        r = super().restrict_1d(x, i)
        base = self.inner.restrict_1d(self.alpha * self.point(x), i)
        if base.closed_form is not None:
            s = self.alpha[i]
            r.closed_form = lambda lo, hi: s * base.closed_form(min(s * lo, s * hi), max(s * lo, s * hi))
        return r

    def params(self):
        return {"inner": self.inner.to_spec(), "alpha": self.alpha.tolist()}


def orthant_reflect(obj: Objective, alpha) -> Reflected:
    """Objective x -> obj(diag(alpha) x) on the reflected box."""
    return Reflected(obj, alpha)

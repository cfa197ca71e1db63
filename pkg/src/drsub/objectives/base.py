"""Shared objective machinery: box domains, metadata, 1-D restrictions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import DimensionMismatch, IndexOutOfRange, NonDifferentiable, OutOfDomain

DOMAIN_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BoxDomain:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.array(self.lower, dtype=np.float64).reshape(-1)
        up = np.array(self.upper, dtype=np.float64).reshape(-1)
        if lo.shape != up.shape:
            raise DimensionMismatch(f"lower has length {lo.size}, upper has {up.size}")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(up))):
            raise DimensionMismatch("box bounds must be finite")
        if np.any(lo > up):
            raise DimensionMismatch("box needs lower <= upper componentwise")
        lo.setflags(write=False)
        up.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)

    @classmethod
    def unit(cls, n: int) -> "BoxDomain":
        return cls(np.zeros(n), np.ones(n))

    @property
    def n(self) -> int:
        return self.lower.shape[0]

    def contains(self, x, tol: float = DOMAIN_TOL) -> bool:
        x = np.asarray(x, dtype=np.float64)
        return bool(np.all(x >= self.lower - tol) and np.all(x <= self.upper + tol))

    def __eq__(self, other):
        return (
            isinstance(other, BoxDomain)
            and np.array_equal(self.lower, other.lower)
            and np.array_equal(self.upper, other.upper)
        )

    def to_dict(self) -> dict:
        return {"lower": self.lower.tolist(), "upper": self.upper.tolist()}


@dataclass(frozen=True)
class ObjectiveMeta:
    n: int
    monotone: bool
    dr: bool
    lipschitz: float | None = None
    strong_dr: float = 0.0
    differentiable: bool = True
    submodular: bool = True
    stochastic: bool = False


@dataclass
class Restriction:
    """The map ``u -> f(x with x_i = u)`` on ``[lo, hi]`` plus solver hints.

    ``derivative`` is the exact partial derivative along the coordinate when
    the family has one. ``closed_form`` returns the exact maximizer over
    ``[lo, hi]`` when the family admits one (ELBO coordinates).
    """

    fn: Callable[[float], float]
    lo: float
    hi: float
    unimodal: bool
    derivative: Callable[[float], float] | None = None
    closed_form: Callable[[float, float], float] | None = None
    tag: str = ""
    extra: dict = field(default_factory=dict)

    def __call__(self, u: float) -> float:
        return self.fn(u)


class Objective:
    """Base class. Subclasses implement ``_value``/``_grad`` on validated points."""

    family = "abstract"

    def __init__(self, domain: BoxDomain, meta: ObjectiveMeta):
        if meta.n != domain.n:
            raise DimensionMismatch(f"objective has n={meta.n}, domain has n={domain.n}")
        self.domain = domain
        self.meta = meta

    @property
    def n(self) -> int:
        return self.meta.n

    # -- validation ---------------------------------------------------------
    def point(self, x) -> np.ndarray:
        x = np.array(x, dtype=np.float64).reshape(-1)
        if x.shape[0] != self.n:
            raise DimensionMismatch(f"point has length {x.shape[0]}, expected {self.n}")
        if not np.all(np.isfinite(x)):
            raise OutOfDomain("point has non-finite entries")
        if not self.domain.contains(x, DOMAIN_TOL):
            raise OutOfDomain(f"point {x} outside the domain box")
        return x

    def _index(self, i) -> int:
        i = int(i)
        if not 0 <= i < self.n:
            raise IndexOutOfRange(f"coordinate {i} outside 0..{self.n - 1}")
        return i

    # -- public API -------------------------------------------------------
    def value(self, x) -> float:
        return float(self._value(self.point(x)))

    __call__ = value

    def grad(self, x) -> np.ndarray:
        if not self.meta.differentiable:
            raise NonDifferentiable(f"{self.family} has no gradient")
        return np.asarray(self._grad(self.point(x)), dtype=np.float64)

    def partial(self, x, i) -> float:
        i = self._index(i)
        if not self.meta.differentiable:
            raise NonDifferentiable(f"{self.family} has no gradient")
        return float(self._partial(self.point(x), i))

    def restrict_1d(self, x, i) -> Restriction:
        i = self._index(i)
        base = self.point(x)

        def at(u):
            y = base.copy()
            y[i] = u
            return y

        fn = lambda u: float(self._value(at(u)))
        deriv = None
        if self.meta.differentiable and not self.meta.stochastic:
            deriv = lambda u: float(self._partial(at(u), i))
        return Restriction(
            fn=fn,
            lo=float(self.domain.lower[i]),
            hi=float(self.domain.upper[i]),
            unimodal=self.coordinate_concave(i),
            derivative=deriv,
            tag=self.family,
        )

    def coordinate_concave(self, i: int) -> bool:
        """Whether f is concave along coordinate ``i`` (the unimodality hint)."""
        return self.meta.dr

    def to_spec(self) -> dict:
        return {"family": self.family, "params": self.params(), "domain": self.domain.to_dict()}

    def params(self) -> dict:
        raise NotImplementedError

    # -- to override ------------------------------------------------------
    def _value(self, x: np.ndarray) -> float:
        raise NotImplementedError

    def _grad(self, x: np.ndarray) -> np.ndarray:
        raise NonDifferentiable(f"{self.family} has no gradient")

    def _partial(self, x: np.ndarray, i: int) -> float:
        return float(self._grad(x)[i])

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n})"

"""One-dimensional maximization used by the coordinate-wise algorithms."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from ..errors import EmptyInterval
from ..objectives.base import Restriction

GRID_POINTS = 10_001
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class Max1D(NamedTuple):
    argmax: float
    value: float
    error: float  # additive suboptimality bound (exact paths) or estimate (grid/golden)


def _best(fn, candidates):
    """First candidate with the largest value."""
    best_u, best_v = candidates[0], fn(candidates[0])
    for u in candidates[1:]:
        v = fn(u)
        if v > best_v:
            best_u, best_v = u, v
    return best_u, best_v


def _bisect_derivative(h: Restriction, lo: float, hi: float, tol: float) -> Max1D:
    # concave along the coordinate: the derivative is nonincreasing
    d = h.derivative
    d_lo = d(lo)
    if d_lo <= 0.0:
        return Max1D(lo, h(lo), 0.0)
    d_hi = d(hi)
    if d_hi >= 0.0:
        return Max1D(hi, h(hi), 0.0)
    a, b = lo, hi
    while b - a > tol:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        dm = d(mid)
        if dm == 0.0:
            return Max1D(mid, h(mid), 0.0)
        if dm > 0.0:
            a, d_lo = mid, dm
        else:
            b, d_hi = mid, dm
    u = 0.5 * (a + b)
    # f(u*) - f(u) <= max|f'| over the bracket times its width
    err = max(abs(d_lo), abs(d_hi)) * (b - a)
    return Max1D(u, h(u), err)


def _golden(fn, a: float, b: float, tol: float) -> tuple[float, float, float]:
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(200):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fn(d)
    u, v = (c, fc) if fc >= fd else (d, fd)
    return u, v, abs(fc - fd)


def golden_section(fn, lo: float, hi: float, tol: float = 1e-10) -> Max1D:
    """Golden-section search that also compares against both endpoints."""
    if lo > hi:
        raise EmptyInterval(f"[{lo}, {hi}] is empty")
    if lo == hi:
        return Max1D(lo, fn(lo), 0.0)
    u, v, spread = _golden(fn, lo, hi, tol)
    best_u, best_v = _best(fn, [u, lo, hi])
    return Max1D(best_u, best_v, spread if best_u == u else 0.0)


def maximize_1d(handle: Restriction, lo: float | None = None, hi: float | None = None, tol: float = 1e-12) -> Max1D:
    """Maximize a 1-D restriction over ``[lo, hi]`` (defaults to the handle's range).

    Paths, in order of preference: the family's closed-form maximizer;
    bisection on the exact derivative for coordinate-concave handles;
    golden section for other unimodal handles; otherwise a dense grid of
    10001 points refined by golden section around the best grid point.
    """
    lo = handle.lo if lo is None else float(lo)
    hi = handle.hi if hi is None else float(hi)
    if lo > hi:
        raise EmptyInterval(f"[{lo}, {hi}] is empty")
    if lo == hi:
        return Max1D(lo, handle(lo), 0.0)
    if handle.closed_form is not None:
        u = float(np.clip(handle.closed_form(lo, hi), lo, hi))
        return Max1D(u, handle(u), 0.0)
    if handle.unimodal and handle.derivative is not None:
        return _bisect_derivative(handle, lo, hi, tol)
    if handle.unimodal:
        return golden_section(handle, lo, hi, max(tol, 1e-10))

    grid = np.linspace(lo, hi, GRID_POINTS)
    vals = np.array([handle(u) for u in grid])
    i = int(np.argmax(vals))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, GRID_POINTS - 1)]
    u, v, _ = _golden(handle, a, b, max(tol, 1e-10))
    best_u, best_v = (u, v) if v > vals[i] else (float(grid[i]), float(vals[i]))
    # resolution estimate: how much the neighbouring grid values differ from the best
    neighbours = vals[max(i - 1, 0) : i + 2]
    err = float(np.max(np.abs(neighbours - best_v)))
    return Max1D(best_u, best_v, err)

"""Hot loops, each in a numba flavour (``*_nb``) and a vectorized numpy flavour (``*_np``).

The public dispatchers pick the compiled path when :data:`drsub._accel.USE_NUMBA`
is set. Both flavours are kept importable so tests and the benchmark can
compare them directly.
"""

import numpy as np

from . import _accel
from ._accel import njit


def subset_bits(n: int) -> np.ndarray:
    """Boolean matrix of shape ``(2**n, n)``; row ``s`` has bit ``i`` of ``s`` in column ``i``."""
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(bool)


# ---------------------------------------------------------------------------
# Exhaustive multilinear sum: sum_S table[S] prod_{i in S} x_i prod_{j not in S} (1 - x_j)


@njit
def multilinear_sum_nb(table, x):
    n = x.shape[0]
    total = 0.0
    for s in range(1 << n):
        w = 1.0
        for i in range(n):
            if (s >> i) & 1:
                w *= x[i]
            else:
                w *= 1.0 - x[i]
        total += table[s] * w
    return total


def multilinear_sum_np(table, x):
    n = x.shape[0]
    bits = subset_bits(n)
    weights = np.where(bits, x, 1.0 - x).prod(axis=1)
    return float(weights @ table)


def multilinear_sum(table: np.ndarray, x: np.ndarray) -> float:
    table = np.ascontiguousarray(table, dtype=np.float64)
    x = np.ascontiguousarray(x, dtype=np.float64)
    if _accel.USE_NUMBA:
        return float(multilinear_sum_nb(table, x))
    return multilinear_sum_np(table, x)


# ---------------------------------------------------------------------------
# FLID multilinear extension and its gradient.
# order[d] lists items in ascending W[:, d]; the extension is
#   u.x + sum_d sum_l W[o_l, d] x[o_l] prod_{m > l} (1 - x[o_m]).


@njit
def flid_value_grad_nb(W, order, u, x):
    n, D = W.shape
    value = 0.0
    grad = u.copy()
    for i in range(n):
        value += u[i] * x[i]
    suffix = np.empty(n)
    for d in range(D):
        acc = 1.0
        for l in range(n - 1, -1, -1):
            suffix[l] = acc
            acc *= 1.0 - x[order[d, l]]
        prefix = 0.0
        for l in range(n):
            i = order[d, l]
            w = W[i, d]
            value += w * x[i] * suffix[l]
            grad[i] += suffix[l] * (w - prefix)
            prefix = prefix * (1.0 - x[i]) + w * x[i]
    return value, grad


def flid_value_grad_np(W, order, u, x):
    n, D = W.shape
    cols = np.arange(D)[:, None]
    xs = x[order]  # (D, n)
    ws = W[order, cols]  # (D, n)
    one_minus = 1.0 - xs
    # suffix[:, l] = prod_{m > l} (1 - xs[:, m])
    rev = np.cumprod(one_minus[:, ::-1], axis=1)[:, ::-1]
    suffix = np.ones_like(xs)
    suffix[:, :-1] = rev[:, 1:]
    value = float(u @ x + np.sum(ws * xs * suffix))
    prefix = np.zeros_like(xs)
    for l in range(1, n):
        prefix[:, l] = prefix[:, l - 1] * one_minus[:, l - 1] + ws[:, l - 1] * xs[:, l - 1]
    grad = u.astype(np.float64).copy()
    np.add.at(grad, order.ravel(), (suffix * (ws - prefix)).ravel())
    return value, grad


def flid_value_grad(W, order, u, x):
    x = np.ascontiguousarray(x, dtype=np.float64)
    if _accel.USE_NUMBA:
        value, grad = flid_value_grad_nb(W, order, u, x)
        return float(value), grad
    return flid_value_grad_np(W, order, u, x)


# ---------------------------------------------------------------------------
# Exact grid maximization of a quadratic 0.5 x'Hx + h'x + c.
# The first n-1 coordinates are enumerated in lexicographic order; along the
# last coordinate the quadratic is a parabola, so only the grid points
# bracketing its vertex (or the two feasible endpoints) can win.


@njit
def _grid_quadratic_nb(H, h, c, grid, A, b, tol):
    n, R = grid.shape
    m = A.shape[0]
    last = n - 1
    total = 1
    for _ in range(n - 1):
        total *= R
    glast = grid[last]
    q = 0.5 * H[last, last]
    best_val = -np.inf
    best_idx = np.full(n, -1, dtype=np.int64)
    idx = np.zeros(n, dtype=np.int64)
    x = np.zeros(n)
    for flat in range(total):
        rem = flat
        for k in range(n - 2, -1, -1):
            idx[k] = rem % R
            rem //= R
        for k in range(n - 1):
            x[k] = grid[k, idx[k]]
        tmax = glast[R - 1]
        feasible = True
        for r in range(m):
            s = b[r] + tol
            for k in range(n - 1):
                s -= A[r, k] * x[k]
            a = A[r, last]
            if a > 0.0:
                if s / a < tmax:
                    tmax = s / a
            elif s < 0.0:
                feasible = False
                break
        if not feasible:
            continue
        J = np.searchsorted(glast, tmax, side="right") - 1
        if J < 0:
            continue
        const = c
        lin = h[last]
        for k in range(n - 1):
            const += h[k] * x[k]
            lin += H[last, k] * x[k]
            for l in range(n - 1):
                const += 0.5 * H[k, l] * x[k] * x[l]
        if q < 0.0:
            j1 = np.searchsorted(glast[: J + 1], -lin / (2.0 * q))
            if j1 > J:
                j1 = J
            j0 = j1 - 1 if j1 > 0 else 0
        else:
            j0 = 0
            j1 = J
        t0 = glast[j0]
        t1 = glast[j1]
        v0 = const + lin * t0 + q * t0 * t0
        v1 = const + lin * t1 + q * t1 * t1
        if v1 > v0:
            jb = j1
            vb = v1
        else:
            jb = j0
            vb = v0
        if vb > best_val:
            best_val = vb
            for k in range(n - 1):
                best_idx[k] = idx[k]
            best_idx[last] = jb
    return best_idx, best_val


def _grid_quadratic_np(H, h, c, grid, A, b, tol, chunk=1 << 16):
    n, R = grid.shape
    last = n - 1
    glast = grid[last]
    q = 0.5 * H[last, last]
    total = R ** (n - 1)
    best_val = -np.inf
    best_idx = np.full(n, -1, dtype=np.int64)
    a_last = A[:, last]
    pos = a_last > 0.0
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total), dtype=np.int64)
        idx = np.empty((flat.size, n - 1), dtype=np.int64)
        rem = flat.copy()
        for k in range(n - 2, -1, -1):
            idx[:, k] = rem % R
            rem //= R
        X = grid[np.arange(n - 1), idx] if n > 1 else np.zeros((flat.size, 0))
        s = b + tol - X @ A[:, :last].T
        feasible = ~np.any((s < 0.0) & ~pos, axis=1)
        tmax = np.full(flat.size, glast[-1])
        if pos.any():
            tmax = np.minimum(tmax, np.min(s[:, pos] / a_last[pos], axis=1))
        J = np.searchsorted(glast, tmax, side="right") - 1
        feasible &= J >= 0
        if not feasible.any():
            continue
        Hr = H[:last, :last]
        const = c + X @ h[:last] + 0.5 * np.einsum("ij,jk,ik->i", X, Hr, X)
        lin = h[last] + X @ H[last, :last]
        Jc = np.maximum(J, 0)
        if q < 0.0:
            tstar = -lin / (2.0 * q)
            j1 = np.minimum(np.searchsorted(glast, tstar), Jc)
            j0 = np.maximum(j1 - 1, 0)
        else:
            j0 = np.zeros_like(Jc)
            j1 = Jc
        t0, t1 = glast[j0], glast[j1]
        v0 = const + lin * t0 + q * t0 * t0
        v1 = const + lin * t1 + q * t1 * t1
        take1 = v1 > v0
        vb = np.where(take1, v1, v0)
        jb = np.where(take1, j1, j0)
        vb = np.where(feasible, vb, -np.inf)
        i = int(np.argmax(vb))
        if vb[i] > best_val:
            best_val = float(vb[i])
            best_idx[:last] = idx[i]
            best_idx[last] = jb[i]
    return best_idx, best_val


def grid_max_quadratic(H, h, c, grid, A, b, tol):
    """Best grid point of a quadratic, lexicographically first among ties.

    ``grid`` is ``(n, R)`` with ascending rows; rows of ``A``/``b`` must be
    nonnegative (down-closed polytope) and may be empty for a box.
    Returns ``(index_vector, value)``; the index is ``-1`` when nothing is feasible.
    """
    args = (
        np.ascontiguousarray(H, dtype=np.float64),
        np.ascontiguousarray(h, dtype=np.float64),
        float(c),
        np.ascontiguousarray(grid, dtype=np.float64),
        np.ascontiguousarray(A, dtype=np.float64).reshape(-1, grid.shape[0]),
        np.ascontiguousarray(b, dtype=np.float64).ravel(),
        float(tol),
    )
    if _accel.USE_NUMBA:
        idx, val = _grid_quadratic_nb(*args)
        return idx, float(val)
    return _grid_quadratic_np(*args)

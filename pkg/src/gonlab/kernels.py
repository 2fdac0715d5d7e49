"""Floating-point search kernels used by the minima engine.

Two kernels sit on the hot path:

* ``enumerate_short``: Fincke-Pohst enumeration of all integer vectors ``c``
  with ``|R c|^2 <= radius2`` for an upper-triangular ``R`` (one
  representative per sign pair, zero excluded).
* ``cheb_min``: ``min_x max_i |c_i + (G x)_i|`` over real ``x``, solved
  exactly (up to rounding) by enumerating vertices of the equivalent LP.

Both have a numba-compiled implementation and a numpy/pure-Python one.  The
numba path is used when numba imports and ``GONLAB_NUMBA`` is not ``0``.
Results of the kernels only steer the search; every reported value is
re-evaluated exactly by the caller.
"""

from __future__ import annotations

import math
import os
from functools import lru_cache
from itertools import combinations

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda f: f


__all__ = [
    "NUMBA_AVAILABLE",
    "cheb_min",
    "enumerate_short",
    "set_backend",
    "using_numba",
]

_SING_TOL = 1e-13
_FEAS_TOL = 1e-10


def _env_wants_numba() -> bool:
    return os.environ.get("GONLAB_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


_use_numba = NUMBA_AVAILABLE and _env_wants_numba()


def using_numba() -> bool:
    return _use_numba


def set_backend(name: str) -> None:
    """Select ``"numba"`` or ``"numpy"`` for subsequent kernel calls."""
    global _use_numba
    if name == "numba":
        if not NUMBA_AVAILABLE:
            raise RuntimeError("numba is not installed")
        _use_numba = True
    elif name == "numpy":
        _use_numba = False
    else:
        raise ValueError(f"unknown backend {name!r}")


# ---------------------------------------------------------------------------
# Fincke-Pohst enumeration
# ---------------------------------------------------------------------------

def _enumerate_py(R, radius2, max_count):
    n = R.shape[0]
    out = []
    norms = []
    cur = [0] * n
    hi = [0] * n
    partial = [0.0] * (n + 1)
    shift = [0.0] * n
    nodes = 0

    def level_range(i):
        s = 0.0
        for j in range(i + 1, n):
            s += R[i, j] * cur[j]
        shift[i] = s
        rem = radius2 - partial[i + 1]
        if rem < 0.0:
            rem = 0.0
        h = math.sqrt(rem) / abs(R[i, i])
        h = h * (1.0 + 1e-12) + 1e-12
        center = -s / R[i, i]
        lo = math.ceil(center - h)
        up = math.floor(center + h)
        if all(cur[j] == 0 for j in range(i + 1, n)) and lo < 0:
            lo = 0
        return lo, up

    i = n - 1
    cur[i], hi[i] = level_range(i)
    while True:
        if cur[i] > hi[i]:
            i += 1
            if i == n:
                break
            cur[i] += 1
            continue
        nodes += 1
        if nodes > max_count:
            return None, None
        t = R[i, i] * cur[i] + shift[i]
        p = partial[i + 1] + t * t
        if p > radius2:
            cur[i] += 1
            continue
        if i == 0:
            if any(cur):
                out.append(list(cur))
                norms.append(p)
                if len(out) > max_count:
                    return None, None
            cur[0] += 1
            continue
        partial[i] = p
        i -= 1
        cur[i], hi[i] = level_range(i)
    if not out:
        return np.zeros((0, n), dtype=np.int64), np.zeros(0)
    return np.array(out, dtype=np.int64), np.array(norms)


@njit(cache=True)
def _enumerate_nb(R, radius2, max_count):  # pragma: no cover - compiled
    n = R.shape[0]
    cap = 64
    out = np.empty((cap, n), dtype=np.int64)
    norms = np.empty(cap)
    count = 0
    cur = np.zeros(n, dtype=np.int64)
    hi = np.zeros(n, dtype=np.int64)
    partial = np.zeros(n + 1)
    shift = np.zeros(n)
    nodes = 0
    i = n - 1
    descend = True
    while True:
        if descend:
            s = 0.0
            for j in range(i + 1, n):
                s += R[i, j] * cur[j]
            shift[i] = s
            rem = radius2 - partial[i + 1]
            if rem < 0.0:
                rem = 0.0
            h = math.sqrt(rem) / abs(R[i, i])
            h = h * (1.0 + 1e-12) + 1e-12
            center = -s / R[i, i]
            lo = math.ceil(center - h)
            up = math.floor(center + h)
            above_zero = True
            for j in range(i + 1, n):
                if cur[j] != 0:
                    above_zero = False
                    break
            if above_zero and lo < 0:
                lo = 0
            cur[i] = np.int64(lo)
            hi[i] = np.int64(up)
            descend = False
        if cur[i] > hi[i]:
            i += 1
            if i == n:
                break
            cur[i] += 1
            continue
        nodes += 1
        if nodes > max_count:
            return out[:0], norms[:0], False
        t = R[i, i] * cur[i] + shift[i]
        p = partial[i + 1] + t * t
        if p > radius2:
            cur[i] += 1
            continue
        if i == 0:
            nz = False
            for j in range(n):
                if cur[j] != 0:
                    nz = True
                    break
            if nz:
                if count == cap:
                    cap *= 2
                    out2 = np.empty((cap, n), dtype=np.int64)
                    norms2 = np.empty(cap)
                    out2[:count] = out[:count]
                    norms2[:count] = norms[:count]
                    out = out2
                    norms = norms2
                out[count] = cur
                norms[count] = p
                count += 1
            cur[0] += 1
            continue
        partial[i] = p
        i -= 1
        descend = True
    return out[:count], norms[:count], True


def enumerate_short(R: np.ndarray, radius2: float, max_count: int):
    """All nonzero ``c`` (up to sign) with ``|R c|^2 <= radius2``.

    Returns ``(coeffs, norms2)`` or ``(None, None)`` if more than ``max_count``
    search nodes were visited.
    """
    R = np.ascontiguousarray(R, dtype=np.float64)
    if _use_numba:
        c, nrm, ok = _enumerate_nb(R, float(radius2), int(max_count))
        if not ok:
            return None, None
        return c, nrm
    return _enumerate_py(R, float(radius2), int(max_count))


# ---------------------------------------------------------------------------
# Chebyshev (min-max) LP by vertex enumeration
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _vertex_tables(d: int, p: int):
    rows = np.array(list(combinations(range(d), p + 1)), dtype=np.int64)
    signs = np.array(
        [[1.0 if (mask >> b) & 1 else -1.0 for b in range(p + 1)] for mask in range(1 << (p + 1))]
    )
    return rows, signs


def _cheb_np(c, G):
    d, p = G.shape
    rows, signs = _vertex_tables(d, p)
    # systems: sigma_i G_i x - t = -sigma_i c_i for the chosen rows
    Gs = G[rows]  # (C, p+1, p)
    cs = c[rows]  # (C, p+1)
    A = np.empty((rows.shape[0], signs.shape[0], p + 1, p + 1))
    A[..., :p] = signs[None, :, :, None] * Gs[:, None, :, :]
    A[..., p] = -1.0
    b = -signs[None, :, :] * cs[:, None, :]
    A = A.reshape(-1, p + 1, p + 1)
    b = b.reshape(-1, p + 1)
    dets = np.linalg.det(A)
    scale = np.abs(A).max(axis=(1, 2)) ** (p + 1)
    ok = np.abs(dets) > _SING_TOL * np.maximum(scale, 1e-300)
    if not ok.any():
        return 0.0, np.zeros(p), False
    sol = np.linalg.solve(A[ok], b[ok][..., None])[..., 0]
    x = sol[:, :p]
    t = sol[:, p]
    resid = np.abs(c[None, :] + x @ G.T).max(axis=1)
    feas = (t >= 0) & (resid <= t + _FEAS_TOL * (1.0 + np.abs(t)))
    if not feas.any():
        return 0.0, np.zeros(p), False
    idx = np.flatnonzero(feas)
    best = idx[np.argmin(t[idx])]
    return float(resid[best]), x[best].copy(), True


@njit(cache=True)
def _cheb_nb(c, G):  # pragma: no cover - compiled
    d, p = G.shape
    q = p + 1
    best_t = np.inf
    best_x = np.zeros(p)
    found = False
    idx = np.arange(q)
    A = np.empty((q, q))
    b = np.empty(q)
    while True:
        for mask in range(1 << q):
            for r in range(q):
                sg = 1.0 if (mask >> r) & 1 else -1.0
                row = idx[r]
                for j in range(p):
                    A[r, j] = sg * G[row, j]
                A[r, p] = -1.0
                b[r] = -sg * c[row]
            # Gaussian elimination with partial pivoting
            M = A.copy()
            v = b.copy()
            scale = 0.0
            for r in range(q):
                for j in range(q):
                    if abs(M[r, j]) > scale:
                        scale = abs(M[r, j])
            singular = False
            for col in range(q):
                piv = col
                for r in range(col + 1, q):
                    if abs(M[r, col]) > abs(M[piv, col]):
                        piv = r
                if abs(M[piv, col]) <= _SING_TOL * max(scale, 1e-300):
                    singular = True
                    break
                if piv != col:
                    for j in range(q):
                        tmp = M[col, j]
                        M[col, j] = M[piv, j]
                        M[piv, j] = tmp
                    tmp = v[col]
                    v[col] = v[piv]
                    v[piv] = tmp
                for r in range(col + 1, q):
                    f = M[r, col] / M[col, col]
                    if f != 0.0:
                        for j in range(col, q):
                            M[r, j] -= f * M[col, j]
                        v[r] -= f * v[col]
            if singular:
                continue
            sol = np.zeros(q)
            for r in range(q - 1, -1, -1):
                acc = v[r]
                for j in range(r + 1, q):
                    acc -= M[r, j] * sol[j]
                sol[r] = acc / M[r, r]
            t = sol[p]
            if t < 0.0:
                continue
            resid = 0.0
            for i in range(d):
                acc = c[i]
                for j in range(p):
                    acc += G[i, j] * sol[j]
                if abs(acc) > resid:
                    resid = abs(acc)
            if resid <= t + _FEAS_TOL * (1.0 + abs(t)) and resid < best_t:
                best_t = resid
                for j in range(p):
                    best_x[j] = sol[j]
                found = True
        # next combination of q rows out of d
        k = q - 1
        while k >= 0 and idx[k] == d - q + k:
            k -= 1
        if k < 0:
            break
        idx[k] += 1
        for j in range(k + 1, q):
            idx[j] = idx[j - 1] + 1
    if not found:
        return 0.0, best_x, False
    return best_t, best_x, True


def cheb_min(c: np.ndarray, G: np.ndarray):
    """Minimise ``max_i |c_i + (G x)_i|`` over real ``x``.

    Returns ``(value, x, ok)``; ``ok`` is False when every vertex system was
    numerically singular, in which case ``value`` is the trivial bound 0.
    ``G`` must have full column rank.
    """
    c = np.ascontiguousarray(c, dtype=np.float64)
    d = c.shape[0]
    if G.shape[1] == 0:
        return float(np.abs(c).max()), np.zeros(0), True
    G = np.ascontiguousarray(G, dtype=np.float64)
    p = G.shape[1]
    if p >= d:
        x = np.linalg.lstsq(G, -c, rcond=None)[0]
        return float(np.abs(c + G @ x).max()), x, True
    # the vertex systems mix G with the unit column of t: work in normalized units
    col = np.abs(G).max(axis=0)
    col[col == 0] = 1.0
    Gn = G / col
    sc = max(float(np.abs(c).max()), 1.0 if not np.isfinite(Gn).all() else float(np.abs(Gn).max()))
    if sc == 0 or not np.isfinite(sc):
        sc = 1.0
    solver = _cheb_nb if _use_numba else _cheb_np
    _, xn, ok = solver(c / sc, np.ascontiguousarray(Gn / sc))
    if not ok:
        return 0.0, np.zeros(p), False
    x = xn / col
    return float(np.abs(c + G @ x).max()), x, True

"""Brute-force references that share no code with the minima engine."""

import itertools
import math
from fractions import Fraction

import numpy as np


def _gauge(z, tau) -> float:
    return max(math.log(abs(float(x))) - float(t) for x, t in zip(z, tau) if x != 0)


def _rank(vs) -> int:
    return int(np.linalg.matrix_rank(np.array(vs, dtype=float))) if vs else 0


def brute_minima(basis_cols, tau, radius: int):
    """Log successive minima by scanning all coefficient vectors in ``[-radius, radius]^d``."""
    d = len(tau)
    pts = []
    for c in itertools.product(range(-radius, radius + 1), repeat=d):
        if not any(c):
            continue
        z = [sum(Fraction(c[j]) * basis_cols[j][i] for j in range(d)) for i in range(d)]
        pts.append((_gauge(z, tau), z))
    pts.sort(key=lambda p: p[0])
    chosen, vals = [], []
    for g, z in pts:
        if _rank(chosen + [[float(x) for x in z]]) > len(chosen):
            chosen.append([float(x) for x in z])
            vals.append(g)
            if len(vals) == d:
                break
    return vals


def brute_closest(basis_cols, tau, target, radius: int) -> float:
    d = len(tau)
    best = math.inf
    for c in itertools.product(range(-radius, radius + 1), repeat=d):
        z = [sum(Fraction(c[j]) * basis_cols[j][i] for j in range(d)) for i in range(d)]
        off = [a - b for a, b in zip(z, target)]
        if any(off):
            best = min(best, _gauge(off, tau))
    return best

"""Successive minima of a lattice with respect to axis boxes.

For a box ``|z_i| <= exp(b_i)`` the gauge of a point is
``L_z = max over nonzero z_i of (log|z_i| - b_i)`` and ``L_k`` is the log of the
k-th successive minimum.  Minima are found greedily: ``v_k`` minimises the
gauge over lattice points outside ``span(v_1, ..., v_{k-1})``, which realises
``lambda_k`` exactly.

Each greedy step works in a basis adapted to the primitive sublattice
``S = Lambda ∩ span(v_1..v_{k-1})``.  Coset representatives of ``Lambda / S``
are enumerated by Fincke-Pohst on the projected (orthogonal to ``S``) basis,
and the best point in each coset is found by branch and bound over ``S``
using Chebyshev LP relaxations.  Floating point only prunes the search, with
a relative safety margin; every candidate is evaluated and compared exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
from fpylll import LLL, IntegerMatrix

from . import kernels
from .errors import BudgetExceeded, DimensionMismatch, ZeroVector
from .exact import LogReal, as_fraction
from .lattice import Lattice, compound, inverse, rank_of
from .params import LogBox, TauVector, compound_box

__all__ = [
    "DEFAULT_BUDGET",
    "LatticePoint",
    "MinimaProfile",
    "closest_gauge",
    "compound_first_minimum",
    "enumerate_in_box",
    "point_L",
    "profile_along_ray",
    "successive_minima",
]

DEFAULT_BUDGET = 10**7

# relative slack applied to every floating-point pruning decision
_EPS = 1e-8
_DEFORM_BITS = 64
# ratio of column norms beyond which double precision pruning is unsafe
_MAX_RANGE = 1e250


@dataclass(frozen=True)
class LatticePoint:
    """A lattice vector by its basis coefficients and its ambient coordinates."""

    coeffs: tuple[int, ...]
    coords: tuple[Fraction, ...]


@dataclass(frozen=True)
class MinimaProfile:
    """Log successive minima at one box; ``L`` and ``S`` hold exact reals."""

    tau: tuple
    L: tuple[LogReal, ...]
    S: tuple[LogReal, ...]
    witnesses: tuple[LatticePoint, ...]
    precision_bits: int = 128
    nodes: int = 0

    def L_floats(self) -> tuple[float, ...]:
        return tuple(float(x) for x in self.L)

    def S_floats(self) -> tuple[float, ...]:
        return tuple(float(x) for x in self.S)

    def intervals(self):
        return tuple(x.interval(self.precision_bits) for x in self.L)

    def interval_width(self) -> float:
        return max((x.width(self.precision_bits) for x in self.L + self.S), default=0.0)


def _log_abs(x: int) -> float:
    return math.log(abs(x))


def point_L(z, tau: Sequence) -> LogReal:
    """``max over nonzero coordinates of (log|z_i| - tau_i)``, exactly."""
    coords = z.coords if isinstance(z, LatticePoint) else tuple(as_fraction(x) for x in z)
    if len(coords) != len(tau):
        raise DimensionMismatch("point and tau dimensions differ")
    best = None
    for x, t in zip(coords, tau):
        if x == 0:
            continue
        v = LogReal(abs(x)) - LogReal.coerce(t)
        if best is None or v > best:
            best = v
    if best is None:
        raise ZeroVector("L_z is undefined for z = 0")
    return best


# ---------------------------------------------------------------------------
# integer helpers
# ---------------------------------------------------------------------------

def _scaled_float(x: int, shift: int) -> float:
    """``x * 2**-shift`` as a float without overflowing on huge ``x``."""
    if x == 0:
        return 0.0
    bl = abs(x).bit_length()
    k = max(0, bl - 62)
    e = k - shift
    if e < -1070:
        return 0.0
    m = (x >> k) if x > 0 else -((-x) >> k)
    return math.ldexp(float(m), e)


def _lll(rows: list[list[int]]) -> list[list[int]]:
    """LLL-reduce integer row vectors; returns the unimodular transform rows."""
    n = len(rows)
    if n <= 1:
        return [[1]] if n == 1 else []
    A = IntegerMatrix.from_matrix(rows)
    U = IntegerMatrix.identity(n)
    LLL.reduction(A, U)
    return [[U[i, j] for j in range(n)] for i in range(n)]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _adapted_basis(found: list[list[int]], d: int) -> list[list[int]]:
    """Unimodular ``W`` (d x d, integer) whose first ``r`` columns span
    ``Z^d ∩ span(found)``; ``found`` are ``r`` independent integer vectors."""
    r = len(found)
    A = [[found[j][i] for j in range(r)] for i in range(d)]  # d x r, columns = found
    Rinv = [[int(i == j) for j in range(d)] for i in range(d)]
    for c in range(r):
        for p in range(c + 1, d):
            a, b = A[c][c], A[p][c]
            if b == 0:
                continue
            g, x, y = _xgcd(a, b)
            # rows (c, p) <- E (rows c, p) with E = [[x, y], [-b/g, a/g]]
            ag, bg = a // g, b // g
            A[c], A[p] = (
                [x * u + y * v for u, v in zip(A[c], A[p])],
                [-bg * u + ag * v for u, v in zip(A[c], A[p])],
            )
            # columns (c, p) of Rinv <- (columns) E^{-1}, E^{-1} = [[a/g, -y], [b/g, x]]
            for row in Rinv:
                u, v = row[c], row[p]
                row[c], row[p] = ag * u + bg * v, -y * u + x * v
        if A[c][c] == 0:
            raise ValueError("found vectors are linearly dependent")
    return Rinv


# ---------------------------------------------------------------------------
# the engine
# ---------------------------------------------------------------------------

class _Engine:
    """Gauge ``F(z) = max_i |z_i| exp(-w_i)`` on integer vectors ``z = M c``."""

    def __init__(self, lattice: Lattice, widths: Sequence, budget: int, extra_scale: int = 1):
        self.lattice = lattice
        self.d = lattice.dim
        if len(widths) != self.d:
            raise DimensionMismatch("box and lattice dimensions differ")
        q, M = lattice.integer_form()
        # extra_scale makes rational translates integral as well
        self.Q = q * extra_scale
        self.M = [[x * extra_scale for x in row] for row in M]
        self.b = [LogReal.coerce(x) for x in widths]
        logq = LogReal(self.Q)
        # integer coordinates are Q times the ambient ones
        self.w = [x + logq for x in self.b]
        self.wf = [float(x) for x in self.w]
        self.budget = int(budget)
        self.nodes = 0
        wref = max(self.w)
        self.D = []
        with mpmath.workprec(_DEFORM_BITS + 64):
            for wi in self.w:
                diff = (wref - wi).interval(128)
                ex = mpmath.mpf(diff.mid) / mpmath.log(2)
                self.D.append(int(mpmath.floor(mpmath.power(2, _DEFORM_BITS + ex))))
        # float deformation: y_i = D_i z_i 2^-shift; set once from the basis
        bl = max(abs(self.D[i] * self.M[i][j]).bit_length() for i in range(self.d) for j in range(self.d))
        self.shift = bl
        # y = kappa * z_i exp(-w_i) with log kappa below
        self.log_kappa = (_DEFORM_BITS - self.shift) * math.log(2) + float(wref)

    # -- budget ------------------------------------------------------------
    def charge(self, n: int = 1):
        self.nodes += n
        if self.nodes > self.budget:
            raise BudgetExceeded(f"node budget {self.budget} exceeded")

    # -- conversions ---------------------------------------------------------
    def deformed_int(self, z: Sequence[int]) -> list[int]:
        return [di * zi for di, zi in zip(self.D, z)]

    def yfloat(self, z: Sequence[int]) -> np.ndarray:
        return np.array([_scaled_float(di * zi, self.shift) for di, zi in zip(self.D, z)])

    def fvalue(self, L: float) -> float:
        """Float gauge in deformed units for a log value ``L``."""
        return math.exp(L + self.log_kappa) if L + self.log_kappa < 700 else math.inf

    def value(self, z: Sequence[int]) -> tuple[LogReal, float]:
        """Exact ``L_z`` (ambient units) and its float approximation."""
        fl = [(_log_abs(x) - wf, i) for i, (x, wf) in enumerate(zip(z, self.wf)) if x]
        if not fl:
            raise ZeroVector("zero vector")
        top = max(v for v, _ in fl)
        best = None
        for v, i in fl:
            if v >= top - 1e-9 * (1 + abs(top)):
                ex = LogReal(Fraction(abs(z[i]))) - self.w[i]
                if best is None or ex > best:
                    best = ex
        return best, top

    def to_point(self, z: Sequence[int]) -> LatticePoint:
        coords = tuple(Fraction(x, self.Q) for x in z)
        coeffs = self.lattice.coefficients(coords)
        return LatticePoint(tuple(int(c) for c in coeffs), coords)

    # -- basis preparation ---------------------------------------------------
    def _reduce(self, vecs: list[list[int]]) -> list[list[int]]:
        """LLL-reduce integer vectors (lists of coordinates) under the deformation."""
        if len(vecs) <= 1:
            return vecs
        U = _lll([self.deformed_int(v) for v in vecs])
        return [[sum(u * v[i] for u, v in zip(row, vecs)) for i in range(self.d)] for row in U]

    def step_basis(self, found_coeffs: list[list[int]]):
        """Basis ``(S, T)``: ``S`` spans the saturated span of the found points,
        ``T`` completes it and is reduced modulo ``S``."""
        d = self.d
        W = _adapted_basis(found_coeffs, d)
        cols = [[sum(self.M[i][l] * W[l][j] for l in range(d)) for i in range(d)] for j in range(d)]
        r = len(found_coeffs)
        S = self._reduce(cols[:r])
        T = cols[r:]
        if r:
            Sd = [self.deformed_int(s) for s in S]
            G = [[sum(a * b for a, b in zip(u, v)) for v in Sd] for u in Sd]
            adj, delta = _adjugate(G)

            def project(t):
                td = self.deformed_int(t)
                st = [sum(a * b for a, b in zip(u, td)) for u in Sd]
                coef = [sum(adj[i][j] * st[j] for j in range(r)) for i in range(r)]
                return [delta * x - sum(coef[i] * Sd[i][k] for i in range(r)) for k, x in enumerate(td)], coef

            proj = [project(t)[0] for t in T]
            U = _lll(proj) if len(T) > 1 else [[1]]
            T = [[sum(u * t[i] for u, t in zip(row, T)) for i in range(d)] for row in U]
            # size-reduce T modulo S with exactly rounded coefficients
            sized = []
            for t in T:
                _, coef = project(t)
                a = [_round_div(c, delta) for c in coef]
                sized.append([x - sum(a[i] * S[i][k] for i in range(r)) for k, x in enumerate(t)])
            T = sized
            P = [project(t)[0] for t in T]
            pshift = max(abs(x).bit_length() for p in P for x in p)
            Pf = np.array([[_scaled_float(x, pshift) for x in p] for p in P]).T
            # undo the delta scaling in float: 2^pshift / delta / 2^shift
            fac = math.exp((pshift - self.shift) * math.log(2) - _log_abs(delta))
        else:
            T = self._reduce(T)
            Pf = np.array([self.yfloat(t) for t in T]).T
            fac = 1.0
        Rt = np.linalg.qr(Pf, mode="r") * fac
        YS = np.array([self.yfloat(s) for s in S]).T if r else np.zeros((d, 0))
        norms = [np.abs(Rt[i, i]) for i in range(Rt.shape[0])]
        if r:
            norms += list(np.abs(YS).max(axis=0))
        if min(norms) <= 0 or max(norms) / min(norms) > _MAX_RANGE:
            raise BudgetExceeded("dynamic range of the deformed basis exceeds double precision")
        return S, T, YS, Rt

    # -- inner search over a coset of S ------------------------------------
    def _struct_rows(self, S):
        r = len(S)
        return [[i for i in range(self.d) if all(S[j][i] == 0 for j in range(l))] for l in range(r + 1)]

    def coset_min(self, u, yu, S, YS, state, exclude_zero=False):
        """Minimise the gauge over ``u + S``; updates ``state`` = [best LogReal, best float, z]."""
        zero_rows = self._struct_rows(S)
        r = len(S)

        def struct_lb(z, l):
            best = None
            for i in zero_rows[l]:
                if z[i]:
                    v = _log_abs(z[i]) - self.wf[i]
                    if best is None or v > best[0]:
                        best = (v, i)
            return best

        def lb_blocks(z, l):
            """True if the exact structural bound already reaches the incumbent."""
            if state[0] is None:
                return False
            sb = struct_lb(z, l)
            if sb is None:
                return False
            v, i = sb
            if v > state[1] + 1e-9 * (1 + abs(v)):
                return True
            if v < state[1] - 1e-9 * (1 + abs(v)):
                return False
            return LogReal(Fraction(abs(z[i]))) - self.w[i] >= state[0]

        def leaf(z):
            self.charge()
            if exclude_zero and not any(z):
                return
            ex, fl = self.value(z)
            if state[0] is None or fl < state[1] - 1e-9 * (1 + abs(fl)) or (
                fl <= state[1] + 1e-9 * (1 + abs(fl)) and ex < state[0]
            ):
                state[0], state[1], state[2] = ex, float(ex), list(z)

        def limit():
            return math.inf if state[0] is None else self.fvalue(state[1]) * (1 + _EPS)

        nonzero_rows = [[i for i in range(self.d) if i not in set(zr)] for zr in zero_rows]

        def relax(y, l):
            """LP bound over the free coefficients; structural rows enter as constants."""
            zr = zero_rows[l]
            c0 = float(np.abs(y[zr]).max()) if zr else 0.0
            if l == 0:
                return float(np.abs(y).max()), None, True
            nz = nonzero_rows[l]
            t, x, ok = kernels.cheb_min(y[nz], YS[nz, :l])
            return (max(t, c0) if ok else c0), x, ok

        def exact_at(z, s, a):
            self.charge()
            p = [zi + a * si for zi, si in zip(z, s)]
            return (self.value(p)[0] if any(p) else None), p

        def line(z, s, x0):
            """Exact minimum of the convex sequence ``a -> F(z + a s)``.

            Near-flat stretches defeat float pruning, so the minimiser nearest
            ``x0`` is located with exact comparisons: a local minimum is global,
            otherwise gallop and bisect along the strictly descending side.
            """
            near = int(round(x0))
            f0, p0 = exact_at(z, s, near)
            if f0 is None:
                # z + near s is the origin; the best nonzero point is a neighbour
                for a in (near - 1, near + 1):
                    leaf(exact_at(z, s, a)[1])
                return
            down = 0
            for e in (1, -1):
                fe, _ = exact_at(z, s, near + e)
                if fe is None or fe < f0:
                    down = e
                    break
            if not down:
                leaf(p0)
                return

            def rises(a):
                fa, _ = exact_at(z, s, near + down * a)
                if fa is None:
                    return True
                fb, _ = exact_at(z, s, near + down * (a + 1))
                return fb is not None and fb >= fa

            lo, hi = 0, 1
            while not rises(hi):
                lo, hi = hi, 2 * hi
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if rises(mid):
                    hi = mid
                else:
                    lo = mid
            a = near + down * hi
            fa, p = exact_at(z, s, a)
            if fa is None:
                for b in (a - 1, a + 1):
                    leaf(exact_at(z, s, b)[1])
            else:
                leaf(p)

        def rec(z, y, l):
            self.charge()
            if l == 0:
                leaf(z)
                return
            if lb_blocks(z, l):
                return
            t, x, ok = relax(y, l)
            if t > limit():
                return
            if l == 1:
                line(z, S[0], x[0] if ok else 0.0)
                return
            col = YS[:, l - 1]
            s = S[l - 1]
            xc = x[l - 1] if ok else 0.0
            r0 = int(round(xc))
            # f is convex in a: non-decreasing on each side of the continuous optimum
            if r0 < xc:
                starts = ((r0, -1), (r0 + 1, 1))
            else:
                starts = ((r0, 1), (r0 - 1, -1))
            for a, direction in starts:
                while True:
                    yc = y + a * col
                    val = relax(yc, l - 1)[0]
                    if val > limit():
                        break
                    zc = [zi + a * si for zi, si in zip(z, s)]
                    rec(zc, yc, l - 1)
                    if lb_blocks(z, l):
                        return
                    a += direction

        rec(list(u), yu, r)

    # -- greedy successive minima -------------------------------------------
    def minima(self, k_max: int):
        d = self.d
        found_coeffs: list[list[int]] = []
        found_z: list[list[int]] = []
        values: list[LogReal] = []
        for k in range(1, k_max + 1):
            S, T, YS, Rt = self.step_basis(found_coeffs)
            state = [None, math.inf, None]
            for t in T:
                self.coset_min(t, self.yfloat(t), S, YS, state)
            radius2 = d * self.fvalue(state[1]) ** 2 * (1 + _EPS)
            cand, norms = kernels.enumerate_short(Rt, radius2, self.budget - self.nodes)
            if cand is None:
                raise BudgetExceeded(f"enumeration at step {k} exceeded the node budget")
            self.charge(len(cand))
            order = np.argsort(norms, kind="stable")
            for idx in order:
                if norms[idx] > d * self.fvalue(state[1]) ** 2 * (1 + _EPS):
                    break
                c = [int(v) for v in cand[idx]]
                u = [sum(cj * t[i] for cj, t in zip(c, T)) for i in range(d)]
                self.coset_min(u, self.yfloat(u), S, YS, state)
            z = state[2]
            found_z.append(z)
            values.append(state[0])
            coeffs = self.lattice.coefficients([Fraction(x, self.Q) for x in z])
            found_coeffs.append([int(c) for c in coeffs])
        return found_z, values


def _adjugate(G: list[list[int]]) -> tuple[list[list[int]], int]:
    """Integer adjugate and determinant of a small integer matrix."""
    n = len(G)
    F = [[Fraction(x) for x in row] for row in G]
    from .lattice import det, inverse

    dt = det(F)
    inv = inverse(F)
    adj = [[int(inv[i][j] * dt) for j in range(n)] for i in range(n)]
    return adj, int(dt)


def _round_div(a: int, b: int) -> int:
    """Nearest integer to ``a / b`` (``b > 0``)."""
    return (2 * a + b) // (2 * b)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def _as_tau(tau) -> TauVector:
    return tau if isinstance(tau, TauVector) else TauVector(tau)


def successive_minima(
    lattice: Lattice,
    tau,
    budget: int = DEFAULT_BUDGET,
    k_max: int | None = None,
    precision_bits: int = 128,
) -> MinimaProfile:
    """Log successive minima ``L_1..L_k`` of ``lattice`` in the box ``B_tau``."""
    tau = _as_tau(tau)
    d = lattice.dim
    if len(tau) != d:
        raise DimensionMismatch("tau and lattice dimensions differ")
    k_max = d if k_max is None else k_max
    eng = _Engine(lattice, tau, budget)
    zs, vals = eng.minima(k_max)
    shift = lattice.log_shift
    L = tuple(v + shift for v in vals)
    S = []
    acc = LogReal()
    for v in L:
        acc = acc + v
        S.append(acc)
    wit = tuple(eng.to_point(z) for z in zs)
    return MinimaProfile(tuple(tau), L, tuple(S), wit, precision_bits, eng.nodes)


def profile_along_ray(
    lattice: Lattice,
    mu,
    s_grid: Sequence,
    budget: int = DEFAULT_BUDGET,
    k_max: int | None = None,
) -> list[MinimaProfile]:
    """Profiles at ``tau = s mu`` for each ``s`` of an increasing positive grid."""
    comps = getattr(mu, "components", mu)
    mu = _as_tau(comps)
    grid = [as_fraction(s) for s in s_grid]
    if any(s <= 0 for s in grid) or any(a >= b for a, b in zip(grid, grid[1:])):
        raise ValueError("s grid must be positive and increasing")
    return [successive_minima(lattice, mu.scale(s), budget, k_max) for s in grid]


def enumerate_in_box(lattice: Lattice, box: Sequence, budget: int = DEFAULT_BUDGET) -> list[LatticePoint]:
    """All nonzero lattice points (one per sign pair) with ``|z_i| <= exp(b_i)``."""
    box = LogBox(box)
    eng = _Engine(lattice, box, budget)
    d = lattice.dim
    _, T, _, Rt = eng.step_basis([])
    radius2 = d * eng.fvalue(0.0) ** 2 * (1 + _EPS)
    cand, _ = kernels.enumerate_short(Rt, radius2, budget)
    if cand is None:
        raise BudgetExceeded("box enumeration exceeded the candidate budget")
    out = []
    for c in cand:
        z = [sum(int(cj) * t[i] for cj, t in zip(c, T)) for i in range(d)]
        ex, _ = eng.value(z)
        if ex.sign() <= 0:
            p = eng.to_point(z)
            lead = next(x for x in p.coeffs if x)
            if lead < 0:
                p = LatticePoint(tuple(-x for x in p.coeffs), tuple(-x for x in p.coords))
            out.append(p)
    out.sort(key=lambda p: (p.coeffs))
    return out


def compound_first_minimum(lattice: Lattice, box: Sequence, k: int, budget: int = DEFAULT_BUDGET) -> LogReal:
    """``L_1`` of the k-th compound lattice in the compound box.

    When ``lattice`` is normalized the result carries ``k`` times its log
    shift, matching the convention used for ``S_k``.
    """
    box = LogBox(box)
    comp = compound(lattice, k)
    eng = _Engine(comp, compound_box(box, k), budget)
    _, vals = eng.minima(1)
    return vals[0] + lattice.log_shift * k


def closest_gauge(
    lattice: Lattice,
    tau,
    target: Sequence,
    budget: int = DEFAULT_BUDGET,
) -> tuple[LogReal, LatticePoint | None]:
    """``min over z in lattice, z != target`` of the gauge of ``z - target`` in ``B_tau``.

    Returns the exact log value (with the lattice log shift) and the minimising
    lattice point.
    """
    tau = _as_tau(tau)
    target = [as_fraction(x) for x in target]
    if len(target) != lattice.dim:
        raise DimensionMismatch("target and lattice dimensions differ")
    q2 = math.lcm(*(x.denominator for x in target))
    eng = _Engine(lattice, tau, budget, extra_scale=q2)
    d = lattice.dim
    basis = eng._reduce([[eng.M[i][j] for i in range(d)] for j in range(d)])
    YS = np.array([eng.yfloat(s) for s in basis]).T
    u0 = u = [-int(x * eng.Q) for x in target]
    # bring the target next to the origin so the float search stays well conditioned
    coef = [sum(row[j] * u[j] for j in range(d)) for row in inverse([[b[i] for b in basis] for i in range(d)])]
    a = [round(c) for c in coef]
    u = [u[i] - sum(aj * b[i] for aj, b in zip(a, basis)) for i in range(d)]
    state = [None, math.inf, None]
    eng.coset_min(u, eng.yfloat(u), basis, YS, state, exclude_zero=True)
    z = [a - b for a, b in zip(state[2], u0)]
    coords = tuple(Fraction(x, eng.Q) for x in z)
    pt = LatticePoint(tuple(int(c) for c in lattice.coefficients(coords)), coords)
    return state[0] + lattice.log_shift, pt

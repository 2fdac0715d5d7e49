"""Finite-grid bracket estimates of Schmidt-Summerer and Diophantine exponents.

Asymptotic quantities are never claimed exactly.  Every estimator samples a
ray ``tau = s * mu`` on a grid of ``s`` values, looks at the last
``tail_fraction`` of the grid, and returns a bracket ``[lo, hi]``:

* a line ``X(s) ~ psi * s`` is fitted to the tail; the bounded part of the
  profile is measured by ``c = max |X(s) - psi_fit * s|`` and capped by the
  worst-case constant ``log d! + d log d``;
* the liminf is bracketed by ``[min (X - c)/s, min (X + c)/s]`` over the tail
  and the limsup by the same expression with ``max``.

Diophantine exponents are obtained from the monotone score
``g(gamma) = psi(mu(gamma)) + gamma - 1`` by bisection.  A bracket that cannot
be narrowed below ``max_width`` is reported with status ``inconclusive``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Callable, Sequence

import numpy as np

from .errors import BadOrder, BudgetExceeded, DimensionMismatch, InputError, TooFewTerms
from .exact import LogReal, as_fraction
from .lattice import Lattice, ThetaMatrix, dual, theta_lattice
from .minima import DEFAULT_BUDGET, MinimaProfile, closest_gauge, profile_along_ray
from .params import (
    TauVector,
    Weights,
    mu_of_gamma,
    mu_star_of_delta,
    tau_plus,
    tau_plus_k,
)

__all__ = [
    "CFOracle",
    "DirectionSample",
    "ExponentEstimate",
    "InhomTarget",
    "LatticeRays",
    "Psi_along_ray",
    "cf_convergents",
    "cf_oracle",
    "cf_terms",
    "cf_value",
    "chi_of_gamma",
    "designed_cf_terms",
    "direction_sample",
    "dual_weighted_Omega",
    "dual_weighted_omega",
    "gamma_of_chi",
    "golden_cf_terms",
    "inhom_omega",
    "lattice_Omega",
    "lattice_omega",
    "lattice_psi",
    "psi_along_ray",
    "ray_grid",
    "weighted_Omega",
    "weighted_lattice",
    "weighted_omega",
]

INF = math.inf

DEFAULT_TAIL = Fraction(3, 10)
DEFAULT_CEILING = Fraction(1000)
RAY_POINTS = 24
LATTICE_RAY_POINTS = 8


# ---------------------------------------------------------------------------
# Records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentEstimate:
    """Bracket ``[lo, hi]`` for one exponent together with how it was obtained.

    ``status`` is one of ``exact`` (decided by an exact witness), ``converged``,
    ``unconverged`` or ``inconclusive``.
    """

    kind: str
    k: int
    lo: float
    hi: float
    s_max: Fraction
    tail_fraction: Fraction
    converged: bool
    samples: int
    status: str = "unconverged"
    directions: int = 0
    budget_used: int = 0
    note: str = ""
    trace: tuple = field(default=(), compare=False)

    @property
    def bracket(self) -> tuple[float, float]:
        return (self.lo, self.hi)

    @property
    def width(self) -> float:
        if self.lo == self.hi:
            return 0.0
        return self.hi - self.lo

    @property
    def inconclusive(self) -> bool:
        return self.status == "inconclusive"

    @property
    def is_infinite(self) -> bool:
        return self.lo == INF

    def contains(self, x: float, tol: float = 0.0) -> bool:
        if x == INF:
            return self.hi == INF
        return self.lo - tol <= x <= self.hi + tol

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "bracket": [_json_real(self.lo), _json_real(self.hi)],
            "converged": self.converged,
            "status": self.status,
            "sMax": _json_rational(self.s_max),
            "tailFraction": _json_rational(self.tail_fraction),
            "samples": self.samples,
            "directions": self.directions,
            "budgetUsed": self.budget_used,
            "note": self.note,
        }


def _json_real(x: float):
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    return float(x)


def _json_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class InhomTarget:
    """Shift vector ``eta`` of an inhomogeneous system (one entry per linear form)."""

    eta: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "eta", tuple(as_fraction(x) for x in self.eta))


@dataclass(frozen=True)
class DirectionSample:
    """Unit directions of the trace-zero space (``|u|_+ = 1``) and their covering radius.

    ``resolution`` bounds (heuristically) the sup-norm distance from any unit
    direction to the nearest sample point.
    """

    directions: tuple[TauVector, ...]
    resolution: float

    def __len__(self):
        return len(self.directions)


# ---------------------------------------------------------------------------
# gamma <-> chi
# ---------------------------------------------------------------------------

def chi_of_gamma(gamma):
    """``chi`` with ``(1 + chi)(1 + gamma) = 1``; ``gamma = inf`` gives ``-1``."""
    if gamma == INF:
        return Fraction(-1)
    gamma = as_fraction(gamma)
    if gamma <= -1:
        raise InputError("gamma must exceed -1")
    return -gamma / (1 + gamma)


def gamma_of_chi(chi):
    """Inverse of ``chi_of_gamma``; ``chi = -1`` gives ``inf``."""
    chi = as_fraction(chi)
    if chi < -1:
        raise InputError("chi must be at least -1")
    if chi == -1:
        return INF
    return -chi / (1 + chi)


def _gamma_of_chi_float(chi: float) -> float:
    if chi <= -1:
        return INF
    return -chi / (1 + chi)


# ---------------------------------------------------------------------------
# Tail-window brackets
# ---------------------------------------------------------------------------

def ray_grid(s_max, tail_fraction=DEFAULT_TAIL, points: int = RAY_POINTS) -> list[Fraction]:
    """Evenly spaced ``s`` values covering the tail window and the previous one."""
    s_max = as_fraction(s_max)
    f = as_fraction(tail_fraction)
    if s_max <= 0 or not 0 < f < 1:
        raise InputError("need s_max > 0 and 0 < tail_fraction < 1")
    if points < 4:
        raise InputError("a ray needs at least 4 grid points")
    start = s_max * (1 - f / 2) * (1 - f)
    step = (s_max - start) / (points - 1)
    return [start + i * step for i in range(points)]


def _worst_constant(d: int) -> float:
    return math.log(math.factorial(d)) + d * math.log(d)


def _window_bracket(s: np.ndarray, x: np.ndarray, err: np.ndarray, lower: bool, cap: float):
    if len(s) == 1:
        v = x[0] / s[0]
        e = err[0] / s[0]
        return v - e, v + e
    # slope from a fit with intercept, so the bounded part is not absorbed into psi
    psi = float(np.polyfit(s, x, 1)[0])
    c = min(float(np.max(np.abs(x - psi * s))), cap)
    lo_vals = (x - c - err) / s
    hi_vals = (x + c + err) / s
    if lower:
        return float(lo_vals.min()), float(hi_vals.min())
    return float(lo_vals.max()), float(hi_vals.max())


def _tail_brackets(s, x, err, tail_fraction, lower: bool, cap: float):
    """Brackets on the last window and on the window ending at ``s_max (1 - f/2)``."""
    s = np.asarray(s, dtype=float)
    x = np.asarray(x, dtype=float)
    err = np.asarray(err, dtype=float)
    f = float(tail_fraction)
    s_max = s[-1]
    tail = s >= s_max * (1 - f) * (1 - 1e-12)
    if tail.sum() < 2:
        tail = np.zeros(len(s), bool)
        tail[-min(2, len(s)):] = True
    cur = _window_bracket(s[tail], x[tail], err[tail], lower, cap)
    s_prev = s_max * (1 - f / 2)
    prev_mask = (s <= s_prev * (1 + 1e-12)) & (s >= s_prev * (1 - f) * (1 - 1e-12))
    prev = _window_bracket(s[prev_mask], x[prev_mask], err[prev_mask], lower, cap) if prev_mask.sum() >= 2 else None
    return cur, prev, int(tail.sum())


def _profile_value(p: MinimaProfile, k: int, which: str) -> tuple[float, float]:
    v = p.L[k - 1] if which == "L" else p.S[k - 1]
    x = float(v)
    return x, 1e-12 * (1.0 + abs(x))


def _estimate_from_series(s, x, err, tail_fraction, lower, tol, cap):
    cur, prev, n_tail = _tail_brackets(s, x, err, tail_fraction, lower, cap)
    lo, hi = cur
    agree = prev is not None and abs(prev[0] - lo) <= tol and abs(prev[1] - hi) <= tol
    conv = (hi - lo) <= tol and agree
    return lo, hi, conv, n_tail


def psi_along_ray(
    lattice: Lattice,
    mu,
    k: int,
    s_max=20,
    grid: Sequence | None = None,
    tail_fraction=DEFAULT_TAIL,
    tol: float = 0.01,
    budget: int = DEFAULT_BUDGET,
    profiles: Sequence[MinimaProfile] | None = None,
) -> tuple[ExponentEstimate, ExponentEstimate]:
    """Brackets for the liminf and limsup of ``L_k(s mu)/s``."""
    return _ray_pair("psi", "L", lattice, mu, k, s_max, grid, tail_fraction, tol, budget, profiles)


def Psi_along_ray(
    lattice: Lattice,
    mu,
    k: int,
    s_max=20,
    grid: Sequence | None = None,
    tail_fraction=DEFAULT_TAIL,
    tol: float = 0.01,
    budget: int = DEFAULT_BUDGET,
    profiles: Sequence[MinimaProfile] | None = None,
) -> tuple[ExponentEstimate, ExponentEstimate]:
    """Brackets for the liminf and limsup of ``S_k(s mu)/s``."""
    return _ray_pair("Psi", "S", lattice, mu, k, s_max, grid, tail_fraction, tol, budget, profiles)


def _ray_pair(prefix, which, lattice, mu, k, s_max, grid, tail_fraction, tol, budget, profiles):
    d = lattice.dim
    if not 1 <= k <= d:
        raise BadOrder(f"need 1 <= k <= {d}")
    tail_fraction = as_fraction(tail_fraction)
    if grid is None:
        grid = ray_grid(s_max, tail_fraction)
    grid = [as_fraction(g) for g in grid]
    if profiles is None:
        profiles = profile_along_ray(lattice, mu, grid, budget, k_max=k)
    vals = [_profile_value(p, k, which) for p in profiles]
    x = [v for v, _ in vals]
    e = [w for _, w in vals]
    s = [float(g) for g in grid]
    cap = _worst_constant(d) * (k if which == "S" else 1)
    nodes = sum(p.nodes for p in profiles)
    out = []
    for lower, tag in ((True, "Lower"), (False, "Upper")):
        lo, hi, conv, n_tail = _estimate_from_series(s, x, e, tail_fraction, lower, tol, cap)
        out.append(
            ExponentEstimate(
                prefix + tag, k, lo, hi, grid[-1], tail_fraction, conv, n_tail,
                "converged" if conv else "unconverged", 0, nodes,
            )
        )
    return out[0], out[1]


# ---------------------------------------------------------------------------
# Monotone bisection on gamma
# ---------------------------------------------------------------------------

@dataclass
class _Score:
    lo: float
    hi: float
    exact: bool
    nodes: int


def _solve_monotone(score, floor: Fraction, ceiling: Fraction, tol: float, start: Fraction = Fraction(1)):
    """Bracket ``sup{gamma : g(gamma) <= 0}`` for a non-decreasing score ``g``.

    ``score(gamma)`` returns a ``_Score`` with a bracket for ``g(gamma)``.
    Returns ``(lo, hi, trace, exact, note, nodes)``; ``exact`` means some
    evaluation exhibited an exact witness for the value ``+inf``.
    """
    evals: dict[Fraction, _Score] = {}
    nodes = 0
    note = ""

    def ev(g: Fraction):
        nonlocal nodes
        if g not in evals:
            r = score(g)
            evals[g] = r
            nodes += r.nodes
        return evals[g]

    def state():
        below = [g for g, r in evals.items() if r.hi <= 0]
        above = [g for g, r in evals.items() if r.lo > 0]
        a = max(below + [floor])
        b = min(above) if above else None
        return a, b

    g0 = max(as_fraction(start), floor)
    r = ev(g0)
    if r.exact:
        return INF, INF, _trace(evals), True, "exact witness", nodes
    # search upwards for a point with g > 0
    # growing additive steps keep the probed scales close to the first sign change
    g = g0
    step = Fraction(1, 4)
    while True:
        a, b = state()
        if b is not None:
            break
        nxt = g + step
        step *= 2
        if nxt > ceiling:
            if g < ceiling:
                nxt = ceiling
            else:
                note = "ceiling"
                break
        try:
            r = ev(nxt)
        except BudgetExceeded:
            note = "range"
            break
        if r.exact:
            return INF, INF, _trace(evals), True, "exact witness", nodes
        g = nxt
    a, b = state()
    if b is None:
        return float(a), INF, _trace(evals), False, note or "ceiling", nodes

    half = Fraction(tol) / 2 if tol > 0 else Fraction(1, 64)
    for _ in range(200):
        a, b = state()
        pts = sorted(evals)
        above_a = [p for p in pts if p > a]
        below_b = [p for p in pts if p < b] + [a]
        nxt_a = min(above_a) if above_a else b
        prv_b = max(p for p in below_b if p <= b)
        cand = None
        if nxt_a - a > half:
            cand = (a + nxt_a) / 2
        elif b - prv_b > half:
            cand = (prv_b + b) / 2
        if cand is None:
            break
        try:
            r = ev(cand)
        except BudgetExceeded:
            note = "range"
            break
        if r.exact:
            return INF, INF, _trace(evals), True, "exact witness", nodes
    a, b = state()
    lo, hi = float(min(a, b)), float(max(a, b))
    if a > b:
        note = (note + "; " if note else "") + "non-monotone score"
    return lo, hi, _trace(evals), False, note, nodes


def _trace(evals) -> tuple:
    return tuple((float(g), r.lo, r.hi) for g, r in sorted(evals.items()))


def _status(lo, hi, converged, max_width):
    if lo == INF:
        return "exact"
    if hi == INF or hi - lo > max_width:
        return "inconclusive"
    return "converged" if converged else "unconverged"


# ---------------------------------------------------------------------------
# Weighted exponents
# ---------------------------------------------------------------------------

def _theta_for(theta: ThetaMatrix, w: Weights) -> ThetaMatrix:
    if (theta.m, theta.n) != (w.m, w.n):
        raise DimensionMismatch("Theta and weights disagree on (m, n)")
    # weight rho_i sits on coordinate d+1-i, so the i-th form must land there
    return theta.reversed_rows()


def weighted_lattice(theta: ThetaMatrix, w: Weights) -> Lattice:
    """The lattice whose profile along ``mu(gamma)`` carries the weighted exponents of ``Theta``."""
    return theta_lattice(_theta_for(theta, w))


def _block_zero(point, lo: int, hi: int) -> bool:
    return all(c == 0 for c in point.coords[lo:hi])


def _ray_score(lattice, direction, k, which, lower, grid, tail_fraction, budget, gamma, block, cap, div):
    profiles = profile_along_ray(lattice, direction, grid, budget, k_max=k)
    last = profiles[-1]
    exact = all(_block_zero(w, *block) for w in last.witnesses[:k])
    vals = [_profile_value(p, k, which) for p in profiles]
    x = [v / div for v, _ in vals]
    e = [u / div for _, u in vals]
    s = [float(g) for g in grid]
    cur, _, _ = _tail_brackets(s, x, e, tail_fraction, lower, cap / div)
    g = float(gamma) - 1.0
    return _Score(cur[0] + g, cur[1] + g, exact, sum(p.nodes for p in profiles))


def _weighted(
    kind, lattice, ray_of, k, which, uniform, block, floor,
    s_max, tail_fraction, tol, budget, ceiling, points, max_width,
):
    d = lattice.dim
    if not 1 <= k <= d:
        raise BadOrder(f"need 1 <= k <= {d}")
    tail_fraction = as_fraction(tail_fraction)
    grid = ray_grid(s_max, tail_fraction, points)
    div = k if which == "S" else 1
    cap = _worst_constant(d) * (k if which == "S" else 1)

    def score(gamma):
        return _ray_score(
            lattice, ray_of(gamma), k, which, not uniform, grid, tail_fraction,
            budget, gamma, block, cap, div,
        )

    lo, hi, trace, exact, note, nodes = _solve_monotone(score, floor, as_fraction(ceiling), tol)
    conv = exact or (hi != INF and hi - lo <= tol)
    mw = max_width if max_width is not None else 20 * tol
    return ExponentEstimate(
        kind, k, lo, hi, grid[-1], tail_fraction, conv, len(grid),
        _status(lo, hi, conv, mw), 0, nodes, note, trace,
    )


def weighted_omega(
    theta: ThetaMatrix,
    w: Weights,
    k: int = 1,
    uniform: bool = False,
    tol: float = 0.05,
    s_max=20,
    tail_fraction=DEFAULT_TAIL,
    budget: int = DEFAULT_BUDGET,
    ceiling=DEFAULT_CEILING,
    points: int = RAY_POINTS,
    max_width: float | None = None,
) -> ExponentEstimate:
    """Bracket for the k-th weighted exponent of ``Theta`` (uniform variant when ``uniform``)."""
    th = _theta_for(theta, w)
    lat = theta_lattice(th)
    return _weighted(
        "omegaHat" if uniform else "omega", lat, lambda g: mu_of_gamma(w, g).components,
        k, "L", uniform, (w.m, w.d), Fraction(1 if k == 1 else 0),
        s_max, tail_fraction, tol, budget, ceiling, points, max_width,
    )


def weighted_Omega(
    theta: ThetaMatrix,
    w: Weights,
    k: int = 1,
    uniform: bool = False,
    tol: float = 0.05,
    s_max=20,
    tail_fraction=DEFAULT_TAIL,
    budget: int = DEFAULT_BUDGET,
    ceiling=DEFAULT_CEILING,
    points: int = RAY_POINTS,
    max_width: float | None = None,
) -> ExponentEstimate:
    """Bracket for the k-th weighted exponent of the second type (via ``S_k / k``)."""
    th = _theta_for(theta, w)
    lat = theta_lattice(th)
    return _weighted(
        "OmegaHatK" if uniform else "OmegaK", lat, lambda g: mu_of_gamma(w, g).components,
        k, "S", uniform, (w.m, w.d), Fraction(1),
        s_max, tail_fraction, tol, budget, ceiling, points, max_width,
    )


def _dual_setup(theta, w):
    th = _theta_for(theta, w)
    return dual(theta_lattice(th))


def dual_weighted_omega(
    theta: ThetaMatrix,
    w: Weights,
    k: int = 1,
    uniform: bool = False,
    tol: float = 0.05,
    s_max=20,
    tail_fraction=DEFAULT_TAIL,
    budget: int = DEFAULT_BUDGET,
    ceiling=DEFAULT_CEILING,
    points: int = RAY_POINTS,
    max_width: float | None = None,
) -> ExponentEstimate:
    """Bracket for the k-th exponent of the transposed system with swapped weights.

    Computed on the dual lattice along ``mu*(delta)``, which keeps the same
    two-dimensional subspace of parameters as the direct problem.
    """
    lat = _dual_setup(theta, w)
    est = _weighted(
        "omegaHat" if uniform else "omega", lat, lambda g: mu_star_of_delta(w, g).components,
        k, "L", uniform, (0, w.m), Fraction(1 if k == 1 else 0),
        s_max, tail_fraction, tol, budget, ceiling, points, max_width,
    )
    return _with_note(est, "transpose")


def dual_weighted_Omega(
    theta: ThetaMatrix,
    w: Weights,
    k: int = 1,
    uniform: bool = False,
    tol: float = 0.05,
    s_max=20,
    tail_fraction=DEFAULT_TAIL,
    budget: int = DEFAULT_BUDGET,
    ceiling=DEFAULT_CEILING,
    points: int = RAY_POINTS,
    max_width: float | None = None,
) -> ExponentEstimate:
    """Second-type analogue of ``dual_weighted_omega``."""
    lat = _dual_setup(theta, w)
    est = _weighted(
        "OmegaHatK" if uniform else "OmegaK", lat, lambda g: mu_star_of_delta(w, g).components,
        k, "S", uniform, (0, w.m), Fraction(1),
        s_max, tail_fraction, tol, budget, ceiling, points, max_width,
    )
    return _with_note(est, "transpose")


def _with_note(est: ExponentEstimate, tag: str) -> ExponentEstimate:
    note = tag if not est.note else f"{tag}; {est.note}"
    return ExponentEstimate(
        est.kind, est.k, est.lo, est.hi, est.s_max, est.tail_fraction, est.converged,
        est.samples, est.status, est.directions, est.budget_used, note, est.trace,
    )


# ---------------------------------------------------------------------------
# Inhomogeneous exponents
# ---------------------------------------------------------------------------

def inhom_omega(
    theta: ThetaMatrix,
    w: Weights,
    eta: InhomTarget | Sequence,
    uniform: bool = False,
    tol: float = 0.05,
    s_max=20,
    tail_fraction=DEFAULT_TAIL,
    budget: int = DEFAULT_BUDGET,
    ceiling=DEFAULT_CEILING,
    points: int = RAY_POINTS,
    max_width: float | None = None,
) -> ExponentEstimate:
    """Bracket for the inhomogeneous weighted exponent with shift ``eta``.

    At each ``s`` the engine finds the lattice point ``z != zeta`` whose
    offset ``z - zeta`` has the smallest gauge in ``B_{s mu}``, where
    ``zeta = (0, -eta)`` in the coordinates of the lattice of ``Theta``.
    """
    if not isinstance(eta, InhomTarget):
        eta = InhomTarget(tuple(eta))
    if len(eta.eta) != w.n:
        raise DimensionMismatch("eta must have one entry per linear form")
    th = _theta_for(theta, w)
    lat = theta_lattice(th)
    zeta = [Fraction(0)] * w.m + [-x for x in reversed(eta.eta)]
    tail_fraction = as_fraction(tail_fraction)
    grid = ray_grid(s_max, tail_fraction, points)
    cap = _worst_constant(w.d)

    def score(gamma):
        mu = mu_of_gamma(w, gamma).components
        xs, es = [], []
        nodes = 0
        last = None
        for s in grid:
            val, pt = closest_gauge(lat, mu.scale(s), zeta, budget)
            v = float(val)
            xs.append(v)
            es.append(1e-12 * (1 + abs(v)))
            last = pt
        exact = all(c == zt for c, zt in zip(last.coords[w.m:], zeta[w.m:]))
        cur, _, _ = _tail_brackets([float(s) for s in grid], xs, es, tail_fraction, not uniform, cap)
        g = float(gamma) - 1.0
        return _Score(cur[0] + g, cur[1] + g, exact, nodes)

    lo, hi, trace, exact, note, nodes = _solve_monotone(score, Fraction(0), as_fraction(ceiling), tol)
    conv = exact or (hi != INF and hi - lo <= tol)
    mw = max_width if max_width is not None else 20 * tol
    return ExponentEstimate(
        "inhomOmegaHat" if uniform else "inhomOmega", 1, lo, hi, grid[-1], tail_fraction, conv,
        len(grid), _status(lo, hi, conv, mw), 0, nodes, note, trace,
    )


# ---------------------------------------------------------------------------
# Lattice exponents
# ---------------------------------------------------------------------------

def _unit_plus(v: Sequence) -> TauVector | None:
    v = [as_fraction(x) for x in v]
    mean = sum(v) / len(v)
    v = [x - mean for x in v]
    top = max(v)
    if top <= 0:
        return None
    return TauVector(x / top for x in v)


def _rationalize(u: np.ndarray, den: int = 240) -> TauVector | None:
    return _unit_plus([Fraction(float(x)).limit_denominator(den) for x in u])


def _default_count(d: int) -> int:
    return {2: 2, 3: 200, 4: 100, 5: 60}.get(d, 40)


def _sup_distance_cover(dirs: np.ndarray, probes: np.ndarray) -> float:
    best = np.full(len(probes), np.inf)
    for u in dirs:
        best = np.minimum(best, np.abs(probes - u).max(axis=1))
    return float(best.max()) if len(best) else 0.0


def direction_sample(d: int, n: int | None = None, seed: int = 0, probes: int = 4000) -> DirectionSample:
    """Extreme rays of the unit ``|.|_+`` ball in T plus ``n`` quasi-uniform directions.

    The extreme family is every permutation of ``(1, ..., 1, -(d-1))`` and of
    ``(1, -1/(d-1), ..., -1/(d-1))``.  The covering radius is estimated from
    ``probes`` random unit directions (fixed seed).
    """
    if d < 2:
        raise DimensionMismatch("the trace-zero space needs d >= 2")
    n = _default_count(d) if n is None else n
    seen: dict[tuple, TauVector] = {}

    def add(u):
        if u is not None and tuple(u) not in seen:
            seen[tuple(u)] = u

    for base in ([1] * (d - 1) + [-(d - 1)], [d - 1] + [-1] * (d - 1)):
        for perm in sorted(set(permutations(base))):
            add(_unit_plus(perm))
    # orthonormal basis of T
    q, _ = np.linalg.qr(np.vstack([np.ones(d), np.eye(d)[:-1]]).T)
    basis = q[:, 1:d].T  # (d-1, d)
    if d == 3:
        for j in range(n):
            a = 2 * math.pi * j / n
            add(_rationalize(math.cos(a) * basis[0] + math.sin(a) * basis[1]))
    elif d > 3 and n > 0:
        from scipy.special import ndtri
        from scipy.stats import qmc

        pts = qmc.Halton(d - 1, scramble=False).random(n + 1)[1:]
        g = ndtri(np.clip(pts, 1e-9, 1 - 1e-9))
        for row in g:
            add(_rationalize(row @ basis))
    dirs = tuple(seen.values())
    arr = np.array([[float(x) for x in u] for u in dirs])
    rng = np.random.default_rng(seed)
    if d == 2:
        res = 0.0
    else:
        raw = rng.standard_normal((probes, d - 1)) @ basis
        raw = raw - raw.mean(axis=1, keepdims=True)
        raw = raw / raw.max(axis=1, keepdims=True)
        res = _sup_distance_cover(arr, raw)
    return DirectionSample(dirs, res)


class LatticeRays:
    """Profiles of a lattice along every sampled direction, shared by all lattice exponents."""

    def __init__(
        self,
        lattice: Lattice,
        directions: DirectionSample | None = None,
        s_max=15,
        tail_fraction=DEFAULT_TAIL,
        points: int = LATTICE_RAY_POINTS,
        budget: int = DEFAULT_BUDGET,
    ):
        self.lattice = lattice
        self.directions = directions if directions is not None else direction_sample(lattice.dim)
        self.tail_fraction = as_fraction(tail_fraction)
        self.grid = ray_grid(s_max, self.tail_fraction, points)
        self.profiles = [profile_along_ray(lattice, u, self.grid, budget) for u in self.directions.directions]
        self.nodes = sum(p.nodes for ps in self.profiles for p in ps)

    def certifies_minus_one(self, k: int) -> bool:
        """True if some ray carries ``k`` witnesses supported where ``u`` attains ``|u|_+``.

        Such vectors keep ``L_k(s u) + s`` bounded, so the lower exponent is
        exactly ``-1`` (and ``S_k(s u) + k s`` bounded for the second type).
        """
        for u, ps in zip(self.directions.directions, self.profiles):
            top = max(u)
            off = [i for i, x in enumerate(u) if x != top]
            if len(u) - len(off) < k:
                continue
            if all(all(p.coords[i] == 0 for i in off) for p in ps[-1].witnesses[:k]):
                return True
        return False

    @property
    def s_max(self) -> Fraction:
        return self.grid[-1]

    def bracket(self, k: int, which: str, lower: bool, f: Callable = tau_plus, lipschitz: float = 1.0, tol: float = 0.01):
        """Bracket for the liminf (``lower``) or limsup of ``X_k(tau)/f(tau)`` over T.

        ``f`` must be positively homogeneous of degree one.
        """
        d = self.lattice.dim
        s = np.array([float(g) for g in self.grid])
        cap = _worst_constant(d) * (k if which == "S" else 1)
        los, his, conv = [], [], True
        fvals = []
        for u, ps in zip(self.directions.directions, self.profiles):
            fu = float(f(u))
            if fu <= 0:
                continue
            fvals.append(fu)
            vals = [_profile_value(p, k, which) for p in ps]
            x = np.array([v for v, _ in vals])
            e = np.array([w for _, w in vals])
            cur, prev, _ = _tail_brackets(s * fu, x, e, self.tail_fraction, lower, cap)
            los.append(cur[0])
            his.append(cur[1])
            if prev is None or abs(prev[0] - cur[0]) > tol or abs(prev[1] - cur[1]) > tol:
                conv = False
        eps = self.directions.resolution
        fmin = max(min(fvals) - eps, 1e-9)
        # X_k is k-Lipschitz in the sup norm, f is Lipschitz with constant ``lipschitz``
        bound = k * (d - 1)
        res = k * eps / fmin + bound * lipschitz * eps / fmin**2 if eps else 0.0
        if which == "L" and f is tau_plus:
            res = eps
        if lower:
            return min(los) - res, min(his), conv
        return max(los), max(his) + res, conv


def _clamp(lo, hi, a, b):
    return min(max(lo, a), b), min(max(hi, a), b)


def lattice_psi(
    lattice: Lattice,
    k: int,
    uniform: bool = False,
    directions: DirectionSample | None = None,
    s_max=15,
    tol: float = 0.1,
    rays: LatticeRays | None = None,
    second_type: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> ExponentEstimate:
    """Bracket for the lower (or, if ``uniform``, upper) exponent over all of T.

    First type uses ``L_k / |tau|_+``; the second type uses ``S_k / |tau|_+^[k]``.
    """
    d = lattice.dim
    if not 1 <= k <= d:
        raise BadOrder(f"need 1 <= k <= {d}")
    if rays is None:
        rays = LatticeRays(lattice, directions, s_max, budget=budget)
    if second_type:
        if k == d:
            raise BadOrder("|.|_+^[d] vanishes on T and is not an exhaustion")
        lo, hi, conv = rays.bracket(k, "S", not uniform, lambda t: tau_plus_k(t, k), 1.0, tol)
        lo, hi = _clamp(lo, hi, -k, 0)
        kind = "PsiUpper" if uniform else "PsiLower"
        floor = -k
    else:
        lo, hi, conv = rays.bracket(k, "L", not uniform, tau_plus, 1.0, tol)
        lo, hi = _clamp(lo, hi, -1, d - 1)
        kind = "psiUpper" if uniform else "psiLower"
        floor = -1
    if not uniform and rays.certifies_minus_one(k):
        return ExponentEstimate(
            kind, k, floor, floor, rays.s_max, rays.tail_fraction, True, len(rays.grid), "exact",
            len(rays.directions), rays.nodes, "exact witness",
        )
    conv = conv and hi - lo <= tol
    return ExponentEstimate(
        kind, k, lo, hi, rays.s_max, rays.tail_fraction, conv, len(rays.grid),
        "converged" if conv else "unconverged", len(rays.directions), rays.nodes,
        "direction sampling heuristic",
    )


def lattice_omega(
    lattice: Lattice,
    k: int = 1,
    uniform: bool = False,
    directions: DirectionSample | None = None,
    s_max=15,
    tol: float = 0.1,
    rays: LatticeRays | None = None,
    max_width: float | None = None,
    budget: int = DEFAULT_BUDGET,
) -> ExponentEstimate:
    """Bracket for the k-th lattice exponent from ``(1 + omega)(1 + psi) = 1``."""
    p = lattice_psi(lattice, k, uniform, directions, s_max, tol, rays, False, budget)
    lo, hi = _gamma_of_chi_float(p.hi), _gamma_of_chi_float(p.lo)
    return _converted(p, "latticeOmegaHat" if uniform else "latticeOmega", lo, hi, tol, max_width)


def lattice_Omega(
    lattice: Lattice,
    k: int = 1,
    uniform: bool = False,
    directions: DirectionSample | None = None,
    s_max=15,
    tol: float = 0.1,
    rays: LatticeRays | None = None,
    max_width: float | None = None,
    budget: int = DEFAULT_BUDGET,
) -> ExponentEstimate:
    """Bracket for the k-th lattice exponent of the second type from ``(1 + Omega)(1 + Psi/k) = 1``."""
    if k == lattice.dim:
        raise BadOrder("the second-type lattice exponent needs k <= d - 1")
    p = lattice_psi(lattice, k, uniform, directions, s_max, tol, rays, True, budget)
    lo, hi = _gamma_of_chi_float(p.hi / k), _gamma_of_chi_float(p.lo / k)
    return _converted(p, "latticeOmegaSecondHat" if uniform else "latticeOmegaSecond", lo, hi, tol, max_width)


def _converted(p: ExponentEstimate, kind, lo, hi, tol, max_width) -> ExponentEstimate:
    mw = max_width if max_width is not None else 20 * tol
    if p.status == "exact":
        status, conv = "exact", True
    else:
        conv = p.converged and hi != INF and hi - lo <= tol
        status = _status(lo, hi, conv, mw)
    return ExponentEstimate(
        kind, p.k, lo, hi, p.s_max, p.tail_fraction, conv, p.samples, status,
        p.directions, p.budget_used, p.note,
    )


# ---------------------------------------------------------------------------
# Continued fractions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CFOracle:
    """Exponent of a number given by its continued fraction.

    ``omega`` is a bracket from the log-ratios ``log q_{k+1} / log q_k`` over
    the second half of the available convergents; ``rational`` marks inputs
    that are exact rationals (whose exponent is ``+inf``).
    """

    omega: tuple[float, float]
    omega_hat: float
    convergents: tuple[tuple[int, int], ...]
    rational: bool


def golden_cf_terms(n: int) -> list[int]:
    return [1] * n


def designed_cf_terms(n: int, first: int = 3) -> list[int]:
    """Terms with ``a_{k+1} = q_k``, so that ``log q_{k+1} ~ 2 log q_k``."""
    if n < 1:
        raise TooFewTerms("need at least one term")
    terms = [first]
    q_prev, q = 1, first
    while len(terms) < n:
        a = q
        terms.append(a)
        q_prev, q = q, a * q + q_prev
    return terms


def cf_convergents(terms: Sequence[int]) -> list[tuple[int, int]]:
    """Convergents ``p_k/q_k`` of ``[0; a_1, a_2, ...]``."""
    p_prev, p = 1, 0
    q_prev, q = 0, 1
    out = []
    for a in terms:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append((p, q))
    return out


def cf_value(terms: Sequence[int]) -> Fraction:
    """The rational ``[0; a_1, ..., a_K]``."""
    p, q = cf_convergents(terms)[-1]
    return Fraction(p, q)


def cf_terms(x) -> list[int]:
    """Partial quotients of a rational in ``(0, 1)``, in the ``[0; a_1, ...]`` convention."""
    x = as_fraction(x)
    if not 0 < x < 1:
        raise InputError("expected a rational in (0, 1)")
    out = []
    while x:
        x = 1 / x
        a = math.floor(x)
        out.append(a)
        x -= a
    return out


def cf_oracle(theta) -> CFOracle:
    """Independent exponent reference for ``d = 2``.

    A list of terms is treated as a truncation of an infinite expansion; a
    Fraction is treated as the exact rational it is.
    """
    if isinstance(theta, (Fraction, int, str)):
        terms = cf_terms(theta)
        conv = cf_convergents(terms)
        return CFOracle((INF, INF), 0.0, tuple(conv), True)
    terms = list(theta)
    if len(terms) < 3:
        raise TooFewTerms("the oracle needs at least three terms")
    conv = cf_convergents(terms)
    logs = [math.log(q) for _, q in conv]
    ratios = [logs[i + 1] / logs[i] for i in range(len(logs) - 1) if logs[i] > 0]
    if not ratios:
        raise TooFewTerms("not enough nontrivial denominators")
    tail = ratios[len(ratios) // 2:]
    return CFOracle((min(tail), max(tail)), 1.0, tuple(conv), False)

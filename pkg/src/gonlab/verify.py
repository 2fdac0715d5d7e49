"""Checks of the identities and inequalities between successive minima and exponents.

Local checks work on exact log values and decide every comparison exactly.
Estimate-based checks compare brackets: an inequality passes when some
choice of values inside the brackets (widened by ``tol``) satisfies it, fails
when none does, and is ``inconclusive`` whenever an input bracket is.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError
from .exact import LogReal, as_fraction
from .exponents import (
    INF,
    DirectionSample,
    ExponentEstimate,
    LatticeRays,
    cf_value,
    designed_cf_terms,
    direction_sample,
    dual_weighted_Omega,
    dual_weighted_omega,
    golden_cf_terms,
    inhom_omega,
    lattice_Omega,
    lattice_omega,
    lattice_psi,
    weighted_Omega,
    weighted_omega,
)
from .lattice import Lattice, ThetaMatrix, dual, identity_lattice, make_lattice, theta_lattice
from .minima import DEFAULT_BUDGET, MinimaProfile, successive_minima
from .params import (
    TauVector,
    Weights,
    box_P,
    box_P_star,
    box_Q,
    box_Q_star,
    collinearity_residual,
    delta_of_gamma,
    gamma_delta,
    mu_of_gamma,
    mu_star_of_delta,
    tau_minus,
    tau_plus,
    tau_plus_k,
)

__all__ = [
    "CheckResult",
    "Instance",
    "WeightedInstance",
    "check_L_properties",
    "check_Omega_splitting",
    "check_S_properties",
    "check_diagram",
    "check_duality",
    "check_immersion",
    "check_inhom_bound",
    "check_lattice_splitting",
    "check_lattice_transference",
    "check_omega_product",
    "check_parameter_identities",
    "check_sign_product_theorem",
    "check_transference_chain",
    "check_weighted_dyson",
    "local_checks",
    "random_lattice",
    "random_tau",
    "run_suite",
    "standard_corpus",
    "summarize",
]

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one check on one instance; ``slack = rhs - lhs`` for ``lhs <= rhs``."""

    check_id: str
    instance: str
    lhs: float
    rhs: float
    slack: float
    status: str
    exact: bool

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_record(self) -> dict:
        return {
            "checkId": self.check_id,
            "instance": self.instance,
            "lhs": _json_real(self.lhs),
            "rhs": _json_real(self.rhs),
            "slack": _json_real(self.slack),
            "status": self.status,
            "exact": self.exact,
        }


def _json_real(x: float):
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return float(x)


def _fmt(x) -> str:
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _tau_str(tau: Sequence) -> str:
    return "(" + ",".join(_fmt(x) for x in tau) + ")"


# ---------------------------------------------------------------------------
# Exact comparisons
# ---------------------------------------------------------------------------

def _exact_le(check_id: str, instance: str, lhs, rhs) -> CheckResult:
    lhs, rhs = LogReal.coerce(lhs), LogReal.coerce(rhs)
    diff = rhs - lhs
    ok = diff.sign() >= 0
    return CheckResult(check_id, instance, float(lhs), float(rhs), float(diff), PASS if ok else FAIL, True)


def _exact_eq(check_id: str, instance: str, lhs, rhs) -> CheckResult:
    lhs, rhs = LogReal.coerce(lhs), LogReal.coerce(rhs)
    diff = rhs - lhs
    ok = diff.sign() == 0
    return CheckResult(check_id, instance, float(lhs), float(rhs), float(diff), PASS if ok else FAIL, True)


def _log_factorial(d: int) -> LogReal:
    return LogReal(math.factorial(d))


def _log_int(d: int) -> LogReal:
    return LogReal(d)


# ---------------------------------------------------------------------------
# Local checks of L_k and S_k
# ---------------------------------------------------------------------------

def check_L_properties(
    lattice: Lattice,
    tau,
    name: str = "lattice",
    profile: MinimaProfile | None = None,
    profile0: MinimaProfile | None = None,
    budget: int = DEFAULT_BUDGET,
) -> list[CheckResult]:
    """Monotonicity of ``L_k`` and the bounds on ``L_1`` and ``L_d`` in terms of ``|tau|_+-``."""
    tau = TauVector(tau)
    d = lattice.dim
    p = profile or successive_minima(lattice, tau, budget)
    p0 = profile0 or successive_minima(lattice, [0] * d, budget)
    inst = f"{name} tau={_tau_str(tau)}"
    out = [_exact_le("L.monotone", f"{inst} k={k}", p.L[k - 1], p.L[k]) for k in range(1, d)]
    # L_1 <= 0 needs covolume one; the lattices here are normalized
    out.append(_exact_le("L.first.nonpositive", inst, p.L[0], 0))
    out.append(_exact_le("L.first.lower", inst, -p.L[0], LogReal(1, 1, tau_plus(tau)) - p0.L[0]))
    out.append(_exact_le("L.last.upper", inst, p.L[d - 1], LogReal(1, 1, tau_minus(tau)) + p0.L[d - 1]))
    return out


def check_S_properties(
    lattice: Lattice,
    tau,
    name: str = "lattice",
    profile: MinimaProfile | None = None,
    budget: int = DEFAULT_BUDGET,
) -> list[CheckResult]:
    """Minkowski's second theorem and the step inequalities between consecutive ``S_k``."""
    tau = TauVector(tau)
    d = lattice.dim
    p = profile or successive_minima(lattice, tau, budget)
    S = p.S
    inst = f"{name} tau={_tau_str(tau)}"
    lf = _log_factorial(d)
    out = [
        _exact_le("S.minkowski2.lower", inst, -lf, S[d - 1]),
        _exact_le("S.minkowski2.upper", inst, S[d - 1], 0),
    ]
    for k in range(1, d):
        ki = f"{inst} k={k}"
        out.append(_exact_le("S.step.lower", ki, S[k - 1] * Fraction(k + 1, k), S[k]))
        if k <= d - 1 and d - k > 0:
            out.append(_exact_le("S.step.upper", ki, S[k], S[k - 1] * Fraction(d - k - 1, d - k)))
    if d >= 2:
        out.append(_exact_le("S.ends.lower", inst, S[0] * (d - 1), S[d - 2]))
        out.append(_exact_le("S.ends.upper", inst, S[d - 2], S[0] / (d - 1)))
        v = S[d - 2] + p.L[d - 1]
        out.append(_exact_le("S.last.vs.L.upper", inst, v, lf))
        out.append(_exact_le("S.last.vs.L.lower", inst, -lf, v))
    return out


def check_duality(
    lattice: Lattice,
    tau,
    name: str = "lattice",
    profile: MinimaProfile | None = None,
    dual_profile: MinimaProfile | None = None,
    budget: int = DEFAULT_BUDGET,
) -> list[CheckResult]:
    """Mahler's relations between ``L_k(lattice, tau)`` and ``L_{d+1-k}(dual, -tau)`` and their sums."""
    tau = TauVector(tau)
    d = lattice.dim
    p = profile or successive_minima(lattice, tau, budget)
    q = dual_profile or successive_minima(dual(lattice), -tau, budget)
    inst = f"{name} tau={_tau_str(tau)}"
    lf, ld = _log_factorial(d), _log_int(d)
    out = []
    for k in range(1, d + 1):
        v = p.L[k - 1] + q.L[d - k]
        ki = f"{inst} k={k}"
        out.append(_exact_le("dual.mahler.L.lower", ki, -ld, v))
        out.append(_exact_le("dual.mahler.L.upper", ki, v, lf))
    for k in range(1, d):
        v = p.S[k - 1] - q.S[d - k - 1]
        ki = f"{inst} k={k}"
        out.append(_exact_le("dual.mahler.S.lower", ki, -ld * k, v))
        out.append(_exact_le("dual.mahler.S.upper", ki, v, lf * (k + 1)))
    return out


def check_transference_chain(
    lattice: Lattice,
    tau,
    name: str = "lattice",
    profile: MinimaProfile | None = None,
    dual_profile: MinimaProfile | None = None,
    budget: int = DEFAULT_BUDGET,
) -> list[CheckResult]:
    """The chains ``S_k/k`` (increasing) and ``S_k/(d-k)`` (decreasing) and the two-sided corollary."""
    tau = TauVector(tau)
    d = lattice.dim
    p = profile or successive_minima(lattice, tau, budget)
    q = dual_profile or successive_minima(dual(lattice), -tau, budget)
    S = p.S
    inst = f"{name} tau={_tau_str(tau)}"
    out = []
    for k in range(1, d):
        out.append(_exact_le("chain.Psi.up", f"{inst} k={k}", S[k - 1] / k, S[k] / (k + 1)))
    out.append(_exact_le("chain.Psi.top", inst, S[d - 1] / d, 0))
    for k in range(1, d - 1):
        out.append(_exact_le("chain.Psi.down", f"{inst} k={k}", S[k] / (d - k - 1), S[k - 1] / (d - k)))
    c = _log_factorial(d) * (d + 2) + _log_int(d) * d
    if d >= 2:
        out.append(_exact_le("chain.corollary", inst, S[0], q.S[0] / (d - 1) + c))
    return out


def local_checks(lattice: Lattice, tau, name: str = "lattice", budget: int = DEFAULT_BUDGET) -> list[CheckResult]:
    """All local checks at one ``tau`` sharing three minima computations."""
    tau = TauVector(tau)
    d = lattice.dim
    p = successive_minima(lattice, tau, budget)
    p0 = successive_minima(lattice, [0] * d, budget)
    q = successive_minima(dual(lattice), -tau, budget)
    return (
        check_L_properties(lattice, tau, name, p, p0)
        + check_S_properties(lattice, tau, name, p)
        + check_duality(lattice, tau, name, p, q)
        + check_transference_chain(lattice, tau, name, p, q)
    )


# ---------------------------------------------------------------------------
# Exact parameter identities
# ---------------------------------------------------------------------------

def _w_str(w: Weights) -> str:
    return "sigma=(" + ",".join(_fmt(x) for x in w.sigma) + ") rho=(" + ",".join(_fmt(x) for x in w.rho) + ")"


def check_immersion(w: Weights, delta, s) -> list[CheckResult]:
    """Rescaled dual box inside the box along ``-mu(gamma_delta)``, coordinate by coordinate.

    The two inequalities on ``s_delta`` that drive the inclusion are checked as well.
    """
    delta, s = as_fraction(delta), as_fraction(s)
    g = gamma_delta(w, delta)
    if g == INF:
        raise InputError("gamma_delta is infinite at this delta")
    d = w.d
    if delta >= 1:
        sd = s * (1 / w.rho[-1] + (1 - 1 / w.rho[-1]) * g)
    else:
        sd = s * (1 / w.rho[0] + (1 - 1 / w.rho[0]) * g)
    inst = f"{_w_str(w)} delta={_fmt(delta)} s={_fmt(s)}"
    ms = mu_star_of_delta(w, delta).components
    mu = mu_of_gamma(w, g).components
    lhs = [sd * (1 - delta) + sd * x for x in ms]
    rhs = [s * (d - 1) * (1 - g) - s * x for x in mu]
    slack = min(b - a for a, b in zip(lhs, rhs))
    i = min(range(d), key=lambda j: rhs[j] - lhs[j])
    out = [CheckResult("immersion.inclusion", inst, float(lhs[i]), float(rhs[i]), float(slack), PASS if slack >= 0 else FAIL, True)]
    a = min(sd * delta - s * ((1 - 1 / sg) + g / sg) for sg in w.sigma)
    b = min(s * (1 / r + (1 - 1 / r) * g) - sd for r in w.rho)
    out.append(CheckResult("immersion.s_delta.x", inst, 0.0, float(a), float(a), PASS if a >= 0 else FAIL, True))
    out.append(CheckResult("immersion.s_delta.y", inst, 0.0, float(b), float(b), PASS if b >= 0 else FAIL, True))
    return out


def check_diagram(w: Weights, delta) -> list[CheckResult]:
    """Collinearity of ``mu*(delta)``, ``-mu(gamma_delta)`` and the point (or direction) ``nu``."""
    delta = as_fraction(delta)
    r = collinearity_residual(w, delta)
    if delta == 1:
        cid = "diagram.coincide"
    elif w.n == 1:
        cid = "diagram.parallel"
    else:
        cid = "diagram.collinear"
    inst = f"{_w_str(w)} delta={_fmt(delta)}"
    return [CheckResult(cid, inst, float(r), 0.0, float(-abs(r)), PASS if r == 0 else FAIL, True)]


def check_parameter_identities(w: Weights, delta, s=1) -> list[CheckResult]:
    """Exact identities between the parameter maps and the boxes they describe."""
    delta, s = as_fraction(delta), as_fraction(s)
    d = w.d
    inst = f"{_w_str(w)} delta={_fmt(delta)} s={_fmt(s)}"
    out = []
    g = gamma_delta(w, delta)
    out.append(_eq_frac("gamma_delta.roundtrip", inst, delta_of_gamma(w, g), delta))
    out.append(_eq_frac("gamma_delta.unit", inst, 1 if delta == 1 else 0, 1 if g == 1 else 0))
    lo, hi = 1 - w.sigma[0], (INF if w.rho[-1] == 1 else 1 / (1 - w.rho[-1]))
    inside = lo <= g and (hi == INF or g <= hi)
    out.append(CheckResult("gamma_delta.range", inst, float(g), float(hi), float(hi - g) if hi != INF else INF, PASS if inside else FAIL, True))
    # P(ds, gamma) = e^{s(1-gamma)} Q(s, gamma) and its dual counterpart
    P = box_P(w, d * s, g)
    Q = box_Q(w, s, g)
    out.append(_eq_boxes("box.P_is_scaled_Q", inst, P, [x + s * (1 - g) for x in Q]))
    Ps = box_P_star(w, d * s, delta)
    Qs = box_Q_star(w, s, delta)
    out.append(_eq_boxes("box.Pstar_is_scaled_Qstar", inst, Ps, [x + s * (1 - delta) for x in Qs]))
    mu = mu_of_gamma(w, g).components
    for k in range(1, d):
        out.append(_eq_frac("tau_plus_k.duality", f"{inst} k={k}", tau_plus_k(mu, d - k) * (d - k), tau_plus_k([-x for x in mu], k) * k))
    out.append(_le_frac("tau.pm.lower", inst, tau_plus(mu) / (d - 1), tau_minus(mu)))
    out.append(_le_frac("tau.pm.upper", inst, tau_minus(mu), tau_plus(mu) * (d - 1)))
    return out


def _eq_frac(cid, inst, a, b) -> CheckResult:
    a, b = as_fraction(a), as_fraction(b)
    return CheckResult(cid, inst, float(a), float(b), float(b - a), PASS if a == b else FAIL, True)


def _le_frac(cid, inst, a, b) -> CheckResult:
    a, b = as_fraction(a), as_fraction(b)
    return CheckResult(cid, inst, float(a), float(b), float(b - a), PASS if a <= b else FAIL, True)


def _eq_boxes(cid, inst, a, b) -> CheckResult:
    diffs = [LogReal.coerce(y) - LogReal.coerce(x) for x, y in zip(a, b)]
    ok = all(v.sign() == 0 for v in diffs)
    worst = max((abs(float(v)) for v in diffs), default=0.0)
    return CheckResult(cid, inst, 0.0, worst, -worst, PASS if ok else FAIL, True)


# ---------------------------------------------------------------------------
# Bracket arithmetic
# ---------------------------------------------------------------------------

def _any_inconclusive(*ests: ExponentEstimate) -> bool:
    return any(e.inconclusive for e in ests)


def _bracket_le(cid, inst, x_lo, y_hi, tol, ests, exact=False) -> CheckResult:
    """``x <= y`` is consistent when the smallest ``x`` does not exceed the largest ``y``."""
    slack = _sub(y_hi, x_lo)
    if _any_inconclusive(*ests):
        status = INCONCLUSIVE
    else:
        status = PASS if slack >= -tol else FAIL
    return CheckResult(cid, inst, x_lo, y_hi, slack, status, exact)


def _sub(a: float, b: float) -> float:
    if a == INF and b == INF:
        return 0.0
    if a == -INF and b == -INF:
        return 0.0
    return a - b


def _inv(x: float) -> float:
    if x == 0:
        return INF
    if x == INF:
        return 0.0
    return 1.0 / x


def _mul(a: float, b: float) -> float:
    # 0 * inf = 1 is the convention of the product theorem; brackets handle it separately
    if a == 0 or b == 0:
        return 0.0
    return a * b


def _dyson_map(w: Weights, x: float) -> float:
    s, r = 1 / float(w.sigma[-1]), 1 / float(w.rho[-1])
    if x == INF:
        return INF if r == 1 else r / (r - 1)
    return ((s - 1) + r * x) / (s + (r - 1) * x)


# ---------------------------------------------------------------------------
# Estimate-based weighted checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightedInstance:
    """A named pair ``(Theta, weights)`` with optional shift ``eta``."""

    name: str
    theta: ThetaMatrix
    weights: Weights
    eta: tuple = ()
    tail_fraction: Fraction = Fraction(3, 10)


def _opts(s_max, tail_fraction, budget):
    return {"s_max": s_max, "tail_fraction": tail_fraction, "budget": budget}


def check_omega_product(
    theta: ThetaMatrix,
    w: Weights,
    tol: float = 0.15,
    name: str = "theta",
    s_max=20,
    tail_fraction=Fraction(3, 10),
    budget: int = DEFAULT_BUDGET,
    ks: Iterable[int] | None = None,
) -> list[CheckResult]:
    """``omega^(k)(Theta) * omegaHat^(d+1-k)(transpose)`` against 1, with ``0 * inf = 1``."""
    d = w.d
    out = []
    o = _opts(s_max, tail_fraction, budget)
    for k in ks if ks is not None else range(1, d + 1):
        a = weighted_omega(theta, w, k, False, tol / 3, **o)
        b = dual_weighted_omega(theta, w, d + 1 - k, True, tol / 3, **o)
        inst = f"{name} k={k}"
        out.append(_product_result("product.omega", inst, a, b, tol))
    return out


def _product_result(cid, inst, a: ExponentEstimate, b: ExponentEstimate, tol) -> CheckResult:
    if a.status == "exact" or b.status == "exact":
        inf_side, other = (a, b) if a.status == "exact" else (b, a)
        # infinite factor: the partner must be zero
        lhs = other.lo
        status = PASS if other.lo <= tol else FAIL
        if other.inconclusive and status == PASS and other.hi > tol:
            status = INCONCLUSIVE
        return CheckResult(cid, inst, lhs, 0.0, tol - other.lo, status, False)
    if _any_inconclusive(a, b):
        return CheckResult(cid, inst, _mul(a.lo, b.lo), _mul(a.hi, b.hi), float("nan"), INCONCLUSIVE, False)
    lo, hi = _mul(a.lo, b.lo), _mul(a.hi, b.hi)
    slack = min(1 + tol - lo, hi - (1 - tol))
    return CheckResult(cid, inst, lo, hi, slack, PASS if slack >= 0 else FAIL, False)


def check_weighted_dyson(
    theta: ThetaMatrix,
    w: Weights,
    tol: float = 0.15,
    name: str = "theta",
    s_max=20,
    tail_fraction=Fraction(3, 10),
    budget: int = DEFAULT_BUDGET,
) -> list[CheckResult]:
    """``omega >= F(transpose omega)`` with the bound evaluated at the least favourable edges."""
    o = _opts(s_max, tail_fraction, budget)
    a = weighted_omega(theta, w, 1, False, tol / 3, **o)
    b = dual_weighted_omega(theta, w, 1, False, tol / 3, **o)
    return [_bracket_le("dyson.weighted", name, _dyson_map(w, b.lo), a.hi, tol, (a, b))]


def check_Omega_splitting(
    theta: ThetaMatrix,
    w: Weights,
    tol: float = 0.15,
    name: str = "theta",
    s_max=20,
    tail_fraction=Fraction(3, 10),
    budget: int = DEFAULT_BUDGET,
) -> list[CheckResult]:
    """The decreasing chain ``Omega_1 >= ... >= Omega_{d-1} >= F(transpose Omega_1)``."""
    d = w.d
    o = _opts(s_max, tail_fraction, budget)
    om = [weighted_Omega(theta, w, k, False, tol / 3, **o) for k in range(1, d)]
    out = []
    for k in range(1, d - 1):
        a, b = om[k - 1], om[k]
        out.append(_bracket_le("split.Omega.chain", f"{name} k={k}", b.lo, a.hi, tol, (a, b)))
    t1 = dual_weighted_Omega(theta, w, 1, False, tol / 3, **o)
    last = om[-1]
    out.append(_bracket_le("split.Omega.transpose", name, _dyson_map(w, t1.lo), last.hi, tol, (last, t1)))
    return out


def check_inhom_bound(
    theta: ThetaMatrix,
    w: Weights,
    eta,
    tol: float = 0.15,
    name: str = "theta",
    s_max=20,
    tail_fraction=Fraction(3, 10),
    budget: int = DEFAULT_BUDGET,
) -> list[CheckResult]:
    """The inhomogeneous exponent against ``1/omegaHat(transpose)`` and against ``omega^(d)(Theta)``."""
    o = _opts(s_max, tail_fraction, budget)
    inh = inhom_omega(theta, w, eta, False, tol / 3, **o)
    hat = dual_weighted_omega(theta, w, 1, True, tol / 3, **o)
    top = weighted_omega(theta, w, w.d, False, tol / 3, **o)
    inst = f"{name} eta=(" + ",".join(_fmt(x) for x in eta) + ")"
    return [
        _bracket_le("inhom.transference", inst, _inv(hat.hi), inh.hi, tol, (inh, hat)),
        _bracket_le("inhom.vs.omega_d", inst, top.lo, inh.hi, tol, (inh, top)),
    ]


# ---------------------------------------------------------------------------
# Estimate-based lattice checks
# ---------------------------------------------------------------------------

def _rays_pair(lattice, rays, dual_rays, directions, s_max, budget):
    if rays is None:
        rays = LatticeRays(lattice, directions, s_max, budget=budget)
    if dual_rays is None:
        dual_rays = LatticeRays(dual(lattice), rays.directions, s_max, budget=budget)
    return rays, dual_rays


def check_lattice_transference(
    lattice: Lattice,
    tol: float = 0.1,
    name: str = "lattice",
    directions: DirectionSample | None = None,
    s_max=15,
    rays: LatticeRays | None = None,
    dual_rays: LatticeRays | None = None,
    budget: int = DEFAULT_BUDGET,
) -> list[CheckResult]:
    """``psi_1(lattice) <= psi_1(dual)/(d-1)^2`` and simultaneous vanishing."""
    d = lattice.dim
    rays, dual_rays = _rays_pair(lattice, rays, dual_rays, directions, s_max, budget)
    a = lattice_psi(lattice, 1, rays=rays, tol=tol)
    b = lattice_psi(dual(lattice), 1, rays=dual_rays, tol=tol)
    out = [_bracket_le("lattice.transference", name, a.lo, b.hi / (d - 1) ** 2, tol, (a, b), a.status == b.status == "exact")]
    a_zero = abs(a.lo) <= tol and abs(a.hi) <= tol
    b_zero = abs(b.lo) <= tol and abs(b.hi) <= tol
    a_nz = a.hi < -tol or a.lo > tol
    b_nz = b.hi < -tol or b.lo > tol
    bad = (a_zero and b_nz) or (b_zero and a_nz)
    out.append(CheckResult("lattice.transference.zero", name, a.lo, b.lo, 0.0, FAIL if bad else PASS, False))
    return out


def _split_term(k: int, d: int, est: ExponentEstimate) -> tuple[float, float]:
    c = k / (d - k)
    return c * (1 + _inv(est.hi)), c * (1 + _inv(est.lo))


def check_lattice_splitting(
    lattice: Lattice,
    tol: float = 0.1,
    name: str = "lattice",
    directions: DirectionSample | None = None,
    s_max=15,
    rays: LatticeRays | None = None,
    dual_rays: LatticeRays | None = None,
    budget: int = DEFAULT_BUDGET,
) -> list[CheckResult]:
    """Chain of ``k/(d-k) (1 + 1/Omega_k)``, the identity ``Omega_{d-1} = Omega_1(dual)`` and the zero dichotomy."""
    d = lattice.dim
    rays, dual_rays = _rays_pair(lattice, rays, dual_rays, directions, s_max, budget)
    om = [lattice_Omega(lattice, k, rays=rays, tol=tol) for k in range(1, d)]
    dom = [lattice_Omega(dual(lattice), k, rays=dual_rays, tol=tol) for k in range(1, d)]
    out = []
    for k in range(1, d - 1):
        a, b = _split_term(k, d, om[k - 1]), _split_term(k + 1, d, om[k])
        out.append(_bracket_le("lattice.split.chain", f"{name} k={k}", a[0], b[1], tol, (om[k - 1], om[k])))
    x, y = om[-1], dom[0]
    if x.hi == INF and y.hi == INF:
        gap = 0.0 if (x.lo == INF) == (y.lo == INF) or min(x.lo, y.lo) != INF else INF
    else:
        gap = max(_sub(x.lo, y.hi), _sub(y.lo, x.hi), 0.0)
    status = INCONCLUSIVE if _any_inconclusive(x, y) else (PASS if gap <= tol else FAIL)
    out.append(CheckResult("lattice.split.dual", name, x.lo, y.lo, -gap, status, x.status == y.status == "exact"))
    every = om + dom
    some_zero = any(e.hi <= tol for e in every)
    all_may_zero = all(e.lo <= tol for e in every)
    out.append(CheckResult("lattice.split.zero", name, 0.0, 0.0, 0.0, FAIL if some_zero and not all_may_zero else PASS, False))
    return out


def check_sign_product_theorem(
    lattice: Lattice,
    tol: float = 0.1,
    name: str = "lattice",
    directions: DirectionSample | None = None,
    s_max=15,
    rays: LatticeRays | None = None,
    dual_rays: LatticeRays | None = None,
    budget: int = DEFAULT_BUDGET,
) -> list[CheckResult]:
    """Sign dichotomy and the factor ``d-1`` bounds between lower and upper exponents of a lattice and its dual."""
    d = lattice.dim
    rays, dual_rays = _rays_pair(lattice, rays, dual_rays, directions, s_max, budget)
    dl = dual(lattice)
    lower = [lattice_psi(lattice, k, False, rays=rays, tol=tol) for k in range(1, d + 1)]
    upper = [lattice_psi(lattice, k, True, rays=rays, tol=tol) for k in range(1, d + 1)]
    dlower = [lattice_psi(dl, k, False, rays=dual_rays, tol=tol) for k in range(1, d + 1)]
    dupper = [lattice_psi(dl, k, True, rays=dual_rays, tol=tol) for k in range(1, d + 1)]
    out = []
    for k in range(1, d + 1):
        a, b = lower[k - 1], dupper[d - k]
        inst = f"{name} k={k}"
        both_zero = a.lo - tol <= 0 <= a.hi + tol and b.lo - tol <= 0 <= b.hi + tol
        opposite = (a.hi + tol > 0 and b.lo - tol < 0) or (a.lo - tol < 0 and b.hi + tol > 0)
        out.append(CheckResult("lattice.sign.dichotomy", inst, a.lo, b.lo, 0.0, PASS if both_zero or opposite else FAIL, False))
        out.append(_bracket_le("lattice.sign.bound.lower", inst, _min_abs(a), (d - 1) * _max_abs(b), tol, (a, b)))
        c, e = upper[k - 1], dlower[d - k]
        out.append(_bracket_le("lattice.sign.bound.upper", inst, _min_abs(c), (d - 1) * _max_abs(e), tol, (c, e)))
    return out


def _min_abs(e: ExponentEstimate) -> float:
    if e.lo <= 0 <= e.hi:
        return 0.0
    return min(abs(e.lo), abs(e.hi))


def _max_abs(e: ExponentEstimate) -> float:
    return max(abs(e.lo), abs(e.hi))


# ---------------------------------------------------------------------------
# Corpus
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Instance:
    """A named lattice of covolume one."""

    name: str
    lattice: Lattice


def random_lattice(d: int, entry_bound: int = 50, seed: int = 0, mode: str = "unimodularInteger") -> Lattice:
    """Random lattice of covolume one.

    ``unimodularInteger`` multiplies elementary integer matrices while every
    entry stays within ``entry_bound`` (the lattice is ``Z^d`` with a
    scrambled basis).  ``thetaForm`` is the lattice of a random rational
    ``Theta`` with denominators up to ``entry_bound``.
    """
    rng = random.Random(f"{mode}:{d}:{entry_bound}:{seed}")
    if mode == "unimodularInteger":
        U = [[int(i == j) for j in range(d)] for i in range(d)]
        for _ in range(8 * d * d):
            i, j = rng.sample(range(d), 2)
            c = rng.choice([-3, -2, -1, 1, 2, 3])
            row = [U[i][t] + c * U[j][t] for t in range(d)]
            if max(abs(x) for x in row) <= entry_bound:
                U[i] = row
        if rng.random() < 0.5:
            U[0] = [-x for x in U[0]]
        return make_lattice([list(col) for col in zip(*U)])
    if mode == "thetaForm":
        m = rng.randint(1, d - 1)
        n = d - m
        rows = []
        for _ in range(n):
            row = []
            for _ in range(m):
                q = rng.randint(2, entry_bound)
                row.append(Fraction(rng.randint(1, q - 1), q))
            rows.append(row)
        return theta_lattice(ThetaMatrix.of(rows))
    raise InputError(f"unknown lattice mode {mode!r}")


def random_tau(d: int, seed: int, bound: int = 8, den: int = 5) -> TauVector:
    """Random rational ``tau`` in T with entries of modulus up to ``bound``."""
    rng = random.Random(f"tau:{d}:{seed}:{bound}:{den}")
    v = [Fraction(rng.randint(-bound * den, bound * den), den) for _ in range(d - 1)]
    return TauVector(v + [-sum(v)])


def standard_corpus(dims: Iterable[int] = (2, 3, 4), seeds: int = 2) -> dict:
    """Deterministic lattices and weighted instances used by the verify suites."""
    lattices: list[Instance] = []
    for d in dims:
        lattices.append(Instance(f"Z{d}", identity_lattice(d)))
        for s in range(seeds):
            lattices.append(Instance(f"unimodular-d{d}-s{s}", random_lattice(d, 50, s)))
        for s in range(seeds):
            lattices.append(Instance(f"theta-d{d}-s{s}", random_lattice(d, 50, s, "thetaForm")))
    golden = cf_value(golden_cf_terms(100))
    designed = cf_value(designed_cf_terms(10))
    silver = cf_value([2] * 80)
    weighted = []
    if 2 in dims:
        weighted += [
            WeightedInstance("golden", ThetaMatrix.of([[golden]]), Weights.trivial(1, 1), (Fraction(1, 2),)),
            WeightedInstance("designed", ThetaMatrix.of([[designed]]), Weights.trivial(1, 1), (Fraction(1, 3),), Fraction(1, 2)),
        ]
    if 3 in dims:
        weighted += [
            WeightedInstance(
                "golden-silver-column", ThetaMatrix.of([[golden], [silver]]),
                Weights((Fraction(1),), (Fraction(2, 3), Fraction(1, 3))), (Fraction(1, 2), Fraction(1, 3)),
            ),
            WeightedInstance(
                "rational-row", ThetaMatrix.of([[Fraction(2, 7), Fraction(3, 5)]]),
                Weights((Fraction(2, 3), Fraction(1, 3)), (Fraction(1),)), (Fraction(1, 2),),
            ),
        ]
    return {"lattices": lattices, "weighted": weighted}


WEIGHT_GRID = [
    Weights.trivial(1, 1),
    Weights.trivial(2, 1),
    Weights.trivial(1, 2),
    Weights((Fraction(2, 3), Fraction(1, 3)), (Fraction(1),)),
    Weights((Fraction(1),), (Fraction(3, 4), Fraction(1, 4))),
    Weights((Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)), (Fraction(3, 5), Fraction(2, 5))),
]


def _delta_grid(count: int) -> list[Fraction]:
    base = [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(5), Fraction(10)]
    extra = [Fraction(i, 7) for i in range(1, 4 * count)]
    out = []
    for x in base + extra:
        if x not in out:
            out.append(x)
    return out[: max(count, 1)]


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def _task_local(args):
    inst, taus, budget = args
    out = []
    for tau in taus:
        out.extend(local_checks(inst.lattice, tau, inst.name, budget))
    return out


def _task_exact(args):
    w, deltas, ss = args
    out = []
    for delta in deltas:
        out.extend(check_diagram(w, delta))
        out.extend(check_parameter_identities(w, delta))
        for s in ss:
            if gamma_delta(w, delta) != INF:
                out.extend(check_immersion(w, delta, s))
    return out


def _task_weighted(args):
    wi, tol, s_max, budget = args
    o = {"s_max": s_max, "tail_fraction": wi.tail_fraction, "budget": budget}
    out = []
    out.extend(check_omega_product(wi.theta, wi.weights, tol, wi.name, **o))
    out.extend(check_weighted_dyson(wi.theta, wi.weights, tol, wi.name, **o))
    out.extend(check_Omega_splitting(wi.theta, wi.weights, tol, wi.name, **o))
    if wi.eta:
        out.extend(check_inhom_bound(wi.theta, wi.weights, wi.eta, tol, wi.name, **o))
    return out


def _task_lattice(args):
    inst, tol, s_max, n_dirs, budget = args
    lat = inst.lattice
    dirs = direction_sample(lat.dim, n_dirs)
    rays = LatticeRays(lat, dirs, s_max, budget=budget)
    drays = LatticeRays(dual(lat), dirs, s_max, budget=budget)
    kw = {"rays": rays, "dual_rays": drays}
    return (
        check_lattice_transference(lat, tol, inst.name, **kw)
        + check_lattice_splitting(lat, tol, inst.name, **kw)
        + check_sign_product_theorem(lat, tol, inst.name, **kw)
    )


def _map(fn, tasks, jobs: int):
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, tasks))
    return [fn(t) for t in tasks]


def run_suite(
    suite: str = "local",
    dims: Sequence[int] = (2, 3, 4),
    seeds: int = 2,
    samples: int = 10,
    s_max=15,
    tol: float = 0.15,
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
    directions: int | None = None,
) -> list[CheckResult]:
    """Run one suite (``local``, ``weighted``, ``lattice`` or ``all``) on the standard corpus.

    Results come back in a fixed order regardless of ``jobs``.
    """
    if suite not in ("local", "weighted", "lattice", "all"):
        raise InputError(f"unknown suite {suite!r}")
    corpus = standard_corpus(dims, seeds)
    out: list[CheckResult] = []
    if suite in ("local", "all"):
        tasks = [(inst, [random_tau(inst.lattice.dim, i) for i in range(samples)], budget) for inst in corpus["lattices"]]
        for part in _map(_task_local, tasks, jobs):
            out.extend(part)
    if suite in ("weighted", "all"):
        ws = [w for w in WEIGHT_GRID if w.d in dims] or WEIGHT_GRID[:1]
        deltas = _delta_grid(samples)
        ss = [Fraction(1), Fraction(5, 2), Fraction(10)]
        for part in _map(_task_exact, [(w, deltas, ss) for w in ws], jobs):
            out.extend(part)
        tasks = [(wi, tol, s_max, budget) for wi in corpus["weighted"]]
        for part in _map(_task_weighted, tasks, jobs):
            out.extend(part)
    if suite in ("lattice", "all"):
        lat = [inst for inst in corpus["lattices"] if inst.lattice.dim <= 3]
        tasks = [(inst, tol, s_max, directions, budget) for inst in lat]
        for part in _map(_task_lattice, tasks, jobs):
            out.extend(part)
    return out


def summarize(results: Sequence[CheckResult]) -> dict:
    """Counts per status, the inconclusive rate and the failing check ids."""
    total = len(results)
    counts = {PASS: 0, FAIL: 0, INCONCLUSIVE: 0}
    for r in results:
        counts[r.status] += 1
    failed = sorted({r.check_id for r in results if r.status == FAIL})
    return {
        "total": total,
        "passed": counts[PASS],
        "failed": counts[FAIL],
        "inconclusive": counts[INCONCLUSIVE],
        "inconclusiveRate": (counts[INCONCLUSIVE] / total) if total else 0.0,
        "failedChecks": failed,
    }

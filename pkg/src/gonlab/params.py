"""The trace-zero parameter space, weights, the rays mu and mu*, and log-boxes.

Everything here is exact.  Vectors in the trace-zero space carry Fraction
components, or LogReal components when they come from logarithms of
rationals (for example ``tau_of_v``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (
    BadOrder,
    DimensionMismatch,
    InputError,
    NegativeDelta,
    NonpositiveComponent,
    NotInImage,
    OutOfRange,
)
from .exact import LogReal, as_fraction, format_rational, parse_rational

__all__ = [
    "LogBox",
    "MuVector",
    "NuPoint",
    "TauVector",
    "Weights",
    "box_B_tau",
    "box_P",
    "box_P_star",
    "box_Q",
    "box_Q_star",
    "box_of_v",
    "collinearity_residual",
    "compound_box",
    "delta_of_gamma",
    "diagram_points",
    "e_vectors",
    "gamma_delta",
    "log_pi_of_v",
    "log_v_norm_k",
    "mu_of_gamma",
    "mu_star_of_delta",
    "nu_point",
    "parse_weights",
    "pi_of_v",
    "recover_weights",
    "tau_minus",
    "tau_of_v",
    "tau_plus",
    "tau_plus_k",
    "v_norm_k",
]

INF = math.inf


def _num(x):
    return x if isinstance(x, LogReal) else as_fraction(x)


def _is_zero(x) -> bool:
    return x.sign() == 0 if isinstance(x, LogReal) else x == 0


# ---------------------------------------------------------------------------
# Trace-zero vectors
# ---------------------------------------------------------------------------

class TauVector(tuple):
    """A point of the trace-zero space ``T``; an immutable tuple of exact numbers."""

    def __new__(cls, components: Iterable):
        comps = tuple(_num(x) for x in components)
        if not comps:
            raise DimensionMismatch("empty tau vector")
        total = sum(comps[1:], comps[0])
        if not _is_zero(total):
            raise InputError(f"tau components must sum to zero, got {total}")
        return super().__new__(cls, comps)

    @property
    def dim(self) -> int:
        return len(self)

    def scale(self, s) -> "TauVector":
        s = as_fraction(s)
        return TauVector(x * s for x in self)

    def __neg__(self) -> "TauVector":
        return TauVector(-x for x in self)

    def plus(self, other: Sequence) -> "TauVector":
        if len(other) != len(self):
            raise DimensionMismatch("tau dimensions differ")
        return TauVector(a + b for a, b in zip(self, other))

    def is_rational(self) -> bool:
        return all(not isinstance(x, LogReal) or x.is_rational() for x in self)

    def as_logreals(self) -> tuple[LogReal, ...]:
        return tuple(LogReal.coerce(x) for x in self)

    def __repr__(self):
        return "TauVector(" + ", ".join(
            format_rational(x) if isinstance(x, Fraction) else repr(x) for x in self
        ) + ")"


def tau_plus(tau: Sequence):
    """``|tau|_+ = max tau_i``."""
    return max(tau)


def tau_minus(tau: Sequence):
    """``|tau|_- = -min tau_i``."""
    return -min(tau)


def tau_plus_k(tau: Sequence, k: int):
    """Mean of the ``k`` largest components."""
    d = len(tau)
    if not 1 <= k <= d:
        raise BadOrder(f"need 1 <= k <= {d}, got {k}")
    top = sorted(tau, reverse=True)[:k]
    return sum(top[1:], top[0]) / k


# ---------------------------------------------------------------------------
# Weights and rays
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Weights:
    """Weights ``sigma`` (m of them) and ``rho`` (n of them), each non-increasing, positive, summing to one."""

    sigma: tuple[Fraction, ...]
    rho: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(as_fraction(x) for x in self.sigma))
        object.__setattr__(self, "rho", tuple(as_fraction(x) for x in self.rho))
        for name, v in (("sigma", self.sigma), ("rho", self.rho)):
            if not v:
                raise InputError(f"{name} must be non-empty")
            if any(x <= 0 for x in v):
                raise InputError(f"{name} entries must be positive")
            if any(a < b for a, b in zip(v, v[1:])):
                raise InputError(f"{name} must be non-increasing")
            if sum(v) != 1:
                raise InputError(f"{name} must sum to 1")

    @classmethod
    def trivial(cls, m: int, n: int) -> "Weights":
        return cls((Fraction(1, m),) * m, (Fraction(1, n),) * n)

    @property
    def m(self) -> int:
        return len(self.sigma)

    @property
    def n(self) -> int:
        return len(self.rho)

    @property
    def d(self) -> int:
        return self.m + self.n

    def swapped(self) -> "Weights":
        return Weights(self.rho, self.sigma)


def parse_weights(text: str) -> Weights:
    """Parse ``m n`` then the sigma list then the rho list (whitespace separated)."""
    tokens = []
    for line in text.splitlines():
        tokens += line.split("#", 1)[0].replace(",", " ").split()
    try:
        m, n = int(tokens[0]), int(tokens[1])
        vals = [parse_rational(t) for t in tokens[2:]]
    except (IndexError, ValueError) as exc:
        raise InputError(f"bad weights file: {exc}") from exc
    if len(vals) != m + n:
        raise DimensionMismatch(f"expected {m + n} weights, got {len(vals)}")
    return Weights(tuple(vals[:m]), tuple(vals[m:]))


def e_vectors(w: Weights) -> tuple[TauVector, TauVector]:
    d = w.d
    e1 = [1 - d * s for s in w.sigma] + [Fraction(1)] * w.n
    e2 = [Fraction(1)] * w.m + [1 - d * r for r in reversed(w.rho)]
    return TauVector(e1), TauVector(e2)


@dataclass(frozen=True)
class MuVector:
    """A ray direction ``mu(gamma) = -e1 + gamma e2`` (kind ``mu``) or ``mu*(delta) = delta e1 - e2`` (kind ``mu_star``)."""

    gamma: Fraction
    components: TauVector
    kind: str
    weights: Weights


def mu_of_gamma(w: Weights, gamma) -> MuVector:
    gamma = as_fraction(gamma)
    e1, e2 = e_vectors(w)
    return MuVector(gamma, TauVector(-a + gamma * b for a, b in zip(e1, e2)), "mu", w)


def mu_star_of_delta(w: Weights, delta) -> MuVector:
    delta = as_fraction(delta)
    e1, e2 = e_vectors(w)
    return MuVector(delta, TauVector(delta * a - b for a, b in zip(e1, e2)), "mu_star", w)


def recover_weights(mu: MuVector | Sequence, m: int | None = None) -> tuple[Weights, Fraction]:
    """Restore ``(sigma, rho)`` and ``gamma`` from the components of ``mu(gamma)``."""
    if isinstance(mu, MuVector):
        if mu.kind != "mu":
            raise NotInImage("only mu-kind vectors can be inverted")
        comps, m = tuple(mu.components), mu.weights.m
    else:
        comps = tuple(as_fraction(x) for x in mu)
        if m is None:
            raise InputError("m is required when recovering from raw components")
    d = len(comps)
    n = d - m
    if not (1 <= m < d):
        raise DimensionMismatch("need 1 <= m < d")
    gamma = (sum(comps[:m]) - n) / m
    if gamma == 0:
        raise NotInImage("gamma = 0 cannot be recovered")
    sigma = tuple((comps[j] + 1 - gamma) / d for j in range(m))
    rho = tuple((gamma - 1 - comps[d - 1 - i]) / (d * gamma) for i in range(n))
    try:
        w = Weights(sigma, rho)
    except InputError as exc:
        raise NotInImage(str(exc)) from exc
    if tuple(mu_of_gamma(w, gamma).components) != comps:
        raise NotInImage("components are not of the form -e1 + gamma e2")
    return w, gamma


def gamma_delta(w: Weights, delta):
    """The piecewise fractional-linear transfer map; ``delta`` may be ``math.inf``."""
    if delta == INF:
        rn = w.rho[-1]
        return INF if rn == 1 else 1 / (1 - rn)
    delta = as_fraction(delta)
    if delta < 0:
        raise NegativeDelta(f"delta must be >= 0, got {delta}")
    if delta >= 1:
        s, r = 1 / w.sigma[-1], 1 / w.rho[-1]
    else:
        s, r = 1 / w.sigma[0], 1 / w.rho[0]
    return ((s - 1) + r * delta) / (s + (r - 1) * delta)


def delta_of_gamma(w: Weights, gamma):
    """Inverse of ``gamma_delta``; returns ``math.inf`` at the upper endpoint."""
    upper = INF if w.rho[-1] == 1 else 1 / (1 - w.rho[-1])
    if gamma == INF:
        if upper == INF:
            return INF
        raise OutOfRange("gamma = inf is outside the image")
    gamma = as_fraction(gamma)
    if gamma < 1 - w.sigma[0] or (upper != INF and gamma > upper):
        raise OutOfRange(f"gamma = {gamma} outside [{1 - w.sigma[0]}, {upper}]")
    if gamma >= 1:
        s, r = 1 / w.sigma[-1], 1 / w.rho[-1]
    else:
        s, r = 1 / w.sigma[0], 1 / w.rho[0]
    den = r + (1 - r) * gamma
    if den == 0:
        return INF
    return ((1 - s) + s * gamma) / den


# ---------------------------------------------------------------------------
# Transference diagram in (e1, e2) coordinates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NuPoint:
    """Either the common point of the lines (``kind='point'``) or their common direction (``kind='direction'``)."""

    kind: str
    coords: tuple[Fraction, Fraction]
    weights: Weights

    @property
    def vector(self) -> TauVector:
        e1, e2 = e_vectors(self.weights)
        a, b = self.coords
        return TauVector(a * x + b * y for x, y in zip(e1, e2))


def nu_point(w: Weights, branch: int) -> NuPoint:
    """``branch`` is the sign of ``delta - 1`` (+1 or -1); ``n = 1`` yields a direction."""
    if branch not in (1, -1):
        raise InputError("branch must be +1 or -1")
    if branch > 0:
        s, r = 1 / w.sigma[-1], 1 / w.rho[-1]
    else:
        s, r = 1 / w.sigma[0], 1 / w.rho[0]
    if w.n == 1:
        return NuPoint("direction", (s, Fraction(1)), w)
    c = 1 / (1 - r)
    return NuPoint("point", (c * s, c * r), w)


def diagram_points(w: Weights, delta) -> dict[str, tuple]:
    """The four labelled points of the transference diagram in ``(e1, e2)`` coordinates."""
    delta = as_fraction(delta)
    g = gamma_delta(w, delta)
    pts = {
        "mu(gamma_delta)": (Fraction(-1), g),
        "-mu(gamma_delta)": (Fraction(1), -g),
        "mu*(delta)": (delta, Fraction(-1)),
    }
    if delta != 1:
        nu = nu_point(w, 1 if delta > 1 else -1)
        pts["nu" if nu.kind == "point" else "nu-direction"] = nu.coords
    return pts


def collinearity_residual(w: Weights, delta) -> Fraction:
    """Exact residual of the diagram lemma: a 2x2 determinant that must vanish."""
    delta = as_fraction(delta)
    g = gamma_delta(w, delta)
    a = (delta, Fraction(-1))
    b = (Fraction(1), -g)
    if delta == 1:
        return abs(a[0] - b[0]) + abs(a[1] - b[1])
    nu = nu_point(w, 1 if delta > 1 else -1)
    if nu.kind == "direction":
        u = (b[0] - a[0], b[1] - a[1])
        return u[0] * nu.coords[1] - u[1] * nu.coords[0]
    p, q = nu.coords
    return (a[0] - p) * (b[1] - q) - (a[1] - q) * (b[0] - p)


# ---------------------------------------------------------------------------
# Boxes
# ---------------------------------------------------------------------------

class LogBox(tuple):
    """Axis box ``|z_i| <= exp(b_i)``; entries are exact LogReal log half-widths."""

    def __new__(cls, widths: Iterable):
        return super().__new__(cls, tuple(LogReal.coerce(x) for x in widths))

    @property
    def dim(self) -> int:
        return len(self)

    @property
    def exact_widths(self) -> tuple[Fraction, ...] | None:
        if all(x.is_rational() for x in self):
            return tuple(x.q for x in self)
        return None

    def shifted(self, c) -> "LogBox":
        return LogBox(x + c for x in self)

    def floats(self) -> tuple[float, ...]:
        return tuple(float(x) for x in self)


def box_B_tau(tau: Sequence) -> LogBox:
    return LogBox(tau)


def box_P(w: Weights, s, gamma) -> LogBox:
    s, gamma = as_fraction(s), as_fraction(gamma)
    x = [s * sg for sg in w.sigma]
    y = [-s * r * gamma for r in reversed(w.rho)]
    return LogBox(x + y)


def box_Q(w: Weights, s, gamma) -> LogBox:
    s = as_fraction(s)
    return LogBox(s * c for c in mu_of_gamma(w, gamma).components)


def box_P_star(w: Weights, s, delta) -> LogBox:
    s, delta = as_fraction(s), as_fraction(delta)
    x = [-s * sg * delta for sg in w.sigma]
    y = [s * r for r in reversed(w.rho)]
    return LogBox(x + y)


def box_Q_star(w: Weights, s, delta) -> LogBox:
    s = as_fraction(s)
    return LogBox(s * c for c in mu_star_of_delta(w, delta).components)


def compound_box(b: Sequence, k: int) -> LogBox:
    d = len(b)
    if not 1 <= k <= d:
        raise BadOrder(f"need 1 <= k <= {d}, got {k}")
    b = [LogReal.coerce(x) for x in b]
    return LogBox(sum((b[i] for i in idx), LogReal()) for idx in combinations(range(d), k))


# ---------------------------------------------------------------------------
# Positive vectors and the level sets H_gamma
# ---------------------------------------------------------------------------

def _positive(v: Sequence) -> list[Fraction]:
    v = [as_fraction(x) for x in v]
    if any(x <= 0 for x in v):
        raise NonpositiveComponent("all components must be positive")
    return v


def box_of_v(v: Sequence) -> LogBox:
    return LogBox(LogReal(x) for x in _positive(v))


def log_pi_of_v(v: Sequence) -> LogReal:
    """``log Pi(v)`` with ``Pi(v) = prod v_i^(1/d)``."""
    v = _positive(v)
    return LogReal(math.prod(v)) / len(v)


def pi_of_v(v: Sequence) -> float:
    return math.exp(float(log_pi_of_v(v)))


def log_v_norm_k(v: Sequence, k: int) -> LogReal:
    """``log |v|^[k]``: log of the largest geometric mean of ``k`` coordinates."""
    v = [abs(as_fraction(x)) for x in v]
    if not 1 <= k <= len(v):
        raise BadOrder(f"need 1 <= k <= {len(v)}, got {k}")
    top = sorted(v, reverse=True)[:k]
    if top[-1] == 0:
        raise NonpositiveComponent("|v|^[k] needs k nonzero components")
    return LogReal(math.prod(top)) / k


def v_norm_k(v: Sequence, k: int) -> float:
    return math.exp(float(log_v_norm_k(v, k)))


def tau_of_v(v: Sequence) -> TauVector:
    """``(log(v_i / Pi(v)))_i``, an exactly trace-zero vector of LogReal entries."""
    v = _positive(v)
    lp = log_pi_of_v(v)
    return TauVector(LogReal(x) - lp for x in v)

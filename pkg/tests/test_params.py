import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import positive_rationals, rationals
from gonlab.errors import InputError, NegativeDelta, NonpositiveComponent, NotInImage, OutOfRange
from gonlab.exact import LogReal
from gonlab.params import (
    TauVector,
    Weights,
    box_P,
    box_P_star,
    box_Q,
    box_Q_star,
    collinearity_residual,
    compound_box,
    delta_of_gamma,
    diagram_points,
    e_vectors,
    gamma_delta,
    log_pi_of_v,
    log_v_norm_k,
    mu_of_gamma,
    mu_star_of_delta,
    nu_point,
    parse_weights,
    recover_weights,
    tau_minus,
    tau_of_v,
    tau_plus,
    tau_plus_k,
)


def _simplex(parts: list[int]) -> tuple[Fraction, ...]:
    total = sum(parts)
    return tuple(sorted((Fraction(p, total) for p in parts), reverse=True))


@st.composite
def weights(draw, max_m=3, max_n=3):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, max_n))
    sigma = _simplex(draw(st.lists(st.integers(1, 9), min_size=m, max_size=m)))
    rho = _simplex(draw(st.lists(st.integers(1, 9), min_size=n, max_size=n)))
    return Weights(sigma, rho)


deltas = st.builds(Fraction, st.integers(0, 60), st.integers(1, 12))
W = Weights((Fraction(2, 3), Fraction(1, 3)), (Fraction(1, 2), Fraction(1, 2)))


def test_weights_validation():
    with pytest.raises(InputError):
        Weights((Fraction(1, 3), Fraction(2, 3)), (1,))
    with pytest.raises(InputError):
        Weights((Fraction(1, 2),), (1,))
    assert Weights.trivial(2, 3).rho == (Fraction(1, 3),) * 3
    assert parse_weights("2 1\n2/3 1/3\n1\n") == Weights((Fraction(2, 3), Fraction(1, 3)), (1,))


def test_e_vectors_are_trace_zero():
    e1, e2 = e_vectors(W)
    assert sum(e1) == 0 and sum(e2) == 0
    assert e1 == (-Fraction(5, 3), Fraction(-1, 3), 1, 1)
    assert e2 == (1, 1, -1, -1)


def test_gamma_delta_fixed_values():
    assert gamma_delta(W, 1) == 1
    assert gamma_delta(W, 0) == 1 - W.sigma[0]
    assert gamma_delta(W, math.inf) == 1 / (1 - W.rho[-1])
    assert gamma_delta(Weights((Fraction(1, 2),) * 2, (1,)), math.inf) == math.inf
    with pytest.raises(NegativeDelta):
        gamma_delta(W, -1)


@given(weights(), deltas)
def test_gamma_delta_round_trip_and_range(w, delta):
    g = gamma_delta(w, delta)
    assert delta_of_gamma(w, g) == delta
    assert (g == 1) == (delta == 1)
    assert g >= 1 - w.sigma[0]
    if w.rho[-1] != 1:
        assert g <= 1 / (1 - w.rho[-1])


@given(weights(), deltas, deltas)
def test_gamma_delta_is_increasing(w, a, b):
    assume(a < b)
    assert gamma_delta(w, a) < gamma_delta(w, b)


def test_delta_of_gamma_out_of_range():
    with pytest.raises(OutOfRange):
        delta_of_gamma(W, Fraction(1, 10))


@given(weights(), st.builds(Fraction, st.integers(1, 40), st.integers(1, 7)))
def test_recover_weights_inverts_mu(w, gamma):
    assert recover_weights(mu_of_gamma(w, gamma)) == (w, gamma)


def test_recover_weights_rejects_dual_rays():
    with pytest.raises(NotInImage):
        recover_weights(mu_star_of_delta(W, 2))


@given(weights(), deltas)
def test_diagram_is_collinear(w, delta):
    assert collinearity_residual(w, delta) == 0


def test_diagram_labels():
    pts = diagram_points(Weights((Fraction(2, 3), Fraction(1, 3)), (1,)), 2)
    assert pts == {
        "mu(gamma_delta)": (-1, Fraction(4, 3)),
        "-mu(gamma_delta)": (1, Fraction(-4, 3)),
        "mu*(delta)": (2, -1),
        "nu-direction": (3, 1),
    }
    assert nu_point(W, 1).kind == "point"


@given(weights(), deltas.filter(lambda x: x > 0), st.builds(Fraction, st.integers(1, 20), st.integers(1, 4)))
def test_boxes_are_rescalings(w, delta, s):
    d = w.d
    g = gamma_delta(w, delta)
    assert tuple(box_P(w, d * s, g)) == tuple(x + s * (1 - g) for x in box_Q(w, s, g))
    assert tuple(box_P_star(w, d * s, delta)) == tuple(x + s * (1 - delta) for x in box_Q_star(w, s, delta))


@given(st.lists(rationals(), min_size=2, max_size=6))
def test_tau_plus_k_duality_and_sandwich(v):
    mean = sum(v) / len(v)
    tau = [x - mean for x in v]
    d = len(tau)
    for k in range(1, d):
        assert (d - k) * tau_plus_k(tau, d - k) == k * tau_plus_k([-x for x in tau], k)
    assert tau_plus(tau) / (d - 1) <= tau_minus(tau) <= (d - 1) * tau_plus(tau)
    for k in range(1, d):
        assert tau_plus_k(tau, k + 1) <= tau_plus_k(tau, k)


def test_compound_box():
    b = compound_box([1, 2, -3], 2)
    assert tuple(b) == (3, -2, -1)


@given(st.lists(positive_rationals(), min_size=2, max_size=5))
def test_tau_of_v_trace_zero(v):
    t = tau_of_v(v)
    assert sum(t, LogReal()).sign() == 0
    assert log_pi_of_v(v) == sum((LogReal(x) for x in v), LogReal()) / len(v)


def test_log_v_norm_k():
    assert log_v_norm_k([4, 1, 9], 2) == LogReal(36) / 2
    with pytest.raises(NonpositiveComponent):
        log_v_norm_k([1, 0, 0], 2)


def test_tau_vector_ops():
    t = TauVector([1, -1])
    assert t.scale(3) == (3, -3)
    assert -t == (-1, 1)
    with pytest.raises(InputError):
        TauVector([1, 1])

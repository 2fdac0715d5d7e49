import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from gonlab.errors import BadOrder, DimensionMismatch, InputError, TooFewTerms
from gonlab.exponents import (
    ExponentEstimate,
    LatticeRays,
    cf_convergents,
    cf_oracle,
    cf_terms,
    cf_value,
    chi_of_gamma,
    designed_cf_terms,
    direction_sample,
    dual_weighted_omega,
    gamma_of_chi,
    golden_cf_terms,
    inhom_omega,
    lattice_Omega,
    lattice_omega,
    lattice_psi,
    psi_along_ray,
    Psi_along_ray,
    ray_grid,
    weighted_lattice,
    weighted_Omega,
    weighted_omega,
)
from gonlab.lattice import ThetaMatrix, identity_lattice, theta_lattice
from gonlab.params import Weights, tau_plus

INF = math.inf
W11 = Weights.trivial(1, 1)
GOLDEN = ThetaMatrix.of([[cf_value(golden_cf_terms(100))]])
DESIGNED = ThetaMatrix.of([[cf_value(designed_cf_terms(10))]])
HALF = Fraction(1, 2)


# -- continued fractions -------------------------------------------------------

def test_cf_helpers():
    assert cf_convergents([1, 1, 1, 1]) == [(1, 1), (1, 2), (2, 3), (3, 5)]
    assert cf_value([2, 3]) == Fraction(3, 7)
    assert cf_terms(Fraction(3, 7)) == [2, 3]
    assert designed_cf_terms(4) == [3, 3, 10, 103]
    with pytest.raises(InputError):
        cf_terms(Fraction(3, 2))


@given(st.lists(st.integers(1, 50), min_size=1, max_size=12))
def test_cf_round_trip(terms):
    # the expansion is unique once the last term exceeds 1; [1] is the integer 1
    assume(terms != [1])
    if terms[-1] == 1:
        terms = terms[:-1] + [2]
    assert cf_terms(cf_value(terms)) == terms


def test_cf_oracle_values():
    g = cf_oracle(golden_cf_terms(100))
    assert g.omega[0] == pytest.approx(1, abs=0.02) and g.omega[1] == pytest.approx(1, abs=0.02)
    d = cf_oracle(designed_cf_terms(10))
    assert 1.9 < d.omega[0] <= d.omega[1] < 2.1
    assert cf_oracle(Fraction(3, 7)).rational
    with pytest.raises(TooFewTerms):
        cf_oracle([1, 1])


# -- parameter helpers ---------------------------------------------------------

@given(st.builds(Fraction, st.integers(0, 1000), st.integers(1, 50)))
def test_chi_gamma_inverse(g):
    assert gamma_of_chi(chi_of_gamma(g)) == g
    assert (1 + chi_of_gamma(g)) * (1 + g) == 1


def test_chi_gamma_infinity():
    assert chi_of_gamma(INF) == -1
    assert gamma_of_chi(-1) == INF


def test_ray_grid_spans_both_windows():
    g = ray_grid(20, Fraction(3, 10), 24)
    assert g[-1] == 20 and len(g) == 24
    assert g[0] == 20 * Fraction(17, 20) * Fraction(7, 10)
    with pytest.raises(InputError):
        ray_grid(20, 1)


def test_estimate_record():
    e = ExponentEstimate("omega", 1, 1.0, INF, Fraction(20), Fraction(3, 10), False, 24, "inconclusive")
    rec = e.to_record()
    assert rec["bracket"] == [1.0, "inf"]
    assert rec["sMax"] == "20" and rec["tailFraction"] == "3/10"
    assert e.contains(INF) and not e.is_infinite and e.inconclusive


# -- ray estimates -------------------------------------------------------------

def test_psi_along_ray_Z2_is_exact_ray():
    lo, hi = psi_along_ray(identity_lattice(2), [1, -1], 1)
    assert lo.lo <= -1 <= lo.hi and hi.lo <= -1 <= hi.hi
    assert lo.width < 0.05
    lo, hi = Psi_along_ray(identity_lattice(2), [1, -1], 2)
    assert lo.lo <= 0 <= lo.hi


# -- weighted exponents (frozen brackets; the oracle lies inside) ---------------

def test_golden_brackets():
    # [DERIVED] cf_oracle gives 1 for the golden ratio
    e = weighted_omega(GOLDEN, W11)
    assert (e.lo, e.hi) == (1.0, 1.0625)
    assert e.contains(1.0)
    u = weighted_omega(GOLDEN, W11, uniform=True)
    assert u.contains(1.0) and u.width <= 0.05 and u.converged
    assert dual_weighted_omega(GOLDEN, W11).contains(1.0)
    assert weighted_Omega(GOLDEN, W11).contains(1.0)


def test_designed_bracket_contains_oracle():
    # [DERIVED] cf_oracle gives about 2 for a_{k+1} = q_k
    e = weighted_omega(DESIGNED, W11, tail_fraction=HALF)
    assert (e.lo, e.hi) == (1.796875, 2.140625)
    lo, hi = cf_oracle(designed_cf_terms(10)).omega
    assert e.lo <= lo and hi <= e.hi
    d = dual_weighted_omega(DESIGNED, W11, k=2, uniform=True, tail_fraction=HALF)
    assert (d.lo, d.hi) == (0.4375, 0.625)
    assert d.contains(1 / 2)  # product with omega = 2 is 1


def test_rational_theta_has_exact_solutions():
    e = weighted_omega(ThetaMatrix.of([[Fraction(2, 7)]]), W11, s_max=10)
    assert e.is_infinite and e.status == "exact"


def test_inhom_bracket_and_solvable_shift():
    e = inhom_omega(GOLDEN, W11, [HALF])
    assert e.lo >= 0 and e.contains(1.0)
    # eta = theta * 3 - 1 is hit exactly by (x, y) = (3, 1)
    theta = GOLDEN.entries[0][0]
    assert inhom_omega(GOLDEN, W11, [3 * theta - 1], s_max=10).is_infinite


def test_weighted_argument_checks():
    with pytest.raises(DimensionMismatch):
        weighted_omega(GOLDEN, Weights.trivial(2, 1))
    with pytest.raises(BadOrder):
        weighted_omega(GOLDEN, W11, k=3)
    with pytest.raises(DimensionMismatch):
        inhom_omega(GOLDEN, W11, [1, 2])


def test_weighted_lattice_reverses_rows():
    th = ThetaMatrix.of([[Fraction(1, 3)], [Fraction(1, 5)]])
    w = Weights((1,), (Fraction(2, 3), Fraction(1, 3)))
    assert weighted_lattice(th, w) == theta_lattice(th.reversed_rows())


# -- lattice exponents ---------------------------------------------------------

def test_direction_sample_is_unit_and_covers():
    s = direction_sample(3, 40)
    assert all(sum(u) == 0 and tau_plus(u) == 1 for u in s.directions)
    assert 0 < s.resolution < 0.3
    assert direction_sample(3, 40).directions == s.directions
    assert len(direction_sample(2)) == 2
    s4 = direction_sample(4, 30)
    assert all(sum(u) == 0 and tau_plus(u) == 1 for u in s4.directions)


def test_Zd_lattice_exponents():
    # [DERIVED] L_k(Z^d, u) is the k-th smallest -u_i: a ray with k top
    # coordinates keeps L_k = -s, while L_d = |u|_- >= 1/(d-1)
    for d in (2, 3):
        lat = identity_lattice(d)
        rays = LatticeRays(lat, direction_sample(d, 20), s_max=10)
        for k in range(1, d):
            p = lattice_psi(lat, k, rays=rays)
            assert (p.lo, p.hi, p.status) == (-1, -1, "exact")
            assert lattice_omega(lat, k, rays=rays).is_infinite
        top = lattice_psi(lat, d, rays=rays)
        assert top.lo - 0.05 <= 1 / (d - 1) <= top.hi + 0.05
        assert lattice_Omega(lat, 1, rays=rays).is_infinite


def test_golden_lattice():
    lat = theta_lattice(GOLDEN)
    # e_2 lies in the lattice, so over all directions the lower exponent is -1
    p = lattice_psi(lat, 1, s_max=15, tol=0.1)
    assert p.status == "exact" and p.hi == -1
    # along mu(1) = (2, -2) the golden ratio is badly approximable
    lo, _ = psi_along_ray(lat, [2, -2], 1, s_max=20, tol=0.1)
    assert lo.lo - 0.1 <= 0 <= lo.hi + 0.1 and lo.width <= 0.1


def test_lattice_exponent_argument_checks():
    with pytest.raises(BadOrder):
        lattice_Omega(identity_lattice(2), 2)
    with pytest.raises(BadOrder):
        lattice_psi(identity_lattice(2), 3)

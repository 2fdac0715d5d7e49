from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gonlab.errors import BadOrder, DimensionMismatch, SingularBasis
from gonlab.lattice import (
    ThetaMatrix,
    compound,
    compound_index,
    det,
    dual,
    format_lattice,
    format_theta,
    identity_lattice,
    inverse,
    make_lattice,
    mat_mul,
    parse_lattice,
    parse_theta,
    theta_lattice,
    transpose,
)

small = st.integers(-6, 6)


def matrices(d):
    return st.lists(st.lists(small, min_size=d, max_size=d), min_size=d, max_size=d).filter(lambda a: det(a) != 0)


def test_det_and_inverse():
    a = [[2, 1], [7, 4]]
    assert det(a) == 1
    assert inverse(a) == ((4, -1), (-7, 2))


@given(st.integers(2, 4).flatmap(matrices))
def test_inverse_is_inverse(a):
    d = len(a)
    eye = tuple(tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d))
    assert mat_mul(a, inverse(a)) == eye


@given(st.integers(2, 4).flatmap(matrices))
def test_dual_pairing_is_integral_and_involutive(a):
    lat = make_lattice(a)
    du = dual(lat)
    assert du.covolume == 1 / lat.covolume
    for g in lat.generators:
        for h in du.generators:
            assert sum(x * y for x, y in zip(g, h)).denominator == 1
    assert dual(du).basis == lat.basis


def test_singular_basis_rejected():
    with pytest.raises(SingularBasis):
        make_lattice([[1, 2], [2, 4]])
    with pytest.raises(DimensionMismatch):
        make_lattice([[1, 2, 3], [4, 5, 6]])


def test_contains_and_coefficients():
    lat = make_lattice([[2, 1], [0, 3]])
    assert lat.contains((3, 3))
    assert not lat.contains((1, 1))
    assert lat.coefficients(lat.point((4, -5))) == (4, -5)


def test_theta_lattice_has_covolume_one():
    th = ThetaMatrix.of([[Fraction(1, 3), Fraction(2, 5)]])
    lat = theta_lattice(th)
    assert lat.covolume == 1
    # (x, Theta x - y) pattern: generator e_1 maps to (1, 0, -1/3)
    assert lat.generators[0] == (1, 0, Fraction(-1, 3))


def test_compound_covolume_and_index():
    lat = make_lattice([[2, 1, 0], [0, 1, 1], [1, 0, 3]])
    c2 = compound(lat, 2)
    assert c2.dim == 3
    # covolume of the k-th compound is covol^(C(d-1, k-1))
    assert c2.covolume == lat.covolume ** 2
    assert compound(lat, 3).covolume == lat.covolume
    assert compound_index(4, 2)[:3] == [(0, 1), (0, 2), (0, 3)]
    with pytest.raises(BadOrder):
        compound_index(3, 0)


def test_text_round_trip():
    lat = make_lattice([[Fraction(1, 2), 3], [-1, Fraction(7, 3)]])
    assert parse_lattice(format_lattice(lat)).basis == lat.basis
    th = ThetaMatrix.of([[Fraction(2, 7), Fraction(3, 5)]])
    assert parse_theta(format_theta(th)) == th
    assert transpose(th.entries) == th.transpose().entries


def test_parse_lattice_errors():
    with pytest.raises(DimensionMismatch):
        parse_lattice("2\n1 0\n")
    assert parse_lattice("# comment\n2\n1,0\n0,1\n").basis == identity_lattice(2).basis

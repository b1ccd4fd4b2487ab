from fractions import Fraction

import pytest

from frobhier.algebra import Polynomial, poly_euler_integrate
from frobhier.errors import ClosednessViolation, InvalidDimension
from frobhier.potentials import (
    a_coordinate_map,
    a_potential,
    a_psi,
    b_potential,
    b_potential_from_a,
    b_via_d_check,
    d_coordinate_map,
    d_psi1,
    d_psi2_parts,
    euler_weights,
    expected_eta,
    potential,
)

# frozen pipeline outputs; A_1..A_4 were cross-checked against an independent
# computer-algebra run of the same construction
FROZEN = {
    ("A", 1): "1/6*t1^3",
    ("A", 2): "-1/24*t2^4 + 1/2*t1^2*t2",
    ("A", 3): "1/60*t3^5 - 1/4*t2^2*t3^2 + 1/2*t1^2*t3 + 1/2*t1*t2^2",
    ("A", 4): "-1/120*t4^6 + 1/6*t3^2*t4^3 - 1/4*t2^2*t4^2 - 1/2*t2*t3^2*t4 - 1/12*t3^4"
              " + 1/2*t1^2*t4 + t1*t2*t3 + 1/6*t2^3",
    ("B", 2): "1/60*t2^5 + 1/2*t1^2*t2",
    ("B", 3): "1/210*t3^7 + 1/6*t2^2*t3^3 - 1/6*t2^3*t3 + 1/2*t1^2*t3 + 1/2*t1*t2^2",
    ("D", 4): "1/210*t3^7 + 1/6*t2^2*t3^3 + 1/6*t3^3*t4^2 - 1/6*t2^3*t3 + 1/2*t2*t3*t4^2"
              " + 1/2*t1^2*t3 + 1/2*t1*t2^2 + 1/2*t1*t4^2",
}


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_frozen_potentials(key):
    assert potential(*key).F.render() == FROZEN[key]


def test_a1_by_hand():
    # A_1: x^2 has a one-dimensional Frobenius manifold with F = t^3/6
    assert a_potential(1).F == Polynomial.var(1) ** 3 / 6


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_a_psi_inverts_coordinate_map(N):
    v = a_coordinate_map(N).images
    for g in range(1, N + 1):
        assert a_psi(N, 1, g).substitute(v) == Polynomial.var(g)


@pytest.mark.parametrize("N", [4, 5, 6])
def test_d_psi1_inverts_coordinate_map(N):
    v = d_coordinate_map(N).images
    for g in range(1, N + 1):
        assert d_psi1(N, g).substitute(v) == Polynomial.var(g)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_b_fast_path_equals_a_restriction(N):
    assert b_potential(N).F == b_potential_from_a(N).F


@pytest.mark.parametrize("N", [3, 4, 5])
def test_b_inside_d(N):
    assert b_via_d_check(N)


@pytest.mark.parametrize("family,N", [("A", 5), ("B", 4), ("D", 6)])
def test_unit_direction(family, N):
    # d_1 d_a d_b F = eta_ab
    P = potential(family, N)
    eta = expected_eta(family, N)
    for a in range(1, N + 1):
        for b in range(1, N + 1):
            assert P.F.derive(1).derive(a).derive(b) == Polynomial.const(eta[a - 1][b - 1])


def test_weights():
    d, delta = euler_weights("D", 5)
    assert d == (1, Fraction(3, 4), Fraction(1, 2), Fraction(1, 4), Fraction(5, 8))
    assert delta == Fraction(3, 4)
    d, delta = euler_weights("A", 3)
    assert d == (1, Fraction(3, 4), Fraction(1, 2))
    assert delta == Fraction(1, 2)


def test_halved_second_sum_is_not_closed():
    # halving the v_N^2 coefficient once more breaks the (a, N) closedness pairs
    N = 5
    v = d_coordinate_map(N).images
    grad = {}
    for a in range(1, N):
        first, second = d_psi2_parts(N, N - a)
        grad[a] = (first + second * Polynomial.var(N, 2) * Fraction(1, 4)).substitute(v)
    grad[N] = v[1] * Polynomial.var(N)
    with pytest.raises(ClosednessViolation) as e:
        poly_euler_integrate(grad)
    assert e.value.beta == N


def test_invalid_dimensions():
    with pytest.raises(InvalidDimension):
        potential("D", 3)
    with pytest.raises(InvalidDimension):
        potential("B", 1)
    with pytest.raises(InvalidDimension):
        potential("E", 6)
    with pytest.raises(InvalidDimension):
        b_via_d_check(2)


def test_json_schema():
    obj = potential("B", 2).to_json_obj()
    assert sorted(obj) == ["F", "N", "delta", "eta", "family", "weights"]
    assert obj["eta"] == [["0/1", "1/1"], ["1/1", "0/1"]]
    assert Polynomial.from_json_obj(obj["F"]) == potential("B", 2).F

from dataclasses import replace
from fractions import Fraction

import pytest

from frobhier.algebra import Polynomial
from frobhier.errors import NonConstantMetric, SingularMetric
from frobhier.frobenius import (
    associativity_check,
    euler_check,
    euler_report,
    frobenius_property_check,
    invert_matrix,
    metric_from_potential,
    structure_constants,
    wdvv_residual,
    wdvv_verify,
)
from frobhier.potentials import expected_eta, potential

t = Polynomial.var


def test_invert_matrix():
    m = ((Fraction(2), Fraction(1)), (Fraction(1), Fraction(1)))
    assert invert_matrix(m) == ((1, -1), (-1, 2))
    with pytest.raises(SingularMetric):
        invert_matrix(((Fraction(1), Fraction(2)), (Fraction(2), Fraction(4))))


@pytest.mark.parametrize("family,N", [("A", 4), ("B", 3), ("D", 5)])
def test_metric_tables(family, N):
    assert metric_from_potential(potential(family, N)).entries == expected_eta(family, N)


def test_d_metric_shape():
    eta = metric_from_potential(potential("D", 4)).entries
    assert eta[3][3] == 1
    assert eta[0][2] == eta[1][1] == eta[2][0] == 1
    assert sum(sum(r) for r in eta) == 4


def test_non_constant_metric_detected():
    P = potential("A", 3)
    bad = replace(P, F=P.F + t(1) * t(2) ** 3)
    with pytest.raises(NonConstantMetric):
        metric_from_potential(bad)


def test_singular_metric_detected():
    P = potential("A", 2)
    bad = replace(P, F=P.F - t(1) ** 2 * t(2) / 2)
    with pytest.raises(SingularMetric):
        metric_from_potential(bad)


def test_wdvv_residual_vanishes():
    P = potential("D", 5)
    assert wdvv_residual(P, 2, 3, 4, 5).is_zero()


def test_wdvv_residual_nonzero_when_perturbed():
    P = potential("A", 3)
    bad = replace(P, F=P.F + t(3) ** 5)  # metric unchanged, WDVV broken
    assert not wdvv_residual(bad, 2, 2, 3, 3).is_zero()
    rep = wdvv_verify(bad)
    assert not rep.ok
    assert rep.quadruples_checked == 81


@pytest.mark.parametrize("family,N", [("A", 5), ("B", 4), ("D", 6)])
def test_wdvv_verify(family, N):
    rep = wdvv_verify(potential(family, N))
    assert rep.ok
    assert rep.quadruples_checked == N ** 4


def test_wdvv_parallel_matches_serial():
    P = potential("D", 6)
    assert wdvv_verify(P, jobs=3).to_json_obj() == wdvv_verify(P).to_json_obj()


@pytest.mark.parametrize("family,N", [("A", 4), ("D", 5)])
def test_algebra_axioms(family, N):
    P = potential(family, N)
    assert associativity_check(P)
    assert frobenius_property_check(P)
    sc = structure_constants(P)
    # e_1 is the unit
    for a in range(1, N + 1):
        assert sc.product({1: Polynomial.const(1)}, {a: Polynomial.const(1)}) == {a: Polynomial.const(1)}


@pytest.mark.parametrize("family,N", [("A", 6), ("B", 5), ("D", 7)])
def test_euler_quasi_homogeneity(family, N):
    assert euler_check(potential(family, N))


def test_euler_detects_wrong_weight():
    P = potential("A", 3)
    bad = replace(P, F=P.F + t(2) ** 3)
    rep = euler_report(bad)
    assert not rep.ok
    assert rep.bad_monomials == ["t2^3"]

import json
import random
from fractions import Fraction

import pytest

from frobhier.algebra import (
    ONE,
    ZERO,
    Polynomial,
    TruncatedBiseries,
    biseries_exp,
    biseries_log,
    monomial,
    monomial_degree,
    monomial_exponent,
    poly_derive,
    poly_euler_integrate,
    poly_substitute,
)
from frobhier.errors import BadConstantTerm, CapMismatch, ClosednessViolation, NonNilpotentArgument

t = Polynomial.var


# naive reference: {exponent tuple over vars 1..4: Fraction}
def naive_mul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def to_poly(d):
    return Polynomial.from_items((c, {i + 1: x for i, x in enumerate(e) if x}) for e, c in d.items())


def random_naive(rng, terms=4):
    d = {}
    for _ in range(terms):
        e = tuple(rng.randint(0, 2) for _ in range(4))
        d[e] = d.get(e, 0) + Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return {e: c for e, c in d.items() if c}


def test_monomial_packing():
    m = monomial({1: 2, 3: 1, 31: 4})
    assert monomial_degree(m) == 7
    assert monomial_exponent(m, 1) == 2
    assert monomial_exponent(m, 2) == 0
    assert monomial_exponent(m, 31) == 4


def test_mul_matches_naive_reference():
    rng = random.Random(7)
    for _ in range(30):
        a, b = random_naive(rng), random_naive(rng)
        assert to_poly(a) * to_poly(b) == to_poly(naive_mul(a, b))


def test_ring_laws():
    rng = random.Random(11)
    for _ in range(20):
        p, q, r = (to_poly(random_naive(rng)) for _ in range(3))
        assert p * (q + r) == p * q + p * r
        assert (p * q) * r == p * (q * r)
        assert p + q == q + p
        assert p - p == ZERO
        assert p * ONE == p


def test_zero_coefficients_are_dropped():
    p = t(1) + t(2) - t(1)
    assert p == t(2)
    assert len(p) == 1
    assert Polynomial({monomial({1: 1}): 0}).is_zero()


def test_canonical_render():
    p1, p2, p3 = t(1), t(2), t(3)
    p = p3 - p2 * p1 / 2 + p1 ** 3 / 12
    assert p.render("p") == "1/12*p1^3 - 1/2*p1*p2 + p3"
    assert (-t(1) + 3).render() == "-t1 + 3"
    assert ZERO.render() == "0"


def test_render_is_independent_of_construction_order():
    a = t(1) * t(2) + t(3) ** 2 - Fraction(1, 3) * t(1) ** 2
    b = -Fraction(1, 3) * t(1) ** 2 + t(3) ** 2 + t(2) * t(1)
    assert a.render() == b.render()
    assert a.to_json() == b.to_json()
    assert hash(a) == hash(b)


def test_json_round_trip():
    p = Fraction(-7, 3) * t(1) ** 2 * t(4) + 5 * t(2) + Fraction(1, 2)
    obj = json.loads(p.to_json())
    assert obj["terms"][0]["coeff"] == "-7/3"
    assert Polynomial.from_json(p.to_json()) == p


def test_derive():
    p = t(1) ** 3 * t(2) + t(2) ** 2
    assert p.derive(1) == 3 * t(1) ** 2 * t(2)
    assert p.derive(2, 2) == Polynomial.const(2)
    assert poly_derive(p, 3) == ZERO
    with pytest.raises(ValueError):
        poly_derive(p, 0)


def test_substitute():
    p = t(1) ** 2 + t(2)
    out = poly_substitute(p, {1: t(2) + 1, 2: t(3)})
    assert out == t(2) ** 2 + 2 * t(2) + 1 + t(3)
    # untouched variables stay
    assert p.substitute({2: Polynomial.const(0)}) == t(1) ** 2


def test_euler_integrate_recovers_potential():
    F = t(1) ** 2 * t(3) / 2 + t(1) * t(2) ** 2 / 2 + t(3) ** 5 / 60 - t(2) ** 2 * t(3) ** 2 / 4
    grad = {a: F.derive(a) for a in (1, 2, 3)}
    assert poly_euler_integrate(grad) == F


def test_euler_integrate_detects_non_closed():
    with pytest.raises(ClosednessViolation) as e:
        poly_euler_integrate({1: t(2), 2: 2 * t(1)})
    assert (e.value.alpha, e.value.beta) == (1, 2)


def test_euler_integrate_rejects_constant():
    with pytest.raises(ValueError):
        poly_euler_integrate({1: t(1) + 1})


def test_biseries_truncation_and_product():
    x = TruncatedBiseries(3, {(1, 0): 1, (0, 1): 1})
    sq = x * x
    assert sq.coefficient(1, 1) == Polynomial.const(2)
    cube = sq * x
    assert cube.coefficient(2, 1) == Polynomial.const(3)
    assert not (cube * x)  # degree 4 exceeds the cap


def test_biseries_exp_log_inverse():
    x = TruncatedBiseries(5, {(1, 0): t(1), (0, 1): t(2), (1, 1): Fraction(1, 3)})
    assert biseries_log(biseries_exp(x)) == x
    y = TruncatedBiseries.one(5) + x
    assert biseries_exp(biseries_log(y)) == y


def test_biseries_exp_of_single_variable():
    e = TruncatedBiseries.term(4, 1, 0).exp()
    for k in range(5):
        assert e.coefficient(k, 0) == Polynomial.const(Fraction(1, [1, 1, 2, 6, 24][k]))


def test_biseries_errors():
    with pytest.raises(NonNilpotentArgument):
        TruncatedBiseries.one(3).exp()
    with pytest.raises(BadConstantTerm):
        TruncatedBiseries(3, {(0, 0): 2}).log()
    with pytest.raises(CapMismatch):
        TruncatedBiseries.one(3) + TruncatedBiseries.one(4)


def test_leibniz_and_substitution_homomorphism():
    rng = random.Random(5)
    for _ in range(20):
        p, q = to_poly(random_naive(rng)), to_poly(random_naive(rng))
        k = rng.randint(1, 4)
        assert (p * q).derive(k) == p.derive(k) * q + p * q.derive(k)
        images = {i: to_poly(random_naive(rng, 2)) for i in (1, 3)}
        assert (p * q).substitute(images) == p.substitute(images) * q.substitute(images)


def test_euler_integrate_then_derive():
    rng = random.Random(9)
    for _ in range(10):
        F = to_poly({e: c for e, c in random_naive(rng, 5).items() if sum(e) >= 2})
        grad = {a: F.derive(a) for a in range(1, 5)}
        G = poly_euler_integrate(grad)
        assert all(G.derive(a) == grad[a] for a in grad)


def random_series(rng, cap, constant=None):
    coeffs = {}
    for _ in range(4):
        a, b = rng.randint(0, 2), rng.randint(0, 2)
        if (a, b) != (0, 0):
            coeffs[(a, b)] = Fraction(rng.randint(-3, 3), rng.randint(1, 3)) * t(rng.randint(1, 2))
    if constant is not None:
        coeffs[(0, 0)] = constant
    return TruncatedBiseries(cap, coeffs)


def test_biseries_ring_axioms():
    rng = random.Random(3)
    for _ in range(10):
        x, y, z = (random_series(rng, 4, rng.randint(0, 2)) for _ in range(3))
        assert x * y == y * x
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z


def test_cap_overflow_is_killed():
    assert not (TruncatedBiseries.term(3, 1, 0) * TruncatedBiseries.term(3, 0, 3))
    assert TruncatedBiseries.term(3, 1, 1).exp() == TruncatedBiseries(3, {(0, 0): 1, (1, 1): 1})


@pytest.mark.parametrize("cap", range(1, 13))
def test_exp_log_inverse_every_cap(cap):
    rng = random.Random(cap)
    x = random_series(rng, cap)
    assert x.exp().log() == x
    y = random_series(rng, cap, 1)
    assert y.log().exp() == y

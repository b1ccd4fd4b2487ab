"""Flat-coordinate potentials F_{A_N}, F_{B_N}, F_{D_N}.

Every potential is produced the same way: write the gradient dF/dt_a as a
polynomial psi-function in the unfolding coordinates v, substitute the
closed-form inverse map v(t), and integrate the (closed) gradient by dividing
each monomial by its degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterator

from .algebra import ZERO, Polynomial, monomial, poly_euler_integrate
from .errors import InvalidDimension

FAMILIES = ("A", "B", "D")
N_MIN = {"A": 1, "B": 2, "D": 4}


def check_dimension(family: str, N: int) -> None:
    if family not in N_MIN:
        raise InvalidDimension(f"unknown family {family!r}")
    if not isinstance(N, int) or N < N_MIN[family]:
        raise InvalidDimension(f"{family}_N needs N >= {N_MIN[family]}, got {N}")


def involution(family: str, N: int, a: int) -> int:
    """The index paired with ``a`` by the antidiagonal metric."""
    if family == "D":
        return N if a == N else N - a
    return N + 1 - a


def euler_weights(family: str, N: int) -> tuple[tuple[Fraction, ...], Fraction]:
    """``(d_1..d_N, delta)`` for the Euler field of the given family."""
    if family == "A":
        return tuple(Fraction(N + 2 - a, N + 1) for a in range(1, N + 1)), Fraction(N - 1, N + 1)
    if family == "B":
        return tuple(Fraction(N + 1 - a, N) for a in range(1, N + 1)), Fraction(N - 1, N)
    if family == "D":
        d = [Fraction(N - a, N - 1) for a in range(1, N)] + [Fraction(N, 2 * (N - 1))]
        return tuple(d), Fraction(N - 2, N - 1)
    raise InvalidDimension(f"unknown family {family!r}")


def expected_eta(family: str, N: int) -> tuple[tuple[Fraction, ...], ...]:
    rows = []
    for a in range(1, N + 1):
        rows.append(tuple(Fraction(int(b == involution(family, N, a))) for b in range(1, N + 1)))
    return tuple(rows)


@dataclass(frozen=True)
class CoordinateMap:
    family: str
    N: int
    images: dict[int, Polynomial]

    def __getitem__(self, a: int) -> Polynomial:
        return self.images[a]


@dataclass(frozen=True)
class FlatPotential:
    family: str
    N: int
    F: Polynomial
    eta: tuple[tuple[Fraction, ...], ...]
    weights: tuple[Fraction, ...]
    delta: Fraction
    gradient: dict[int, Polynomial] = field(default_factory=dict, compare=False, repr=False)

    def bar(self, a: int) -> int:
        return involution(self.family, self.N, a)

    def to_json_obj(self) -> dict:
        return {
            "family": self.family,
            "N": self.N,
            "F": self.F.to_json_obj("t"),
            "eta": [[f"{x.numerator}/{x.denominator}" for x in row] for row in self.eta],
            "weights": [f"{w.numerator}/{w.denominator}" for w in self.weights],
            "delta": f"{self.delta.numerator}/{self.delta.denominator}",
        }


# --------------------------------------------------------------------------
# lattice enumeration
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def weighted_solutions(weights: tuple[int, ...], total: int) -> tuple[tuple[int, ...], ...]:
    """All ``alpha >= 0`` with ``sum(weights[i] * alpha[i]) == total``.

    A weight of 0 marks a slot forced to ``alpha[i] = 0``.
    """
    out: list[tuple[int, ...]] = []
    n = len(weights)
    cur = [0] * n

    def rec(i: int, rem: int) -> None:
        if i == n:
            if rem == 0:
                out.append(tuple(cur))
            return
        w = weights[i]
        if w == 0:
            cur[i] = 0
            rec(i + 1, rem)
            return
        for a in range(rem // w + 1):
            cur[i] = a
            rec(i + 1, rem - a * w)
        cur[i] = 0

    if total >= 0:
        rec(0, total)
    return tuple(out)


def _exp_monomial(alpha: tuple[int, ...]) -> tuple[int, Fraction]:
    """Packed monomial ``prod x_k^{alpha_k}`` (1-based) and ``1 / prod alpha_k!``."""
    m = monomial({k + 1: a for k, a in enumerate(alpha) if a})
    den = 1
    for a in alpha:
        den *= factorial(a)
    return m, Fraction(1, den)


def _rising(first: int, step: int, count: int) -> int:
    """``prod_{k=0}^{count-1} (first + k*step)``; empty product is 1."""
    p = 1
    for k in range(count):
        p *= first + k * step
    return p


def _mask(n: int, allowed: frozenset | None) -> Iterator[bool]:
    for k in range(1, n + 1):
        yield allowed is None or k in allowed


# --------------------------------------------------------------------------
# A_N
# --------------------------------------------------------------------------

def _a_weights(N: int, allowed: frozenset | None = None) -> tuple[int, ...]:
    return tuple((N + 2 - k) if ok else 0 for k, ok in zip(range(1, N + 1), _mask(N, allowed)))


def a_coordinate_map(N: int, allowed: frozenset | None = None) -> CoordinateMap:
    """Unfolding coordinates ``v_g(t)`` of A_N.

    ``allowed`` restricts to monomials in the listed t-indices only (the rest
    are set to zero); it is used by the B_N construction.
    """
    check_dimension("A", N)
    weights = _a_weights(N, allowed)
    images = {}
    for g in range(1, N + 1):
        terms = {}
        for alpha in weighted_solutions(weights, N + 2 - g):
            s = sum(alpha)
            m, inv = _exp_monomial(alpha)
            terms[m] = Fraction(factorial(s + g - 2), factorial(g - 1)) * inv
        images[g] = Polynomial(terms)
    return CoordinateMap("A", N, images)


def a_psi(N: int, r: int, g: int, allowed: frozenset | None = None) -> Polynomial:
    """``psi^{(r)}_g`` of A_N as a polynomial in v (variables indexed 1..N)."""
    check_dimension("A", N)
    if not 1 <= g <= N:
        raise ValueError(f"gamma must be in 1..{N}")
    weights = _a_weights(N, allowed)
    terms = {}
    for alpha in weighted_solutions(weights, r * (N + 1) + 1 - g):
        s = sum(alpha)
        if s - r < 0:
            continue
        c = (-1) ** (s - r) * _rising(g, N + 1, s - r)
        m, inv = _exp_monomial(alpha)
        terms[m] = c * inv
    return Polynomial(terms)


def a_psi2(N: int, g: int) -> Polynomial:
    return a_psi(N, 2, g)


def _a_gradient(N: int, indices, allowed: frozenset | None = None) -> dict[int, Polynomial]:
    v = a_coordinate_map(N, allowed).images
    return {a: a_psi(N, 2, N + 1 - a, allowed).substitute(v) for a in indices}


@lru_cache(maxsize=None)
def a_potential(N: int) -> FlatPotential:
    check_dimension("A", N)
    grad = _a_gradient(N, range(1, N + 1))
    F = poly_euler_integrate(grad)
    weights, delta = euler_weights("A", N)
    return FlatPotential("A", N, F, expected_eta("A", N), weights, delta, grad)


# --------------------------------------------------------------------------
# B_N
# --------------------------------------------------------------------------

def _odd_to_b(N: int) -> dict[int, int]:
    return {2 * k - 1: k for k in range(1, N + 1)}


def b_potential_from_a(N: int) -> FlatPotential:
    """F_B obtained literally: build F_{A_{2N-1}}, kill even slots, relabel odd slots."""
    check_dimension("B", N)
    A = a_potential(2 * N - 1)
    F = A.F.substitute({2 * k: ZERO for k in range(1, N)}).relabel(_odd_to_b(N))
    weights, delta = euler_weights("B", N)
    return FlatPotential("B", N, F, expected_eta("B", N), weights, delta)


@lru_cache(maxsize=None)
def b_potential(N: int) -> FlatPotential:
    """F_{B_N}(t_1..t_N) = F_{A_{2N-1}}(t_1, 0, t_2, 0, ..., t_N).

    Restriction commutes with the whole A pipeline, so only odd-slot
    monomials are ever generated: with even t's zero the even v's vanish by
    weight parity, and only odd gradient components are needed.
    """
    check_dimension("B", N)
    M = 2 * N - 1
    odd = frozenset(range(1, M + 1, 2))
    grad_a = _a_gradient(M, sorted(odd), odd)
    relabel = _odd_to_b(N)
    grad = {relabel[a]: g.relabel(relabel) for a, g in grad_a.items()}
    F = poly_euler_integrate(grad)
    weights, delta = euler_weights("B", N)
    return FlatPotential("B", N, F, expected_eta("B", N), weights, delta, grad)


# --------------------------------------------------------------------------
# D_N
# --------------------------------------------------------------------------

def _d_weights(N: int) -> tuple[int, ...]:
    return tuple(N - k for k in range(1, N))


def d_coordinate_map(N: int) -> CoordinateMap:
    check_dimension("D", N)
    weights = _d_weights(N)
    images = {}
    for b in range(1, N):
        terms = {}
        for alpha in weighted_solutions(weights, N - b):
            s = sum(alpha)
            m, inv = _exp_monomial(alpha)
            terms[m] = Fraction(factorial(s + 2 * b - 3), factorial(2 * b - 2)) * inv
        images[b] = Polynomial(terms)
    images[N] = Polynomial.var(N)
    return CoordinateMap("D", N, images)


def d_psi1(N: int, g: int) -> Polynomial:
    """``psi^{(1)}_g`` of D_N in v; composing with v(t) returns t_g."""
    check_dimension("D", N)
    if g == N:
        return Polynomial.var(N)
    terms = {}
    for alpha in weighted_solutions(_d_weights(N), N - g):
        s = sum(alpha)
        c = (-1) ** (s - 1) * _rising(2 * g - 1, 2 * (N - 1), s - 1)
        m, inv = _exp_monomial(alpha)
        terms[m] = c * inv
    return Polynomial(terms)


def d_psi2_parts(N: int, g: int) -> tuple[Polynomial, Polynomial]:
    """``(first, second)`` with ``psi^{(2)}_g = first + second * v_N^2 / 2`` for g <= N-1.

    The coefficient of ``v_N^2/2`` uses A^{(2)} without an additional halving
    for g <= N-2 and the value 1 for g = N-1; this is the normalization that
    makes the gradient closed; halving it once more breaks closedness at the
    pairs ``(a, N)``.
    """
    check_dimension("D", N)
    if not 1 <= g <= N - 1:
        raise ValueError(f"gamma must be in 1..{N - 1}")
    weights = _d_weights(N)
    first = {}
    for alpha in weighted_solutions(weights, 2 * (N - 1) + 1 - g):
        s = sum(alpha)
        c = (-1) ** (s - 2) * _rising(2 * g - 1, 2 * (N - 1), s - 2)
        m, inv = _exp_monomial(alpha)
        first[m] = c * inv
    second = {}
    for alpha in weighted_solutions(weights, N - 1 - g):
        s = sum(alpha)
        if g == N - 1:
            c = 1
        else:
            c = (-1) ** (s - 1) * _rising(2 * g - 1, 2 * (N - 1), s - 1)
        m, inv = _exp_monomial(alpha)
        second[m] = c * inv
    return Polynomial(first), Polynomial(second)


def d_psi2(N: int, g: int) -> Polynomial:
    if g == N:
        return Polynomial.var(1) * Polynomial.var(N)
    first, second = d_psi2_parts(N, g)
    return first + second * Polynomial.var(N, 2) * Fraction(1, 2)


@lru_cache(maxsize=None)
def d_gradient_parts(N: int) -> dict[int, tuple[Polynomial, Polynomial]]:
    """``{a: (calA_a, calB_a)}`` with ``dF/dt_a = calA_a + calB_a * t_N^2`` for a <= N-1.

    Both parts are free of t_N.
    """
    v = d_coordinate_map(N).images
    out = {}
    for a in range(1, N):
        full = d_psi2(N, N - a).substitute(v)
        parts = full.split_by_degree_in(N)
        if set(parts) - {0, 2}:
            raise AssertionError(f"D_{N} gradient component {a} has unexpected t_N powers {sorted(parts)}")
        out[a] = (parts.get(0, ZERO), parts.get(2, ZERO))
    return out


@lru_cache(maxsize=None)
def d_potential(N: int) -> FlatPotential:
    check_dimension("D", N)
    parts = d_gradient_parts(N)
    tN2 = Polynomial.var(N, 2)
    grad = {a: A + B * tN2 for a, (A, B) in parts.items()}
    grad[N] = d_coordinate_map(N).images[1] * Polynomial.var(N)
    F = poly_euler_integrate(grad)
    weights, delta = euler_weights("D", N)
    return FlatPotential("D", N, F, expected_eta("D", N), weights, delta, grad)


def b_via_d_check(N: int) -> bool:
    """F_{B_N}(t_1..t_N) == F_{D_{N+1}}(t_1..t_N, 0)."""
    if N < 3:
        raise InvalidDimension("b_via_d_check needs N >= 3")
    restricted = d_potential(N + 1).F.substitute({N + 1: ZERO})
    return restricted == b_potential(N).F


def potential(family: str, N: int) -> FlatPotential:
    check_dimension(family, N)
    return {"A": a_potential, "B": b_potential, "D": d_potential}[family](N)


__all__ = [
    "CoordinateMap",
    "FlatPotential",
    "FAMILIES",
    "a_coordinate_map",
    "a_psi",
    "a_psi2",
    "a_potential",
    "b_potential",
    "b_potential_from_a",
    "b_via_d_check",
    "check_dimension",
    "d_coordinate_map",
    "d_gradient_parts",
    "d_psi1",
    "d_psi2",
    "d_psi2_parts",
    "d_potential",
    "euler_weights",
    "expected_eta",
    "involution",
    "potential",
    "weighted_solutions",
]

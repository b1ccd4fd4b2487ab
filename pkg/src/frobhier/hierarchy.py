"""Stabilized coefficient tables R, hierarchy equations and their compatibility.

Abstract hierarchy variables share one index space: ``p_k`` (``= d_1 d_k f``)
is variable ``k``, ``q`` (``= d_0 d_1 f``, D family only) is variable 0.  For
the jet-space compatibility check a few more variables are used, see
:data:`JET_U_OFFSET` and :data:`JET_R`.

Normalization: the D-family equations are solved by ``f = 2 F_{D_N}`` (the
scale used by the printed D flows), the A and B ones by ``f = F_N``.  A
``scale`` argument selects any other multiple ``f = scale * F_N``; an
equation with ``m`` factors of ``p`` then picks up ``scale**(1-m)`` (flow 1)
or ``scale**(-m)`` (flow 2, where the extra ``q`` absorbs one power).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .algebra import ZERO, Polynomial, monomial
from .errors import InvalidDimension, OutOfStabilizationRange
from .potentials import check_dimension, d_coordinate_map, d_gradient_parts, involution, potential

Q = 0
JET_R = 31
JET_U_OFFSET = 32
MAX_P_INDEX = JET_R - 1

DEFAULT_SCALE = {"A": Fraction(1), "B": Fraction(1), "D": Fraction(2)}
VAR_NAMES = {Q: "q", JET_R: "r"}


def var_names(max_index: int = MAX_P_INDEX) -> dict[int, str]:
    names = dict(VAR_NAMES)
    for k in range(1, max_index + 1):
        names[k] = f"p{k}"
        names[JET_U_OFFSET + k] = f"u{k}"
    return names


def render_rhs(p: Polynomial) -> str:
    return p.render(prefix="x", names=var_names())


Gammas = tuple[int, ...]


def orbit_size(gammas: Gammas) -> int:
    """Number of distinct orderings of the multiset ``gammas``."""
    n = factorial(len(gammas))
    for mult in Counter(gammas).values():
        n //= factorial(mult)
    return n


# --------------------------------------------------------------------------
# admissible ranges and default extraction dimensions
# --------------------------------------------------------------------------

def _flow2(family: str, a: int) -> bool:
    return family == "D" and a == 0


def in_range(family: str, a: int, b: int, N: int) -> bool:
    """Whether ``d_a d_b F_N`` is within the stabilization range at dimension N."""
    if _flow2(family, a):
        return 1 <= b <= N - 2
    if a < 1 or b < 1:
        return False
    if family in ("A", "B"):
        return a + b <= N + 1
    return a + b <= N


def default_dimension(family: str, a: int, b: int) -> int:
    """Smallest admissible dimension for extracting the (a, b) coefficients."""
    if _flow2(family, a):
        return max(4, b + 2)
    if family == "A":
        return max(1, a + b - 1)
    if family == "B":
        return max(2, a + b - 1)
    if family == "D":
        return max(4, a + b)
    raise InvalidDimension(f"unknown family {family!r}")


def _require(family: str, a: int, b: int, N: int) -> None:
    check_dimension(family, N)
    if not in_range(family, a, b, N):
        raise OutOfStabilizationRange(f"({a},{b}) is outside the stabilization range of {family}_{N}")


# --------------------------------------------------------------------------
# relabelled second derivatives
# --------------------------------------------------------------------------

def s_relabel(family: str, N: int) -> dict[int, int]:
    """``t_g -> s_{bar g}``; for D, ``t_N`` goes to the q slot."""
    m = {g: involution(family, N, g) for g in range(1, N + 1)}
    if family == "D":
        m[N] = Q
    return m


@lru_cache(maxsize=None)
def second_derivative_s(family: str, a: int, b: int, N: int) -> Polynomial:
    """``d_a d_b F_N`` written in the relabelled variables ``s_g = t_{bar g}``.

    For the D flow-2 case ``a == 0`` this is ``d_b d_N F_{D_N}``.
    """
    F = potential(family, N).F
    if _flow2(family, a):
        P = F.derive(b).derive(N)
    else:
        P = F.derive(a).derive(b)
    return P.relabel(s_relabel(family, N))


def _coefficient_items(P: Polynomial) -> list[tuple[Gammas, Fraction]]:
    out = []
    for items, c in P.terms():
        gammas: list[int] = []
        for k, e in items:
            gammas.extend([k] * e)
        out.append((tuple(sorted(gammas)), c))
    return out


def extract_R(family: str, a: int, b: int, N: int | None = None) -> list[tuple[Gammas, Fraction]]:
    """R coefficients of ``d_a d_b`` at dimension N, sorted by ``gammas``.

    ``R`` is ``1/m!`` times the ``(m+2)``-nd derivative at zero, i.e. the
    coefficient of the monomial divided by its permutation orbit.  With
    ``family == "D"`` and ``a == 0`` the flow-2 table ``R^{(D,2)}_{b; gammas}``
    is returned (coefficients of ``d_b v_1``).
    """
    if N is None:
        N = default_dimension(family, a, b)
    _require(family, a, b, N)
    P = second_derivative_s(family, a, b, N)
    if family == "D":
        if _flow2(family, a):
            # d_b d_N F = t_N * d_b v_1 with d_b v_1 free of t_N
            parts = P.split_by_degree_in(Q)
            if set(parts) != {1} and P:
                raise AssertionError(f"D_{N} d_{b} d_N F is not linear in t_N")
            P = parts.get(1, ZERO)
        elif P.degree_in(Q) > 0:
            raise AssertionError(f"D_{N} d_{a} d_{b} F depends on t_N inside the stabilization range")
    out = []
    for gammas, c in _coefficient_items(P):
        out.append((gammas, c / orbit_size(gammas)))
    return sorted(out)


# --------------------------------------------------------------------------
# tables
# --------------------------------------------------------------------------

@dataclass
class RTable:
    """Coefficient table; keys are ``(a, b, gammas)``, D flow 2 uses ``(b, gammas)``."""

    family: str
    entries: dict[tuple, Fraction] = field(default_factory=dict)
    provenance: dict[tuple, int] = field(default_factory=dict)

    def get(self, key: tuple) -> Fraction:
        return self.entries.get(key, Fraction(0))

    def sorted_items(self) -> list[tuple[tuple, Fraction]]:
        return sorted(self.entries.items())

    def to_json_obj(self) -> dict:
        rows = []
        for key, val in self.sorted_items():
            row = {"value": f"{val.numerator}/{val.denominator}", "N": self.provenance[key]}
            if self.family == "D2":
                row.update(alpha=key[0], gammas=list(key[1]))
            else:
                row.update(alpha=key[0], beta=key[1], gammas=list(key[2]))
            rows.append(row)
        return {"family": self.family, "entries": rows}


def build_rtable(family: str, max_order: int) -> RTable:
    """All nonzero entries with ``a <= b`` and ``a + b <= max_order`` (``b <= max_order`` for D flow 2).

    For family D this is the flow-1 table; use ``family="D2"`` for flow 2.
    """
    if family == "D2":
        table = RTable("D2")
        for b in range(1, max_order + 1):
            N = default_dimension("D", 0, b)
            for gammas, val in extract_R("D", 0, b, N):
                table.entries[(b, gammas)] = val
                table.provenance[(b, gammas)] = N
        return table
    table = RTable(family)
    for a in range(1, max_order):
        for b in range(a, max_order - a + 1):
            N = default_dimension(family, a, b)
            for gammas, val in extract_R(family, a, b, N):
                table.entries[(a, b, gammas)] = val
                table.provenance[(a, b, gammas)] = N
    return table


def stabilization_verify(family: str, N1: int, N2: int, a: int, b: int) -> bool:
    """Compare ``d_a d_b F`` at two dimensions after the relabelling ``s_g = t_{bar g}``.

    A/B need ``a + b <= N1 + 1``.  D needs ``a + b < N1`` and additionally
    checks the two underlying statements separately: ``d_b v_1`` and
    ``d_b calA_a`` stabilize.
    """
    if N2 <= N1:
        raise ValueError("need N2 > N1")
    check_dimension(family, N1)
    if family in ("A", "B"):
        if not (a >= 1 and b >= 1 and a + b <= N1 + 1):
            raise OutOfStabilizationRange(f"({a},{b}) outside the {family}_{N1} range")
        return second_derivative_s(family, a, b, N1) == second_derivative_s(family, a, b, N2)
    if not (a >= 1 and b >= 1 and a + b < N1):
        raise OutOfStabilizationRange(f"({a},{b}) outside the D_{N1} range")

    def v1_part(N: int, x: int) -> Polynomial:
        return d_coordinate_map(N).images[1].derive(x).relabel(s_relabel("D", N))

    def calA_part(N: int) -> Polynomial:
        return d_gradient_parts(N)[a][0].derive(b).relabel(s_relabel("D", N))

    return (
        v1_part(N1, a) == v1_part(N2, a)
        and v1_part(N1, b) == v1_part(N2, b)
        and calA_part(N1) == calA_part(N2)
        and second_derivative_s("D", a, b, N1) == second_derivative_s("D", a, b, N2)
    )


# --------------------------------------------------------------------------
# equations
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class HierarchyEquation:
    family: str
    lhs: tuple[int, int]
    rhs: Polynomial
    scale: Fraction = Fraction(1)

    def lhs_text(self) -> str:
        return f"d{self.lhs[0]} d{self.lhs[1]} f"

    def render(self) -> str:
        return render_rhs(self.rhs)

    def cofactor(self) -> Polynomial:
        """The rhs with the common flow-2 factor ``q = d_0 d_1 f`` divided out."""
        return self.rhs.derive(Q) if self.lhs[0] == 0 else self.rhs

    def to_json_obj(self) -> dict:
        return {
            "family": self.family,
            "lhs": list(self.lhs),
            "scale": f"{self.scale.numerator}/{self.scale.denominator}",
            "rhs": self.rhs.to_json_obj("p"),
            "text": self.render(),
            "cofactor_text": render_rhs(self.cofactor()),
        }


def _p_monomial(gammas: Gammas) -> int:
    return monomial(Counter(gammas))


def assemble_equation(family: str, a: int, b: int, scale: Fraction | int | None = None,
                      N: int | None = None) -> HierarchyEquation:
    """``d_a d_b f = sum_gammas orbit(gammas) R_{a,b;gammas} prod p_gamma``.

    For D, ``a == 0`` gives the flow-2 equation ``d_0 d_b f = q * (...)``.
    """
    if family not in DEFAULT_SCALE:
        raise InvalidDimension(f"unknown family {family!r}")
    s = Fraction(DEFAULT_SCALE[family] if scale is None else scale)
    if s == 0:
        raise ValueError("scale must be nonzero")
    flow2 = _flow2(family, a)
    terms: dict[int, Fraction] = {}
    for gammas, val in extract_R(family, a, b, N):
        m = len(gammas)
        factor = s ** (-m) if flow2 else s ** (1 - m)
        mono = _p_monomial(gammas)
        if flow2:
            mono += monomial({Q: 1})
        terms[mono] = orbit_size(gammas) * val * factor
    lhs = (0, b) if flow2 else (a, b)
    return HierarchyEquation(family, lhs, Polynomial(terms), s)


def instantiate(rhs: Polynomial, family: str, N: int, scale: Fraction) -> Polynomial:
    """Substitute ``p_k := scale * d_1 d_k F_N`` and ``q := scale * d_1 d_N F_N`` (D)."""
    images = {}
    for k in {x for x in rhs.variables() if x != Q}:
        if k > N:
            raise OutOfStabilizationRange(f"p_{k} has no counterpart in dimension {N}")
        images[k] = Polynomial.var(involution(family, N, k)) * scale
    if Q in rhs.variables():
        images[Q] = Polynomial.var(N) * scale
    return rhs.substitute(images)


def round_trip_check(family: str, a: int, b: int, N: int, scale: Fraction | int | None = None) -> bool:
    """``f = scale * F_N`` solves the assembled (a, b) equation exactly."""
    _require(family, a, b, N)
    eq = assemble_equation(family, a, b, scale)
    F = potential(family, N).F
    lhs = F.derive(b).derive(N) if _flow2(family, a) else F.derive(a).derive(b)
    return instantiate(eq.rhs, family, N, eq.scale) == lhs * eq.scale


def in_range_lhs(family: str, N: int) -> list[tuple[int, int]]:
    """All ``(a, b)`` with ``a <= b`` in range at N; D also lists ``(0, b)`` flow-2 entries."""
    out = []
    for a in range(1, N + 1):
        for b in range(a, N + 1):
            if in_range(family, a, b, N):
                out.append((a, b))
    if family == "D":
        out.extend((0, b) for b in range(1, N - 1))
    return out


# --------------------------------------------------------------------------
# compatibility
# --------------------------------------------------------------------------

def _u(j: int) -> Polynomial:
    return Polynomial.var(JET_U_OFFSET + j)


class _Jets:
    """Equations and the jet derivatives ``d_g p_k`` for one family at one dimension."""

    def __init__(self, family: str, N: int, scale: Fraction):
        self.family, self.N, self.scale = family, N, scale
        self._eq: dict[tuple[int, int], Polynomial] = {}

    def rhs(self, a: int, b: int) -> Polynomial:
        key = (a, b) if _flow2(self.family, a) else (min(a, b), max(a, b))
        if key not in self._eq:
            _require(self.family, key[0], key[1], self.N)
            self._eq[key] = assemble_equation(self.family, key[0], key[1], self.scale).rhs
        return self._eq[key]

    def phi(self, b: int) -> Polynomial:
        """Flow-2 right-hand side with the factor q removed."""
        return self.rhs(0, b).derive(Q)

    def d_p(self, g: int, k: int) -> Polynomial:
        """``d_g p_k = d_1 (d_g d_k f)`` written through ``u_j = d_1 p_j``."""
        eq = self.rhs(g, k)
        return self._d1(eq)

    def _d1(self, poly: Polynomial) -> Polynomial:
        out = ZERO
        for j in poly.variables():
            if j == Q:
                continue
            out = out + poly.derive(j) * _u(j)
        return out

    def d_q(self, b: int) -> Polynomial:
        """``d_b q = d_1 (q phi_b) = r phi_b + q d_1 phi_b``."""
        ph = self.phi(b)
        return Polynomial.var(JET_R) * ph + Polynomial.var(Q) * self._d1(ph)

    def d0_p(self, k: int) -> Polynomial:
        return self.d_q(k)

    def total(self, poly: Polynomial, g: int) -> Polynomial:
        """Total derivative ``d_g`` of a polynomial in p (and q) along the hierarchy."""
        out = ZERO
        for k in poly.variables():
            if k == Q:
                out = out + poly.derive(Q) * self.d_q(g)
            else:
                out = out + poly.derive(k) * self.d_p(g, k)
        return out

    def total0(self, poly: Polynomial) -> Polynomial:
        out = ZERO
        for k in poly.variables():
            if k == Q:
                raise AssertionError("flow-1 right-hand sides must not contain q")
            out = out + poly.derive(k) * self.d0_p(k)
        return out


def compatibility_range(family: str, a: int, b: int, g: int, N: int) -> bool:
    if min(a, b, g) < 1:
        return False
    if family in ("A", "B"):
        return a + b + g <= N + 2
    # flow-2 pieces need every pairwise order below N
    return a + b + g <= N + 1 and max(a + b, a + g, b + g) <= N - 1


def compatibility_check(family: str, a: int, b: int, g: int, N: int,
                        scale: Fraction | int | None = None) -> bool:
    """Cross-derivative consistency of the assembled equations.

    Jet form: with ``u_j = d_1 p_j`` free, ``d_g RHS_{ab} == d_b RHS_{ag}``
    where ``d_g p_k = d_1 RHS_{gk}``.  For D the flow-2 equations are folded
    in as well (``d_b d_0 d_g f`` computed both ways, and ``d_0 RHS_{ab}``
    against ``d_b (q phi_a)``), with ``r = d_1 q`` a further free jet.  The
    same identity is finally instantiated at ``f = scale * F_N``.
    """
    check_dimension(family, N)
    if not compatibility_range(family, a, b, g, N):
        raise OutOfStabilizationRange(f"triple ({a},{b},{g}) outside the {family}_{N} range")
    s = Fraction(DEFAULT_SCALE[family] if scale is None else scale)
    J = _Jets(family, N, s)
    if J.total(J.rhs(a, b), g) != J.total(J.rhs(a, g), b):
        return False
    if family == "D":
        q = Polynomial.var(Q)
        for x, y in ((a, b), (a, g), (b, g)):
            if J.total(q * J.phi(x), y) != J.total(q * J.phi(y), x):
                return False
            if J.total0(J.rhs(x, y)) != J.total(q * J.phi(x), y):
                return False
    lhs = instantiate(J.rhs(a, b), family, N, s).derive(g)
    rhs = instantiate(J.rhs(a, g), family, N, s).derive(b)
    return lhs == rhs


def in_range_triples(family: str, N: int, max_index: int) -> list[tuple[int, int, int]]:
    """Triples ``(a, b, g)`` with ``b <= g`` (the check is symmetric in b, g) inside the range."""
    out = []
    for a in range(1, max_index + 1):
        for b in range(1, max_index + 1):
            for g in range(b, max_index + 1):
                if compatibility_range(family, a, b, g, N):
                    out.append((a, b, g))
    return out


__all__ = [
    "DEFAULT_SCALE",
    "HierarchyEquation",
    "Q",
    "RTable",
    "assemble_equation",
    "build_rtable",
    "compatibility_check",
    "compatibility_range",
    "default_dimension",
    "extract_R",
    "in_range",
    "in_range_lhs",
    "in_range_triples",
    "instantiate",
    "orbit_size",
    "render_rhs",
    "round_trip_check",
    "second_derivative_s",
    "stabilization_verify",
    "var_names",
]

"""Frobenius-manifold axioms for a FlatPotential: metric, product, WDVV, Euler grading."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .algebra import ZERO, Polynomial
from .errors import NonConstantMetric, SingularMetric
from .potentials import FlatPotential


Matrix = tuple[tuple[Fraction, ...], ...]


def invert_matrix(rows: Matrix) -> Matrix:
    """Gauss-Jordan inverse over the rationals."""
    n = len(rows)
    a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            raise SingularMetric("metric is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(r[n:]) for r in a)


@dataclass(frozen=True)
class Metric:
    N: int
    entries: Matrix
    inverse: Matrix

    def __post_init__(self):
        n = self.N
        for i in range(n):
            for j in range(n):
                if self.entries[i][j] != self.entries[j][i]:
                    raise ValueError("metric must be symmetric")


def metric_from_potential(P: FlatPotential) -> Metric:
    d1 = P.F.derive(1)
    rows = []
    for a in range(1, P.N + 1):
        da = d1.derive(a)
        row = []
        for b in range(1, P.N + 1):
            e = da.derive(b)
            if not e.is_constant():
                raise NonConstantMetric(f"d1 d{a} d{b} F = {e.render()} is not constant")
            row.append(e.constant_term())
        rows.append(tuple(row))
    entries = tuple(rows)
    return Metric(P.N, entries, invert_matrix(entries))


def third_derivatives(P: FlatPotential) -> dict[tuple[int, int, int], Polynomial]:
    """``{(a, b, c): d_a d_b d_c F}`` for sorted ``a <= b <= c``."""
    out = {}
    N = P.N
    for a in range(1, N + 1):
        fa = P.F.derive(a)
        for b in range(a, N + 1):
            fab = fa.derive(b)
            for c in range(b, N + 1):
                out[(a, b, c)] = fab.derive(c)
    return out


def _third(c3, a, b, c):
    return c3[tuple(sorted((a, b, c)))]


@dataclass(frozen=True)
class StructureConstants:
    N: int
    c: dict[tuple[int, int, int], Polynomial] = field(repr=False)

    def __call__(self, a: int, b: int, g: int) -> Polynomial:
        """``c_{ab}^g``."""
        return self.c.get((a, b, g), ZERO)

    def product(self, x: dict[int, Polynomial], y: dict[int, Polynomial]) -> dict[int, Polynomial]:
        """Product of vector fields given as ``{index: component}``."""
        out: dict[int, Polynomial] = {}
        for a, xa in x.items():
            for b, yb in y.items():
                for g in range(1, self.N + 1):
                    cab = self(a, b, g)
                    if cab:
                        out[g] = out.get(g, ZERO) + xa * yb * cab
        return {k: v for k, v in out.items() if v}


def structure_constants(P: FlatPotential, metric: Metric | None = None) -> StructureConstants:
    metric = metric or metric_from_potential(P)
    c3 = third_derivatives(P)
    N = P.N
    c = {}
    for a in range(1, N + 1):
        for b in range(1, N + 1):
            for g in range(1, N + 1):
                acc = ZERO
                for d in range(1, N + 1):
                    w = metric.inverse[d - 1][g - 1]
                    if w:
                        acc = acc + _third(c3, a, b, d) * w
                if acc:
                    c[(a, b, g)] = acc
    return StructureConstants(N, c)


def _contract(c3, inv, N, a, b, g, s) -> Polynomial:
    """``sum_{mu,nu} F_{a b mu} eta^{mu nu} F_{nu g s}``."""
    out = ZERO
    for mu in range(1, N + 1):
        left = _third(c3, a, b, mu)
        if not left:
            continue
        for nu in range(1, N + 1):
            w = inv[mu - 1][nu - 1]
            if not w:
                continue
            right = _third(c3, nu, g, s)
            if right:
                out = out + (left * right) * w
    return out


def wdvv_residual(P: FlatPotential, a: int, b: int, g: int, s: int) -> Polynomial:
    """LHS minus RHS of the WDVV equation for the quadruple ``(a, b, g, s)``.

    The equation reads ``F_{ab mu} eta^{mu nu} F_{nu g s} = F_{a g mu} eta^{mu nu} F_{nu b s}``.
    """
    for x in (a, b, g, s):
        if not 1 <= x <= P.N:
            raise ValueError(f"index {x} out of range 1..{P.N}")
    metric = metric_from_potential(P)
    c3 = third_derivatives(P)
    return _contract(c3, metric.inverse, P.N, a, b, g, s) - _contract(c3, metric.inverse, P.N, a, g, b, s)


def _pair(x, y):
    return (x, y) if x <= y else (y, x)


def _pairing_key(a, b, g, s):
    """Canonical key of ``X(ab|gs)``, which is symmetric under a<->b, g<->s and the pair swap."""
    p, q = _pair(a, b), _pair(g, s)
    return (p, q) if p <= q else (q, p)


def _contract_batch(args):
    c3, inv, N, keys = args
    return [(k, _contract(c3, inv, N, k[0][0], k[0][1], k[1][0], k[1][1])) for k in keys]


@dataclass
class WDVVReport:
    family: str
    N: int
    quadruples_checked: int
    failures: list[dict]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json_obj(self) -> dict:
        return {
            "family": self.family,
            "N": self.N,
            "quadruples_checked": self.quadruples_checked,
            "failures": self.failures,
        }


def wdvv_verify(P: FlatPotential, jobs: int = 1) -> WDVVReport:
    """Check WDVV on every ordered quadruple.

    The contraction ``X(ab|gs)`` is computed once per symmetry class (a<->b,
    g<->s, pair swap); each ordered quadruple's residual is then a difference
    of two cached values.  With ``jobs > 1`` the classes are partitioned
    across worker processes; the result does not depend on the partition.
    """
    metric = metric_from_potential(P)
    c3 = third_derivatives(P)
    N = P.N
    keys = sorted({_pairing_key(*q) for q in product(range(1, N + 1), repeat=4)})
    if jobs > 1 and len(keys) > 1:
        chunks = [keys[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = ex.map(_contract_batch, [(c3, metric.inverse, N, ch) for ch in chunks if ch])
            X = dict(kv for part in results for kv in part)
    else:
        X = dict(_contract_batch((c3, metric.inverse, N, keys)))
    failures = []
    count = 0
    for a, b, g, s in product(range(1, N + 1), repeat=4):
        count += 1
        lhs = X[_pairing_key(a, b, g, s)]
        rhs = X[_pairing_key(a, g, b, s)]
        if lhs != rhs:
            failures.append({"quadruple": [a, b, g, s], "residual": (lhs - rhs).render()})
    return WDVVReport(P.family, N, count, failures)


def associativity_check(P: FlatPotential) -> bool:
    """``(e_a o e_b) o e_g == e_a o (e_b o e_g)`` via the structure constants."""
    sc = structure_constants(P)
    N = P.N
    one = Polynomial.const(1)
    for a, b, g in product(range(1, N + 1), repeat=3):
        ea, eb, eg = {a: one}, {b: one}, {g: one}
        if sc.product(sc.product(ea, eb), eg) != sc.product(ea, sc.product(eb, eg)):
            return False
    return True


def frobenius_property_check(P: FlatPotential) -> bool:
    """``eta(e_a o e_b, e_g) == eta(e_a, e_b o e_g)`` on all basis triples."""
    metric = metric_from_potential(P)
    sc = structure_constants(P, metric)
    N = P.N

    def eta_pair(vec: dict[int, Polynomial], k: int, left: bool) -> Polynomial:
        acc = ZERO
        for i, comp in vec.items():
            w = metric.entries[i - 1][k - 1] if left else metric.entries[k - 1][i - 1]
            if w:
                acc = acc + comp * w
        return acc

    for a, b, g in product(range(1, N + 1), repeat=3):
        ab = {k: sc(a, b, k) for k in range(1, N + 1) if sc(a, b, k)}
        bg = {k: sc(b, g, k) for k in range(1, N + 1) if sc(b, g, k)}
        if eta_pair(ab, g, True) != eta_pair(bg, a, False):
            return False
    return True


def monomial_weight(items, weights) -> Fraction:
    return sum((weights[k - 1] * e for k, e in items), Fraction(0))


@dataclass
class EulerReport:
    ok: bool
    bad_monomials: list[str]
    quadratic_monomials: list[str]


def euler_report(P: FlatPotential) -> EulerReport:
    target = 3 - P.delta
    bad, quad = [], []
    for items, _ in P.F.terms():
        deg = sum(e for _, e in items)
        name = _render_items(items) if items else "1"
        if deg == 2:
            quad.append(name)
        elif deg >= 3 and monomial_weight(items, P.weights) != target:
            bad.append(name)
        elif deg < 2:
            bad.append(name)
    return EulerReport(not bad, bad, quad)


def _render_items(items) -> str:
    return "*".join(f"t{k}" if e == 1 else f"t{k}^{e}" for k, e in items)


def euler_check(P: FlatPotential) -> bool:
    """True iff every monomial of degree >= 3 has Euler weight ``3 - delta``.

    Degree-2 monomials are reported by :func:`euler_report` but do not fail
    the check; lower-degree monomials always fail.
    """
    return euler_report(P).ok


__all__ = [
    "EulerReport",
    "Metric",
    "StructureConstants",
    "WDVVReport",
    "associativity_check",
    "euler_check",
    "euler_report",
    "frobenius_property_check",
    "invert_matrix",
    "metric_from_potential",
    "structure_constants",
    "third_derivatives",
    "wdvv_residual",
    "wdvv_verify",
]

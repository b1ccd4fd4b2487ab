"""Series identities of Fay type for A_N (KP), B_N (BKP) and the D_N reduction of 2-BKP.

Everything is written in ``w = 1/z``.  Identities that mix ``z1 - z2`` with
series in ``1/z`` are multiplied through by ``w1 w2`` (and, where a
denominator ``z1 +- z2`` appears, by ``w1 +- w2`` as well) so that both sides
are honest elements of a :class:`TruncatedBiseries` ring.  Caps are chosen so
that only second derivatives inside the stabilization range contribute to the
compared coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import ONE, Polynomial, TruncatedBiseries
from .errors import InvalidDimension
from .hierarchy import assemble_equation
from .potentials import a_potential, b_potential, d_potential


@dataclass
class FayReport:
    name: str
    family: str
    N: int
    cap: int
    checked: list[tuple[int, int]] = field(default_factory=list)
    mismatch: dict | None = None
    subchecks: list["FayReport"] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.mismatch is None and all(s.ok for s in self.subchecks)

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "family": self.family,
            "N": self.N,
            "cap": self.cap,
            "ok": self.ok,
            "checked": [list(k) for k in self.checked],
            "mismatch": self.mismatch,
            "subchecks": [s.to_json_obj() for s in self.subchecks],
        }


def compare_series(name: str, family: str, N: int, lhs: TruncatedBiseries, rhs: TruncatedBiseries) -> FayReport:
    """Coefficientwise comparison over every key ``a + b <= cap``."""
    if lhs.cap != rhs.cap:
        raise ValueError("caps differ")
    cap = lhs.cap
    rep = FayReport(name, family, N, cap)
    for total in range(cap + 1):
        for a in range(total + 1):
            key = (a, total - a)
            rep.checked.append(key)
            x, y = lhs.coefficient(*key), rhs.coefficient(*key)
            if x != y and rep.mismatch is None:
                rep.mismatch = {"key": list(key), "lhs": x.render(), "rhs": y.render()}
    return rep


def _w(cap: int, a: int, b: int, c=1) -> TruncatedBiseries:
    return TruncatedBiseries.term(cap, a, b, c)


def _one_sided(cap: int, coeffs: dict[int, Polynomial], side: int) -> TruncatedBiseries:
    """``sum_n coeffs[n] * w_side^n``."""
    return TruncatedBiseries(cap, {((n, 0) if side == 1 else (0, n)): c for n, c in coeffs.items()})


# --------------------------------------------------------------------------
# A_N: KP
# --------------------------------------------------------------------------

def a_second_derivative_series(N: int) -> TruncatedBiseries:
    """``G = sum_{a+b <= N+1} w1^a w2^b d_a d_b F_{A_N}`` with cap N+1."""
    F = a_potential(N).F
    coeffs = {}
    for a in range(1, N + 1):
        Fa = F.derive(a)
        for b in range(1, N + 2 - a):
            coeffs[(a, b)] = Fa.derive(b)
    return TruncatedBiseries(N + 1, coeffs)


def kp_fay_report(N: int, F: Polynomial | None = None) -> FayReport:
    """``(w2 - w1) e^G == (w2 - w1) - w1 w2 (S(w1) - S(w2))``, ``S(w) = sum w^a d_1 d_a F``.

    The exponential lives in the ring with cap N+1; after multiplying by the
    degree-one factor the identity is compared with cap N+2.
    """
    if N < 2:
        raise InvalidDimension("kp_fay_check needs N >= 2")
    if F is None:
        G = a_second_derivative_series(N)
        F = a_potential(N).F
    else:
        G = TruncatedBiseries(N + 1, {(a, b): F.derive(a).derive(b)
                                      for a in range(1, N + 1) for b in range(1, N + 2 - a)})
    cap = N + 2
    E = G.exp().recap(cap)
    diff = _w(cap, 0, 1) - _w(cap, 1, 0)
    s = {a: F.derive(1).derive(a) for a in range(1, N + 1)}
    S1, S2 = _one_sided(cap, s, 1), _one_sided(cap, s, 2)
    lhs = diff * E
    rhs = diff - _w(cap, 1, 1) * (S1 - S2)
    return compare_series("kp-fay", "A", N, lhs, rhs)


def kp_fay_check(N: int) -> bool:
    return kp_fay_report(N).ok


def _h(cap: int, n: int) -> TruncatedBiseries:
    """``sum_{i + j = n, i, j >= 1} w1^i w2^j``."""
    return TruncatedBiseries(cap, {(i, n - i): ONE for i in range(1, n)})


def kp_log_expansion(N: int) -> TruncatedBiseries:
    """``log(1 + sum_p h_{p+1} p_p)`` in abstract variables ``p_k``, cap N+1.

    Its ``w1^a w2^b`` coefficient is the right-hand side of the A equation for
    ``d_a d_b f``.
    """
    cap = N + 1
    inner = TruncatedBiseries.one(cap)
    for p in range(1, N + 1):
        inner = inner + _h(cap, p + 1) * Polynomial.var(p)
    return inner.log()


def kp_log_report(N: int) -> FayReport:
    """Log expansion of the Fay identity against the assembled A equations entrywise."""
    L = kp_log_expansion(N)
    table = {}
    for a in range(1, N + 1):
        for b in range(1, N + 2 - a):
            table[(a, b)] = assemble_equation("A", a, b).rhs
    return compare_series("kp-log-vs-R", "A", N, L, TruncatedBiseries(N + 1, table))


# --------------------------------------------------------------------------
# B_N: dispersionless BKP
# --------------------------------------------------------------------------

def _odd_series(F: Polynomial, pairs, cap: int) -> TruncatedBiseries:
    return TruncatedBiseries(cap, {(2 * a - 1, 2 * b - 1): F.derive(a).derive(b) for a, b in pairs})


def _bkp_sides(F: Polynomial, pairs, s_indices, cap: int):
    """Both sides of the cleared BKP identity for potential ``F`` (``f = F``).

    With ``S(w) = sum_k w^{2k-1} d_1 d_k F`` and ``G`` the odd second-derivative
    series, the identity is
    ``((w1+w2) - w1 w2 (S1+S2)) (w2-w1) e^{2G} == (w1+w2) ((w2-w1) - w1 w2 (S1-S2))``.
    """
    G = _odd_series(F, pairs, cap) * 2
    E = G.exp()
    s = {2 * k - 1: F.derive(1).derive(k) for k in s_indices}
    S1, S2 = _one_sided(cap, s, 1), _one_sided(cap, s, 2)
    plus = _w(cap, 1, 0) + _w(cap, 0, 1)
    minus = _w(cap, 0, 1) - _w(cap, 1, 0)
    w12 = _w(cap, 1, 1)
    lhs = (plus - w12 * (S1 + S2)) * minus * E
    rhs = plus * (minus - w12 * (S1 - S2))
    return lhs, rhs


def bkp_dl_report(N: int, cap: int | None = None) -> FayReport:
    """Dispersionless BKP for ``f = F_{B_N}``, default cap 2N.

    Only second derivatives with a + b <= N+1 enter, which keeps the cleared
    identity exact up to cap 2N+2; larger caps are refused.
    """
    if N < 2:
        raise InvalidDimension("bkp_dl_check needs N >= 2")
    max_cap = 2 * N + 2
    cap = 2 * N if cap is None else cap
    if cap > max_cap:
        raise ValueError(f"cap {cap} exceeds the stabilization bound {max_cap}")
    F = b_potential(N).F
    pairs = [(a, b) for a in range(1, N + 1) for b in range(1, N + 2 - a)]
    lhs, rhs = _bkp_sides(F, pairs, range(1, N + 1), cap)
    return compare_series("bkp-dl", "B", N, lhs, rhs)


def bkp_dl_check(N: int) -> bool:
    return bkp_dl_report(N).ok


def _h_signed(cap: int, n: int, sign: int) -> TruncatedBiseries:
    """``sum_{i + j = n} sign^j w1^i w2^j`` (``i, j >= 0``)."""
    return TruncatedBiseries(cap, {(i, n - i): Fraction(sign ** (n - i)) for i in range(n + 1)})


def bkp_log_expansion(N: int) -> TruncatedBiseries:
    """``2G`` as a series in abstract ``p_k``.

    ``2G = log(1 + w1 w2 sum_k p_k h+_{2k-2}) - log(1 - w1 w2 sum_k p_k h-_{2k-2})``
    where ``h+`` and ``h-`` are the complete homogeneous sums without and with
    alternating signs; the cap is 2N.
    """
    cap = 2 * N
    w12 = _w(cap, 1, 1)
    plus = TruncatedBiseries.zero(cap)
    minus = TruncatedBiseries.zero(cap)
    for k in range(1, N + 1):
        p = Polynomial.var(k)
        plus = plus + _h_signed(cap, 2 * k - 2, 1) * p
        minus = minus + _h_signed(cap, 2 * k - 2, -1) * p
    return (TruncatedBiseries.one(cap) + w12 * plus).log() - (TruncatedBiseries.one(cap) - w12 * minus).log()


def bkp_log_report(N: int) -> FayReport:
    """Odd coefficients of the BKP log expansion are twice the B equations; even ones vanish."""
    L = bkp_log_expansion(N)
    cap = 2 * N
    expected = {}
    for a in range(1, N + 1):
        for b in range(1, N + 2 - a):
            if 2 * a - 1 + 2 * b - 1 <= cap:
                expected[(2 * a - 1, 2 * b - 1)] = assemble_equation("B", a, b).rhs * 2
    return compare_series("bkp-log-vs-R", "B", N, L, TruncatedBiseries(cap, expected))


# --------------------------------------------------------------------------
# D_N: reduction of dispersionless 2-BKP
# --------------------------------------------------------------------------

def _d_data(N: int):
    F = d_potential(N).F
    q = F.derive(1).derive(N)
    Q = F.derive(N).derive(N)
    s = {2 * k - 1: F.derive(1).derive(k) for k in range(1, N)}
    L = {2 * a - 1: F.derive(a).derive(N) for a in range(1, N)}
    return F, q, Q, s, L


def d_reduction_report(N: int) -> FayReport:
    """All identities of the D reduction, for ``f = F_{D_N}`` and ``t_0`` realized as ``t_N``.

    * the BKP identity on the D data (flow 1), cap 2N-2;
    * ``L(w) = sum_a w^{2a-1} d_a d_N F`` equals ``q sum_{m>=1} w^m S(w)^{m-1}``;
    * the reduced identity with the barred operator ``w d_N`` (``3dl``), modulo w2^2;
    * the barred identities ``2dl`` (mod w1^2, w2^2) and ``4dl`` (mod w2^2), which
      must hold identically once reduced.
    """
    if N < 4:
        raise InvalidDimension("d_reduction_check needs N >= 4")
    F, q, Q, s, L = _d_data(N)
    cap = 2 * N - 2
    top = FayReport("d-reduction", "D", N, cap)

    # strict stabilization range a + b < N: G is exact through degree 2N-4
    pairs = [(a, b) for a in range(1, N) for b in range(1, N - a)]
    lhs, rhs = _bkp_sides(F, pairs, range(1, N), cap)
    top.subchecks.append(compare_series("2bkp-1dl", "D", N, lhs, rhs))

    S1 = _one_sided(cap, s, 1)
    L1 = _one_sided(cap, L, 1)
    geometric = TruncatedBiseries.zero(cap)
    power = TruncatedBiseries.one(cap)
    for m in range(1, cap + 1):
        geometric = geometric + _w(cap, m, 0) * power
        power = power * S1
    top.subchecks.append(compare_series("red2bkp-3dl", "D", N, L1, geometric * q))

    # 3dl with the barred operator reduced to w2 d_N, multiplied by w1, mod w2^2
    one = TruncatedBiseries.one(cap)
    w1, w2, w12 = _w(cap, 1, 0), _w(cap, 0, 1), _w(cap, 1, 1)
    E = (L1 * w2 * 2).exp().truncated(max_b=1)
    lhs = ((one - w1 * S1 - w12 * q) * E).truncated(max_b=1)
    rhs = (one - w1 * S1 + w12 * q).truncated(max_b=1)
    top.subchecks.append(compare_series("2bkp-3dl", "D", N, lhs, rhs))

    # 2dl: (1 - Q w1 w2) e^{2 Q w1 w2} == 1 + Q w1 w2 modulo w1^2, w2^2
    E = (w12 * Q * 2).exp().truncated(1, 1)
    lhs = ((one - w12 * Q) * E).truncated(1, 1)
    rhs = (one + w12 * Q).truncated(1, 1)
    top.subchecks.append(compare_series("2bkp-2dl", "D", N, lhs, rhs))

    # 4dl multiplied by w2: (1 - w2 L - w2^2 Q) e^{2 w2 L} == 1 - w2^2 Q + w2 L modulo w2^2
    w22 = _w(cap, 0, 2)
    E = (L1 * w2 * 2).exp().truncated(max_b=1)
    lhs = ((one - w2 * L1 - w22 * Q) * E).truncated(max_b=1)
    rhs = (one - w22 * Q + w2 * L1).truncated(max_b=1)
    top.subchecks.append(compare_series("2bkp-4dl", "D", N, lhs, rhs))
    return top


def d_reduction_check(N: int) -> bool:
    return d_reduction_report(N).ok


def fay_report(family: str, N: int) -> FayReport:
    if family == "A":
        rep = kp_fay_report(N)
        rep.subchecks.append(kp_log_report(N))
        return rep
    if family == "B":
        rep = bkp_dl_report(N)
        rep.subchecks.append(bkp_log_report(N))
        return rep
    if family == "D":
        return d_reduction_report(N)
    raise InvalidDimension(f"unknown family {family!r}")


__all__ = [
    "FayReport",
    "a_second_derivative_series",
    "bkp_dl_check",
    "bkp_dl_report",
    "bkp_log_expansion",
    "bkp_log_report",
    "compare_series",
    "d_reduction_check",
    "d_reduction_report",
    "fay_report",
    "kp_fay_check",
    "kp_fay_report",
    "kp_log_expansion",
    "kp_log_report",
]

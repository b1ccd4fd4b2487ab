"""Exact rational polynomials in indexed variables and truncated bivariate series.

Coefficients are :class:`fractions.Fraction` (always reduced, positive
denominator).  A monomial is packed into a single non-negative ``int``: the
exponent of variable ``k`` occupies bits ``[16k, 16k+16)``, so monomial
multiplication is integer addition.  Index 0 is a legal variable; the D-family
code uses it for the distinguished direction (``q`` / ``t_0``).

The canonical term order is graded lexicographic, highest first: larger total
degree first, ties broken by comparing dense exponent vectors ``(e_0, e_1,
...)`` lexicographically, larger first.  Every rendering and serialization
walks terms in this order, which makes output byte-stable.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Union

from .errors import BadConstantTerm, CapMismatch, ClosednessViolation, NonNilpotentArgument

EXP_BITS = 16
MAX_EXPONENT = (1 << EXP_BITS) - 1
_MASK = MAX_EXPONENT

Scalar = Union[int, Fraction]


# --------------------------------------------------------------------------
# monomials
# --------------------------------------------------------------------------

def monomial(exps: Union[Mapping[int, int], Iterable[tuple[int, int]]] = ()) -> int:
    """Pack ``{index: exponent}`` (or ``[(index, exponent), ...]``) into an int."""
    items = exps.items() if isinstance(exps, Mapping) else exps
    m = 0
    for index, e in items:
        if index < 0:
            raise ValueError(f"variable index must be >= 0, got {index}")
        if e < 0 or e > MAX_EXPONENT:
            raise ValueError(f"exponent {e} out of range")
        if e:
            m += e << (EXP_BITS * index)
    return m


def monomial_items(m: int) -> tuple[tuple[int, int], ...]:
    """Unpack to ``((index, exponent), ...)`` with ascending index, no zeros."""
    out = []
    index = 0
    while m:
        e = m & _MASK
        if e:
            out.append((index, e))
        m >>= EXP_BITS
        index += 1
    return tuple(out)


def monomial_degree(m: int) -> int:
    d = 0
    while m:
        d += m & _MASK
        m >>= EXP_BITS
    return d


def monomial_exponent(m: int, index: int) -> int:
    return (m >> (EXP_BITS * index)) & _MASK


def _order_key(m: int):
    items = monomial_items(m)
    return (-sum(e for _, e in items), tuple((i, -e) for i, e in items))


def _as_fraction(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"exact coefficient required, got {type(c).__name__}")


def _add_into(acc: dict, terms: Mapping[int, Fraction], factor: Fraction = Fraction(1)) -> None:
    for m, c in terms.items():
        v = acc.get(m, 0) + c * factor
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)


def _mul_into(acc: dict, p: Mapping[int, Fraction], q: Mapping[int, Fraction]) -> None:
    if len(p) > len(q):
        p, q = q, p
    get = acc.get
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = m1 + m2
            acc[m] = get(m, 0) + c1 * c2


def _clean(acc: dict) -> dict:
    return {m: c for m, c in acc.items() if c}


# --------------------------------------------------------------------------
# polynomials
# --------------------------------------------------------------------------

class Polynomial:
    """Sparse multivariate polynomial with exact rational coefficients.

    Instances are immutable; all operations return new polynomials.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Scalar] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = _as_fraction(c)
                if c:
                    clean[m] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    # constructors ---------------------------------------------------------

    @classmethod
    def const(cls, c: Scalar) -> "Polynomial":
        return cls({0: c})

    @classmethod
    def var(cls, index: int, exponent: int = 1) -> "Polynomial":
        return cls({monomial({index: exponent}): 1})

    @classmethod
    def from_items(cls, items: Iterable[tuple[Scalar, Mapping[int, int]]]) -> "Polynomial":
        acc: dict = {}
        for c, exps in items:
            m = monomial(exps)
            acc[m] = acc.get(m, 0) + _as_fraction(c)
        return cls._raw(_clean(acc))

    # inspection -----------------------------------------------------------

    @property
    def raw_terms(self) -> Mapping[int, Fraction]:
        """Packed-monomial view of the term map (read-only by convention)."""
        return self._terms

    def terms(self) -> list[tuple[tuple[tuple[int, int], ...], Fraction]]:
        """Terms as ``(((index, exp), ...), coeff)`` in canonical order."""
        return [(monomial_items(m), self._terms[m]) for m in sorted(self._terms, key=_order_key)]

    def __iter__(self) -> Iterator[tuple[tuple[tuple[int, int], ...], Fraction]]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == 0 for m in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get(0, Fraction(0))

    def coefficient(self, exps: Union[Mapping[int, int], Iterable[tuple[int, int]]] = ()) -> Fraction:
        return self._terms.get(monomial(exps), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((monomial_degree(m) for m in self._terms), default=-1)

    def min_degree(self) -> int:
        return min((monomial_degree(m) for m in self._terms), default=-1)

    def degree_in(self, index: int) -> int:
        return max((monomial_exponent(m, index) for m in self._terms), default=-1)

    def variables(self) -> tuple[int, ...]:
        seen = set()
        for m in self._terms:
            seen.update(i for i, _ in monomial_items(m))
        return tuple(sorted(seen))

    # arithmetic -----------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial.const(other)

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        acc = dict(self._terms)
        _add_into(acc, other._terms)
        return Polynomial._raw(acc)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        acc = dict(self._terms)
        _add_into(acc, other._terms, Fraction(-1))
        return Polynomial._raw(acc)

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        acc: dict = {}
        _mul_into(acc, self._terms, other._terms)
        return Polynomial._raw(_clean(acc))

    def __rmul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / _as_fraction(other))
        return NotImplemented

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError("non-negative integer exponent required")
        result = Polynomial.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: Scalar) -> "Polynomial":
        c = _as_fraction(c)
        if not c:
            return Polynomial()
        return Polynomial._raw({m: v * c for m, v in self._terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # calculus and substitution -------------------------------------------

    def derive(self, index: int, times: int = 1) -> "Polynomial":
        """Formal partial derivative with respect to variable ``index``."""
        p = self
        shift = EXP_BITS * index
        unit = 1 << shift
        for _ in range(times):
            out = {}
            for m, c in p._terms.items():
                e = (m >> shift) & _MASK
                if e:
                    out[m - unit] = c * e
            p = Polynomial._raw(out)
        return p

    def substitute(self, images: Mapping[int, "Polynomial | Scalar"]) -> "Polynomial":
        """Apply the ring homomorphism ``t_k -> images[k]`` (others fixed)."""
        imgs = {k: self._coerce(v) for k, v in images.items()}
        if not imgs:
            return self
        power_cache: dict[tuple[int, int], Polynomial] = {}

        def power(k: int, e: int) -> Polynomial:
            key = (k, e)
            if key not in power_cache:
                if e == 1:
                    power_cache[key] = imgs[k]
                else:
                    power_cache[key] = power(k, e - 1) * imgs[k]
            return power_cache[key]

        acc: dict = {}
        for m, c in self._terms.items():
            fixed = 0
            factors = []
            for k, e in monomial_items(m):
                if k in imgs:
                    factors.append(power(k, e))
                else:
                    fixed += e << (EXP_BITS * k)
            cur = {fixed: c}
            for f in factors:
                if not cur:
                    break
                nxt: dict = {}
                _mul_into(nxt, cur, f._terms)
                cur = nxt
            _add_into(acc, cur)
        return Polynomial._raw(_clean(acc))

    def relabel(self, mapping: Mapping[int, int]) -> "Polynomial":
        """Rename variables ``k -> mapping[k]``; must be injective on variables present."""
        out = {}
        for m, c in self._terms.items():
            new = 0
            for k, e in monomial_items(m):
                new += e << (EXP_BITS * mapping.get(k, k))
            if new in out:
                raise ValueError("relabel is not injective on this polynomial")
            out[new] = c
        return Polynomial._raw(out)

    def evaluate_at_zero(self) -> Fraction:
        return self.constant_term()

    def split_by_degree_in(self, index: int) -> dict[int, "Polynomial"]:
        """``{e: P_e}`` with ``self = sum_e P_e * t_index**e`` and ``P_e`` free of ``t_index``."""
        shift = EXP_BITS * index
        parts: dict[int, dict] = {}
        for m, c in self._terms.items():
            e = (m >> shift) & _MASK
            parts.setdefault(e, {})[m - (e << shift)] = c
        return {e: Polynomial._raw(t) for e, t in sorted(parts.items())}

    def filter_terms(self, keep: Callable[[tuple[tuple[int, int], ...]], bool]) -> "Polynomial":
        return Polynomial._raw({m: c for m, c in self._terms.items() if keep(monomial_items(m))})

    def homogeneous_part(self, degree: int) -> "Polynomial":
        return Polynomial._raw({m: c for m, c in self._terms.items() if monomial_degree(m) == degree})

    # rendering ------------------------------------------------------------

    def render(self, prefix: str = "t", names: Mapping[int, str] | None = None) -> str:
        """Text form like ``1/12*p1^3 - 1/2*p1*p2 + p3``."""
        if not self._terms:
            return "0"
        pieces = []
        for items, c in self.terms():
            factors = []
            for k, e in items:
                name = names[k] if names and k in names else f"{prefix}{k}"
                factors.append(name if e == 1 else f"{name}^{e}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            pieces.append((c < 0, body))
        first_neg, first = pieces[0]
        out = ("-" if first_neg else "") + first
        for neg, body in pieces[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Polynomial({self.render()!r})"

    # serialization --------------------------------------------------------

    def to_json_obj(self, vars: str = "t") -> dict:
        return {
            "vars": vars,
            "terms": [
                {"coeff": f"{c.numerator}/{c.denominator}", "exps": [[k, e] for k, e in items]}
                for items, c in self.terms()
            ],
        }

    def to_json(self, vars: str = "t") -> str:
        return json.dumps(self.to_json_obj(vars), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "Polynomial":
        return cls.from_items((Fraction(t["coeff"]), [tuple(x) for x in t["exps"]]) for t in obj["terms"])

    @classmethod
    def from_json(cls, text: str) -> "Polynomial":
        return cls.from_json_obj(json.loads(text))


ZERO = Polynomial()
ONE = Polynomial.const(1)


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def poly_derive(p: Polynomial, k: int) -> Polynomial:
    if k < 1:
        raise ValueError("variable index must be >= 1")
    return p.derive(k)


def poly_substitute(p: Polynomial, mapping: Mapping[int, Polynomial]) -> Polynomial:
    return p.substitute(mapping)


def poly_euler_integrate(g: Mapping[int, Polynomial]) -> Polynomial:
    """Recover ``F`` with ``dF/dt_a = g[a]`` from a closed, constant-free gradient.

    Each monomial of ``sum_a t_a g_a`` is divided by its total degree.  Raises
    :class:`ClosednessViolation` naming the first failing ``(a, b)`` pair.
    """
    indices = set(g)
    for p in g.values():
        indices.update(p.variables())
    order = sorted(indices)
    for a in order:
        ga = g.get(a, ZERO)
        if ga.constant_term():
            raise ValueError(f"gradient component {a} has a constant term")
        for b in order:
            if b <= a:
                continue
            gb = g.get(b, ZERO)
            if ga.derive(b) != gb.derive(a):
                raise ClosednessViolation(a, b)
    acc: dict = {}
    for a, ga in g.items():
        _mul_into(acc, Polynomial.var(a).raw_terms, ga.raw_terms)
    return Polynomial._raw({m: c / monomial_degree(m) for m, c in acc.items() if c})


# --------------------------------------------------------------------------
# truncated bivariate series
# --------------------------------------------------------------------------

class TruncatedBiseries:
    """Series ``sum c_{a,b} w1^a w2^b`` with Polynomial coefficients, ``a+b <= cap``.

    Terms of total degree above ``cap`` are dropped by every operation.
    """

    __slots__ = ("cap", "_coeffs")

    def __init__(self, cap: int, coeffs: Mapping[tuple[int, int], "Polynomial | Scalar"] | None = None):
        if cap < 0:
            raise ValueError("cap must be non-negative")
        self.cap = cap
        clean = {}
        for (a, b), c in (coeffs or {}).items():
            if a < 0 or b < 0:
                raise ValueError("series exponents must be non-negative")
            if a + b > cap:
                continue
            c = Polynomial._coerce(c)
            if c:
                clean[(a, b)] = c
        self._coeffs = clean

    @classmethod
    def _raw(cls, cap: int, coeffs: dict) -> "TruncatedBiseries":
        s = cls.__new__(cls)
        s.cap = cap
        s._coeffs = coeffs
        return s

    @classmethod
    def one(cls, cap: int) -> "TruncatedBiseries":
        return cls(cap, {(0, 0): ONE})

    @classmethod
    def zero(cls, cap: int) -> "TruncatedBiseries":
        return cls(cap)

    @classmethod
    def term(cls, cap: int, a: int, b: int, coeff: "Polynomial | Scalar" = 1) -> "TruncatedBiseries":
        return cls(cap, {(a, b): coeff})

    def coefficient(self, a: int, b: int) -> Polynomial:
        return self._coeffs.get((a, b), ZERO)

    def keys(self) -> list[tuple[int, int]]:
        return sorted(self._coeffs)

    def items(self) -> list[tuple[tuple[int, int], Polynomial]]:
        return [(k, self._coeffs[k]) for k in sorted(self._coeffs)]

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def _check(self, other: "TruncatedBiseries") -> None:
        if self.cap != other.cap:
            raise CapMismatch(f"caps {self.cap} and {other.cap} differ")

    def __add__(self, other) -> "TruncatedBiseries":
        if not isinstance(other, TruncatedBiseries):
            other = TruncatedBiseries(self.cap, {(0, 0): other})
        self._check(other)
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            v = out.get(k, ZERO) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return TruncatedBiseries._raw(self.cap, out)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedBiseries":
        return TruncatedBiseries._raw(self.cap, {k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other) -> "TruncatedBiseries":
        if not isinstance(other, TruncatedBiseries):
            other = TruncatedBiseries(self.cap, {(0, 0): other})
        return self + (-other)

    def __rsub__(self, other) -> "TruncatedBiseries":
        return (-self) + other

    def __mul__(self, other) -> "TruncatedBiseries":
        if isinstance(other, (int, Fraction, Polynomial)):
            other = Polynomial._coerce(other)
            out = {k: c * other for k, c in self._coeffs.items()}
            return TruncatedBiseries._raw(self.cap, {k: c for k, c in out.items() if c})
        if not isinstance(other, TruncatedBiseries):
            return NotImplemented
        self._check(other)
        cap = self.cap
        acc: dict[tuple[int, int], dict] = {}
        for (a1, b1), p1 in self._coeffs.items():
            room = cap - a1 - b1
            for (a2, b2), p2 in other._coeffs.items():
                if a2 + b2 > room:
                    continue
                _mul_into(acc.setdefault((a1 + a2, b1 + b2), {}), p1.raw_terms, p2.raw_terms)
        out = {}
        for k, terms in acc.items():
            terms = _clean(terms)
            if terms:
                out[k] = Polynomial._raw(terms)
        return TruncatedBiseries._raw(cap, out)

    def __rmul__(self, other) -> "TruncatedBiseries":
        return self.__mul__(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedBiseries):
            return NotImplemented
        return self.cap == other.cap and self._coeffs == other._coeffs

    def __repr__(self) -> str:
        body = ", ".join(f"({a},{b}): {c.render()}" for (a, b), c in self.items())
        return f"TruncatedBiseries(cap={self.cap}, {{{body}}})"

    def recap(self, cap: int) -> "TruncatedBiseries":
        """Same coefficients read in the ring with a different cap."""
        return TruncatedBiseries(cap, self._coeffs)

    def truncated(self, max_a: int | None = None, max_b: int | None = None) -> "TruncatedBiseries":
        """Drop terms with ``a > max_a`` or ``b > max_b`` (an ideal, so compatible with products)."""
        out = {
            (a, b): c
            for (a, b), c in self._coeffs.items()
            if (max_a is None or a <= max_a) and (max_b is None or b <= max_b)
        }
        return TruncatedBiseries._raw(self.cap, out)

    def map_coefficients(self, fn: Callable[[Polynomial], Polynomial]) -> "TruncatedBiseries":
        return TruncatedBiseries(self.cap, {k: fn(c) for k, c in self._coeffs.items()})

    def exp(self) -> "TruncatedBiseries":
        if (0, 0) in self._coeffs:
            raise NonNilpotentArgument("exp needs a series without constant term")
        result = TruncatedBiseries.one(self.cap)
        term = TruncatedBiseries.one(self.cap)
        for n in range(1, self.cap + 1):
            term = (term * self) * Fraction(1, n)
            if not term:
                break
            result = result + term
        return result

    def log(self) -> "TruncatedBiseries":
        if self.coefficient(0, 0) != ONE:
            raise BadConstantTerm("log needs constant term exactly 1")
        x = self - ONE
        result = TruncatedBiseries.zero(self.cap)
        power = TruncatedBiseries.one(self.cap)
        for n in range(1, self.cap + 1):
            power = power * x
            if not power:
                break
            result = result + power * Fraction((-1) ** (n - 1), n)
        return result


def biseries_mul(a: TruncatedBiseries, b: TruncatedBiseries) -> TruncatedBiseries:
    return a * b


def biseries_exp(a: TruncatedBiseries) -> TruncatedBiseries:
    return a.exp()


def biseries_log(a: TruncatedBiseries) -> TruncatedBiseries:
    return a.log()

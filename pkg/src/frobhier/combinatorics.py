"""Composition counts and the enumerative meaning of potential coefficients.

``P_hat_{i,j}(g_1..g_m)`` counts pairs of *ordered* compositions
``i = i_1 + ... + i_m`` and ``j = j_1 + ... + j_m`` (all parts >= 1) with
``i_k + j_k = g_k + 1`` for every k.  Ordered compositions, not partitions:
the generating-function argument behind the counts sums over index tuples.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from math import factorial
from typing import Iterator, Sequence

from .algebra import Polynomial
from .errors import OutOfStabilizationRange
from .potentials import a_potential, d_potential


def count_p_hat(i: int, j: int, gammas: Sequence[int]) -> int:
    """Exhaustive DFS count; ``j`` is determined by the ``i_k`` so only those are enumerated."""
    if i < 1 or j < 1 or any(g < 1 for g in gammas):
        raise ValueError("all inputs must be positive")
    m = len(gammas)
    if m == 0 or sum(gammas) != i + j - m:
        return 0
    gammas = tuple(gammas)
    # suffix bounds: the remaining i_k lie in [1, g_k]
    min_rest = [0] * (m + 1)
    max_rest = [0] * (m + 1)
    for k in range(m - 1, -1, -1):
        min_rest[k] = min_rest[k + 1] + 1
        max_rest[k] = max_rest[k + 1] + gammas[k]

    def rec(k: int, rem: int) -> int:
        if k == m:
            return int(rem == 0)
        total = 0
        for ik in range(1, gammas[k] + 1):
            left = rem - ik
            if min_rest[k + 1] <= left <= max_rest[k + 1]:
                total += rec(k + 1, left)
        return total

    return rec(0, i)


def multisets(max_value: int, max_sum: int, min_value: int = 1) -> Iterator[tuple[int, ...]]:
    """Non-empty sorted tuples of values in ``[min_value, max_value]`` with sum <= max_sum."""

    def rec(start: int, rem: int, cur: list[int]):
        if cur:
            yield tuple(cur)
        for v in range(start, min(max_value, rem) + 1):
            cur.append(v)
            yield from rec(v, rem - v, cur)
            cur.pop()

    yield from rec(min_value, max_sum, [])


def _derivative_at_zero(F: Polynomial, indices: Sequence[int]) -> int:
    """``d_{i_1} ... d_{i_n} F`` at the origin, from the coefficient times the multiplicity factorials."""
    counts = Counter(indices)
    c = F.coefficient(counts)
    for e in counts.values():
        c *= factorial(e)
    return c


def enumerative_rhs(i: int, j: int, gammas: Sequence[int]) -> int:
    m = len(gammas)
    return (-1) ** (m - 1) * factorial(m - 1) * count_p_hat(i, j, gammas)


def verify_a_enumerative(N: int, alpha: int, beta: int, gammas: Sequence[int]) -> bool:
    if alpha + beta > N + 1 or not all(1 <= g <= N for g in gammas):
        raise OutOfStabilizationRange(f"({alpha},{beta};{tuple(gammas)}) outside A_{N} range")
    F = a_potential(N).F
    lhs = _derivative_at_zero(F, [alpha, beta] + [N + 1 - g for g in gammas])
    return lhs == enumerative_rhs(alpha, beta, gammas)


def verify_d_enumerative(N: int, alpha: int, beta: int, gammas: Sequence[int]) -> bool:
    if alpha + beta > N or not all(1 <= g <= N - 1 for g in gammas):
        raise OutOfStabilizationRange(f"({alpha},{beta};{tuple(gammas)}) outside D_{N} range")
    F = d_potential(N).F
    lhs = _derivative_at_zero(F, [alpha, beta] + [N - g for g in gammas])
    return lhs == enumerative_rhs(2 * alpha - 1, 2 * beta - 1, [2 * g - 1 for g in gammas])


def admissible_a(N: int) -> Iterator[tuple[int, int, tuple[int, ...]]]:
    """Every ``(alpha <= beta, gammas)`` in the A_N range, including keys off the weight support."""
    for alpha in range(1, N + 1):
        for beta in range(alpha, N + 2 - alpha):
            for gammas in multisets(N, alpha + beta):
                yield alpha, beta, gammas


def admissible_d(N: int) -> Iterator[tuple[int, int, tuple[int, ...]]]:
    for alpha in range(1, N):
        for beta in range(alpha, N + 1 - alpha):
            for gammas in multisets(N - 1, alpha + beta):
                yield alpha, beta, gammas


def r_a_oracle(alpha: int, beta: int, gammas: Sequence[int]):
    """``R^A`` predicted by the composition count: ``(-1)^(m-1) / m * P_hat``."""
    m = len(gammas)
    return Fraction((-1) ** (m - 1) * count_p_hat(alpha, beta, gammas), m)


def r_d1_oracle(alpha: int, beta: int, gammas: Sequence[int]):
    """Flow-1 D coefficient of ``f = F_D`` predicted through the odd-index counts."""
    return r_a_oracle(2 * alpha - 1, 2 * beta - 1, [2 * g - 1 for g in gammas])


def r_d2_oracle(alpha: int, gammas: Sequence[int]) -> Fraction:
    """Flow-2 D coefficient from the closed form of ``d v_1 / d t_alpha``.

    That derivative is ``sum |a|! prod t_k^{a_k} / a_k!`` over
    ``sum_k (N-k) a_k = alpha - 1``.  In the relabelled variables a multiset
    ``gammas`` collects ``|a|! / prod a_k!`` = its own orbit size, so R is 1
    on the support ``sum(gammas) == alpha - 1`` and 0 elsewhere.
    """
    return Fraction(int(len(gammas) > 0 and sum(gammas) == alpha - 1))


__all__ = [
    "admissible_a",
    "admissible_d",
    "count_p_hat",
    "enumerative_rhs",
    "multisets",
    "r_a_oracle",
    "r_d1_oracle",
    "r_d2_oracle",
    "verify_a_enumerative",
    "verify_d_enumerative",
]

from itertools import product

import pytest

from frobhier.combinatorics import (
    admissible_a,
    count_p_hat,
    enumerative_rhs,
    multisets,
    verify_a_enumerative,
    verify_d_enumerative,
)
from frobhier.errors import OutOfStabilizationRange


def brute_p_hat(i, j, gammas):
    # enumerate every tuple i_k in [1, g_k] and read off j_k = g_k + 1 - i_k
    n = 0
    for parts in product(*[range(1, g + 1) for g in gammas]):
        if sum(parts) == i and sum(g + 1 - x for g, x in zip(gammas, parts)) == j:
            n += 1
    return n


def test_p_hat_example():
    assert count_p_hat(3, 4, [2, 3]) == 2


def test_p_hat_matches_brute_force():
    for gammas in multisets(4, 7):
        for i in range(1, 9):
            for j in range(1, 9):
                assert count_p_hat(i, j, gammas) == brute_p_hat(i, j, gammas)


def test_p_hat_symmetry_and_order():
    assert count_p_hat(4, 3, [2, 3]) == count_p_hat(3, 4, [2, 3])
    assert count_p_hat(5, 4, [1, 3, 3]) == count_p_hat(5, 4, [3, 1, 3])


def test_p_hat_off_support():
    assert count_p_hat(3, 4, [2, 2]) == 0


def test_p_hat_rejects_nonpositive():
    with pytest.raises(ValueError):
        count_p_hat(0, 2, [1])


def test_enumerative_rhs_sign():
    # m = 2 carries (-1)^1 * 1!
    assert enumerative_rhs(3, 4, [2, 3]) == -2


def test_multisets():
    assert list(multisets(2, 3)) == [(1,), (1, 1), (1, 1, 1), (1, 2), (2,)]


@pytest.mark.parametrize("N", [3, 4, 5])
def test_a_enumerative(N):
    for a, b, g in admissible_a(N):
        assert verify_a_enumerative(N, a, b, g)


def test_d_enumerative_small():
    assert verify_d_enumerative(5, 2, 2, (1, 2))
    assert verify_d_enumerative(5, 1, 3, (3,))


def test_enumerative_range():
    with pytest.raises(OutOfStabilizationRange):
        verify_a_enumerative(4, 3, 3, (1,))
    with pytest.raises(OutOfStabilizationRange):
        verify_d_enumerative(5, 1, 2, (5,))

import bisect
import math

import pytest
from hypothesis import given, strategies as st

from hamkit.numtheory import (
    GoodPair,
    find_good_prime,
    four_squares_reps,
    is_prime,
    jacobi,
    lps_params,
    next_prime,
    next_prime_square,
    prime_square_gap_scan,
    primes_up_to,
)


def trial_division(n):
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def factor(n):
    out, d = [], 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def legendre_by_squares(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if a in {x * x % p for x in range(1, p)} else -1


def test_is_prime_matches_trial_division():
    assert all(is_prime(n) == trial_division(n) for n in range(-5, 20000))
    assert is_prime(2) and not is_prime(1)
    assert is_prime(12181) == trial_division(12181)


@pytest.mark.parametrize(
    "n,expected",
    [(561, False), (3215031751, False), (2**61 - 1, True), (2**64 - 59, True), (3825123056546413051, False)],
)
def test_is_prime_hard_cases(n, expected):
    assert is_prime(n) is expected


def test_sieve_matches_is_prime():
    ps = primes_up_to(5000)
    assert list(ps) == [n for n in range(5001) if is_prime(n)]
    assert next_prime(90) == 97 and next_prime(97) == 97


def test_jacobi_matches_square_tests_below_200():
    for m in range(1, 200, 2):
        fs = factor(m)
        for a in range(-3, 2 * m + 3):
            expected = math.prod(legendre_by_squares(a, p) for p in fs) if fs else 1
            assert jacobi(a, m) == expected, (a, m)


def test_jacobi_examples_and_errors():
    assert jacobi(5, 29) == 1 and jacobi(5, 13) == -1
    assert all(jacobi(0, m) == 0 for m in range(3, 50, 2))
    with pytest.raises(ValueError):
        jacobi(3, 10)


def test_next_prime_square_examples():
    assert next_prime_square(121) == (11, 121, 0.0)
    assert next_prime_square(50)[:2] == (11, 121)
    assert next_prime_square(10)[:2] == (5, 25)
    p, sq, e = next_prime_square(50)
    assert e == pytest.approx(math.log(71) / math.log(50))


@given(st.integers(2, 10**7), st.integers(0, 10**5))
def test_next_prime_square_monotone(n, k):
    a, b = next_prime_square(n), next_prime_square(n + k)
    assert a[1] <= b[1]
    assert a[1] >= n and is_prime(a[0])
    # no smaller prime has its square at or above n
    assert not any(is_prime(r) for r in range(math.isqrt(n - 1) + 1, a[0]))


def test_four_squares_counts():
    assert four_squares_reps(5) == sorted([(1, 2, 0, 0), (1, -2, 0, 0), (1, 0, 2, 0), (1, 0, -2, 0), (1, 0, 0, 2), (1, 0, 0, -2)])
    assert [len(four_squares_reps(p)) for p in (13, 17)] == [14, 18]
    for p in range(5, 201, 4):
        if is_prime(p):
            reps = four_squares_reps(p)
            assert len(reps) == p + 1 == len(set(reps))
            assert all(sum(x * x for x in r) == p and r[0] > 0 and r[0] % 2 for r in reps)
    with pytest.raises(ValueError):
        four_squares_reps(7)


def test_good_prime_examples():
    g = find_good_prime(0.5, 2, 25)
    assert (g.p, g.q) == (5, 29)
    assert find_good_prime(0.5, 2, 5) is None
    r = lps_params(10000, 0.25, 2)
    assert (r.p, r.q, r.m) == (5, 29, 12180)
    assert lps_params(12181, 0.01, 2) is None


@pytest.mark.parametrize("eps,k", [(0.5, 2), (0.25, 2), (0.3, 1.5), (1.0, 3)])
@pytest.mark.parametrize("x", [25, 100, 1000, 10**5])
def test_good_prime_outputs_revalidate(eps, k, x):
    g = find_good_prime(eps, k, x)
    if g is not None:
        assert x < g.q < (1 + eps) * x
        GoodPair(g.p, g.q, eps, k, g.m)
        assert g.m == g.q * (g.q**2 - 1) // 2


def test_good_pair_invariants_enforced():
    GoodPair(5, 29, 0.5, 2, 12180)
    for args in [(5, 13, 0.5, 2, 1092), (5, 29, 0.5, 2, 1), (7, 29, 0.5, 2, 12180), (5, 41, 0.5, 2, 34440)]:
        with pytest.raises(ValueError):
            GoodPair(*args)


def brute_scan(lo, hi, e):
    squares = [p * p for p in range(2, math.isqrt(hi) + 100) if is_prime(p)]
    bad = []
    for n in range(lo, hi + 1):
        sq = squares[bisect.bisect_left(squares, n)]
        if sq > n + n**e:
            bad.append(n)
    return bad


@pytest.mark.parametrize("e", [0.5, 0.7, 0.8625, 1.0])
def test_scan_matches_brute_force(e):
    res = prime_square_gap_scan(2, 30000, e)
    assert res.violating() == brute_scan(2, 30000, e)


def test_scan_examples():
    res = prime_square_gap_scan(2, 100, 0.8625)
    assert res.violations == ((2, 2), (10, 14), (26, 30), (50, 78))
    assert 50 in res.violating()
    assert not {p * p for p in (2, 3, 5, 7)} & set(res.violating())
    big = prime_square_gap_scan(1000, 10**6, 0.8625)
    assert big.violations == ()
    assert big.max_gap_exponent < 0.8625

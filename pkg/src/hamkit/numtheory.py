"""Primality, Jacobi symbols and the prime searches behind the upper bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# deterministic for every n < 3.3e24, which covers 64-bit inputs
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(limit: int) -> np.ndarray:
    """Sieve of Eratosthenes; primes <= limit as an int64 array."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def next_prime(n: int) -> int:
    """Smallest prime >= n."""
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


def jacobi(a: int, m: int) -> int:
    if m < 1 or m % 2 == 0:
        raise ValueError(f"Jacobi symbol needs an odd positive modulus, got {m}")
    a %= m
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def next_prime_square(n: int) -> tuple[int, int, float]:
    """Smallest prime p with p*p >= n, plus log(p^2 - n) / log(n)."""
    if n < 2:
        raise ValueError("need n >= 2")
    p = next_prime(math.isqrt(n - 1) + 1)
    gap = p * p - n
    return p, p * p, math.log(gap) / math.log(n) if gap > 0 else 0.0


@dataclass(frozen=True)
class GoodPair:
    p: int
    q: int
    eps: float
    k: float
    m: int

    def __post_init__(self):
        if not (is_prime(self.p) and is_prime(self.q)):
            raise ValueError("p and q must be prime")
        if self.p == self.q or self.p % 4 != 1 or self.q % 4 != 1:
            raise ValueError("need distinct primes p, q both 1 mod 4")
        pk = self.p**self.k
        if not pk < self.q < (1 + self.eps) * pk:
            raise ValueError("q must lie in (p^k, (1+eps) p^k)")
        if jacobi(self.p, self.q) != 1:
            raise ValueError("p must be a quadratic residue mod q")
        if self.m != self.q * (self.q * self.q - 1) // 2:
            raise ValueError("m must be q(q^2-1)/2")

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "m": self.m, "eps": self.eps, "k": self.k}


def _iroot_floor(x: float, k: float) -> int:
    r = int(x ** (1 / k))
    while (r + 1) ** k <= x:
        r += 1
    while r > 0 and r**k > x:
        r -= 1
    return r


def good_partner(q: int, eps: float, k: float) -> int | None:
    """Largest prime p = 1 mod 4 making q (eps, k)-good, or None."""
    for p in range(_iroot_floor(q, k), 1, -1):
        pk = p**k
        if (1 + eps) * pk <= q:
            break
        if p % 4 == 1 and p != q and pk < q and is_prime(p) and jacobi(p, q) == 1:
            return p
    return None


def find_good_prime(eps: float, k: float, x: int) -> GoodPair | None:
    """Smallest (eps, k)-good prime q in (x, (1+eps)x), with its largest p."""
    if eps <= 0 or k <= 0:
        raise ValueError("eps and k must be positive")
    q = x + 1
    while q < (1 + eps) * x:
        if q % 4 == 1 and is_prime(q):
            p = good_partner(q, eps, k)
            if p is not None:
                return GoodPair(p, q, eps, k, q * (q * q - 1) // 2)
        q += 1
    return None


def lps_params(n: int, eps: float, k: float) -> GoodPair | None:
    """First (eps, k)-good pair whose graph size q(q^2-1)/2 is in (n, (1+eps)n)."""
    if eps <= 0 or k <= 0:
        raise ValueError("eps and k must be positive")
    q = max(3, int(round((2 * n) ** (1 / 3))) - 2)
    while True:
        m = q * (q * q - 1) // 2
        if m >= (1 + eps) * n:
            return None
        if m > n and q % 4 == 1 and is_prime(q):
            p = good_partner(q, eps, k)
            if p is not None:
                return GoodPair(p, q, eps, k, m)
        q += 1


def four_squares_reps(p: int) -> list[tuple[int, int, int, int]]:
    """Solutions of a0^2+a1^2+a2^2+a3^2 = p with a0 > 0 odd and a1, a2, a3 even."""
    if p % 4 != 1:
        raise ValueError(f"need p = 1 mod 4, got {p}")
    out = []
    r = math.isqrt(p)
    evens = range(-(r - r % 2), r + 1, 2)
    for a0 in range(1, r + 1, 2):
        for a1 in evens:
            for a2 in evens:
                rest = p - a0 * a0 - a1 * a1 - a2 * a2
                if rest < 0:
                    continue
                a3 = math.isqrt(rest)
                if a3 * a3 != rest or a3 % 2:
                    continue
                out.append((a0, a1, a2, a3))
                if a3:
                    out.append((a0, a1, a2, -a3))
    return sorted(out)


@dataclass(frozen=True)
class GapScan:
    lo: int
    hi: int
    exponent: float
    violations: tuple[tuple[int, int], ...]
    max_gap_exponent: float

    def violating(self) -> list[int]:
        return [n for a, b in self.violations for n in range(a, b + 1)]

    def to_json(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "exponent": self.exponent,
            "violations": [list(v) for v in self.violations],
            "violation_count": sum(b - a + 1 for a, b in self.violations),
            "max_gap_exponent": self.max_gap_exponent,
        }


def prime_square_gap_scan(lo: int, hi: int, exponent: float) -> GapScan:
    """Find every n in [lo, hi] with no prime square in [n, n + n^exponent].

    Works segment by segment between consecutive prime squares; within a
    segment ``n + n^exponent`` is increasing so the violators form a prefix.
    Violations are reported as inclusive ranges.
    """
    if not 2 <= lo < hi:
        raise ValueError("need 2 <= lo < hi")
    primes = [int(p) for p in primes_up_to(math.isqrt(hi) + 1)]
    p_next = next_prime(primes[-1] + 1)
    squares = [p * p for p in primes] + [p_next * p_next]
    violations = []
    max_exp = 0.0
    start = lo
    for sq in squares:
        if sq < start:
            continue
        end = min(sq, hi)
        if start < sq:
            # the gap exponent is largest at the start of the segment
            max_exp = max(max_exp, math.log(sq - start) / math.log(start))
            last_bad = _last_violator(start, end, sq, exponent)
            if last_bad is not None:
                violations.append((start, last_bad))
        if sq >= hi:
            break
        start = sq + 1
        if start > hi:
            break
    return GapScan(lo, hi, exponent, tuple(violations), max_exp)


def _last_violator(a: int, b: int, sq: int, e: float) -> int | None:
    def bad(n):
        return n + n**e < sq

    if not bad(a):
        return None
    # largest n in [a, b] with bad(n); bad is monotone decreasing
    lo, hi = a, min(b, sq - 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if bad(mid):
            lo = mid
        else:
            hi = mid - 1
    return lo

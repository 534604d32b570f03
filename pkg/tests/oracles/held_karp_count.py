"""Independent Hamiltonian cycle count by subset dynamic programming.

Run by hand to re-derive the frozen G(5) value used in the tests:
    python3 tests/oracles/held_karp_count.py 5
Needs about 1.7 GB of memory for p = 5.
"""

import sys

import numba
import numpy as np


@numba.njit(cache=False)
def held_karp_cycles(adjm, n):
    # dp[mask, v]: paths from vertex 0 through exactly the vertices of mask (over 1..n-1), ending at v
    m = n - 1
    dp = np.zeros((1 << m, m), dtype=np.int32)  # int32 keeps p = 5 within memory
    overflow = False
    for v in range(m):
        if adjm[0, v + 1]:
            dp[1 << v, v] = 1
    for mask in range(1, 1 << m):
        for v in range(m):
            c = dp[mask, v]
            if c == 0:
                continue
            for w in range(m):
                if not (mask >> w) & 1 and adjm[v + 1, w + 1]:
                    t = dp[mask | (1 << w), w] + c
                    if t > 2147483647:
                        overflow = True
                    dp[mask | (1 << w), w] = t
    total = 0
    full = (1 << m) - 1
    for v in range(m):
        if adjm[0, v + 1]:
            total += dp[full, v]
    if overflow:
        return -1
    return total // 2


if __name__ == "__main__":
    p = int(sys.argv[1])
    n = p * p
    adjm = np.zeros((n, n), dtype=np.bool_)
    for a in range(p):
        for c in range(p):
            for b in range(p):
                if b != a:
                    d = (a * b - c) % p
                    adjm[a * p + c, b * p + d] = True
    print(held_karp_cycles(adjm, n))

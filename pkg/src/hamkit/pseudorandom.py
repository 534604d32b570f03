"""The C4-free graphs G~(p), G(p) and the LPS Ramanujan graphs.

Vertex (a, c) of F_p^2 has index a*p + c, i.e. lexicographic order, so the
p x p block structure of A^2 can be checked positionally.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .graphcore import Graph, components, girth
from .numtheory import four_squares_reps, is_prime, jacobi

DENSE_LIMIT = 4000
EIG_TOL = 1e-8


def _check_odd_prime(p: int) -> None:
    if p < 3 or not is_prime(p):
        raise ValueError(f"need an odd prime, got {p}")


def build_tilde_g(p: int) -> Graph:
    """(a, c) ~ (b, d) iff ab = c + d (mod p); loops where a^2 = 2c."""
    _check_odd_prime(p)
    adj = []
    for a in range(p):
        for c in range(p):
            # for each b the unique d is ab - c
            adj.append(frozenset(b * p + (a * b - c) % p for b in range(p)))
    return Graph(p * p, tuple(adj), allows_loops=True)


def build_gp(p: int) -> Graph:
    """G~(p) with every edge inside a block P_a removed (loops included)."""
    _check_odd_prime(p)
    tg = build_tilde_g(p)
    adj = tuple(frozenset(v for v in nbrs if v // p != u // p) for u, nbrs in enumerate(tg.adj))
    return Graph(p * p, adj)


@dataclass(frozen=True)
class BlockClaims:
    cross_matching: bool
    block_matching_plus_loop: bool
    cross_unique_common: bool
    block_no_common: bool

    def all(self) -> bool:
        return all(asdict(self).values())


def common_neighbour_counts(g: Graph) -> np.ndarray:
    """A^2 by counting common neighbours directly (loops count as neighbours)."""
    out = np.zeros((g.n, g.n), dtype=np.int64)
    for u in range(g.n):
        for v in range(u, g.n):
            out[u, v] = out[v, u] = len(g.adj[u] & g.adj[v])
    return out


def verify_block_claims(p: int) -> BlockClaims:
    """The four structural facts about G~(p) on which the certificate rests."""
    _check_odd_prime(p)
    g = build_tilde_g(p)
    a = g.to_numpy()
    a2 = a @ a
    blocks = np.arange(p * p) // p
    same = blocks[:, None] == blocks[None, :]

    cross = True
    for x in range(p):
        for y in range(p):
            if x != y:
                sub = a[x * p : (x + 1) * p, y * p : (y + 1) * p]
                cross &= bool((sub.sum(axis=0) == 1).all() and (sub.sum(axis=1) == 1).all())

    inner = True
    for x in range(p):
        sub = a[x * p : (x + 1) * p, x * p : (x + 1) * p]
        # one intra-block neighbour each: its partner, or itself via the loop
        inner &= bool((sub.sum(axis=1) == 1).all() and int(np.trace(sub)) == 1)

    off = ~np.eye(p * p, dtype=bool)
    return BlockClaims(
        cross_matching=cross,
        block_matching_plus_loop=inner,
        cross_unique_common=bool((a2[~same] == 1).all()),
        block_no_common=bool((a2[same & off] == 0).all()),
    )


@dataclass(frozen=True)
class SpectralCertificate:
    p: int
    n_vertices: int
    degree: int
    blocks_ok: bool
    c4_free: bool
    inf_norm: int
    lambda_sq_bound: int
    connected: bool
    multiplicity_one_certified: bool
    numeric_lambda2: float | None = None

    def to_json(self) -> dict:
        return asdict(self)


def _blocks_ok(a2: np.ndarray, p: int) -> bool:
    for x in range(p):
        for y in range(p):
            blk = a2[x * p : (x + 1) * p, y * p : (y + 1) * p]
            if x == y:
                if not np.array_equal(blk, (p - 1) * np.eye(p, dtype=np.int64)):
                    return False
            elif not (
                np.isin(blk, (0, 1)).all()
                and (blk.sum(axis=0) == p - 2).all()
                and (blk.sum(axis=1) == p - 2).all()
            ):
                return False
    return True


def deflated_top_magnitudes(g: Graph, k: int = 2) -> list[float]:
    """Largest |eigenvalue| of A restricted to the complement of the all-ones vector.

    Uses Lanczos (ARPACK) on the operator x -> A x - (1.x)(A 1)/n.
    """
    from scipy.sparse import csr_matrix
    from scipy.sparse.linalg import LinearOperator, eigsh

    n = g.n
    rows = [u for u in range(n) for _ in g.adj[u]]
    cols = [v for u in range(n) for v in sorted(g.adj[u])]
    a = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    ones = np.ones(n) / math.sqrt(n)

    def mv(x):
        x = np.ravel(x)
        x = x - ones * (ones @ x)
        y = a @ x
        return y - ones * (ones @ y)

    op = LinearOperator((n, n), matvec=mv, dtype=float)
    v0 = np.cos(np.arange(n) + 0.5)  # fixed start vector keeps runs reproducible
    vals = eigsh(op, k=k, which="LM", tol=EIG_TOL / 10, v0=v0, return_eigenvectors=False, ncv=min(n, max(2 * k + 1, 20)))
    return sorted((abs(float(v)) for v in vals), reverse=True)


def spectral_certificate(p: int, with_numeric: bool = False) -> SpectralCertificate:
    """Integer-exact check that nontrivial eigenvalues of G(p) satisfy lambda^2 <= 4p - 5."""
    _check_odd_prime(p)
    g = build_gp(p)
    a = g.to_numpy()
    a2 = a @ a
    n = p * p
    s = a2 - np.ones((n, n), dtype=np.int64)
    inf_norm = int(np.abs(s).sum(axis=1).max())
    off = ~np.eye(n, dtype=bool)
    connected = len(components(g)) == 1
    bound = 4 * p - 5
    numeric = None
    if with_numeric:
        numeric = deflated_top_magnitudes(g, 2)[0]
    return SpectralCertificate(
        p=p,
        n_vertices=n,
        degree=p - 1,
        blocks_ok=_blocks_ok(a2, p),
        c4_free=bool((a2[off] <= 1).all()),
        inf_norm=inf_norm,
        lambda_sq_bound=bound,
        connected=connected,
        multiplicity_one_certified=connected and (p - 1) ** 2 > bound,
        numeric_lambda2=numeric,
    )


def numeric_spectrum(g: Graph, k: int) -> list[float]:
    """The k eigenvalues of largest magnitude, ordered by decreasing magnitude.

    Dense symmetric solver up to DENSE_LIMIT vertices, Lanczos above.
    """
    if not 1 <= k <= g.n:
        raise ValueError(f"need 1 <= k <= n, got k={k}")
    if g.n <= DENSE_LIMIT:
        vals = np.linalg.eigvalsh(g.to_numpy().astype(float))
    else:
        from scipy.sparse import csr_matrix
        from scipy.sparse.linalg import eigsh

        rows = [u for u in range(g.n) for _ in g.adj[u]]
        cols = [v for u in range(g.n) for v in sorted(g.adj[u])]
        a = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(g.n, g.n))
        vals = eigsh(a, k=k, which="LM", tol=EIG_TOL / 10, v0=np.cos(np.arange(g.n) + 0.5), return_eigenvectors=False)
    order = sorted(vals, key=lambda v: (-round(abs(v), 9), -v))
    return [float(v) for v in order[:k]]


# -- LPS Ramanujan graphs ---------------------------------------------------


class LpsParameterError(ValueError):
    """Raised for (p, q) outside the non-bipartite LPS case; ``reason`` names the check."""

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


Mat = tuple[int, int, int, int]


def _mul(x: Mat, y: Mat, q: int) -> Mat:
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % q, (a * f + b * h) % q, (c * e + d * g) % q, (c * f + d * h) % q)


def psl_canonical(m: Mat, q: int) -> Mat:
    """Pick M or -M: the one whose first nonzero entry is in 1..(q-1)/2."""
    first = next(x for x in m if x)
    if first <= (q - 1) // 2:
        return m
    return tuple((-x) % q for x in m)


def psl2_elements(q: int) -> list[Mat]:
    out = []
    for a in range(q):
        for b in range(q):
            for c in range(q):
                if a:
                    d = (1 + b * c) * pow(a, -1, q) % q
                    mats = [(a, b, c, d)]
                elif b and (b * c) % q == q - 1:
                    mats = [(0, b, c, d) for d in range(q)]
                else:
                    continue
                out.extend(m for m in mats if psl_canonical(m, q) == m)
    return sorted(out)


@dataclass(frozen=True)
class LpsGraph:
    p: int
    q: int
    graph: Graph
    generators: tuple[Mat, ...]
    girth_lower_bound: float
    elements: tuple[Mat, ...]

    def inverse_closed(self) -> bool:
        gens = set(self.generators)
        q = self.q
        for a, b, c, d in self.generators:
            inv = psl_canonical((d, (-b) % q, (-c) % q, a), q)
            if inv not in gens:
                return False
        return True


def _sqrt_mod(x: int, q: int) -> int:
    x %= q
    return next(r for r in range(q) if r * r % q == x)


def lps_generators(p: int, q: int) -> list[Mat]:
    """The p+1 generators in PSL(2, q), scaled to determinant one."""
    i = _sqrt_mod(q - 1, q)
    s_inv = pow(_sqrt_mod(p, q), -1, q)
    gens = []
    for a0, a1, a2, a3 in four_squares_reps(p):
        m = ((a0 + a1 * i) % q, (a2 + a3 * i) % q, (-a2 + a3 * i) % q, (a0 - a1 * i) % q)
        gens.append(psl_canonical(tuple(x * s_inv % q for x in m), q))
    return gens


def build_lps(p: int, q: int) -> LpsGraph:
    """Cayley graph of PSL(2, q) on the LPS generators for p."""
    if not (is_prime(p) and is_prime(q)):
        raise LpsParameterError("prime", "p and q must be prime")
    if p == q:
        raise LpsParameterError("unequal", "p and q must differ")
    if p % 4 != 1 or q % 4 != 1:
        raise LpsParameterError("congruence", "p and q must both be 1 mod 4")
    if jacobi(p, q) != 1:
        raise LpsParameterError("residue", "p must be a quadratic residue mod q (bipartite case unsupported)")
    if q <= 2 * math.sqrt(p):
        raise LpsParameterError("size", "need q > 2 sqrt(p)")
    gens = lps_generators(p, q)
    elems = psl2_elements(q)
    index = {m: k for k, m in enumerate(elems)}
    adj = []
    for x in elems:
        nbrs = frozenset(index[psl_canonical(_mul(x, g, q), q)] for g in gens)
        if len(nbrs) != p + 1:
            raise AssertionError(f"vertex {x} has {len(nbrs)} neighbours, expected {p + 1}")
        adj.append(nbrs)
    expected = q * (q * q - 1) // 2
    if len(elems) != expected:
        raise AssertionError(f"PSL(2,{q}) has {len(elems)} elements, expected {expected}")
    g = Graph(len(elems), tuple(adj))
    return LpsGraph(p, q, g, tuple(gens), 2 * math.log(q, p), tuple(elems))


def lps_report(lps: LpsGraph, with_girth: bool = False, with_spectrum: bool = False) -> dict:
    g = lps.graph
    degrees = {len(nb) for nb in g.adj}
    out = {
        "p": lps.p,
        "q": lps.q,
        "n_vertices": g.n,
        "degree": degrees.pop() if len(degrees) == 1 else None,
        "connected": len(components(g)) == 1,
        "inverse_closed": lps.inverse_closed(),
        "girth_lower_bound": lps.girth_lower_bound,
        "generators": [list(m) for m in lps.generators],
    }
    if with_girth:
        gi = girth(g)
        out["girth"] = None if gi == math.inf else int(gi)
    if with_spectrum:
        vals = np.linalg.eigvalsh(g.to_numpy().astype(float)) if g.n <= DENSE_LIMIT else None
        if vals is None:
            top = deflated_top_magnitudes(g, 2)[0]
        else:
            # drop the trivial eigenvalue p+1 once
            nontrivial = np.delete(vals, int(np.argmax(vals)))
            top = float(np.abs(nontrivial).max())
        out["max_nontrivial_abs_eigenvalue"] = top
        out["ramanujan_bound"] = 2 * math.sqrt(lps.p)
    return out

"""Exact extremal values by exhaustive search, at desk scale.

The clique solver is a bitset branch-and-bound with a greedy colouring
bound.  :func:`exhaustive_extremal` walks every subset and exists to
cross-check it on small instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Sequence

import numpy as np

from .families import PartialWord
from .graphcore import CompleteBipartite, CycleExact, EvenCycle, Graph, HamPath, OddCycle, PathFamily, find_pattern
from .relations import ALL_WAYS, SHARED_CONVENTIONS, Way, creates, has_c4_way, is_good_k24, is_reversing

MAX_OBJECTS = 5000
MAX_EXHAUSTIVE = 20
MAX_COUNT_N = 32

Matching = tuple[tuple[int, int], ...]


class ResourceLimitError(RuntimeError):
    """The request is beyond what the exact search is allowed to attempt."""


@dataclass(frozen=True)
class OracleResult:
    value: int
    witness: tuple[int, ...]  # indices into the object list
    objects_enumerated: int
    search_nodes: int

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "witness_indices": list(self.witness),
            "objects_enumerated": self.objects_enumerated,
            "search_nodes": self.search_nodes,
        }


# -- object enumeration -----------------------------------------------------


def enumerate_ham_paths(n: int) -> PathFamily:
    """All n!/2 undirected Hamiltonian paths of K_n, in lexicographic order."""
    if not 3 <= n <= 8:
        raise ValueError(f"need 3 <= n <= 8, got {n}")
    return PathFamily.from_orders(n, (p for p in permutations(range(n)) if p[0] < p[-1]))


def enumerate_matchings(n: int) -> list[Matching]:
    """All (n-1)!! perfect matchings of K_n; vertex 0 is always matched first."""
    if n % 2 or not 4 <= n <= 10:
        raise ValueError(f"need even 4 <= n <= 10, got {n}")

    def rec(free: tuple[int, ...]) -> list[Matching]:
        if not free:
            return [()]
        a, rest = free[0], free[1:]
        out = []
        for k, b in enumerate(rest):
            out.extend(((a, b),) + m for m in rec(rest[:k] + rest[k + 1 :]))
        return out

    return rec(tuple(range(n)))


def enumerate_permutations(n: int) -> list[PartialWord]:
    return [PartialWord(p, n) for p in permutations(range(n))]


def matching_graph(n: int, *ms: Matching) -> Graph:
    return Graph.from_edges(n, (e for m in ms for e in m))


# -- relations by name ------------------------------------------------------


def parse_pattern(name: str):
    """c3, c4, c2k:<k>, odd, even, k24, k33 as pattern objects; other names pass through."""
    fixed = {
        "c3": CycleExact(3),
        "c4": CycleExact(4),
        "odd": OddCycle(),
        "even": EvenCycle(),
        "k24": CompleteBipartite(2, 4),
        "k33": CompleteBipartite(3, 3),
    }
    if name in fixed:
        return fixed[name]
    if name.startswith("c2k:"):
        k = int(name[4:])
        if k < 2:
            raise ValueError("c2k needs k >= 2")
        return CycleExact(2 * k)
    if name in ("good-k24", "reverse"):
        return name
    raise ValueError(f"unknown relation {name!r}")


def make_relation(
    kind: str, name: str, ways: frozenset[Way] | None = None, shared: str = "assign", n: int | None = None
) -> Callable:
    """Symmetric predicate for objects of ``kind`` (paths, matchings or perms)."""
    if shared not in SHARED_CONVENTIONS:
        raise ValueError(f"unknown shared-edge convention {shared!r}")
    pat = parse_pattern(name)
    if ways is not None and pat != CycleExact(4):
        raise ValueError("ways only apply to the c4 relation")
    if kind == "perms":
        if pat != "reverse":
            raise ValueError("permutations only support the reverse relation")
        return is_reversing
    if pat == "reverse":
        raise ValueError("reverse applies to permutations only")
    if kind == "matchings":
        if pat == "good-k24":
            raise ValueError("good-k24 applies to paths only")
        return lambda a, b: find_pattern(matching_graph(n, a, b), pat) is not None
    if kind != "paths":
        raise ValueError(f"unknown object kind {kind!r}")
    if pat == "good-k24":
        return lambda a, b: is_good_k24(a, b) is not None
    if pat == CycleExact(4):
        w = ALL_WAYS if ways is None else ways
        return lambda a, b: has_c4_way(a, b, w, shared)
    return lambda a, b: creates(a, b, pat) is not None


def relation_masks(objects: Sequence, relation: Callable) -> list[int]:
    m = len(objects)
    adj = [0] * m
    for i in range(m):
        for j in range(i + 1, m):
            if relation(objects[i], objects[j]):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


# -- branch and bound ---------------------------------------------------------


def _degeneracy_order(adj: Sequence[int]) -> list[int]:
    """Vertices in reverse removal order of min-degree peeling (ties by index)."""
    m = len(adj)
    alive = (1 << m) - 1
    deg = [a.bit_count() for a in adj]
    removed = []
    for _ in range(m):
        v = min((u for u in range(m) if alive >> u & 1), key=lambda u: (deg[u], u))
        removed.append(v)
        alive &= ~(1 << v)
        nb = adj[v] & alive
        while nb:
            low = nb & -nb
            deg[low.bit_length() - 1] -= 1
            nb ^= low
    return removed[::-1]


class _CliqueSearch:
    def __init__(self, adj: Sequence[int]):
        self.adj = adj
        self.nodes = 0

    def colour_sort(self, p: int) -> tuple[list[int], list[int]]:
        adj = self.adj
        order, bounds = [], []
        colour = 0
        while p:
            colour += 1
            q = p
            while q:
                low = q & -q
                v = low.bit_length() - 1
                q &= ~adj[v] & ~low
                p &= ~low
                order.append(v)
                bounds.append(colour)
        return order, bounds

    def max_clique(self, p: int, target: int = 0) -> list[int]:
        """Largest clique inside candidate set ``p``; stops early once ``target`` is reached."""
        best: list[int] = []
        cur: list[int] = []
        adj = self.adj

        def expand(p: int):
            nonlocal best
            self.nodes += 1
            order, bounds = self.colour_sort(p)
            for k in range(len(order) - 1, -1, -1):
                if len(cur) + bounds[k] <= len(best) or (target and len(best) >= target):
                    return
                v = order[k]
                cur.append(v)
                np_ = p & adj[v]
                if np_:
                    expand(np_)
                elif len(cur) > len(best):
                    best = list(cur)
                cur.pop()
                p &= ~(1 << v)

        if p:
            expand(p)
        return best


def _lex_smallest_clique(search: _CliqueSearch, m: int, size: int) -> tuple[int, ...]:
    # greedily take the smallest index that still extends to a clique of full size
    chosen: list[int] = []
    cand = (1 << m) - 1
    while len(chosen) < size:
        need = size - len(chosen) - 1
        for v in range(m):
            if not cand >> v & 1:
                continue
            rest = cand & search.adj[v] & ~((1 << (v + 1)) - 1)
            if need == 0 or len(search.max_clique(rest, need)) >= need:
                chosen.append(v)
                cand = rest
                break
        else:
            raise AssertionError("optimal clique vanished during witness selection")
    return tuple(chosen)


def clique_from_masks(adj: Sequence[int], transitive: bool = False) -> tuple[int, tuple[int, ...], int]:
    """(clique number, lexicographically smallest maximum clique, search nodes).

    With ``transitive`` the caller asserts that the relation graph is
    vertex-transitive, so some maximum clique contains vertex 0 and the
    search can be rooted there.
    """
    m = len(adj)
    if m == 0:
        return 0, (), 0
    if transitive:
        return _rooted_clique(adj)
    order = _degeneracy_order(adj)
    # relabel so that bit order is the search order
    pos = {v: i for i, v in enumerate(order)}
    radj = [0] * m
    for v in range(m):
        mask, out = adj[v], 0
        while mask:
            low = mask & -mask
            out |= 1 << pos[low.bit_length() - 1]
            mask ^= low
        radj[pos[v]] = out
    search = _CliqueSearch(radj)
    value = len(search.max_clique((1 << m) - 1))
    nodes = search.nodes
    witness = _lex_smallest_clique(_CliqueSearch(adj), m, value)
    return value, witness, nodes


def _rooted_clique(adj: Sequence[int]) -> tuple[int, tuple[int, ...], int]:
    nb = [i for i in range(len(adj)) if adj[0] >> i & 1]
    sub = []
    for i in nb:
        mask, out = adj[i], 0
        for k, j in enumerate(nb):
            if mask >> j & 1:
                out |= 1 << k
        sub.append(out)
    value, wit, nodes = clique_from_masks(sub)
    # the lexicographically smallest optimum starts at 0 as well
    return value + 1, (0, *(nb[k] for k in wit)), nodes + 1


def _complement(adj: Sequence[int]) -> list[int]:
    full = (1 << len(adj)) - 1
    return [full & ~a & ~(1 << v) for v, a in enumerate(adj)]


def exact_extremal(
    objects: Sequence, relation: Callable, mode: str = "max-clique", transitive: bool = False
) -> OracleResult:
    """Largest subfamily that is pairwise related (max-clique) or pairwise unrelated (max-independent).

    ``transitive`` may be set when a group acting transitively on the
    objects preserves the relation (relabelling the vertices of K_n does
    this for paths, matchings and permutations).
    """
    if mode not in ("max-clique", "max-independent"):
        raise ValueError(f"unknown mode {mode!r}")
    m = len(objects)
    if m > MAX_OBJECTS:
        raise ResourceLimitError(f"{m} objects exceeds the limit of {MAX_OBJECTS}")
    adj = relation_masks(objects, relation)
    if mode == "max-independent":
        adj = _complement(adj)
    value, witness, nodes = clique_from_masks(adj, transitive)
    return OracleResult(value, witness, m, nodes)


def exhaustive_extremal(objects: Sequence, relation: Callable, mode: str = "max-clique") -> OracleResult:
    """Reference oracle: classify all 2^m subsets (m <= 20) with a subset recurrence."""
    if mode not in ("max-clique", "max-independent"):
        raise ValueError(f"unknown mode {mode!r}")
    m = len(objects)
    if m > MAX_EXHAUSTIVE:
        raise ResourceLimitError(f"exhaustive oracle takes at most {MAX_EXHAUSTIVE} objects, got {m}")
    want = mode == "max-clique"
    rel = np.zeros((m, m), dtype=bool)
    for i in range(m):
        for j in range(i + 1, m):
            rel[i, j] = rel[j, i] = bool(relation(objects[i], objects[j])) == want
    ok = np.zeros(1 << m, dtype=bool)
    size = np.zeros(1 << m, dtype=np.int64)
    ok[0] = True
    for k in range(m):
        lower = np.arange(1 << k, dtype=np.int64)
        partners = sum(1 << j for j in range(k) if rel[k, j])
        # a set with top element k is good iff its rest is good and inside N(k)
        ok[(1 << k) : (2 << k)] = ok[: 1 << k] & ((lower & ~partners) == 0)
        size[(1 << k) : (2 << k)] = size[: 1 << k] + 1
    value = int(size[ok].max())
    best = None
    for mask in np.flatnonzero(ok & (size == value)):
        idx = tuple(j for j in range(m) if int(mask) >> j & 1)
        if best is None or idx < best:
            best = idx
    return OracleResult(value, best, m, 1 << m)


def exact_c4_ways_extremal(n: int, ways, shared: str = "assign", mode: str = "max-clique") -> OracleResult:
    """Pairwise C4-creating paths of K_n in which each pair has a 4-cycle of an allowed way."""
    if not 3 <= n <= 6:
        raise ValueError(f"need 3 <= n <= 6, got {n}")
    rel = make_relation("paths", "c4", frozenset(ways), shared)
    return exact_extremal(list(enumerate_ham_paths(n)), rel, mode, transitive=True)


def exact_rp(n: int) -> OracleResult:
    """Maximum number of pairwise reversing permutations of [n]."""
    if not 2 <= n <= 5:
        raise ValueError(f"need 2 <= n <= 5, got {n}")
    return exact_extremal(enumerate_permutations(n), is_reversing, transitive=True)


# -- Hamiltonian counting ---------------------------------------------------


def _count_kernel_py(nbr, deg, n, start, cycles):
    # reference implementation; the numba build compiles this same function
    full = (1 << n) - 1
    path = np.zeros(n, dtype=np.int64)
    ptr = np.zeros(n, dtype=np.int64)
    path[0] = start
    visited = 1 << start
    depth = 0
    count = 0
    while depth >= 0:
        v = path[depth]
        if ptr[depth] >= deg[v]:
            visited &= ~(1 << v)
            depth -= 1
            continue
        u = nbr[v, ptr[depth]]
        ptr[depth] += 1
        bit = 1 << u
        if visited & bit:
            continue
        nv = visited | bit
        if nv == full:
            if not cycles:
                count += 1
            else:
                for k in range(deg[u]):
                    if nbr[u, k] == start:
                        count += 1
                        break
            continue
        # every unvisited vertex needs enough free neighbours to be passed through
        avail = (full & ~nv) | bit
        if cycles:
            avail |= 1 << start
        dead = False
        ends = 0
        for w in range(n):
            if nv >> w & 1:
                continue
            c = 0
            for k in range(deg[w]):
                if avail >> nbr[w, k] & 1:
                    c += 1
            if c == 0 or (cycles and c < 2):
                dead = True
                break
            if c == 1:
                ends += 1
                if ends > 1:
                    dead = True
                    break
        if dead:
            continue
        depth += 1
        path[depth] = u
        ptr[depth] = 0
        visited = nv
    return count


_compiled = None


def _kernel():
    global _compiled
    if _compiled is None:
        try:
            import numba

            _compiled = numba.njit(cache=False)(_count_kernel_py)
        except ImportError:  # pragma: no cover
            _compiled = _count_kernel_py
    return _compiled


def count_ham(g: Graph, kind: str = "cycles", compiled: bool = True) -> int:
    """Exact number of undirected Hamiltonian cycles or paths of ``g``.

    Depth-first search with a degree-feasibility prune.  Cycles are rooted
    at vertex 0 and counted once per direction, then halved.  Loops are
    ignored.
    """
    if kind not in ("cycles", "paths"):
        raise ValueError(f"unknown kind {kind!r}")
    n = g.n
    if n > MAX_COUNT_N:
        raise ResourceLimitError(f"Hamiltonian counting is limited to {MAX_COUNT_N} vertices, got {n}")
    if n == 0:
        return 0
    if n == 1:
        return 0 if kind == "cycles" else 1
    adj = [sorted(v for v in g.adj[u] if v != u) for u in range(n)]
    width = max(1, max(len(a) for a in adj))
    nbr = np.zeros((n, width), dtype=np.int64)
    deg = np.array([len(a) for a in adj], dtype=np.int64)
    for u, a in enumerate(adj):
        nbr[u, : len(a)] = a
    run = _kernel() if compiled else _count_kernel_py
    if kind == "cycles":
        if n < 3:
            return 0
        return int(run(nbr, deg, n, 0, True)) // 2
    # each undirected path is found once from each end
    return sum(int(run(nbr, deg, n, s, False)) for s in range(n)) // 2


def kriv_estimate(n: int, d: int) -> float:
    """Natural log of n! (d/n)^n, the leading term without the (1+o(1))^n factor."""
    if not 1 <= d < n:
        raise ValueError("need 1 <= d < n")
    return math.lgamma(n + 1) + n * (math.log(d) - math.log(n))

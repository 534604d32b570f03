"""Graphs, Hamiltonian paths and exact subgraph detection.

Everything here is immutable.  Vertex ids are always ``0..n-1``.  Pattern
searches are exact and return the lexicographically smallest witness so
that output is reproducible.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence, Union

PATH_FAMILY_HEADER = "# hampath-family v1"
GRAPH_HEADER = "# graph v1"


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[frozenset[int], ...]
    allows_loops: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        if len(self.adj) != self.n:
            raise ValueError("adjacency length does not match n")
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                if not 0 <= v < self.n:
                    raise ValueError(f"vertex id {v} out of range")
                if u not in self.adj[v]:
                    raise ValueError(f"adjacency not symmetric at {u}-{v}")
            if u in nbrs and not self.allows_loops:
                raise ValueError(f"loop at {u} in a loop-free graph")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], allows_loops: bool = False) -> Graph:
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(frozenset(s) for s in nbrs), allows_loops)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        """Number of distinct neighbours, a loop counting once."""
        return len(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u <= v]

    @property
    def num_edges(self) -> int:
        return len(self.edges())

    def loops(self) -> list[int]:
        return [v for v in range(self.n) if v in self.adj[v]]

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighbour bitmasks with loops stripped."""
        return tuple(sum(1 << v for v in nbrs if v != u) for u, nbrs in enumerate(self.adj))

    def without_loops(self) -> Graph:
        return Graph(self.n, tuple(nbrs - {u} for u, nbrs in enumerate(self.adj)), False)

    def is_connected(self) -> bool:
        return len(components(self)) == 1

    def to_numpy(self):
        import numpy as np

        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, nbrs in enumerate(self.adj):
            a[u, list(nbrs)] = 1
        return a


@dataclass(frozen=True)
class HamPath:
    """A Hamiltonian path of K_n.

    Undirected paths are stored canonically (first vertex < last vertex),
    so equal paths compare equal regardless of the direction given.
    """

    order: tuple[int, ...]
    directed: bool = False

    def __post_init__(self):
        order = tuple(int(v) for v in self.order)
        if sorted(order) != list(range(len(order))) or not order:
            raise ValueError(f"not a permutation of 0..n-1: {order}")
        if not self.directed and order[0] > order[-1]:
            order = order[::-1]
        object.__setattr__(self, "order", order)

    @property
    def n(self) -> int:
        return len(self.order)

    @cached_property
    def position(self) -> tuple[int, ...]:
        pos = [0] * self.n
        for i, v in enumerate(self.order):
            pos[v] = i
        return tuple(pos)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        m = [0] * self.n
        for u, v in zip(self.order, self.order[1:]):
            m[u] |= 1 << v
            m[v] |= 1 << u
        return tuple(m)

    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset((min(u, v), max(u, v)) for u, v in zip(self.order, self.order[1:]))

    def has_edge(self, u: int, v: int) -> bool:
        return abs(self.position[u] - self.position[v]) == 1

    def neighbours(self, v: int) -> tuple[int, ...]:
        i = self.position[v]
        return tuple(self.order[j] for j in (i - 1, i + 1) if 0 <= j < self.n)

    def relabel(self, sigma: Sequence[int]) -> HamPath:
        return HamPath(tuple(sigma[v] for v in self.order), self.directed)

    def undirected(self) -> HamPath:
        return HamPath(self.order, False)

    def __str__(self):
        return "-".join(map(str, self.order))


@dataclass(frozen=True)
class PathFamily:
    n: int
    directed: bool
    paths: tuple[HamPath, ...] = field(default=())

    def __post_init__(self):
        paths = tuple(self.paths)
        for h in paths:
            if h.n != self.n or h.directed != self.directed:
                raise ValueError("all paths must share n and directedness")
        if len(set(paths)) != len(paths):
            raise ValueError("duplicate paths in family")
        object.__setattr__(self, "paths", paths)

    @classmethod
    def from_orders(cls, n: int, orders: Iterable[Sequence[int]], directed: bool = False) -> PathFamily:
        return cls(n, directed, tuple(HamPath(tuple(o), directed) for o in orders))

    def __len__(self):
        return len(self.paths)

    def __iter__(self) -> Iterator[HamPath]:
        return iter(self.paths)

    def __getitem__(self, i: int) -> HamPath:
        return self.paths[i]

    def as_undirected(self) -> PathFamily:
        seen: dict[HamPath, None] = {}
        for h in self.paths:
            seen.setdefault(h.undirected(), None)
        return PathFamily(self.n, False, tuple(seen))


# -- patterns -------------------------------------------------------------


@dataclass(frozen=True)
class CycleExact:
    L: int

    def __post_init__(self):
        if self.L < 3:
            raise ValueError("cycle length must be at least 3")


@dataclass(frozen=True)
class OddCycle:
    pass


@dataclass(frozen=True)
class EvenCycle:
    pass


@dataclass(frozen=True)
class CompleteBipartite:
    s: int
    t: int

    def __post_init__(self):
        if not 1 <= self.s <= self.t:
            raise ValueError("need 1 <= s <= t")


Pattern = Union[CycleExact, OddCycle, EvenCycle, CompleteBipartite]


def pattern_label(p: Pattern) -> str:
    if isinstance(p, CycleExact):
        return f"c{p.L}"
    if isinstance(p, OddCycle):
        return "odd"
    if isinstance(p, EvenCycle):
        return "even"
    return f"k{p.s}{p.t}" if p.t < 10 else f"k{p.s},{p.t}"


@dataclass(frozen=True)
class SubgraphWitness:
    kind: Pattern
    vertices: tuple[int, ...]

    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        if isinstance(self.kind, CompleteBipartite):
            left, right = vs[: self.kind.s], vs[self.kind.s :]
            return [(a, b) for a in left for b in right]
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def holds_in(self, g: Graph) -> bool:
        if len(set(self.vertices)) != len(self.vertices):
            return False
        return all(g.has_edge(u, v) and u != v for u, v in self.edges())


# -- operations -----------------------------------------------------------


def union_graph(a: HamPath, b: HamPath) -> Graph:
    if a.n != b.n:
        raise ValueError(f"paths on different vertex counts: {a.n} != {b.n}")
    return Graph.from_edges(a.n, a.edges() | b.edges())


def _find_cycle_exact(masks: Sequence[int], n: int, L: int) -> tuple[int, ...] | None:
    # DFS with the start as the minimum vertex; ascending neighbour order
    # yields the lexicographically smallest cycle first.
    for s in range(n):
        above = ~((1 << (s + 1)) - 1)
        if bin(masks[s] & above).count("1") < 2:
            continue
        path = [s]
        used = 1 << s

        def dfs(v: int, used: int) -> bool:
            if len(path) == L:
                return bool(masks[v] >> s & 1) and path[1] < path[-1]
            cand = masks[v] & above & ~used
            while cand:
                low = cand & -cand
                w = low.bit_length() - 1
                cand ^= low
                if len(path) == L - 1 and not masks[w] >> s & 1:
                    continue
                path.append(w)
                if dfs(w, used | low):
                    return True
                path.pop()
            return False

        if dfs(s, used):
            return tuple(path)
    return None


def _bipartition(masks: Sequence[int], n: int) -> list[int] | None:
    color = [-1] * n
    for r in range(n):
        if color[r] >= 0:
            continue
        color[r] = 0
        queue = deque([r])
        while queue:
            u = queue.popleft()
            m = masks[u]
            while m:
                low = m & -m
                w = low.bit_length() - 1
                m ^= low
                if color[w] < 0:
                    color[w] = color[u] ^ 1
                    queue.append(w)
                elif color[w] == color[u]:
                    return None
    return color


def is_bipartite(g: Graph) -> bool:
    return _bipartition(g.masks, g.n) is not None


def _odd_girth(masks: Sequence[int], n: int) -> int:
    best = math.inf
    for r in range(n):
        dist = [-1] * n
        dist[r] = 0
        queue = deque([r])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            m = masks[u]
            while m:
                low = m & -m
                w = low.bit_length() - 1
                m ^= low
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
                elif dist[w] == dist[u]:
                    best = min(best, 2 * dist[u] + 1)
    return best


def find_pattern(g: Graph, p: Pattern) -> SubgraphWitness | None:
    """Exact search for ``p`` as a (not necessarily induced) subgraph of ``g``.

    Loops never take part in a witness.  Cycle witnesses are listed in cycle
    order starting at their smallest vertex; bipartite witnesses list the
    ``s`` left vertices and then the ``t`` right vertices.
    """
    masks, n = g.masks, g.n
    if isinstance(p, CycleExact):
        cyc = _find_cycle_exact(masks, n, p.L) if p.L <= n else None
        return SubgraphWitness(p, cyc) if cyc else None
    if isinstance(p, OddCycle):
        if _bipartition(masks, n) is not None:
            return None
        L = _odd_girth(masks, n)
        return SubgraphWitness(p, _find_cycle_exact(masks, n, L))
    if isinstance(p, EvenCycle):
        for L in range(4, n + 1, 2):
            cyc = _find_cycle_exact(masks, n, L)
            if cyc:
                return SubgraphWitness(p, cyc)
        return None
    if isinstance(p, CompleteBipartite):
        return _find_complete_bipartite(masks, n, p)
    raise TypeError(f"unknown pattern {p!r}")


def _find_complete_bipartite(masks, n, p: CompleteBipartite) -> SubgraphWitness | None:
    deg = [bin(m).count("1") for m in masks]
    left_ok = [v for v in range(n) if deg[v] >= p.t]
    right_ok = sum(1 << v for v in range(n) if deg[v] >= p.s)
    for left in combinations(left_ok, p.s):
        common = right_ok
        for v in left:
            common &= masks[v]
            if not common:
                break
        # left vertices never lie in their own common neighbourhood (no loops)
        right = []
        while common and len(right) < p.t:
            low = common & -common
            right.append(low.bit_length() - 1)
            common ^= low
        if len(right) == p.t:
            return SubgraphWitness(p, tuple(left) + tuple(right))
    return None


def girth(g: Graph) -> float:
    """Length of a shortest cycle (``math.inf`` for forests), loops ignored."""
    masks, n = g.masks, g.n
    best = math.inf
    for r in range(n):
        dist = [-1] * n
        parent = [-1] * n
        dist[r] = 0
        queue = deque([r])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            m = masks[u]
            while m:
                low = m & -m
                w = low.bit_length() - 1
                m ^= low
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    out = []
    for r in range(g.n):
        if seen[r]:
            continue
        seen[r] = True
        comp, stack = [], [r]
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in g.adj[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        out.append(sorted(comp))
    return out


def degree_product_log(g: Graph) -> float:
    """Natural log of ``n * prod(deg)``, which bounds the Hamiltonian path count.

    Degrees exclude loops.  Equal degrees are grouped so a d-regular graph
    gives exactly ``log(n) + n*log(d)``.
    """
    counts = Counter(bin(m).count("1") for m in g.masks)
    if counts.get(0):
        return -math.inf
    return math.log(g.n) + sum(c * math.log(d) for d, c in sorted(counts.items()))


# -- text formats ---------------------------------------------------------


def write_path_family(f: PathFamily) -> str:
    lines = [PATH_FAMILY_HEADER, f"n={f.n} directed={int(f.directed)} count={len(f)}"]
    lines.extend(" ".join(map(str, h.order)) for h in f)
    return "\n".join(lines) + "\n"


def _parse_header_fields(line: str) -> dict[str, str]:
    out = {}
    for tok in line.split():
        key, _, val = tok.partition("=")
        if not _:
            raise ValueError(f"malformed header token {tok!r}")
        out[key] = val
    return out


def read_path_family(text: str) -> PathFamily:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != PATH_FAMILY_HEADER:
        raise ValueError("missing hampath-family v1 header")
    hdr = _parse_header_fields(lines[1])
    n, directed, count = int(hdr["n"]), hdr["directed"] == "1", int(hdr["count"])
    orders = [tuple(int(t) for t in ln.split()) for ln in lines[2:]]
    if len(orders) != count:
        raise ValueError(f"header says count={count}, found {len(orders)} paths")
    return PathFamily.from_orders(n, orders, directed)


def write_graph(g: Graph) -> str:
    edges = g.edges()
    lines = [f"{GRAPH_HEADER} n={g.n} m={len(edges)}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


def read_graph(text: str) -> Graph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith(GRAPH_HEADER):
        raise ValueError("missing graph v1 header")
    hdr = _parse_header_fields(lines[0][len(GRAPH_HEADER):])
    n, m = int(hdr["n"]), int(hdr["m"])
    edges = [tuple(int(t) for t in ln.split()) for ln in lines[1:]]
    if len(edges) != m:
        raise ValueError(f"header says m={m}, found {len(edges)} edges")
    loops = any(u == v for u, v in edges)
    return Graph.from_edges(n, edges, allows_loops=loops)

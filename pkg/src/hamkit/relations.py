"""Pairwise relations between Hamiltonian paths and between partial words."""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import IntEnum
from typing import Callable, Iterable, Iterator, Sequence

from .families import PartialWord
from .graphcore import (
    CompleteBipartite,
    CycleExact,
    HamPath,
    PathFamily,
    Pattern,
    SubgraphWitness,
    find_pattern,
    pattern_label,
    union_graph,
)


class Way(IntEnum):
    """Longest run of a 4-cycle's edges lying consecutively in one path."""

    H1 = 1
    H2 = 2
    H3 = 3


ALL_WAYS = frozenset(Way)

# longest cyclic run of set bits in a 4-bit edge mask
_RUN = []
for _m in range(16):
    _best = 0
    for _start in range(4):
        _r = 0
        while _r < 4 and _m >> ((_start + _r) % 4) & 1:
            _r += 1
        _best = max(_best, _r)
    _RUN.append(_best)


def _way_bits(ma: int, mb: int, shared: str) -> int:
    """Bitmask (bit w set for way Hw) of the ways a cycle can be formed in.

    ``ma``/``mb`` flag which of the cycle's four edges lie on each path.
    """
    both = ma & mb
    if shared == "both":
        return 1 << max(_RUN[ma], _RUN[mb])
    if shared == "exclusive":
        return 1 << max(_RUN[ma & ~both], _RUN[mb & ~both])
    # "assign": every shared edge is supplied by one of the two paths
    bits = 0
    sub = both
    while True:
        bits |= 1 << max(_RUN[(ma & ~both) | sub], _RUN[(mb & ~both) | (both & ~sub)])
        if not sub:
            break
        sub = (sub - 1) & both
    return bits


SHARED_CONVENTIONS = ("assign", "both", "exclusive")
_WAY_TABLE = {c: [[_way_bits(a, b, c) for b in range(16)] for a in range(16)] for c in SHARED_CONVENTIONS}
del _m, _best, _start, _r


def _ways_of(bits: int) -> frozenset:
    return frozenset(w for w in Way if bits >> w & 1)


def parse_ways(text: str) -> frozenset[Way]:
    names = [t.strip().upper() for t in text.split(",") if t.strip()]
    bad = [t for t in names if t not in Way.__members__]
    if bad:
        raise ValueError(f"unknown way {bad[0].lower()!r}; expected h1, h2 or h3")
    ways = frozenset(Way[t] for t in names)
    if not ways:
        raise ValueError("empty way set")
    return ways


def _same_n(a: HamPath, b: HamPath) -> None:
    if a.n != b.n:
        raise ValueError(f"paths on different vertex counts: {a.n} != {b.n}")


def iter_c4_ways(a: HamPath, b: HamPath, shared: str = "assign") -> Iterator[tuple[tuple[int, int, int, int], frozenset[Way]]]:
    """Yield every 4-cycle of the union (smallest vertex first) with its ways.

    A way is read off an assignment of each cycle edge to a path containing
    it.  ``shared`` fixes how edges on both paths are handled: ``"assign"``
    tries every assignment, ``"both"`` counts such an edge for each path,
    ``"exclusive"`` counts it for neither.
    """
    _same_n(a, b)
    if shared not in SHARED_CONVENTIONS:
        raise ValueError(f"unknown shared-edge convention {shared!r}")
    for cyc, bits in _c4_way_bits(a, b, _WAY_TABLE[shared]):
        yield cyc, _ways_of(bits)


def _c4_way_bits(a: HamPath, b: HamPath, table) -> Iterator[tuple[tuple[int, int, int, int], int]]:
    am, bm = a.masks, b.masks
    um = [x | y for x, y in zip(am, bm)]
    for u in range(a.n):
        above = ~((1 << (u + 1)) - 1)
        nb = um[u] & above
        vs = []
        while nb:
            low = nb & -nb
            vs.append(low.bit_length() - 1)
            nb ^= low
        for i, v in enumerate(vs):
            for w in vs[i + 1 :]:
                common = um[v] & um[w] & above
                while common:
                    low = common & -common
                    x = low.bit_length() - 1
                    common ^= low
                    # cycle edges in order: u-v, v-x, x-w, w-u
                    ma = (am[u] >> v & 1) | (am[v] >> x & 1) << 1 | (am[x] >> w & 1) << 2 | (am[w] >> u & 1) << 3
                    mb = (bm[u] >> v & 1) | (bm[v] >> x & 1) << 1 | (bm[x] >> w & 1) << 2 | (bm[w] >> u & 1) << 3
                    yield (u, v, x, w), table[ma][mb]


def classify_c4_ways(a: HamPath, b: HamPath, shared: str = "assign") -> frozenset[Way]:
    bits = 0
    for _, cyc_bits in iter_c4_ways_bits(a, b, shared):
        bits |= cyc_bits
    return _ways_of(bits)


def iter_c4_ways_bits(a: HamPath, b: HamPath, shared: str = "assign"):
    _same_n(a, b)
    if shared not in SHARED_CONVENTIONS:
        raise ValueError(f"unknown shared-edge convention {shared!r}")
    return _c4_way_bits(a, b, _WAY_TABLE[shared])


def has_c4_way(a: HamPath, b: HamPath, ways: Iterable[Way] = ALL_WAYS, shared: str = "assign") -> bool:
    want = sum(1 << w for w in ways)
    return any(bits & want for _, bits in iter_c4_ways_bits(a, b, shared))


def creates(a: HamPath, b: HamPath, p: Pattern) -> SubgraphWitness | None:
    return find_pattern(union_graph(a, b), p)


def is_good_k24(a: HamPath, b: HamPath) -> SubgraphWitness | None:
    """A K_{2,4} where each path contributes two disjoint 3-vertex stars.

    Centres y1, y2 must be internal on both paths with
    N_a(y1) = N_b(y2) and N_a(y2) = N_b(y1), the two sets disjoint.
    Witness: ``(y1, y2, *N_a(y1), *N_a(y2))``, smallest such tuple.
    """
    _same_n(a, b)
    n = a.n
    na = [frozenset(a.neighbours(v)) for v in range(n)]
    nb = [frozenset(b.neighbours(v)) for v in range(n)]
    by_nb = {}
    for v in range(n):
        if len(nb[v]) == 2:
            by_nb[nb[v]] = v
    best = None
    for y1 in range(n):
        if len(na[y1]) != 2:
            continue
        y2 = by_nb.get(na[y1])
        if y2 is None or y2 <= y1 or len(na[y2]) != 2:
            continue
        if na[y2] != nb[y1] or na[y1] & na[y2] or {y1, y2} & (na[y1] | na[y2]):
            continue
        cand = (y1, y2, *sorted(na[y1]), *sorted(na[y2]))
        if best is None or cand < best:
            best = cand
    return SubgraphWitness(CompleteBipartite(2, 4), best) if best else None


def is_reversing(u: PartialWord, v: PartialWord) -> bool:
    """Two coordinates whose (filled) entries appear swapped between u and v."""
    if u.length != v.length:
        raise ValueError("words of different lengths")
    pos_v = {e: j for j, e in enumerate(v.entries) if e is not None}
    ue, ve = u.entries, v.entries
    for i, x in enumerate(ue):
        if x is None or ve[i] is None or ve[i] == x:
            continue
        j = pos_v.get(x)
        if j is not None and j != i and ue[j] == ve[i]:
            return True
    return False


def path_to_reverse_vector(h: HamPath) -> PartialWord:
    """Label each distance-2 pair {u, w} of ``h`` by the vertex between them.

    Coordinates index the edges of K_n in lexicographic order.
    """
    n = h.n
    if n < 3:
        raise ValueError("need n >= 3")
    entries: list[int | None] = [None] * (n * (n - 1) // 2)
    o = h.order
    for i in range(1, n - 1):
        u, w = sorted((o[i - 1], o[i + 1]))
        entries[edge_index(n, u, w)] = o[i]
    return PartialWord(tuple(entries), n)


def edge_index(n: int, u: int, v: int) -> int:
    """Position of edge u<v of K_n in lexicographic order."""
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


# -- family verification ---------------------------------------------------


@dataclass(frozen=True)
class VerifyReport:
    pattern: str
    ways: tuple[str, ...] | None
    pairs_checked: int
    ok: bool
    first_violation: tuple[int, int] | None

    def __post_init__(self):
        if self.ok != (self.first_violation is None):
            raise ValueError("ok must hold exactly when there is no violation")

    def to_json(self) -> dict:
        i, j = self.first_violation or (None, None)
        return {
            "pattern": self.pattern,
            "ways": list(self.ways) if self.ways is not None else None,
            "pairs_checked": self.pairs_checked,
            "ok": self.ok,
            "violation_i": i,
            "violation_j": j,
        }


def _first_violation(items: Sequence, related: Callable, want: bool, jobs: int) -> tuple[int, int] | None:
    m = len(items)
    if jobs > 1 and m > 64:
        return _parallel_first_violation(items, related, want, jobs)
    for i in range(m):
        a = items[i]
        for j in range(i + 1, m):
            if related(a, items[j]) != want:
                return (i, j)
    return None


def _scan_rows(args):
    items, related, want, rows = args
    for i in rows:
        for j in range(i + 1, len(items)):
            if related(items[i], items[j]) != want:
                return (i, j)
    return None


def _parallel_first_violation(items, related, want, jobs):
    from concurrent.futures import ProcessPoolExecutor

    # interleaved rows balance the triangular workload
    chunks = [(items, related, want, range(k, len(items), jobs)) for k in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        found = [v for v in ex.map(_scan_rows, chunks) if v is not None]
    return min(found) if found else None


def _pair_rank(m: int, i: int, j: int) -> int:
    # number of pairs up to and including (i, j) in row-major order
    return i * (2 * m - i - 1) // 2 + (j - i)


class _Related:
    # picklable predicate for process pools
    def __init__(self, pattern: Pattern | str, ways, shared: str):
        self.pattern, self.ways, self.shared = pattern, ways, shared

    def __call__(self, a, b) -> bool:
        if self.pattern == "good-k24":
            return is_good_k24(a, b) is not None
        if self.pattern == "reverse":
            return is_reversing(a, b)
        if self.ways is not None:
            return has_c4_way(a, b, self.ways, self.shared)
        if self.pattern == CycleExact(4):
            return has_c4_way(a, b, ALL_WAYS, self.shared)
        return creates(a, b, self.pattern) is not None


def verify_family(
    f: PathFamily | Sequence[PartialWord],
    p: Pattern | str,
    mode: str = "all-create",
    ways: Iterable[Way] | None = None,
    shared: str = "assign",
    jobs: int = 1,
) -> VerifyReport:
    """Check every unordered pair of ``f`` against pattern ``p``.

    ``p`` is a :data:`Pattern`, or ``"good-k24"`` (paths) or ``"reverse"``
    (partial words).  ``mode`` is ``"all-create"`` or ``"none-create"``.
    """
    if mode not in ("all-create", "none-create"):
        raise ValueError(f"unknown mode {mode!r}")
    if ways is not None:
        ways = frozenset(ways)
        if p != CycleExact(4):
            raise ValueError("ways only apply to the 4-cycle pattern")
    items = list(f)
    related = _Related(p, ways, shared)
    bad = _first_violation(items, related, mode == "all-create", jobs)
    m = len(items)
    checked = m * (m - 1) // 2 if bad is None else _pair_rank(m, *bad)
    label = p if isinstance(p, str) else pattern_label(p)
    way_names = tuple(w.name.lower() for w in sorted(ways)) if ways is not None else None
    return VerifyReport(label, way_names, checked, bad is None, bad)


# -- random relabelling filter --------------------------------------------


def relabel_filter(x: PathFamily, i: PathFamily, trials: int, seed: int) -> PathFamily:
    """Largest ``x ∩ sigma(i)`` over ``trials`` seeded uniform relabellings.

    Comparison is between undirected paths.  The result keeps the order of
    ``x``; ties go to the earliest trial.
    """
    if x.n != i.n:
        raise ValueError("families on different vertex counts")
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = random.Random(seed)
    i_und = [h.undirected() for h in i]
    best: list[HamPath] = []
    for _ in range(trials):
        sigma = list(range(x.n))
        rng.shuffle(sigma)
        image = {h.relabel(sigma) for h in i_und}
        hit = [h for h in x if h.undirected() in image]
        if len(hit) > len(best):
            best = hit
    return PathFamily(x.n, x.directed, tuple(best))


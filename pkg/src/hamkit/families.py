"""Explicit path and permutation families.

All generators are deterministic: output order follows the generation
choices in increasing order.  Symbols are 0-based internally; the text
format writes them 1-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations, product
from typing import NamedTuple, Sequence

from .graphcore import HamPath, PathFamily

PARTIAL_WORD_HEADER = "# partialword v1"


@dataclass(frozen=True)
class PartialWord:
    """Fixed-length word whose coordinates are a symbol id or blank (None)."""

    entries: tuple[int | None, ...]
    alphabet_size: int

    def __post_init__(self):
        entries = tuple(None if e is None else int(e) for e in self.entries)
        filled = [e for e in entries if e is not None]
        if len(set(filled)) != len(filled):
            raise ValueError("filled entries must be distinct")
        if any(not 0 <= e < self.alphabet_size for e in filled):
            raise ValueError("symbol outside alphabet")
        object.__setattr__(self, "entries", entries)

    @property
    def length(self) -> int:
        return len(self.entries)

    @property
    def filled(self) -> int:
        return sum(e is not None for e in self.entries)

    def is_total(self) -> bool:
        return None not in self.entries

    def is_permutation(self) -> bool:
        return self.is_total() and self.length == self.alphabet_size

    def __str__(self):
        return " ".join("_" if e is None else str(e + 1) for e in self.entries)


def write_partial_words(words: Sequence[PartialWord]) -> str:
    length = words[0].length if words else 0
    alphabet = max((w.alphabet_size for w in words), default=0)
    lines = [PARTIAL_WORD_HEADER, f"length={length} alphabet={alphabet} count={len(words)}"]
    lines.extend(str(w) for w in words)
    return "\n".join(lines) + "\n"


def read_partial_words(text: str) -> list[PartialWord]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != PARTIAL_WORD_HEADER:
        raise ValueError("missing partialword v1 header")
    hdr = dict(tok.split("=", 1) for tok in lines[1].split())
    length, alphabet, count = int(hdr["length"]), int(hdr["alphabet"]), int(hdr["count"])
    words = []
    for ln in lines[2:]:
        entries = tuple(None if t == "_" else int(t) - 1 for t in ln.split())
        if len(entries) != length:
            raise ValueError(f"word of length {len(entries)}, expected {length}")
        words.append(PartialWord(entries, alphabet))
    if len(words) != count:
        raise ValueError(f"header says count={count}, found {len(words)} words")
    return words


def _check_n(n: int) -> None:
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")


def cfk_family(n: int) -> PathFamily:
    """Paths 0, s1, 2, s2, 4, ... with the odd ids permuted in the odd slots.

    For even n the family is built on n-1 vertices and vertex n-1 is
    appended to every path.
    """
    _check_n(n)
    m = n if n % 2 else n - 1
    evens = list(range(0, m, 2))
    odds = list(range(1, m, 2))
    orders = []
    for perm in permutations(odds):
        order = [evens[0]]
        for x, e in zip(perm, evens[1:]):
            order += [x, e]
        if m < n:
            order.append(n - 1)
        orders.append(order)
    return PathFamily.from_orders(n, orders)


def recursive_c4_family(n: int) -> PathFamily:
    """Star-filling construction; size prod_{i>=1} (n - 2i) over i <= (n-1)/2.

    Starts from ``(0, *, 1, *, ..., *)``.  While the stars are not one
    consecutive block, or only one star is left, the leftmost star is
    filled with each remaining element in turn.  When the stars form a
    block of size >= 2, the smallest remaining element goes to the slot
    right of the leftmost star.
    """
    _check_n(n)
    out: list[list[int]] = []

    def grow(slots: list[int | None], remaining: list[int]) -> None:
        stars = [i for i, s in enumerate(slots) if s is None]
        if not stars:
            out.append(list(slots))
            return
        block = stars[-1] - stars[0] + 1 == len(stars)
        if block and len(stars) >= 2:
            slots[stars[0] + 1] = remaining[0]
            grow(slots, remaining[1:])
            slots[stars[0] + 1] = None
            return
        for k, x in enumerate(remaining):
            slots[stars[0]] = x
            grow(slots, remaining[:k] + remaining[k + 1 :])
        slots[stars[0]] = None

    start: list[int | None] = [None] * n
    start[0], start[2] = 0, 1
    grow(start, list(range(2, n)))
    return PathFamily.from_orders(n, out)


def tricolor_classes(n: int) -> list[int]:
    """Colour of each vertex: ceil(n/3) lowest ids get 0, floor(n/3) highest get 2."""
    c0, c2 = -(-n // 3), n // 3
    return [0] * c0 + [1] * (n - c0 - c2) + [2] * c2


def tricolor_family(n: int) -> PathFamily:
    """Directed paths whose colours read 0,1,2,0,1,2,... along the path."""
    _check_n(n)
    colour = tricolor_classes(n)
    classes = [[v for v in range(n) if colour[v] == c] for c in range(3)]
    slots = [[i for i in range(n) if i % 3 == c] for c in range(3)]
    orders = []
    for p0, p1, p2 in product(*(permutations(cl) for cl in classes)):
        order = [0] * n
        for slot_list, perm in zip(slots, (p0, p1, p2)):
            for i, v in zip(slot_list, perm):
                order[i] = v
        orders.append(order)
    return PathFamily.from_orders(n, orders, directed=True)


# coordinates of the four pairwise reversing incomplete permutations,
# as 0-based offsets into a block of four symbols
REVERSING_GADGET = ((0, 1, 2), (2, 3, 0), (1, 0, 3), (3, 2, 1))


def base_reversing_family(n: int) -> list[PartialWord]:
    """4**(n//3) pairwise reversing injective words of length n.

    Block b covers coordinates 3b..3b+2 and owns the fresh symbols
    4b..4b+3, written in one of the four gadget patterns.  The n mod 3
    trailing coordinates take the next fresh symbols in increasing order,
    so the alphabet has n + n//3 symbols.  Use :func:`complete_words` to
    turn the words into permutations of a common ground set.
    """
    _check_n(n)
    blocks, tail = divmod(n, 3)
    alphabet = 4 * blocks + tail
    tail_syms = tuple(range(4 * blocks, alphabet))
    words = []
    for choice in product(range(4), repeat=blocks):
        entries: list[int] = []
        for b, c in enumerate(choice):
            entries.extend(4 * b + off for off in REVERSING_GADGET[c])
        words.append(PartialWord(tuple(entries) + tail_syms, alphabet))
    return words


def complete_words(words: Sequence[PartialWord]) -> list[PartialWord]:
    """Fill blanks, then append missing symbols in increasing order.

    Each output is a permutation of the common alphabet; since coordinates
    of the input are kept, a pair that was reversing stays reversing.
    """
    if not words:
        return []
    alphabet = max(w.alphabet_size for w in words)
    out = []
    for w in words:
        missing = iter(sorted(set(range(alphabet)) - {e for e in w.entries if e is not None}))
        entries = [next(missing) if e is None else e for e in w.entries]
        entries.extend(missing)
        out.append(PartialWord(tuple(entries), alphabet))
    lengths = {w.length for w in out}
    if len(lengths) != 1:
        raise ValueError("words of different lengths cannot share a completion")
    return out


def reversing_permutations(n: int) -> list[PartialWord]:
    """Pairwise reversing permutations of [n] from the four-block recursion.

    While at least four symbols remain, the next three coordinates take the
    four smallest remaining symbols in a gadget pattern and the unused one
    is passed on.  The last 1, 2 or 3 coordinates use a best family of that
    size: 1, 2 and 2 words respectively.  Size is 4**((n-1)//3) times that.
    """
    if n < 1:
        raise ValueError("need n >= 1")

    def rec(symbols: tuple[int, ...]) -> list[tuple[int, ...]]:
        r = len(symbols)
        if r <= 3:
            if r == 1:
                return [symbols]
            a, b, *rest = symbols
            return [symbols, (b, a, *rest)]
        head, others = symbols[:4], symbols[4:]
        out = []
        for pat in REVERSING_GADGET:
            used = tuple(head[i] for i in pat)
            left = tuple(sorted(set(head) - set(used))) + others
            out.extend(used + t for t in rec(tuple(sorted(left))))
        return out

    return [PartialWord(w, n) for w in rec(tuple(range(n)))]


def k24_paths_from_reversing(perms: Sequence[PartialWord]) -> PathFamily:
    """Paths on 4m+1 vertices, one per permutation of [m].

    The path alternates spine vertices and top vertices:
    ``y1 x1 y2 x2 ... x_2m y_2m+1``.  Top slot x_{2k} holds the vertex for
    symbol ``perm[k-1]`` (vertex id = symbol); every other position holds a
    fixed vertex with ids m, m+1, ... in path order.
    """
    if not perms:
        raise ValueError("need at least one permutation")
    m = perms[0].length
    for w in perms:
        if w.length != m or not w.is_total() or sorted(w.entries) != list(range(m)):
            raise ValueError("inputs must be permutations of a common ground set [m]")
    labelled = {4 * k - 1 for k in range(1, m + 1)}
    fixed_positions = [i for i in range(4 * m + 1) if i not in labelled]
    orders = []
    for w in perms:
        order = [0] * (4 * m + 1)
        for vid, pos in enumerate(fixed_positions, start=m):
            order[pos] = vid
        for k, sym in enumerate(w.entries, start=1):
            order[4 * k - 1] = sym
        orders.append(order)
    return PathFamily.from_orders(4 * m + 1, orders)


def tripartite_parts(n: int) -> list[int]:
    """Part index of each vertex, parts as equal as possible, largest first."""
    q, r = divmod(n, 3)
    sizes = [q + (i < r) for i in range(3)]
    return [i for i, s in enumerate(sizes) for _ in range(s)]


def tripartite_family(n: int) -> PathFamily:
    """Directed Hamiltonian paths that move from part i to part i+1 (mod 3)."""
    _check_n(n)
    part = tripartite_parts(n)
    classes = [[v for v in range(n) if part[v] == c] for c in range(3)]
    orders = []
    for start in range(3):
        colours = [(start + i) % 3 for i in range(n)]
        if [colours.count(c) for c in range(3)] != [len(cl) for cl in classes]:
            continue
        slots = [[i for i in range(n) if colours[i] == c] for c in range(3)]
        for perms in product(*(permutations(cl) for cl in classes)):
            order = [0] * n
            for slot_list, perm in zip(slots, perms):
                for i, v in zip(slot_list, perm):
                    order[i] = v
            orders.append(order)
    return PathFamily.from_orders(n, orders, directed=True)


class ProductBound(NamedTuple):
    value: int
    log_value: float
    reference_log: float


def product_lower_bound(n: int) -> ProductBound:
    """prod_{i=1}^{(n-1)//2} (n - 2i), its natural log, and (n/2)log n - n/2.

    The reference is the log of n**(n/2 - n/(2 log n)) with natural logs,
    i.e. the leading terms of the asymptotic lower bound with the O(1)
    dropped.
    """
    _check_n(n)
    value = math.prod(n - 2 * i for i in range(1, (n - 1) // 2 + 1))
    return ProductBound(value, math.log(value), n / 2 * math.log(n) - n / 2)


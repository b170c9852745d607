"""Coset enumeration (HLT strategy) for small finite quotients.

Letters are encoded as column numbers: generator ``g`` (0-based) is column
``2g`` and its inverse is column ``2g + 1``, so ``c ^ 1`` inverts a letter.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DidNotClose

DEFAULT_CAP = 1_000_000


def letters(word: Iterable[tuple[int, int]]) -> list[int]:
    """Expand 1-based (generator, exponent) syllables into letter columns."""
    out = []
    for gen, exp in word:
        col = 2 * (gen - 1) + (exp < 0)
        out.extend([col] * abs(exp))
    return out


@dataclass
class CosetTable:
    rows: list[list[int | None]]
    live: list[int]
    complete: bool

    @property
    def order(self) -> int:
        return len(self.live)

    def trace(self, word: Sequence[int], start: int = 0) -> int | None:
        """Coset reached from ``start`` by reading ``word``; rows use compact numbering."""
        c = start
        for x in word:
            c = self.rows[c][x]
            if c is None:
                return None
        return c


class _Enumerator:
    def __init__(self, ngens: int, cap: int):
        self.ncols = 2 * ngens
        self.cap = cap
        self.table: list[list[int | None]] = [[None] * self.ncols]
        self.parent = [0]

    def rep(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def alive(self, c: int) -> bool:
        return self.parent[c] == c

    def define(self, c: int, x: int) -> None:
        if len(self.table) >= self.cap:
            raise DidNotClose(self.cap)
        d = len(self.table)
        self.table.append([None] * self.ncols)
        self.parent.append(d)
        self.table[c][x] = d
        self.table[d][x ^ 1] = c

    def scan_and_fill(self, c: int, word: Sequence[int]) -> None:
        table = self.table
        f, b = c, c
        i, j = 0, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] is not None:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][word[j] ^ 1] is not None:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                return
            self.define(f, word[i])

    def merge(self, k: int, l: int, queue: list[int]) -> None:
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        lo, hi = min(k, l), max(k, l)
        self.parent[hi] = lo
        queue.append(hi)

    def coincidence(self, a: int, b: int) -> None:
        table = self.table
        queue: list[int] = []
        self.merge(a, b, queue)
        idx = 0
        while idx < len(queue):
            g = queue[idx]
            idx += 1
            for x in range(self.ncols):
                d = table[g][x]
                if d is None:
                    continue
                table[d][x ^ 1] = None
                mu, nu = self.rep(g), self.rep(d)
                if table[mu][x] is not None:
                    self.merge(nu, table[mu][x], queue)
                elif table[nu][x ^ 1] is not None:
                    self.merge(mu, table[nu][x ^ 1], queue)
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu


def enumerate_cosets(
    ngens: int,
    relators: Sequence[Sequence[int]],
    subgroup: Sequence[Sequence[int]] = (),
    cap: int = DEFAULT_CAP,
) -> CosetTable:
    """Enumerate cosets of the subgroup generated by ``subgroup`` words.

    Relators and subgroup generators are lists of letter columns.  Raises
    ``DidNotClose`` if more than ``cap`` cosets get defined.
    """
    e = _Enumerator(ngens, cap)
    for w in subgroup:
        e.scan_and_fill(0, w)
    relators = sorted((list(r) for r in relators if r), key=len)
    c = 0
    while c < len(e.table):
        if e.alive(c):
            for r in relators:
                if not e.alive(c):
                    break
                e.scan_and_fill(c, r)
            if e.alive(c):
                for x in range(e.ncols):
                    if e.table[c][x] is None:
                        e.define(c, x)
        c += 1
    live = [c for c in range(len(e.table)) if e.alive(c)]
    complete = all(e.table[c][x] is not None for c in live for x in range(e.ncols))
    renumber = {c: k for k, c in enumerate(live)}
    rows = [[renumber[e.rep(e.table[c][x])] if e.table[c][x] is not None else None
             for x in range(e.ncols)] for c in live]
    return CosetTable(rows, live, complete)

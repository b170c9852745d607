"""Exact integer Smith normal form and rank over prime fields."""

from __future__ import annotations

from typing import Sequence


def smith_diagonal(matrix: Sequence[Sequence[int]], ncols: int | None = None) -> list[int]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix (all positive).

    Uses unimodular row and column operations, always pivoting on the entry
    of least absolute value in the remaining block.
    """
    a = [[int(x) for x in row] for row in matrix]
    rows = len(a)
    cols = ncols if ncols is not None else (len(a[0]) if a else 0)
    diag: list[int] = []
    for t in range(min(rows, cols)):
        if not _move_min_to(a, t, range(t, rows), range(t, cols)):
            break
        while True:
            p = a[t][t]
            for r in range(t + 1, rows):
                q = a[r][t] // p
                if q:
                    a[r] = [x - q * y for x, y in zip(a[r], a[t])]
            for c in range(t + 1, cols):
                q = a[t][c] // p
                if q:
                    for row in a:
                        row[c] -= q * row[t]
            leftovers = [(r, t) for r in range(t + 1, rows) if a[r][t]]
            leftovers += [(t, c) for c in range(t + 1, cols) if a[t][c]]
            if leftovers:
                r, c = min(leftovers, key=lambda rc: abs(a[rc[0]][rc[1]]))
                _swap(a, t, r, c)
                continue
            bad = next((r for r in range(t + 1, rows) for c in range(t + 1, cols) if a[r][c] % p), None)
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
        diag.append(abs(a[t][t]))
    return diag


def _move_min_to(a, t, rows, cols) -> bool:
    best = None
    for r in rows:
        for c in cols:
            if a[r][c] and (best is None or abs(a[r][c]) < abs(a[best[0]][best[1]])):
                best = (r, c)
    if best is None:
        return False
    _swap(a, t, *best)
    return True


def _swap(a, t, r, c) -> None:
    a[t], a[r] = a[r], a[t]
    for row in a:
        row[t], row[c] = row[c], row[t]


def rank_mod_p(matrix: Sequence[Sequence[int]], p: int) -> int:
    a = [[x % p for x in row] for row in matrix]
    rank = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        pivot = next((r for r in range(rank, len(a)) if a[r][c]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        inv = pow(a[rank][c], -1, p)
        a[rank] = [x * inv % p for x in a[rank]]
        for r in range(len(a)):
            if r != rank and a[r][c]:
                f = a[r][c]
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True

"""Reading and writing ``.tower`` files and the word syntax used on the command line.

File format (UTF-8, one statement per line, ``#`` starts a comment)::

    n = 3
    eps[1,2] = -1        # required for every i < j
    a[1,2,3] = 4         # exponent of s3 in the (1,2) relation; omitted entries are 0
"""

from __future__ import annotations

import re

from .errors import ParseError
from .presentation import GroupWord, TowerPresentation

_N = re.compile(r"n\s*=\s*(-?\d+)")
_EPS = re.compile(r"eps\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*=\s*([+-]?\d+)")
_TAIL = re.compile(r"a\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]\s*=\s*([+-]?\d+)")
_TOKEN = re.compile(r"s(\d+)(?:\^([+-]?\d+))?")


def parse_tower_file(text: str) -> TowerPresentation:
    n = None
    eps: dict[tuple[int, int], int] = {}
    entries: dict[tuple[int, int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            m = _N.fullmatch(line)
            if not m:
                raise ParseError("first statement must be 'n = <int>'", lineno)
            n = int(m.group(1))
            if n < 1:
                raise ParseError("n must be positive", lineno)
            continue
        if m := _EPS.fullmatch(line):
            i, j, v = (int(g) for g in m.groups())
            if (i, j) in eps:
                raise ParseError(f"duplicate eps[{i},{j}]", lineno)
            if not 1 <= i < j <= n:
                raise ParseError(f"eps[{i},{j}] outside 1 <= i < j <= {n}", lineno)
            if v not in (1, -1):
                raise ParseError(f"eps[{i},{j}] must be 1 or -1", lineno)
            eps[i, j] = v
        elif m := _TAIL.fullmatch(line):
            i, j, k, v = (int(g) for g in m.groups())
            if (i, j, k) in entries:
                raise ParseError(f"duplicate a[{i},{j},{k}]", lineno)
            if not 1 <= i < j < k <= n:
                raise ParseError(f"a[{i},{j},{k}] needs 1 <= i < j < k <= {n}", lineno)
            entries[i, j, k] = v
        elif _N.fullmatch(line):
            raise ParseError("duplicate 'n =' line", lineno)
        else:
            raise ParseError(f"unrecognized statement {line!r}", lineno)
    if n is None:
        raise ParseError("missing 'n = <int>' line")
    tails = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            tails[i, j] = tuple(entries.get((i, j, k), 0) for k in range(j + 1, n + 1))
    return TowerPresentation(n, eps, tails)


def format_tower(p: TowerPresentation) -> str:
    lines = [f"n = {p.n}"]
    lines += [f"eps[{i},{j}] = {p.eps(i, j)}" for i, j in p.pairs()]
    for i, j in p.pairs():
        for k in range(j + 1, p.n + 1):
            a = p.tail_entry(i, j, k)
            if a:
                lines.append(f"a[{i},{j},{k}] = {a}")
    return "\n".join(lines) + "\n"


def parse_word(text: str) -> GroupWord:
    """``"s1 s2^-1 s3^3"`` -> ((1, 1), (2, -1), (3, 3)); ``"1"`` is the empty word."""
    word = []
    for tok in text.split():
        if tok == "1":
            continue
        m = _TOKEN.fullmatch(tok)
        if not m:
            raise ParseError(f"bad word token {tok!r}")
        word.append((int(m.group(1)), int(m.group(2)) if m.group(2) is not None else 1))
    return tuple(word)

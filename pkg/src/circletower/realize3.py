"""Exact rational affine realizations of the canonical height-3 groups.

Composition convention: the group product ``g * h`` acts as ``g(h(x))``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .classify3 import Class3Label
from .presentation import NormalForm, TowerPresentation

Q = Fraction
Matrix = tuple[tuple[Fraction, Fraction, Fraction], ...]
Vector = tuple[Fraction, Fraction, Fraction]

_I3 = ((Q(1), Q(0), Q(0)), (Q(0), Q(1), Q(0)), (Q(0), Q(0), Q(1)))


_ZERO = Q(0)


def _dot(row, col) -> Fraction:
    # the matrices here are sparse; skipping zero products keeps Fraction work down
    total = _ZERO
    for x, y in zip(row, col):
        if x and y:
            total += x * y
    return total


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = tuple(zip(*b))
    return tuple(tuple(_dot(row, col) for col in cols) for row in a)


def _matvec(a: Matrix, v: Vector) -> Vector:
    return tuple(_dot(row, v) for row in a)


def _det(a: Matrix) -> Fraction:
    return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))


@dataclass(frozen=True)
class AffineMapQ3:
    linear: Matrix
    translation: Vector

    def __post_init__(self):
        lin = tuple(tuple(Q(x) for x in row) for row in self.linear)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "translation", tuple(Q(x) for x in self.translation))
        if _det(lin) == 0:
            raise ValueError("linear part must be invertible")

    @classmethod
    def _raw(cls, linear: Matrix, translation: Vector) -> AffineMapQ3:
        # products of invertible maps: skip coercion and the determinant check
        m = object.__new__(cls)
        object.__setattr__(m, "linear", linear)
        object.__setattr__(m, "translation", translation)
        return m

    @classmethod
    def identity(cls) -> AffineMapQ3:
        return cls(_I3, (0, 0, 0))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]]) -> AffineMapQ3:
        """Build x -> A x + t from rows (A_i1, A_i2, A_i3, t_i)."""
        return cls(tuple(tuple(r[:3]) for r in rows), tuple(r[3] for r in rows))

    def __call__(self, x: Sequence[object]) -> Vector:
        x = tuple(Q(c) for c in x)
        return tuple(a + b for a, b in zip(_matvec(self.linear, x), self.translation))

    def __matmul__(self, other: AffineMapQ3) -> AffineMapQ3:
        """self @ other = self after other."""
        return AffineMapQ3._raw(
            _matmul(self.linear, other.linear),
            tuple(a + b for a, b in zip(_matvec(self.linear, other.translation), self.translation)),
        )

    def inverse(self) -> AffineMapQ3:
        a = self.linear
        d = _det(a)
        cof = [[(a[(j + 1) % 3][(i + 1) % 3] * a[(j + 2) % 3][(i + 2) % 3]
                 - a[(j + 1) % 3][(i + 2) % 3] * a[(j + 2) % 3][(i + 1) % 3]) / d
                for j in range(3)] for i in range(3)]
        inv = tuple(tuple(row) for row in cof)
        return AffineMapQ3._raw(inv, tuple(-c for c in _matvec(inv, self.translation)))

    def __pow__(self, k: int) -> AffineMapQ3:
        return _power(self, k)

    def _slow_pow(self, k: int) -> AffineMapQ3:
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = AffineMapQ3.identity()
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return self.linear == _I3 and not any(self.translation)

    def has_fixed_point(self) -> bool:
        """Whether A x + t = x has a rational (equivalently real) solution."""
        rows = [[self.linear[i][j] - (i == j) for j in range(3)] + [-self.translation[i]] for i in range(3)]
        rank = 0
        for c in range(3):
            piv = next((r for r in range(rank, 3) if rows[r][c]), None)
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            for r in range(3):
                if r != rank and rows[r][c]:
                    f = rows[r][c] / rows[rank][c]
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
            rank += 1
        return all(any(row[:3]) or not row[3] for row in rows)

    def format(self) -> str:
        lin = ",".join("[" + ",".join(_q(x) for x in row) + "]" for row in self.linear)
        return f"linear = [{lin}] ; translation = ({','.join(_q(x) for x in self.translation)})"


@lru_cache(maxsize=4096)
def _power(g: AffineMapQ3, k: int) -> AffineMapQ3:
    return g._slow_pow(k)


def _q(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def bott_motions(eps: Sequence[Sequence[int]]) -> list[AffineMapQ3]:
    """s_i(x) = (x_1, .., x_i + 1/2, eps^i_(i+1) x_(i+1), .., eps^i_3 x_3); eps[i][j] for i < j."""
    maps = []
    for i in range(3):
        diag = [1 if j <= i else eps[i][j] for j in range(3)]
        lin = tuple(tuple(diag[r] if r == c else 0 for c in range(3)) for r in range(3))
        maps.append(AffineMapQ3(lin, tuple(Q(1, 2) if j == i else 0 for j in range(3))))
    return maps


def _b2_b4(e: int) -> list[AffineMapQ3]:
    # these satisfy Pi(1, e, -1, -1); the canonical generators are s1 s2, s2, s3
    s1 = AffineMapQ3.from_rows([(1, 0, 0, Q(1, 2)), (0, e, 0, 0), (0, 0, -1, Q(1, 4))])
    s2 = AffineMapQ3.from_rows([(1, 0, 0, 0), (0, 1, 0, Q(1, 2)), (0, 0, -1, 0)])
    s3 = AffineMapQ3.from_rows([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, Q(1, 2))])
    return [s1 @ s2, s2, s3]


def realize(label: Class3Label) -> tuple[AffineMapQ3, AffineMapQ3, AffineMapQ3]:
    kind = label.kind
    if kind == "NIL":
        a = label.a
        return (
            AffineMapQ3.from_rows([(1, 0, 0, 1), (0, 1, 0, 0), (0, 1, 1, 0)]),
            AffineMapQ3.from_rows([(1, 0, 0, 0), (0, 1, 0, 1), (0, 0, 1, 0)]),
            AffineMapQ3.from_rows([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, Q(1, a))]),
        )
    if kind == "INFRANIL":
        a = label.a
        return (
            AffineMapQ3.from_rows([(1, 0, 0, Q(1, 2)), (0, -1, 0, 0), (0, Q(-1, 2), -1, 0)]),
            AffineMapQ3.from_rows([(1, 0, 0, 0), (0, 1, 0, 1), (0, 0, 1, 0)]),
            AffineMapQ3.from_rows([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, Q(-1, 2 * a))]),
        )
    if kind == "B2":
        return tuple(_b2_b4(1))
    if kind == "B4":
        return tuple(_b2_b4(-1))
    t = label.canonical()
    eps = [[0, t.eps, t.eps1], [0, 0, t.eps2], [0, 0, 0]]
    return tuple(bott_motions(eps))


def affine_of(gens: Sequence[AffineMapQ3], nf: Sequence[int]) -> AffineMapQ3:
    """s1^e1 s2^e2 s3^e3 as a single map."""
    result = AffineMapQ3.identity()
    for g, e in zip(gens, nf):
        if e:
            result = result @ g ** e
    return result


def evaluate_word(gens: Sequence[AffineMapQ3], word) -> AffineMapQ3:
    result = AffineMapQ3.identity()
    for g, e in word:
        result = result @ gens[g - 1] ** e
    return result


def oracle_multiply(label: Class3Label, u: NormalForm, v: NormalForm,
                    gens: Sequence[AffineMapQ3] | None = None) -> AffineMapQ3:
    gens = realize(label) if gens is None else gens
    return affine_of(gens, u) @ affine_of(gens, v)


@dataclass
class RealizationReport:
    label: Class3Label
    generators: tuple[AffineMapQ3, ...]
    relations: list[tuple[str, bool]]
    probe_passed: bool
    probe_elements: int
    probe_failure: str = ""

    @property
    def ok(self) -> bool:
        return self.probe_passed and all(v for _, v in self.relations)

    def lines(self) -> list[str]:
        out = [f"class={self.label}"]
        for i, g in enumerate(self.generators, start=1):
            out.append(f"s{i}: {g.format()}")
        for name, v in self.relations:
            out.append(f"relation[{name}]={str(v).lower()}")
        out.append(f"probe.elements={self.probe_elements}")
        out.append("probe=" + ("pass" if self.probe_passed else "fail " + self.probe_failure))
        return out


def check_relations(p: TowerPresentation, gens: Sequence[AffineMapQ3]) -> list[tuple[str, bool]]:
    verdicts = []
    for i, j in p.pairs():
        gi, gj = gens[i - 1], gens[j - 1]
        lhs = gi @ gj @ gi.inverse()
        verdicts.append((f"{i},{j}", lhs == evaluate_word(gens, p.relator_rhs_word(i, j))))
    return verdicts


SAMPLE_POINTS = ((0, 0, 0), (Q(1, 3), Q(1, 5), Q(1, 7)))


def freeness_probe(gens: Sequence[AffineMapQ3], depth: int = 6,
                   points=SAMPLE_POINTS) -> tuple[bool, int, str]:
    """Breadth-first over the ball of radius ``depth`` in the generators and inverses.

    Fails if a non-identity element fixes a sample point or has any fixed point
    at all.  Evidence of freeness, not a proof.
    """
    letters = [g for s in gens for g in (s, s.inverse())]
    ident = AffineMapQ3.identity()
    seen = {ident}
    frontier = deque([ident])
    for _ in range(depth):
        nxt = deque()
        for m in frontier:
            for g in letters:
                h = m @ g
                if h in seen:
                    continue
                seen.add(h)
                nxt.append(h)
                if h.is_identity():
                    continue
                for pt in points:
                    if h(pt) == tuple(Q(c) for c in pt):
                        return False, len(seen), f"{h.format()} fixes {pt}"
                if h.has_fixed_point():
                    return False, len(seen), f"{h.format()} has a fixed point"
        frontier = nxt
    return True, len(seen), ""


def verify_realization(label: Class3Label, depth: int = 6,
                       gens: Sequence[AffineMapQ3] | None = None) -> RealizationReport:
    gens = tuple(realize(label) if gens is None else gens)
    p = label.canonical().presentation()
    relations = check_relations(p, gens)
    ok, count, why = freeness_probe(gens, depth)
    return RealizationReport(label, gens, relations, ok, count, why)

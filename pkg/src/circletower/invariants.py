"""Abelian and finite-quotient invariants of tower presentations."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import cosets
from .errors import FormError, InconsistentPresentation
from .presentation import TowerPresentation
from .snf import is_prime, rank_mod_p, smith_diagonal


@dataclass(frozen=True)
class AbelianInvariants:
    """Z^free_rank + Z/d1 + Z/d2 + ... with d1 | d2 | ..."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __str__(self):
        parts = [f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"


class Kill(Enum):
    GAMMA = "gamma"    # adjoin s_i^2 = 1 for all i
    LAMBDA = "lambda"  # adjoin s_i^2 = 1 for i < n and s_n = 1


def relation_matrix(p: TowerPresentation) -> list[list[int]]:
    """One row per pair i < j: (eps_ij - 1) in column j and a[i,j,k] in column k."""
    rows = []
    for i, j in p.pairs():
        row = [0] * p.n
        row[j - 1] = p.eps(i, j) - 1
        for k, a in enumerate(p.tail(i, j), start=j + 1):
            row[k - 1] = a
        rows.append(row)
    return rows


def abelianization(p: TowerPresentation) -> AbelianInvariants:
    diag = smith_diagonal(relation_matrix(p), p.n)
    return AbelianInvariants(p.n - len(diag), tuple(d for d in diag if d > 1))


def b1_mod_p(p: TowerPresentation, q: int) -> int:
    if not is_prime(q):
        raise ValueError(f"not-prime: {q}")
    return p.n - rank_mod_p(relation_matrix(p), q)


def is_rp1_tower(p: TowerPresentation) -> bool:
    return all(a % 2 == 0 for a in p.tail_entries())


def is_orientable_level(p: TowerPresentation, j: int) -> bool:
    if not 2 <= j <= p.n:
        raise IndexError(f"level {j} outside 2..{p.n}")
    return all(p.eps(i, j) == 1 for i in range(1, j))


def is_torus(p: TowerPresentation) -> bool:
    return all(e == 1 for e in p.eps_map.values()) and p.all_tails_zero()


def _require_consistent(p: TowerPresentation) -> None:
    check = p.consistency_check()
    if not check:
        raise InconsistentPresentation(f"presentation inconsistent at triple {check.triple}")


def squares_commute(p: TowerPresentation, i: int, j: int) -> bool:
    return p.commutator(p.generator(i, 2), p.generator(j, 2)) == p.identity


def is_flat(p: TowerPresentation, *, assume_consistent: bool = False) -> bool:
    """True iff the squares s_i^2 pairwise commute, i.e. they generate Z^n."""
    if not assume_consistent:
        _require_consistent(p)
    return all(squares_commute(p, i, j) for i, j in p.pairs())


def is_flat_3_formula(a: int, eps: int, eps1: int, eps2: int) -> bool:
    return (eps + eps1) * (eps2 + 1) * a == 0


def is_top_tail_form(p: TowerPresentation) -> bool:
    """Every tail is supported on s_n alone."""
    return all(not any(p.tail(i, j)[:-1]) for i, j in p.pairs() if j < p.n)


def top_tail(p: TowerPresentation, i: int, j: int) -> int:
    """The s_n exponent of the (i, j) relation (0 when j = n)."""
    return p.tail(i, j)[-1] if j < p.n else 0


def flat_pair_formula(p: TowerPresentation, i: int, j: int) -> bool:
    """Closed-form test that s_i^2 and s_j^2 commute, for top-tail presentations, i < j < n."""
    if not is_top_tail_form(p):
        raise FormError("some tail has support below the top generator")
    if not 1 <= i < j < p.n:
        raise IndexError(f"pair ({i},{j}) must satisfy 1 <= i < j < {p.n}")
    n = p.n
    return (p.eps(i, n) + p.eps(i, j)) * (p.eps(j, n) + 1) * top_tail(p, i, j) == 0


def defining_relators(p: TowerPresentation) -> list[list[int]]:
    rels = []
    for i, j in p.pairs():
        # s_i s_j s_i^-1 (rhs)^-1
        rhs = p.relator_rhs_word(i, j)
        word = [(i, 1), (j, 1), (i, -1)] + [(g, -e) for g, e in reversed(rhs)]
        rels.append(cosets.letters(word))
    return rels


def killed_words(p: TowerPresentation, kill: Kill) -> list[list[int]]:
    """Generators of the subgroup: s_i^2 for all i (GAMMA), or with s_n in place of s_n^2 (LAMBDA)."""
    words = [cosets.letters([(i, 2)]) for i in range(1, p.n + 1)]
    if kill is Kill.LAMBDA:
        words[-1] = cosets.letters([(p.n, 1)])
    return words


def quotient_relators(p: TowerPresentation, kill: Kill) -> list[list[int]]:
    return defining_relators(p) + killed_words(p, kill)


def finite_quotient_order(p: TowerPresentation, kill: Kill | str, cap: int = cosets.DEFAULT_CAP) -> int:
    """Order of p modulo the normal closure of the squares (GAMMA) or of s_1^2..s_(n-1)^2, s_n (LAMBDA)."""
    kill = Kill(kill) if isinstance(kill, str) else kill
    _require_consistent(p)
    return cosets.enumerate_cosets(p.n, quotient_relators(p, kill), cap=cap).order


def subgroup_coset_table(p: TowerPresentation, kill: Kill | str, cap: int = cosets.DEFAULT_CAP) -> cosets.CosetTable:
    """Cosets of the subgroup generated by the killed words (no relators adjoined)."""
    kill = Kill(kill) if isinstance(kill, str) else kill
    _require_consistent(p)
    return cosets.enumerate_cosets(p.n, defining_relators(p), subgroup=killed_words(p, kill), cap=cap)


def subgroup_index(p: TowerPresentation, kill: Kill | str, cap: int = cosets.DEFAULT_CAP) -> int:
    """Index of <s_1^2, .., s_n^2> (GAMMA) or <s_1^2, .., s_(n-1)^2, s_n> (LAMBDA).

    Equals ``finite_quotient_order`` exactly when that subgroup is normal.
    With odd tails it need not be: the normal closure can be strictly larger.
    """
    return subgroup_coset_table(p, kill, cap).order


def subgroup_is_normal(p: TowerPresentation, kill: Kill | str, cap: int = cosets.DEFAULT_CAP) -> bool:
    """Whether every generator conjugate of every subgroup generator stays in the subgroup."""
    kill = Kill(kill) if isinstance(kill, str) else kill
    table = subgroup_coset_table(p, kill, cap)
    for w in killed_words(p, kill):
        for x in range(2 * p.n):
            if table.trace([x] + w + [x ^ 1]) != 0:
                return False
    return True

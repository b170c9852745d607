"""Normalization of flat RP^1-tower presentations into real Bott form.

Works by induction on the height: normalize the quotient by the top
generator, replay those substitutions, then clear the remaining s_n
exponents row by row from the bottom of the tower upwards.  Every step is a
``change_of_generators`` call, so each intermediate state is an honest
presentation and the composed witness can be verified by collection.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InternalAssertionError, PreconditionViolation
from .invariants import is_flat, is_rp1_tower, is_top_tail_form, top_tail
from .presentation import TowerPresentation
from .witness import GeneratorSubstitution, IsomorphismWitness, change_of_generators

BottMatrix = tuple[tuple[int, ...], ...]


def to_bott_matrix(p: TowerPresentation) -> BottMatrix:
    if not p.all_tails_zero():
        from .errors import FormError
        raise FormError("Bott matrix needs every tail to be zero")
    n = p.n
    return tuple(tuple(1 if i < j and p.eps(i + 1, j + 1) == -1 else 0 for j in range(n)) for i in range(n))


@dataclass
class BottResult:
    presentation: TowerPresentation
    matrix: BottMatrix
    witness: IsomorphismWitness
    steps: list[tuple[GeneratorSubstitution, ...]] = field(default_factory=list)


class _Run:
    """Current presentation plus the witness accumulated from the input."""

    def __init__(self, p: TowerPresentation):
        self.source = p
        self.current = p
        self.witness = IsomorphismWitness.identity(p)
        self.steps: list[tuple[GeneratorSubstitution, ...]] = []

    def apply(self, subs) -> None:
        subs = tuple(subs)
        if not subs:
            return
        q, w = change_of_generators(self.current, subs)
        self.witness = self.witness.then(w, self.current, self.source, q)
        self.current = q
        self.steps.append(subs)


def _top_power(n: int, target: int, b: int) -> GeneratorSubstitution:
    prefix = [0] * n
    prefix[n - 1] = b
    return GeneratorSubstitution(target, tuple(prefix))


def _exact_half(x: int, d: int, what: str) -> int:
    if x % d:
        raise PreconditionViolation(f"{what}: {x} not divisible by {d} (odd tail)")
    return x // d


def compatibility_violations(p: TowerPresentation, k: int) -> list[tuple[int, int]]:
    """Pairs (i, j), k < i < j < n, where the row-k compatibility identities fail.

    Only meaningful when every row above k is already zero.
    """
    n = p.n
    e = {i: p.eps(i, n) for i in range(1, n)}
    bad = []
    for i in range(k + 1, n):
        for j in range(i + 1, n):
            aki, akj = top_tail(p, k, i), top_tail(p, k, j)
            if p.eps(i, j) == 1:
                ok = (e[j] - 1) * aki == (e[i] - 1) * akj
            else:
                ok = (e[j] - 1) * aki == (e[i] + e[j]) * akj
            if not ok:
                bad.append((i, j))
    return bad


def _rows_zero_above(p: TowerPresentation, k: int) -> bool:
    return all(top_tail(p, i, j) == 0 for i in range(k + 1, p.n) for j in range(i + 1, p.n))


def _normalize(run: _Run, check_identities: bool) -> None:
    p = run.current
    n = p.n
    if n <= 2:
        return
    # (a) normalize the quotient and replay its substitutions verbatim
    sub_run = _Run(p.quotient_below(n - 1))
    _normalize(sub_run, check_identities)
    for subs in sub_run.steps:
        run.apply(GeneratorSubstitution(s.target, s.prefix + (0,)) for s in subs)
    if not is_top_tail_form(run.current):
        raise InternalAssertionError("replayed quotient normalization left tails below s_n")

    # (b) top pair (n-2, n-1): the height-3 lifting move
    p = run.current
    a = top_tail(p, n - 2, n - 1)
    if a:
        e, e1, e2 = p.eps(n - 2, n - 1), p.eps(n - 2, n), p.eps(n - 1, n)
        kb = e2 - 1
        kc = -(e1 - 1) if e == 1 else -(e1 + e2)
        if kb:
            run.apply([_top_power(n, n - 2, -_exact_half(-a, kb, "top pair"))])
        elif kc:
            run.apply([_top_power(n, n - 1, -_exact_half(-a, kc, "top pair"))])
        else:
            raise InternalAssertionError(
                f"top pair ({n - 2},{n - 1}) has sign pattern {(e, e1, e2)} with tail {a}; flatness forbids this")
        if top_tail(run.current, n - 2, n - 1):
            raise InternalAssertionError("lifting move did not clear the top pair")

    # (c) rows k = n-3 .. 1
    for k in range(n - 3, 0, -1):
        p = run.current
        if check_identities:
            bad = compatibility_violations(p, k)
            if bad:
                raise InternalAssertionError(f"row {k} compatibility identities fail at {bad}")
        eps_top = {i: p.eps(i, n) for i in range(1, n)}
        minus = [q for q in range(k + 1, n) if eps_top[q] == -1]
        if minus and top_tail(p, k, minus[0]):
            a0 = top_tail(p, k, minus[0])
            if any(top_tail(p, k, q) != a0 for q in minus):
                raise InternalAssertionError(
                    f"row {k}: tails on sign -1 columns {minus} differ; equal-tail condition violated")
            # s_k -> s_n^b s_k adds 2b to each of these tails
            b = -_exact_half(a0, 2, f"tail a[{k},{minus[0]}]")
            run.apply([_top_power(n, k, b)])
        for q in range(k + 1, n):
            p = run.current
            aq = top_tail(p, k, q)
            if not aq:
                continue
            if eps_top[q] == -1:
                raise InternalAssertionError(f"row {k}: tail at column {q} survived the s_k substitution")
            if any(eps_top[j] != 1 for j in range(q + 1, n)) or any(
                    p.eps(l, q) != eps_top[l] for l in range(k + 1, q)):
                raise InternalAssertionError(f"row {k}, column {q}: sign side conditions fail")
            d = p.eps(k, n) - p.eps(k, q)
            if d == 0:
                raise InternalAssertionError(f"row {k}, column {q}: commuting-squares condition forces a zero tail")
            c = -_exact_half(aq, d, f"tail a[{k},{q}]")
            run.apply([_top_power(n, q, c)])
            if top_tail(run.current, k, q):
                raise InternalAssertionError(f"row {k}, column {q}: substitution did not clear the tail")
            if not _rows_zero_above(run.current, k):
                raise InternalAssertionError(f"row {k}, column {q}: substitution disturbed higher rows")
        if any(top_tail(run.current, k, q) for q in range(k + 1, n)):
            raise InternalAssertionError(f"row {k} not cleared")


def bott_normalize(p: TowerPresentation, *, check_identities: bool = True) -> BottResult:
    """Rewrite a flat presentation with even tails so that every tail vanishes."""
    if not is_rp1_tower(p):
        raise PreconditionViolation("some tail exponent is odd; not an iterated RP^1-bundle group")
    if not p.is_consistent():
        raise PreconditionViolation("presentation is inconsistent")
    if not is_flat(p, assume_consistent=True):
        raise PreconditionViolation("squares of generators do not commute; group is not Bieberbach")
    run = _Run(p)
    _normalize(run, check_identities)
    out = run.current
    if not out.all_tails_zero():
        raise InternalAssertionError("normalization finished with a nonzero tail")
    return BottResult(out, to_bott_matrix(out), run.witness, run.steps)

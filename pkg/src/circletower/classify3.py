"""Classification of height-3 tower groups Pi(a, eps, eps1, eps2).

Pi(a, eps, eps1, eps2) is generated by s1, s2, s3 with::

    s1 s2 s1^-1 = s3^a s2^eps,  s1 s3 s1^-1 = s3^eps1,  s2 s3 s2^-1 = s3^eps2

Every instance is moved to a canonical representative by explicit
generator substitutions, and the composed substitution is returned as a
verifiable isomorphism witness.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import PreconditionViolation
from .invariants import AbelianInvariants, abelianization, b1_mod_p, is_flat
from .presentation import NormalForm, TowerPresentation
from .witness import IsomorphismWitness, verify_isomorphism

FLAT_KINDS = ("G1", "G2", "B1", "B2", "B3", "B4")
FAMILY_KINDS = ("NIL", "INFRANIL")


@dataclass(frozen=True, order=True)
class ThreeParams:
    a: int
    eps: int
    eps1: int
    eps2: int

    def __post_init__(self):
        if any(e not in (1, -1) for e in self.signs):
            raise ValueError(f"signs must be +-1, got {self.signs}")

    @property
    def signs(self) -> tuple[int, int, int]:
        return (self.eps, self.eps1, self.eps2)

    def presentation(self) -> TowerPresentation:
        return TowerPresentation.three(self.a, self.eps, self.eps1, self.eps2)

    @classmethod
    def parse(cls, text: str) -> ThreeParams:
        parts = [int(x) for x in text.replace(" ", "").split(",")]
        if len(parts) != 4:
            raise ValueError("expected a,eps,eps1,eps2")
        return cls(*parts)

    @classmethod
    def of(cls, p: TowerPresentation) -> ThreeParams:
        if p.n != 3:
            raise ValueError("height-3 presentation required")
        return cls(p.tail_entry(1, 2, 3), p.eps(1, 2), p.eps(1, 3), p.eps(2, 3))


@dataclass(frozen=True, order=True)
class Class3Label:
    kind: str
    a: int = 0

    def __post_init__(self):
        if self.kind in FAMILY_KINDS:
            if self.a < 1:
                raise ValueError(f"{self.kind} needs a positive parameter")
        elif self.kind in FLAT_KINDS:
            if self.a:
                raise ValueError(f"{self.kind} takes no parameter")
        else:
            raise ValueError(f"unknown class {self.kind!r}")

    def __str__(self):
        return f"{self.kind}({self.a})" if self.kind in FAMILY_KINDS else self.kind

    @classmethod
    def parse(cls, text: str) -> Class3Label:
        m = re.fullmatch(r"\s*([A-Z0-9]+)(?:\((\d+)\))?\s*", text)
        if not m:
            raise ValueError(f"bad class label {text!r}")
        return cls(m.group(1), int(m.group(2)) if m.group(2) else 0)

    def sort_key(self):
        order = FLAT_KINDS + FAMILY_KINDS
        return (order.index(self.kind), self.a)

    def canonical(self) -> ThreeParams:
        return ThreeParams(*CANONICAL[self.kind]) if self.kind in FLAT_KINDS else ThreeParams(
            self.a, *(1, 1, 1) if self.kind == "NIL" else (-1, -1, 1))


CANONICAL = {
    "G1": (0, 1, 1, 1),
    "G2": (0, -1, -1, 1),
    "B1": (0, 1, 1, -1),
    "B2": (1, 1, 1, -1),
    "B3": (0, -1, 1, -1),
    "B4": (1, -1, 1, -1),
}

# sign moves applied after parity reduction, per sign pattern
_ROUTES = {
    (1, 1, -1): (),
    (1, -1, -1): (2,),
    (1, -1, 1): (3,),
    (-1, 1, 1): (4, 3),
    (-1, 1, -1): (),
    (-1, -1, -1): (2,),
}


@dataclass(frozen=True)
class Move:
    name: str
    source: ThreeParams
    target: ThreeParams
    witness: IsomorphismWitness

    def __str__(self):
        return f"{self.name}: {_fmt(self.source)} -> {_fmt(self.target)}"


@dataclass
class WitnessChain:
    source: ThreeParams
    moves: list[Move] = field(default_factory=list)

    @property
    def target(self) -> ThreeParams:
        return self.moves[-1].target if self.moves else self.source

    def witness(self) -> IsomorphismWitness:
        src = self.source.presentation()
        w = IsomorphismWitness.identity(src)
        for move in self.moves:
            w = w.then(move.witness, move.source.presentation(), src, move.target.presentation())
        return w

    def verify(self):
        return verify_isomorphism(self.source.presentation(), self.target.presentation(), self.witness())


def _fmt(t: ThreeParams) -> str:
    return f"Pi({t.a},{t.eps},{t.eps1},{t.eps2})"


def _images(p: TowerPresentation, words) -> tuple[NormalForm, ...]:
    return tuple(p.evaluate(w) for w in words)


def _move(name, t: ThreeParams, new: ThreeParams, forward_words, backward_words) -> Move:
    # forward: old generators as words in the new ones; backward: the reverse
    w = IsomorphismWitness(_images(new.presentation(), forward_words), _images(t.presentation(), backward_words))
    return Move(name, t, new, w)


def lifted_a(t: ThreeParams, b: int, c: int) -> int:
    if t.eps == 1:
        return t.a + (t.eps2 - 1) * b - (t.eps1 - 1) * c
    return t.a + (t.eps2 - 1) * b - (t.eps1 + t.eps2) * c


def move_lift(t: ThreeParams, b: int, c: int) -> Move:
    """New generators s3^-b s1, s3^-c s2, s3."""
    new = ThreeParams(lifted_a(t, b, c), t.eps, t.eps1, t.eps2)
    return _move(
        f"LIFT(b={b},c={c})", t, new,
        [((3, b), (1, 1)), ((3, c), (2, 1)), ((3, 1),)],
        [((3, -b), (1, 1)), ((3, -c), (2, 1)), ((3, 1),)],
    )


def move_iso(k: int, t: ThreeParams) -> Move:
    a, e, e1, e2 = t.a, t.eps, t.eps1, t.eps2
    if k == 1:
        words = [((1, 1),), ((2, 1),), ((3, -1),)]
        return _move("ISO1", t, ThreeParams(-a, e, e1, e2), words, words)
    if k == 2:
        return _move(
            "ISO2", t, ThreeParams(a, e, e1 * e2, e2),
            [((1, 1), (2, -1)), ((2, 1),), ((3, 1),)],
            [((1, 1), (2, 1)), ((2, 1),), ((3, 1),)],
        )
    if k == 3:
        if e != 1:
            raise PreconditionViolation("ISO3 needs eps = 1")
        words = [((2, 1),), ((1, 1),), ((3, -1),)]
        return _move("ISO3", t, ThreeParams(a, 1, e2, e1), words, words)
    if k == 4:
        if e1 != -e or e2 != 1 or a not in (0, 1):
            raise PreconditionViolation("ISO4 needs signs (eps, -eps, 1) and a in {0, 1}")
        new = ThreeParams(a, -e, e, 1)
        if a == 0:
            words = [((1, 1),), ((3, 1),), ((2, 1),)]
            return _move("ISO4", t, new, words, words)
        return _move(
            "ISO4", t, new,
            [((1, 1),), ((2, 1),), ((3, 1), (2, -2 * e))],
            [((1, 1),), ((2, 1),), ((3, 1), (2, 2 * e))],
        )
    raise ValueError(f"no isomorphism move {k}")


def _parity_lift(t: ThreeParams) -> Move | None:
    target = t.a % 2
    if t.a == target:
        return None
    kb = t.eps2 - 1
    kc = -(t.eps1 - 1) if t.eps == 1 else -(t.eps1 + t.eps2)
    if kb:
        return move_lift(t, (target - t.a) // kb, 0)
    return move_lift(t, 0, (target - t.a) // kc)


def label_of(t: ThreeParams) -> Class3Label:
    if t.signs == (1, 1, 1):
        return Class3Label("NIL", abs(t.a)) if t.a else Class3Label("G1")
    if t.signs == (-1, -1, 1):
        return Class3Label("INFRANIL", abs(t.a)) if t.a else Class3Label("G2")
    odd = t.a % 2
    if t.eps == 1 or t.signs == (-1, 1, 1):
        return Class3Label("B2" if odd else "B1")
    return Class3Label("B4" if odd else "B3")


def canonical_class(t: ThreeParams) -> tuple[Class3Label, WitnessChain]:
    chain = WitnessChain(t)
    cur = t
    if t.signs in ((1, 1, 1), (-1, -1, 1)):
        if t.a < 0:
            chain.moves.append(move_iso(1, cur))
    else:
        lift = _parity_lift(cur)
        if lift is not None:
            chain.moves.append(lift)
            cur = lift.target
        for k in _ROUTES[cur.signs]:
            move = move_iso(k, cur)
            chain.moves.append(move)
            cur = move.target
    label = label_of(t)
    assert chain.target == label.canonical(), (t, chain.target, label)
    return label, chain


def is_nilpotent_3(t: ThreeParams) -> bool:
    return t.signs == (1, 1, 1)


def index2_subgroup(p: TowerPresentation) -> TowerPresentation:
    """Presentation of <s1^2, s2, ..., sn> on the generators u1 = s1^2, u_j = s_j."""
    eps, tails = p.eps_map, p.tails_map
    sq = p.generator(1, 2)
    sq_inv = p.invert(sq)
    for j in range(2, p.n + 1):
        # r = u1 s_j u1^-1; descending tail of r from the ascending form of r^-1
        r_inv = p.multiply(p.multiply(sq, p.generator(j, -1)), sq_inv)
        eps[1, j] = -r_inv[j - 1]
        tails[1, j] = tuple(-x for x in r_inv[j:])
    return TowerPresentation(p.n, eps, tails)


@dataclass(frozen=True)
class SeparatingInvariants:
    flat: bool
    h1: AbelianInvariants
    b1_mod2: int
    nilpotent: bool
    index2_h1: AbelianInvariants

    def fingerprint(self):
        return (self.flat, self.h1, self.b1_mod2, self.nilpotent)


def separating_invariants(t: ThreeParams) -> SeparatingInvariants:
    p = t.presentation()
    return SeparatingInvariants(
        flat=is_flat(p, assume_consistent=True),
        h1=abelianization(p),
        b1_mod2=b1_mod_p(p, 2),
        nilpotent=is_nilpotent_3(t),
        index2_h1=abelianization(index2_subgroup(p)),
    )


def all_instances(max_a: int):
    for signs in [(e, e1, e2) for e in (1, -1) for e1 in (1, -1) for e2 in (1, -1)]:
        for a in range(-max_a, max_a + 1):
            yield ThreeParams(a, *signs)

"""Generator substitutions and explicit isomorphism witnesses."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InconsistentPresentation
from .presentation import NormalForm, TowerPresentation, normal_form_word


@dataclass(frozen=True)
class GeneratorSubstitution:
    """Replace s_target by prefix * s_target, where prefix lives in <s_(target+1), ..., s_n>."""

    target: int
    prefix: NormalForm

    def check(self, p: TowerPresentation) -> None:
        if not 1 <= self.target <= p.n:
            raise IndexError(f"substitution target {self.target} outside 1..{p.n}")
        if len(self.prefix) != p.n:
            raise ValueError(f"prefix must have {p.n} exponents")
        if any(self.prefix[: self.target]):
            raise ValueError(f"prefix for s{self.target} must only use generators above it")


@dataclass(frozen=True)
class IsomorphismWitness:
    """Generator images in both directions.

    ``forward[i]`` is the image of domain generator s_(i+1), as a normal form in
    the codomain; ``backward`` is the same for codomain generators.
    """

    forward: tuple[NormalForm, ...]
    backward: tuple[NormalForm, ...]

    @classmethod
    def identity(cls, p: TowerPresentation) -> IsomorphismWitness:
        gens = tuple(p.generator(i) for i in range(1, p.n + 1))
        return cls(gens, gens)

    def inverse(self) -> IsomorphismWitness:
        return IsomorphismWitness(self.backward, self.forward)

    def then(self, other: IsomorphismWitness, middle: TowerPresentation,
             source: TowerPresentation, target: TowerPresentation) -> IsomorphismWitness:
        """Compose ``self: source -> middle`` with ``other: middle -> target``."""
        forward = tuple(apply_images(target, other.forward, x) for x in self.forward)
        backward = tuple(apply_images(source, self.backward, x) for x in other.backward)
        return IsomorphismWitness(forward, backward)


@dataclass(frozen=True)
class Verdict:
    valid: bool
    reason: str = ""

    def __bool__(self):
        return self.valid


def apply_images(target: TowerPresentation, images: Sequence[NormalForm], x: Sequence[int]) -> NormalForm:
    """Send the normal form x (a word s1^x1 ... sn^xn) through s_k -> images[k-1]."""
    result = target.identity
    for k, e in enumerate(x):
        if e:
            result = target.multiply(result, target.power(images[k], e))
    return result


def _apply_word(target: TowerPresentation, images, word) -> NormalForm:
    result = target.identity
    for gen, e in word:
        result = target.multiply(result, target.power(images[gen - 1], e))
    return result


def _check_relations(p: TowerPresentation, q: TowerPresentation, images) -> str:
    for i, j in p.pairs():
        fi, fj = images[i - 1], images[j - 1]
        lhs = q.multiply(q.multiply(fi, fj), q.invert(fi))
        rhs = _apply_word(q, images, p.relator_rhs_word(i, j))
        if lhs != rhs:
            return f"relation ({i},{j}) fails: {lhs} != {rhs}"
    return ""


def verify_isomorphism(p: TowerPresentation, q: TowerPresentation, w: IsomorphismWitness) -> Verdict:
    if len(w.forward) != p.n or len(w.backward) != q.n:
        return Verdict(False, "image count does not match generator count")
    if any(len(x) != q.n for x in w.forward) or any(len(x) != p.n for x in w.backward):
        return Verdict(False, "image length does not match target height")
    reason = _check_relations(p, q, w.forward)
    if reason:
        return Verdict(False, "forward " + reason)
    reason = _check_relations(q, p, w.backward)
    if reason:
        return Verdict(False, "backward " + reason)
    for i in range(1, p.n + 1):
        if apply_images(p, w.backward, w.forward[i - 1]) != p.generator(i):
            return Verdict(False, f"backward(forward(s{i})) != s{i}")
    for i in range(1, q.n + 1):
        if apply_images(q, w.forward, w.backward[i - 1]) != q.generator(i):
            return Verdict(False, f"forward(backward(s{i})) != s{i}")
    return Verdict(True)


def change_of_generators(
    p: TowerPresentation, subs: Sequence[GeneratorSubstitution]
) -> tuple[TowerPresentation, IsomorphismWitness]:
    """Rewrite p in the generating set t_i = prefix_i * s_i (all substitutions at once).

    Returns the new presentation and a witness from p to it.
    """
    n = p.n
    new_gens = [p.generator(i) for i in range(1, n + 1)]
    seen = set()
    for sub in subs:
        sub.check(p)
        if sub.target in seen:
            raise ValueError(f"generator s{sub.target} substituted twice")
        seen.add(sub.target)
        new_gens[sub.target - 1] = p.multiply(sub.prefix, p.generator(sub.target))
    if not seen:
        return p, IsomorphismWitness.identity(p)
    inverse_gens = [p.invert(t) for t in new_gens]

    def sift(x: NormalForm) -> NormalForm:
        coords = []
        for i in range(n):
            e = x[i]
            coords.append(e)
            if e:
                x = p.multiply(p.power(inverse_gens[i] if e > 0 else new_gens[i], abs(e)), x)
                if x[i]:
                    raise InconsistentPresentation("sifting failed; presentation inconsistent")
        return tuple(coords)

    eps, tails = {}, {}
    for i, j in p.pairs():
        ti, tj = new_gens[i - 1], new_gens[j - 1]
        # r^-1 = t_j^-eps t_(j+1)^-a ... t_n^-a  gives the descending tail of r directly
        r_inv = sift(p.multiply(p.multiply(ti, inverse_gens[j - 1]), inverse_gens[i - 1]))
        if any(r_inv[: j - 1]) or r_inv[j - 1] not in (1, -1):
            raise InconsistentPresentation(f"relation ({i},{j}) left the expected subgroup")
        eps[i, j] = -r_inv[j - 1]
        tails[i, j] = tuple(-x for x in r_inv[j:])
    q = TowerPresentation(n, eps, tails)
    forward = tuple(sift(p.generator(i)) for i in range(1, n + 1))
    return q, IsomorphismWitness(forward, tuple(new_gens))


def format_word(nf: Sequence[int], letter: str = "s") -> str:
    word = normal_form_word(nf)
    if not word:
        return "1"
    return " ".join(f"{letter}{g}" if e == 1 else f"{letter}{g}^{e}" for g, e in word)

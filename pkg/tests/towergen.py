"""Random presentation generators shared by the tests."""

from __future__ import annotations

import random

from circletower.presentation import TowerPresentation
from circletower.witness import GeneratorSubstitution, change_of_generators


def random_data(rng: random.Random, n: int, amax: int = 6, pz: float = 0.7, top_only: bool = False):
    """Random signs and tails; each tail entry is zero with probability pz."""
    eps = {(i, j): rng.choice((1, -1)) for i in range(1, n + 1) for j in range(i + 1, n + 1)}
    tails = {}
    for i, j in eps:
        length = n - j
        t = [0 if rng.random() < pz else rng.randint(-amax, amax) for _ in range(length)]
        if top_only and length:
            t = [0] * (length - 1) + [t[-1]]
        tails[i, j] = tuple(t)
    return TowerPresentation(n, eps, tails)


def random_consistent(rng: random.Random, n: int, amax: int = 6, pz: float = 0.7,
                      top_only: bool = False, tries: int = 100000) -> TowerPresentation:
    for _ in range(tries):
        p = random_data(rng, n, amax, pz, top_only)
        if p.is_consistent():
            return p
    raise RuntimeError("no consistent sample found")


def random_bott_matrix(rng: random.Random, n: int):
    return [[rng.randint(0, 1) if i < j else 0 for j in range(n)] for i in range(n)]


def random_substitutions(rng: random.Random, n: int, span: int = 2, even: bool = False,
                         targets=None):
    targets = range(1, n) if targets is None else targets
    targets = list(targets)
    subs = []
    for t in rng.sample(targets, rng.randint(1, len(targets))):
        prefix = [0] * n
        for k in range(t, n):
            x = rng.randint(-span, span)
            prefix[k] = 2 * x if even else x
        subs.append(GeneratorSubstitution(t, tuple(prefix)))
    return subs


def scrambled_bott(rng: random.Random, n: int):
    """A random Bott presentation pushed through 1 to 4 rounds of even substitutions."""
    seed = TowerPresentation.bott(random_bott_matrix(rng, n))
    p = seed
    for _ in range(rng.randint(1, 4)):
        p, _ = change_of_generators(p, random_substitutions(rng, n, even=True))
    return seed, p


def random_element(rng: random.Random, n: int, span: int = 3):
    return tuple(rng.randint(-span, span) for _ in range(n))

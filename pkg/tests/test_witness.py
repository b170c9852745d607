import random

import pytest
from hypothesis import given, settings, strategies as st

from circletower.invariants import abelianization
from circletower.presentation import TowerPresentation
from circletower.witness import (
    GeneratorSubstitution,
    IsomorphismWitness,
    change_of_generators,
    format_word,
    verify_isomorphism,
)
from towergen import random_consistent, random_substitutions

T = TowerPresentation
G = GeneratorSubstitution


def test_empty_substitution():
    p = T.three(3, -1, 1, -1)
    q, w = change_of_generators(p, [])
    assert q == p
    assert w == IsomorphismWitness.identity(p)


def test_lift_move_example():
    p = T.three(2, 1, 1, -1)
    q, w = change_of_generators(p, [G(1, (0, 0, -1))])
    assert q == T.three(0, 1, 1, -1)
    assert verify_isomorphism(p, q, w)
    assert w.backward[0] == (1, 0, -1)


@pytest.mark.parametrize("a", [0, 1, 4, -3])
@pytest.mark.parametrize("signs", [(e, e1, e2) for e in (1, -1) for e1 in (1, -1) for e2 in (1, -1)])
def test_sign_product_move(a, signs):
    # new generator s2 s1 turns eps1 into eps1 * eps2
    e, e1, e2 = signs
    p = T.three(a, e, e1, e2)
    q, w = change_of_generators(p, [G(1, (0, 1, 0))])
    assert (q.eps(1, 2), q.eps(1, 3), q.eps(2, 3)) == (e, e1 * e2, e2)
    assert abs(q.tail(1, 2)[0]) % 2 == abs(a) % 2
    assert verify_isomorphism(p, q, w)


def test_swap_witness_valid():
    for a in (0, 1, 3):
        for e1 in (1, -1):
            for e2 in (1, -1):
                p, q = T.three(a, 1, e1, e2), T.three(a, 1, e2, e1)
                images = ((0, 1, 0), (1, 0, 0), (0, 0, -1))
                assert verify_isomorphism(p, q, IsomorphismWitness(images, images))


def test_naive_identity_between_different_groups_fails():
    p, q = T.three(1, 1, 1, 1), T.three(0, 1, 1, 1)
    v = verify_isomorphism(p, q, IsomorphismWitness.identity(p))
    assert not v
    assert "relation" in v.reason
    assert abelianization(p) != abelianization(q)


def test_identity_witness():
    p = T.three(3, -1, -1, 1)
    assert verify_isomorphism(p, p, IsomorphismWitness.identity(p))


def test_non_inverse_witness_fails():
    # s3 -> s3^-1 forward is an automorphism of Z^3 but the backward map is not its inverse
    p = T.free_abelian(3)
    fwd = ((1, 0, 0), (0, 1, 0), (0, 0, -1))
    bwd = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert not verify_isomorphism(p, p, IsomorphismWitness(fwd, bwd))


def test_substitution_checks():
    p = T.three(0, 1, 1, 1)
    with pytest.raises(ValueError):
        change_of_generators(p, [G(2, (1, 0, 0))])
    with pytest.raises(ValueError):
        change_of_generators(p, [G(1, (0, 1, 0)), G(1, (0, 0, 1))])
    with pytest.raises(IndexError):
        change_of_generators(p, [G(4, (0, 0, 0))])


def test_composition_and_inverse():
    rng = random.Random(4)
    for _ in range(15):
        p = random_consistent(rng, 4)
        q, w1 = change_of_generators(p, random_substitutions(rng, 4))
        r, w2 = change_of_generators(q, random_substitutions(rng, 4))
        w = w1.then(w2, q, p, r)
        assert verify_isomorphism(p, r, w)
        assert verify_isomorphism(r, p, w.inverse())


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10 ** 9), st.integers(2, 5))
def test_change_of_generators_properties(seed, n):
    rng = random.Random(seed)
    p = random_consistent(rng, n)
    q, w = change_of_generators(p, random_substitutions(rng, n, span=3, targets=range(1, n + 1)))
    assert q.is_consistent()
    assert verify_isomorphism(p, q, w)
    assert abelianization(p) == abelianization(q)


def test_format_word():
    assert format_word((0, 0, 0)) == "1"
    assert format_word((1, 0, -1)) == "s1 s3^-1"
    assert format_word((0, 2, 0), "t") == "t2^2"

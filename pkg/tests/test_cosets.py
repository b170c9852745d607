import pytest

from circletower.cosets import enumerate_cosets, letters
from circletower.errors import DidNotClose


def rel(*word):
    return letters(word)


def test_letters():
    assert letters([(1, 2), (2, -1)]) == [0, 0, 3]


def test_symmetric_group():
    # <a, b | a^2, b^3, (ab)^2> has order 6
    table = enumerate_cosets(2, [rel((1, 2)), rel((2, 3)), rel((1, 1), (2, 1), (1, 1), (2, 1))])
    assert table.complete and table.order == 6


def test_subgroup_index():
    rels = [rel((1, 2)), rel((2, 3)), rel((1, 1), (2, 1), (1, 1), (2, 1))]
    assert enumerate_cosets(2, rels, subgroup=[rel((2, 1))]).order == 2
    assert enumerate_cosets(2, rels, subgroup=[rel((1, 1))]).order == 3


def test_trivial_and_cyclic():
    assert enumerate_cosets(1, [rel((1, 1))]).order == 1
    assert enumerate_cosets(1, [rel((1, 12)), rel((1, 18))]).order == 6


def test_quaternion():
    # <a, b | a^4, a^2 b^-2, b a b^-1 a> has order 8
    rels = [rel((1, 4)), rel((1, 2), (2, -2)), rel((2, 1), (1, 1), (2, -1), (1, 1))]
    assert enumerate_cosets(2, rels).order == 8


def test_table_closed():
    rels = [rel((1, 2)), rel((2, 2)), rel((1, 1), (2, 1), (1, -1), (2, -1))]
    table = enumerate_cosets(2, rels)
    assert table.order == 4
    for c in range(table.order):
        for x in range(4):
            assert 0 <= table.rows[c][x] < table.order
    assert table.trace(rel((1, 1), (2, 1), (1, 1))) == table.trace(rel((2, 1)))


def test_infinite_group_hits_cap():
    with pytest.raises(DidNotClose):
        enumerate_cosets(1, [], cap=50)

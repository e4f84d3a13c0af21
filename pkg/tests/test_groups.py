import numpy as np
import pytest

from crosslab.errors import InvalidGroup
from crosslab.groups import FiniteGroup, cyclic, dihedral, group_by_name, group_from_json, symmetric


@pytest.mark.parametrize("g,order,abelian", [(cyclic(1), 1, True), (cyclic(4), 4, True),
                                             (symmetric(3), 6, False), (dihedral(4), 8, False)])
def test_constructors(g, order, abelian):
    assert g.order == order
    assert g.is_abelian == abelian
    e = g.identity
    for a in range(order):
        assert g.mul(a, g.inverse[a]) == e == g.mul(g.inverse[a], a)


def test_symmetric_identity_first():
    assert symmetric(3).identity == 0


def test_regular_representations_are_homomorphisms():
    g = symmetric(3)
    for a in range(6):
        for b in range(6):
            ab = g.mul(a, b)
            assert np.array_equal(g.left_regular(a) @ g.left_regular(b), g.left_regular(ab))
            assert np.array_equal(g.right_regular(a) @ g.right_regular(b), g.right_regular(ab))


def test_left_and_right_commute():
    g = dihedral(3)
    for a in range(6):
        for b in range(6):
            assert np.array_equal(g.left_regular(a) @ g.right_regular(b), g.right_regular(b) @ g.left_regular(a))


@pytest.mark.parametrize("table", [
    [[0, 1], [1, 1]],          # no inverse for 1
    [[0, 1], [0, 1]],          # no identity
    [[0, 1, 2], [1, 2, 0]],    # not square
    [[0, 2], [1, 0]],          # entry out of range
    [[0.5, 1], [1, 0]],        # not an integer
])
def test_invalid_tables(table):
    with pytest.raises(InvalidGroup):
        FiniteGroup(np.array(table))


def test_non_associative_rejected():
    # a Latin square with identity 0 that is not associative
    table = np.array([[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]])
    with pytest.raises(InvalidGroup, match="associative"):
        FiniteGroup(table)


def test_json_round_trip_and_names():
    g = symmetric(3)
    h = group_from_json(g.to_json())
    assert np.array_equal(g.cayley, h.cayley)
    assert group_from_json("Z3").order == 3
    assert group_by_name("D4").order == 8
    with pytest.raises(InvalidGroup):
        group_by_name("Q8")
    with pytest.raises(InvalidGroup):
        group_from_json({"order": 3, "cayley": [[0]]})
    with pytest.raises(InvalidGroup):
        group_from_json({"table": []})

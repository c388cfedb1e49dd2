from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gwhyp.algebra import Geometry, diagonal_hyp, dual_ambient, pair_ambient, pair_hyp

geometries = st.builds(Geometry, st.integers(2, 7), st.integers(1, 8))


@pytest.mark.parametrize(
    "N,a,b,expected", [(4, 2, 2, 1), (4, 1, 1, 0), (2, 0, 2, 1)]
)
def test_pair_ambient(N, a, b, expected):
    assert pair_ambient(Geometry(N, 1), a, b) == expected
    assert pair_ambient(N, a, b) == expected


@pytest.mark.parametrize(
    "N,l,a,b,expected", [(4, 5, 1, 2, 5), (4, 5, 3, 3, 0), (2, 1, 0, 1, 1)]
)
def test_pair_hyp(N, l, a, b, expected):
    assert pair_hyp(Geometry(N, l), a, b) == expected


def test_diagonal_examples():
    assert diagonal_hyp(Geometry(2, 1)) == [(0, 1, 1), (1, 0, 1)]
    fifth = Fraction(1, 5)
    assert diagonal_hyp(Geometry(4, 5)) == [
        (0, 3, fifth), (1, 2, fifth), (2, 1, fifth), (3, 0, fifth)
    ]


@pytest.mark.parametrize("N,a,expected", [(3, 1, (2, 1)), (2, 0, (2, 1)), (4, 4, (0, 1))])
def test_dual_ambient(N, a, expected):
    assert dual_ambient(Geometry(N, 1), a) == expected


def test_dual_ambient_zero_class():
    with pytest.raises(ValueError):
        dual_ambient(3, 4)


@pytest.mark.parametrize("N,l", [(1, 1), (3, 0), (0, 2)])
def test_geometry_validation(N, l):
    with pytest.raises(ValueError):
        Geometry(N, l)


def test_geometry_flags():
    assert Geometry(4, 5).is_calabi_yau
    assert not Geometry(4, 4).is_calabi_yau
    assert Geometry(3, 3).restricted_only and Geometry(3, 2).restricted_only
    assert not Geometry(4, 5).restricted_only
    assert Geometry(4, 5).contact_budget(3) == 15


@given(geometries, st.data())
def test_diagonal_is_dual_basis(geom, data):
    a = data.draw(st.integers(0, geom.N - 1))
    b = data.draw(st.integers(0, geom.N - 1))
    total = sum(c * pair_hyp(geom, a, right) for left, right, c in diagonal_hyp(geom) if left == b)
    assert total == (1 if a == b else 0)


@given(geometries, st.integers(0, 9), st.integers(0, 9))
def test_pairings_symmetric(geom, a, b):
    assert pair_hyp(geom, a, b) == pair_hyp(geom, b, a)
    assert pair_ambient(geom, a, b) == pair_ambient(geom, b, a)

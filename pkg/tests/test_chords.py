from fractions import Fraction as F

import pytest
from hypothesis import given

from conftest import angle_classes
from oracles import owners_interleave
from sigmalam.chords import (AngleClass, DegenerateClass, Leaf, crosses, hull_edges,
                             image_class, is_covering_on_class, separates, unlinked)


def test_leaf_is_unordered():
    assert Leaf(F(2, 3), F(1, 3)) == Leaf(F(1, 3), F(2, 3))
    with pytest.raises(DegenerateClass):
        Leaf(F(1, 3), F(4, 3))


def test_shared_endpoint_is_not_a_crossing():
    assert not crosses(Leaf(0, F(1, 2)), Leaf(F(1, 2), F(3, 4)))
    assert crosses(Leaf(0, F(1, 2)), Leaf(F(1, 4), F(3, 4)))


def test_span_and_edges():
    c = AngleClass([F(1, 7), F(2, 7), F(4, 7)])
    assert c.span() == F(3, 7)
    assert len(hull_edges(c)) == 3
    assert len(hull_edges(AngleClass([0, F(1, 2)]))) == 1


def test_covering():
    assert is_covering_on_class(2, AngleClass([F(1, 7), F(2, 7), F(4, 7)]))
    # a diameter collapses to a point under doubling
    assert not is_covering_on_class(2, AngleClass([F(1, 4), F(3, 4)]))


def test_image_of_rabbit_triangle_is_itself():
    c = AngleClass([F(1, 7), F(2, 7), F(4, 7)])
    assert image_class(2, c) == c


@given(angle_classes(), angle_classes())
def test_unlinked_matches_run_count(c1, c2):
    assert unlinked(c1, c2) == (not owners_interleave(c1, c2))


@given(angle_classes(), angle_classes())
def test_unlinked_symmetric(c1, c2):
    assert unlinked(c1, c2) == unlinked(c2, c1)


@given(angle_classes(), angle_classes())
def test_unlinked_iff_no_crossing_edges(c1, c2):
    if set(c1) & set(c2):
        return
    cross = any(crosses(a, b) for a in hull_edges(c1) for b in hull_edges(c2))
    assert unlinked(c1, c2) == (not cross)


@given(angle_classes(), angle_classes(), angle_classes())
def test_separator_is_unlinked_from_both(s, c1, c2):
    if separates(s, c1, c2):
        assert unlinked(s, c1) and unlinked(s, c2)
        assert not separates(s, c1, c1)

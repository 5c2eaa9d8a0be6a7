from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURES
from sigmalam.chords import AngleClass
from sigmalam.corpus import random_lamination
from sigmalam.lamfile import (FamFile, LamFile, LamParseError, from_lamination, parse,
                              parse_family, serialize, serialize_family, to_lamination)


def test_minimal_file():
    lf = parse("degree 2\nclass 1/7 2/7 4/7\n")
    assert lf.degree == 2 and lf.classes == [AngleClass([F(1, 7), F(2, 7), F(4, 7)])]
    assert (lf.mode, lf.depth, lf.preimages) == ("equivalence", 0, [])


def test_comments_and_blank_lines():
    lf = parse("# rabbit\n\ndegree 2  # quadratic\nclass 4/7 1/7 2/7\n")
    assert serialize(lf) == "degree 2\nmode equivalence\ndepth 0\nclass 1/7 2/7 4/7\n"


@pytest.mark.parametrize("text,line,col,msg", [
    ("degree 2\nclass 1/7 4/7\nclass 2/7 5/7\n", 3, 1, "linked"),
    ("degree 2\nclass 1/x 1/2\n", 2, 7, "bad fraction"),
    ("degree 2\nclass 1/0 1/2\n", 2, 7, "zero denominator"),
    ("degree 2\nclass 1/3 2/6\n", 2, 11, "duplicate"),
    ("degree 2\nclass 1/3 4/3\n", 2, 11, "outside"),
    ("class 1/3 2/3\n", 1, 1, "missing 'degree'"),
    ("degree 2\ncolour red\n", 2, 1, "unknown keyword"),
    ("degree 2\nmode fuzzy\n", 2, 6, "mode must be"),
    ("degree 1\n", 1, 8, "at least 2"),
    ("degree 2\nclass 1/3 2/3\npreimage-of 5: 1/6 5/6\n", 3, 13, "unknown class"),
])
def test_parse_errors_carry_location(text, line, col, msg):
    with pytest.raises(LamParseError) as err:
        parse(text)
    assert (err.value.line, err.value.column) == (line, col)
    assert msg in err.value.message


def test_linked_accepted_when_asked():
    lf = parse("degree 2\nclass 1/7 4/7\nclass 2/7 5/7\n", check_linked=False)
    assert len(lf.classes) == 2


@pytest.mark.parametrize("name", ["rabbit.lam", "basilica.lam", "crossing.lam", "empty.lam",
                                  "siegel.lam"])
def test_fixture_round_trip(name):
    text = (FIXTURES / name).read_text()
    assert serialize(parse(text, check_linked=False)) == text


def test_family_round_trip():
    text = (FIXTURES / "vertical20.fam").read_text()
    ff = parse_family(text)
    assert ff.completion == "vertical" and len(ff.members) == 63
    assert serialize_family(ff) == text


def test_family_errors():
    with pytest.raises(LamParseError):
        parse_family("set 1/3 2/3\nbogus\n")
    assert serialize_family(FamFile([AngleClass([F(1, 3), F(2, 3)])])) == "set 1/3 2/3\n"


def test_generators_expand_at_depth():
    lam = to_lamination(parse("degree 2\ndepth 2\nclass 1/3 2/3\n"))
    assert lam.depth == 2 and len(lam.classes) == 4


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3000))
def test_expanded_round_trip(seed):
    s = random_lamination(seed)
    if s is None:
        return
    text = serialize(from_lamination(s.lamination))
    back = to_lamination(parse(text, check_linked=False))
    assert sorted(back.classes) == sorted(s.lamination.classes)
    assert serialize(parse(text, check_linked=False)) == text


def test_lamfile_all_classes_order():
    lf = LamFile(2, [AngleClass([F(1, 3), F(2, 3)])], preimages=[(0, AngleClass([F(1, 6), F(5, 6)]))])
    assert [len(c) for c in lf.all_classes()] == [2, 2]

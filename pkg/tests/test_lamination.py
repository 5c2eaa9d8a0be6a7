import warnings
from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import owners_interleave
from sigmalam.chords import AngleClass, image_class
from sigmalam.circle import preimages
from sigmalam.corpus import random_lamination
from sigmalam.lamination import (Lamination, LaminationError, NotAGeneratingFamily,
                                 PrecriticalGenerator, all_critical_classes, generate, validate)

RABBIT = AngleClass([F(1, 7), F(2, 7), F(4, 7)])
BASILICA = AngleClass([F(1, 3), F(2, 3)])


def pairing_search(d, c, existing):
    """Every way to split the fibre of ``c`` into ``d`` classes mapping bijectively
    onto ``c``, pairwise unlinked, each equal to or unlinked from the existing classes."""
    fibres = [preimages(d, y) for y in c]
    candidates = set()
    for pick in product(*fibres):
        p = AngleClass(pick)
        if len(p) == len(c) and image_class(d, p) == c:
            candidates.add(p)
    ok = [p for p in candidates
          if all(p == e or not owners_interleave(p, e) for e in existing)]
    fibre = {x for f in fibres for x in f}
    found = set()

    def rec(chosen, used):
        if len(chosen) == d:
            if used == fibre:
                found.add(frozenset(chosen))
            return
        for p in ok:
            if set(p) & used or any(owners_interleave(p, q) for q in chosen):
                continue
            rec(chosen + [p], used | set(p))

    rec([], set())
    return found


@pytest.mark.parametrize("gen", [BASILICA, RABBIT], ids=["basilica", "rabbit"])
def test_first_pullback_matches_pairing_search(gen):
    lam = generate(2, [gen], 1)
    found = pairing_search(2, gen, [gen])
    assert len(found) == 1
    (expected,) = found
    assert set(lam.classes) == set(expected)
    assert len(lam.classes) == 2


def test_rabbit_depth0_is_the_triangle():
    assert generate(2, [RABBIT], 0).classes == [RABBIT]


def test_forward_images_are_added():
    lam = generate(2, [AngleClass([F(2, 5), F(3, 5)])], 0)
    assert lam.classes == [AngleClass([F(2, 5), F(3, 5)]), AngleClass([F(1, 5), F(4, 5)])]
    assert lam.tags == ["generator", "forward-image"]


def test_linked_orbit_rejected():
    with pytest.raises(NotAGeneratingFamily):
        generate(2, [AngleClass([F(1, 7), F(4, 7)]), AngleClass([F(2, 7), F(5, 7)])], 0)


def test_critical_generator_rejected():
    with pytest.raises(PrecriticalGenerator):
        generate(2, [AngleClass([F(1, 4), F(3, 4)])], 1)


def test_negative_depth():
    with pytest.raises(LaminationError):
        generate(2, [BASILICA], -1)


def test_explicit_preimages_used_at_level_one():
    lam = generate(2, [BASILICA], 1, explicit_preimages=[AngleClass([F(1, 6), F(5, 6)])])
    assert AngleClass([F(1, 6), F(5, 6)]) in lam.class_set()


def test_explicit_preimage_must_map_onto_generator():
    with pytest.raises(LaminationError):
        generate(2, [BASILICA], 1, explicit_preimages=[AngleClass([F(1, 5), F(2, 5)])])


def test_validate_rabbit_depth3():
    rep = validate(generate(2, [RABBIT], 3))
    assert rep.ok
    assert rep.verdict["E1"] == "not applicable at finite truncation"
    assert rep.critical_classes == []


def test_validate_crossing_pair():
    lam = Lamination.from_classes(2, [AngleClass([F(1, 7), F(4, 7)]),
                                      AngleClass([F(2, 7), F(5, 7)])])
    rep = validate(lam)
    assert rep.verdict["E2"] == "fail"
    assert len(rep.unlinked_violations) == 1


def test_fixed_leaf_depth0():
    rep = validate(Lamination.from_classes(2, [BASILICA]))
    assert rep.verdict["D1"] == "pass"
    assert rep.backward_unchecked == [BASILICA]


def test_all_critical():
    lam = Lamination.from_classes(2, [AngleClass([F(1, 4), F(3, 4)])])
    assert all_critical_classes(lam) == [AngleClass([F(1, 4), F(3, 4)])]
    tri = Lamination.from_classes(3, [AngleClass([0, F(1, 3), F(2, 3)])])
    assert len(all_critical_classes(tri)) == 1
    assert all_critical_classes(generate(2, [RABBIT], 3)) == []


def test_truncate_keeps_low_levels():
    lam = generate(2, [BASILICA], 4)
    t = lam.truncate(2)
    assert t.depth == 2
    assert max(t.levels) == 2
    assert set(t.classes) <= set(lam.classes)


def test_deterministic():
    a = generate(2, [RABBIT], 5)
    b = generate(2, [RABBIT], 5)
    assert a.classes == b.classes and a.levels == b.levels and a.parents == b.parents


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 5000))
def test_generated_laminations_are_invariant(seed):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        s = random_lamination(seed)
    if s is None:
        return
    lam = s.lamination
    assert validate(lam).ok
    cs = lam.class_set()
    for c, lv, p in zip(lam.classes, lam.levels, lam.parents):
        img = image_class(lam.degree, c)
        assert len(img) == 1 or img in cs
        if lv > 0:
            assert img == lam.classes[p]
    siblings = {}
    for i, p in enumerate(lam.parents):
        if p is not None:
            siblings.setdefault(p, []).append(lam.classes[i])
    for group in siblings.values():
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                assert not owners_interleave(group[i], group[j]) or lam.mode == "geometric"

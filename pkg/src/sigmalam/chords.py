"""Chords and finite angle sets in the closed disk, handled purely by circular order."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .circle import angle, ccw, format_angle, in_open_arc, sigma


class DegenerateClass(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Leaf:
    """Unordered pair of distinct angles, stored with ``a < b``."""

    a: Fraction
    b: Fraction

    def __init__(self, x, y):
        x, y = angle(x), angle(y)
        if x == y:
            raise DegenerateClass(f"leaf endpoints coincide: {x}")
        if y < x:
            x, y = y, x
        object.__setattr__(self, "a", x)
        object.__setattr__(self, "b", y)

    @property
    def endpoints(self) -> tuple[Fraction, Fraction]:
        return (self.a, self.b)

    def __contains__(self, x) -> bool:
        return x == self.a or x == self.b

    def __str__(self) -> str:
        return f"{format_angle(self.a)}-{format_angle(self.b)}"


@dataclass(frozen=True, order=True)
class AngleClass:
    """Finite set of distinct angles kept in increasing order on [0, 1)."""

    angles: tuple[Fraction, ...]

    def __init__(self, angles: Iterable):
        pts = sorted({angle(x) for x in angles})
        if not pts:
            raise DegenerateClass("empty angle class")
        object.__setattr__(self, "angles", tuple(pts))

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.angles)

    def __len__(self) -> int:
        return len(self.angles)

    def __contains__(self, x) -> bool:
        return x in self.angles

    def __getitem__(self, i: int) -> Fraction:
        return self.angles[i]

    @property
    def least(self) -> Fraction:
        return self.angles[0]

    def arcs(self) -> list[tuple[Fraction, Fraction]]:
        """Complementary open arcs ``(s, t)`` in counterclockwise order."""
        n = len(self.angles)
        if n == 1:
            return [(self.angles[0], self.angles[0])]
        return [(self.angles[i], self.angles[(i + 1) % n]) for i in range(n)]

    def span(self) -> Fraction:
        """One minus the longest complementary arc."""
        if len(self.angles) == 1:
            return Fraction(0)
        return 1 - max(ccw(s, t) for s, t in self.arcs())

    def __str__(self) -> str:
        return "{" + ", ".join(format_angle(a) for a in self.angles) + "}"


def crosses(l1: Leaf, l2: Leaf) -> bool:
    """Open chords meet inside the open disk; a shared endpoint is not a crossing."""
    if l1.a in l2 or l1.b in l2:
        return False
    return (l1.a < l2.a < l1.b) != (l1.a < l2.b < l1.b)


def arc_index(c: AngleClass, x: Fraction) -> int:
    """Index ``i`` of the complementary arc ``(c[i], c[i+1])`` holding ``x``; -1 on ``c``."""
    if x in c:
        return -1
    pts = c.angles
    # bisect on the sorted angles; wrap-around arc is the last one
    lo, hi = 0, len(pts)
    while lo < hi:
        mid = (lo + hi) // 2
        if pts[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return (lo - 1) % len(pts)


def unlinked(c1: AngleClass, c2: AngleClass) -> bool:
    """Disjoint as sets, and ``c2`` inside a single complementary arc of ``c1``."""
    if set(c1.angles) & set(c2.angles):
        return False
    first = arc_index(c1, c2[0])
    return all(arc_index(c1, x) == first for x in c2)


def hull_edges(c: AngleClass) -> list[Leaf]:
    n = len(c)
    if n < 2:
        raise DegenerateClass(f"class {c} has no edges")
    if n == 2:
        return [Leaf(c[0], c[1])]
    return [Leaf(c[i], c[(i + 1) % n]) for i in range(n)]


def image_class(d: int, c: AngleClass) -> AngleClass:
    return AngleClass(sigma(d, x) for x in c)


def is_covering_on_class(d: int, c: AngleClass) -> bool:
    """Each complementary arc of ``c`` maps onto a complementary arc of the image."""
    if len(c) < 2:
        raise DegenerateClass("covering test needs at least two angles")
    img = image_class(d, c)
    if len(img) == 1:
        return False
    for s, t in c.arcs():
        u, v = sigma(d, s), sigma(d, t)
        if u == v:
            return False
        if any(in_open_arc(y, u, v) for y in img):
            return False
    return True


def separates(sep: AngleClass, c1: AngleClass, c2: AngleClass) -> bool:
    """``sep`` is disjoint from both and they lie in distinct complementary arcs of it."""
    s = set(sep.angles)
    if s & set(c1.angles) or s & set(c2.angles):
        return False
    arcs1 = {arc_index(sep, x) for x in c1}
    arcs2 = {arc_index(sep, x) for x in c2}
    return len(arcs1) == 1 and len(arcs2) == 1 and arcs1 != arcs2

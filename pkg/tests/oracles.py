"""Brute-force reference implementations, written without the package's
circular-order helpers so that agreement is meaningful."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations


def owners_interleave(c1, c2) -> bool:
    """Linked or touching: the owner labels around the circle form more than two runs."""
    if set(c1) & set(c2):
        return True
    pts = sorted([(x, 1) for x in c1] + [(x, 2) for x in c2])
    labels = [o for _, o in pts]
    changes = sum(1 for i in range(len(labels)) if labels[i] != labels[i - 1])
    return changes > 2


def closure_classes(classes) -> set[frozenset]:
    """Classes of the equivalence generated by ``classes`` (Warshall, quadratic memory)."""
    pts = sorted({x for c in classes for x in c})
    n = len(pts)
    pos = {x: i for i, x in enumerate(pts)}
    reach = [[i == j for j in range(n)] for i in range(n)]
    for c in classes:
        for x in c:
            for y in c:
                reach[pos[x]][pos[y]] = True
    for k in range(n):
        rk = reach[k]
        for i in range(n):
            if reach[i][k]:
                ri = reach[i]
                for j in range(n):
                    if rk[j]:
                        ri[j] = True
    out = set()
    for i in range(n):
        members = frozenset(pts[j] for j in range(n) if reach[i][j])
        if len(members) >= 2:
            out.add(members)
    return out


def _side(x, a, b) -> int:
    """0 on the chord's endpoints, 1 inside the open arc (a, b), 2 outside."""
    if x in (a, b):
        return 0
    return 1 if a < x < b else 2


def face_basis(vertices, leaves, reference) -> set[Fraction]:
    """Vertices lying, for every leaf, on the closed side holding ``reference``."""
    out = set()
    for v in vertices:
        ok = True
        for a, b in leaves:
            sides = {_side(r, a, b) for r in reference} - {0}
            s = _side(v, a, b)
            if s and sides and s not in sides:
                ok = False
                break
        if ok:
            out.add(v)
    return out


def separated(sep, c1, c2) -> bool:
    if set(sep) & (set(c1) | set(c2)):
        return False
    # walk the circle from sep's least point and record which gap each set is in
    pts = sorted(sep)

    def gap(x):
        return sum(1 for p in pts if p < x) % len(pts)

    g1 = {gap(x) for x in c1}
    g2 = {gap(x) for x in c2}
    return len(g1) == 1 and len(g2) == 1 and g1 != g2


def well_slicing_brute(members) -> bool:
    if len(members) < 2:
        return False
    for c1, c2 in combinations(members, 2):
        if owners_interleave(c1, c2):
            return False
        if not any(separated(s, c1, c2) for s in members if s not in (c1, c2)):
            return False
    return True

"""Depth-truncated invariant laminations: generation by pullback and axiom checks."""

from __future__ import annotations

import math
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .chords import (
    AngleClass,
    Leaf,
    crosses,
    hull_edges,
    image_class,
    is_covering_on_class,
    unlinked,
)
from .circle import _check_degree, ccw, preimages

MODES = ("equivalence", "geometric")
_INT_LIMIT = 1 << 62


class LaminationError(ValueError):
    pass


class NotAGeneratingFamily(LaminationError):
    pass


class PrecriticalGenerator(LaminationError):
    pass


class PullbackWarning(UserWarning):
    pass


@dataclass
class Lamination:
    """A degree, a list of classes, and for each class its level and parent.

    Level 0 holds generators and their forward images; a class at level
    ``k > 0`` is a pullback of its parent at level ``k - 1``.
    """

    degree: int
    classes: list[AngleClass]
    levels: list[int]
    parents: list[Optional[int]]
    tags: list[str]
    depth: int
    mode: str = "equivalence"
    ambiguous: list[int] = field(default_factory=list)
    dropped: list[int] = field(default_factory=list)

    @classmethod
    def from_classes(cls, d: int, classes: Iterable, depth: int = 0,
                     mode: str = "equivalence") -> "Lamination":
        cs = [c if isinstance(c, AngleClass) else AngleClass(c) for c in classes]
        n = len(cs)
        return cls(d, cs, [0] * n, [None] * n, ["generator"] * n, depth, mode)

    def __len__(self) -> int:
        return len(self.classes)

    def class_set(self) -> frozenset[AngleClass]:
        return frozenset(self.classes)

    def truncate(self, level: int) -> "Lamination":
        """Sub-lamination of the classes at level ``<= level``."""
        keep = [i for i, lv in enumerate(self.levels) if lv <= level]
        remap = {old: new for new, old in enumerate(keep)}
        return Lamination(
            self.degree,
            [self.classes[i] for i in keep],
            [self.levels[i] for i in keep],
            [remap.get(self.parents[i]) if self.parents[i] is not None else None
             for i in keep],
            [self.tags[i] for i in keep],
            min(level, self.depth),
            self.mode,
        )

    def leaves(self) -> dict[Leaf, list[int]]:
        """Every hull edge with the indices of the classes it bounds."""
        out: dict[Leaf, list[int]] = {}
        for i, c in enumerate(self.classes):
            if len(c) < 2:
                continue
            for e in hull_edges(c):
                out.setdefault(e, []).append(i)
        return out

    def vertices(self) -> list[Fraction]:
        return sorted({x for c in self.classes for x in c})

    def classes_at(self, x: Fraction) -> list[int]:
        return [i for i, c in enumerate(self.classes) if x in c]

    def level_of_angle(self) -> dict[Fraction, int]:
        out: dict[Fraction, int] = {}
        for c, lv in zip(self.classes, self.levels):
            for x in c:
                out[x] = min(lv, out.get(x, lv))
        return out


# ---------------------------------------------------------------------------
# integer-encoded chord index used during generation

class _ChordIndex:
    def __init__(self, denominator: Optional[int]):
        self.q = denominator if denominator and denominator < _INT_LIMIT else None
        self.lo = np.empty(64, dtype=np.int64)
        self.hi = np.empty(64, dtype=np.int64)
        self.n = 0
        self.leaves: list[Leaf] = []

    def _enc(self, x: Fraction) -> int:
        v = x * self.q
        if v.denominator != 1:
            raise ValueError("angle outside the common denominator")
        return int(v)

    def add(self, e: Leaf) -> None:
        self.leaves.append(e)
        if self.q is None:
            return
        if self.n == self.lo.size:
            self.lo = np.resize(self.lo, 2 * self.n)
            self.hi = np.resize(self.hi, 2 * self.n)
        self.lo[self.n] = self._enc(e.a)
        self.hi[self.n] = self._enc(e.b)
        self.n += 1

    def crosses(self, e: Leaf) -> bool:
        if self.q is None:
            return any(crosses(e, f) for f in self.leaves)
        try:
            x, y = self._enc(e.a), self._enc(e.b)
        except ValueError:
            return any(crosses(e, f) for f in self.leaves)
        return bool(_kernels.crosses_any(self.lo[: self.n], self.hi[: self.n], x, y))


def _common_denominator(classes: Iterable[AngleClass], d: int, depth: int) -> int:
    q = 1
    for c in classes:
        for x in c:
            q = math.lcm(q, x.denominator)
    return q * d**depth


# ---------------------------------------------------------------------------
# generation

def forward_closure(d: int, generators: Sequence[AngleClass], mode: str = "equivalence",
                    allow_critical: bool = False) -> tuple[list[AngleClass], list[str]]:
    """Generators plus all distinct forward images, with provenance tags."""
    out: list[AngleClass] = []
    tags: list[str] = []
    seen: set[AngleClass] = set()
    queue = [(g, "generator") for g in generators]
    while queue:
        c, tag = queue.pop(0)
        if c in seen:
            continue
        for other in out:
            if not _compatible(c, other, mode):
                raise NotAGeneratingFamily(f"{c} is linked with {other}")
        seen.add(c)
        out.append(c)
        tags.append(tag)
        img = image_class(d, c)
        if len(img) < len(c) and not allow_critical:
            raise PrecriticalGenerator(f"{c} maps non-injectively onto {img}")
        if len(img) >= 2 and img not in seen:
            queue.append((img, "forward-image"))
    return out, tags


def _compatible(c1: AngleClass, c2: AngleClass, mode: str) -> bool:
    if c1 == c2:
        return True
    if mode == "equivalence":
        return unlinked(c1, c2)
    if len(c1) >= 2 and len(c2) >= 2:
        e1, e2 = hull_edges(c1), hull_edges(c2)
        if any(crosses(a, b) for a in e1 for b in e2):
            return False
    shared = set(c1) & set(c2)
    # a class whose points all sit on another class would be a diagonal of it
    return not (shared and (shared == set(c1) or shared == set(c2)))


def _pieces(d: int, c: AngleClass, available: set[Fraction]) -> list[AngleClass]:
    """All orientation-preserving lifts of ``c`` drawn from ``available``."""
    lifts = [[x for x in preimages(d, y) if x in available] for y in c]
    out: list[AngleClass] = []

    def extend(chosen: list[Fraction]) -> None:
        j = len(chosen)
        if j == len(lifts):
            out.append(AngleClass(chosen))
            return
        last = ccw(chosen[0], chosen[-1]) if j > 1 else Fraction(0)
        for x in lifts[j]:
            if j == 0:
                extend([x])
            elif ccw(chosen[0], x) > last:
                extend(chosen + [x])

    extend([])
    return out


def _partitions(candidates: list[AngleClass], needed: int, first_lifts: list[Fraction]):
    """Choose ``needed`` pairwise-unlinked, pairwise-disjoint candidates covering
    every point of ``first_lifts`` (the lifts of the class's least angle)."""
    by_anchor: dict[Fraction, list[AngleClass]] = defaultdict(list)
    for p in candidates:
        for x in p:
            if x in first_lifts:
                by_anchor[x].append(p)
    anchors = sorted(first_lifts)
    results: list[list[AngleClass]] = []

    def rec(i: int, chosen: list[AngleClass], used: set[Fraction]) -> None:
        if i == len(anchors):
            if len(chosen) == needed:
                results.append(list(chosen))
            return
        for p in by_anchor[anchors[i]]:
            if used & set(p):
                continue
            if any(not unlinked(p, q) for q in chosen):
                continue
            chosen.append(p)
            rec(i + 1, chosen, used | set(p))
            chosen.pop()

    rec(0, [], set())
    return results


def _pullback(lam: Lamination, idx: _ChordIndex, owner: dict[Fraction, set[int]],
              images: dict[AngleClass, list[int]], ci: int):
    """Choose the new lifts of class ``ci``; returns ``(pieces, n_options)``."""
    d = lam.degree
    c = lam.classes[ci]
    fixed = [j for j in images.get(c, []) if len(lam.classes[j]) == len(c)]
    covered = {x for j in fixed for x in lam.classes[j]}
    if len(covered) < sum(len(lam.classes[j]) for j in fixed):
        # forced lifts overlap, so no disjoint sibling family exists
        return None, 0
    need = d - len(fixed)
    if need <= 0:
        return [], 1
    fibre = {x for y in c for x in preimages(d, y)} - covered
    available = set(fibre)
    if lam.mode == "equivalence":
        clash = [x for x in fibre if owner.get(x)]
        if clash:
            return None, 0
    cands = []
    for p in _pieces(d, c, available):
        if any(idx.crosses(e) for e in (hull_edges(p) if len(p) > 1 else [])):
            continue
        if lam.mode == "geometric":
            touching = {j for x in p for j in owner.get(x, ())}
            if any(not _compatible(p, lam.classes[j], "geometric") for j in touching):
                continue
        cands.append(p)
    first = [x for x in preimages(d, c[0]) if x in available]
    parts = _partitions(cands, need, first)
    if not parts:
        return None, 0
    best = min(parts, key=lambda ps: (sum(p.span() for p in ps),
                                      sorted(p.angles for p in ps)))
    return sorted(best), len(parts)


def generate(d: int, generators: Sequence, depth: int,
             explicit_preimages: Optional[Sequence] = None,
             mode: str = "equivalence", allow_critical: bool = False) -> Lamination:
    """Forward-close the generators, then pull back ``depth`` times.

    The lifts of a class are forced wherever existing classes already map onto
    it; the remaining lifts are the pairwise-unlinked, orientation-preserving
    family crossing nothing present, ties broken by least total span (which
    selects the rotational siblings whenever those are admissible).
    """
    _check_degree(d)
    if mode not in MODES:
        raise LaminationError(f"unknown mode {mode!r}")
    if depth < 0:
        raise LaminationError("depth must be non-negative")
    gens = [g if isinstance(g, AngleClass) else AngleClass(g) for g in generators]
    for g in gens:
        if len(g) < 2:
            raise LaminationError(f"generator {g} has fewer than two angles")
    classes, tags = forward_closure(d, gens, mode, allow_critical)
    n0 = len(classes)
    lam = Lamination(d, list(classes), [0] * n0, [None] * n0, list(tags), depth, mode)
    extra = [p if isinstance(p, AngleClass) else AngleClass(p)
             for p in (explicit_preimages or [])]

    idx = _ChordIndex(_common_denominator(classes + extra, d, depth))
    owner: dict[Fraction, set[int]] = defaultdict(set)
    images: dict[AngleClass, list[int]] = defaultdict(list)

    def add(c: AngleClass, level: int, parent: Optional[int], tag: str) -> None:
        i = len(lam.classes)
        if level > 0:
            lam.classes.append(c)
            lam.levels.append(level)
            lam.parents.append(parent)
            lam.tags.append(tag)
        else:
            i = lam.classes.index(c)
        for e in hull_edges(c):
            idx.add(e)
        for x in c:
            owner[x].add(i)
        images[image_class(d, c)].append(i)

    for c in classes:
        add(c, 0, None, "")

    if extra and depth >= 1:
        for p in extra:
            img = image_class(d, p)
            if img not in lam.class_set() or lam.levels[lam.classes.index(img)] != 0:
                raise LaminationError(f"explicit preimage {p} does not map onto a level-0 class")
            for j, other in enumerate(lam.classes):
                if not _compatible(p, other, mode):
                    raise LaminationError(f"explicit preimage {p} is linked with {other}")
            if p not in lam.class_set():
                add(p, 1, lam.classes.index(img), "pullback(1)")

    for level in range(1, depth + 1):
        parents = [i for i, lv in enumerate(lam.levels) if lv == level - 1]
        for ci in parents:
            pieces, options = _pullback(lam, idx, owner, images, ci)
            if pieces is None:
                warnings.warn(f"no admissible pullback of {lam.classes[ci]} at level {level}",
                              PullbackWarning, stacklevel=2)
                lam.dropped.append(ci)
                continue
            if options > 1:
                lam.ambiguous.append(ci)
            for p in pieces:
                add(p, level, ci, f"pullback({level})")
    return lam


# ---------------------------------------------------------------------------
# validation

@dataclass
class InvarianceReport:
    unlinked_violations: list[tuple[AngleClass, AngleClass]]
    forward_violations: list[tuple[AngleClass, AngleClass, Optional[AngleClass]]]
    backward_violations: list[AngleClass]
    backward_unchecked: list[AngleClass]
    covering_violations: list[AngleClass]
    critical_classes: list[AngleClass]
    wandering_violations: list[AngleClass]
    verdict: dict[str, str]

    @property
    def ok(self) -> bool:
        return all(v != "fail" for v in self.verdict.values())


def _nearest(img: AngleClass, lam: Lamination) -> Optional[AngleClass]:
    best, score = None, 0
    for c in lam.classes:
        s = len(set(c) & set(img))
        if s > score:
            best, score = c, s
    return best


def linked_pairs(lam: Lamination) -> list[tuple[int, int]]:
    """Index pairs of classes violating unlinkedness for the lamination's mode."""
    edges: list[tuple[Leaf, int]] = []
    for i, c in enumerate(lam.classes):
        if len(c) >= 2:
            edges.extend((e, i) for e in hull_edges(c))
    bad: set[tuple[int, int]] = set()
    q = _common_denominator(lam.classes, 1, 0)
    if edges and q < _INT_LIMIT:
        lo = np.array([int(e.a * q) for e, _ in edges], dtype=np.int64)
        hi = np.array([int(e.b * q) for e, _ in edges], dtype=np.int64)
        for a, b in _kernels.crossing_pairs(lo, hi):
            i, j = edges[a][1], edges[b][1]
            if i != j:
                bad.add((min(i, j), max(i, j)))
    else:
        for a in range(len(edges)):
            for b in range(a + 1, len(edges)):
                if edges[a][1] != edges[b][1] and crosses(edges[a][0], edges[b][0]):
                    i, j = edges[a][1], edges[b][1]
                    bad.add((min(i, j), max(i, j)))
    at: dict[Fraction, list[int]] = defaultdict(list)
    for i, c in enumerate(lam.classes):
        for x in c:
            at[x].append(i)
    for x, owners in at.items():
        for a in range(len(owners)):
            for b in range(a + 1, len(owners)):
                i, j = owners[a], owners[b]
                if lam.mode == "equivalence" or not _compatible(
                        lam.classes[i], lam.classes[j], "geometric"):
                    bad.add((min(i, j), max(i, j)))
    return sorted(bad)


def wandering_check(lam: Lamination, horizon: int = 64) -> list[AngleClass]:
    """Classes whose forward orbit is wandering within ``horizon`` yet exceed the
    size bound (``2**d``, or ``d`` when no image loses points)."""
    d = lam.degree
    bad = []
    for c in lam.classes:
        orb = [c]
        wandering = True
        for _ in range(horizon):
            nxt = image_class(d, orb[-1])
            if nxt in orb or len(nxt) < 2:
                wandering = False
                break
            orb.append(nxt)
        if not wandering:
            continue
        if any(not unlinked(orb[i], orb[j]) for i in range(len(orb))
               for j in range(i + 1, len(orb))):
            continue
        noncrit = all(len(o) == len(c) for o in orb)
        if len(c) > 2**d or (noncrit and len(c) > d):
            bad.append(c)
    return bad


def validate(lam: Lamination) -> InvarianceReport:
    d = lam.degree
    cs = lam.class_set()
    unl = [(lam.classes[i], lam.classes[j]) for i, j in linked_pairs(lam)]

    fwd = []
    crit = []
    cov = []
    by_image: dict[AngleClass, list[AngleClass]] = defaultdict(list)
    for c in lam.classes:
        img = image_class(d, c)
        by_image[img].append(c)
        if len(img) < len(c):
            crit.append(c)
        if len(img) >= 2 and img not in cs:
            fwd.append((c, img, _nearest(img, lam)))
        if len(c) >= 3 and len(img) > 1 and not is_covering_on_class(d, c):
            cov.append(c)

    back, unchecked = [], []
    for c, lv in zip(lam.classes, lam.levels):
        if lv >= lam.depth:
            unchecked.append(c)
            continue
        fibre = {x for y in c for x in preimages(d, y)}
        lifts = by_image.get(c, [])
        pts = [x for p in lifts for x in p]
        if set(pts) != fibre or len(pts) != len(set(pts)):
            back.append(c)

    wand = wandering_check(lam)
    verdict = {
        "E1": "not applicable at finite truncation",
        "E2": "fail" if unl else "pass",
        "D1": "fail" if fwd else "pass",
        "D2": "fail" if back else "pass",
        "D3": "fail" if cov else "pass",
        "wandering-bound": "fail" if wand else "pass",
    }
    return InvarianceReport(unl, fwd, back, unchecked, cov, crit, wand, verdict)


def all_critical_classes(lam: Lamination) -> list[AngleClass]:
    return [c for c in lam.classes if len(image_class(lam.degree, c)) == 1]

"""Finest invariant equivalence respecting a generated lamination.

At a finite truncation every chain of leaves meets the circle in finitely
many points, so two angles are identified exactly when a chain of leaves
joins them. The classes are therefore the connected components of the
graph whose edges are the leaves, and a super gap is such a component
together with the finite faces it encloses.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .chords import AngleClass, Leaf, image_class, unlinked
from .circle import ccw, format_angle
from .gaps import FaceSet, InternalInconsistency, InvalidLamination, classify
from .lamination import Lamination, linked_pairs, validate

SUPER_GAP_KINDS = ("Wandering", "Periodic", "Degenerate")


@dataclass(frozen=True)
class SuperGap:
    member_faces: frozenset[int]
    basis: AngleClass
    kind: str
    period: Optional[int] = None
    preperiod: Optional[int] = None


@dataclass(frozen=True)
class MergeStep:
    """Input classes ``first`` and ``second`` joined at the shared angle ``point``."""

    point: Fraction
    first: int
    second: int
    witness: str
    depth: int

    def __str__(self) -> str:
        return (f"at {format_angle(self.point)} classes {self.first}+{self.second} "
                f"witness={self.witness} depth={self.depth}")


@dataclass
class FinestQuotient:
    degree: int
    depth: int
    classes: list[AngleClass]
    certificate: dict[AngleClass, list[MergeStep]] = field(default_factory=dict)
    closing_leaves: list[Leaf] = field(default_factory=list)

    def as_lamination(self, mode: str = "equivalence") -> Lamination:
        return Lamination.from_classes(self.degree, self.classes, self.depth, mode)

    def class_of(self, x: Fraction) -> Optional[AngleClass]:
        for c in self.classes:
            if x in c:
                return c
        return None

    def certificate_text(self) -> str:
        lines = [f"depth {self.depth}", f"closing-leaves {len(self.closing_leaves)}"]
        for c in self.classes:
            steps = self.certificate.get(c, [])
            lines.append(f"class {' '.join(format_angle(x) for x in c)} merges {len(steps)}")
            lines.extend(f"  merge {s}" for s in steps)
        return "\n".join(lines) + "\n"


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        # lower index as root keeps results independent of visiting order
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True


def _witness(lam: Lamination, i: int, j: int) -> str:
    for k in (i, j):
        if lam.levels[k] == 0 and len(lam.classes[k]) >= 3:
            return f"generator-gap:{k}"
    for k in (i, j):
        if lam.levels[k] == 0:
            return f"generator-leaf:{k}"
    return "chain"


def _closing_leaves(fs: FaceSet, fatou: set[int]) -> list[Leaf]:
    """Leaves joining the two ends of each maximal run of consecutive boundary
    leaves of a Fatou face, for runs of two or more leaves."""
    out = []
    for fid in sorted(fatou):
        f = fs[fid]
        run: list[Leaf] = []
        runs: list[list[Leaf]] = []
        for piece in f.boundary:
            if isinstance(piece, Leaf):
                run.append(piece)
            else:
                if run:
                    runs.append(run)
                run = []
        if run:
            # the boundary is cyclic, so a trailing run continues the first one
            if runs and isinstance(f.boundary[0], Leaf):
                runs[0] = run + runs[0]
            else:
                runs.append(run)
        for r in runs:
            if len(r) < 2:
                continue
            ends = [x for e in r for x in e.endpoints]
            once = sorted(x for x in set(ends) if ends.count(x) == 1)
            if len(once) == 2:
                out.append(Leaf(once[0], once[1]))
    return out


def _kind(d: int, basis: AngleClass, members: frozenset[int], horizon: int):
    if len(basis) <= 2 and not members:
        return "Degenerate", None, None
    seen = {basis: 0}
    orb = [basis]
    for step in range(1, horizon + 1):
        nxt = image_class(d, orb[-1])
        if len(nxt) == 1:
            return "Degenerate", None, step
        if nxt in seen:
            j = seen[nxt]
            return "Periodic", step - j, j
        seen[nxt] = step
        orb.append(nxt)
    return "Wandering", None, None


def _components(lam: Lamination):
    """Union-find over class indices; classes sharing an angle are joined."""
    uf = _UnionFind(len(lam.classes))
    at: dict[Fraction, list[int]] = defaultdict(list)
    for i, c in enumerate(lam.classes):
        for x in c:
            at[x].append(i)
    steps: list[MergeStep] = []
    for x in sorted(at):
        owners = at[x]
        for j in owners[1:]:
            if uf.union(owners[0], j):
                steps.append(MergeStep(x, owners[0], j, _witness(lam, owners[0], j), lam.depth))
    return uf, steps


def _require_valid(lam: Lamination) -> None:
    """Unlinked, covering, and each image inside one class. The last is weaker
    than exact forward invariance so that quotients are accepted as input."""
    rep = validate(lam)
    bad = [k for k in ("E2", "D3") if rep.verdict[k] == "fail"]
    cs = lam.class_set()
    home = {x: i for i, c in enumerate(lam.classes) for x in c}
    for c in lam.classes:
        img = image_class(lam.degree, c)
        if len(img) < 2 or img in cs:
            continue
        if img[0] not in home or len({home.get(x) for x in img}) != 1:
            bad.append("D1")
            break
    if bad:
        raise InvalidLamination(f"lamination fails {', '.join(bad)}")


def super_gaps(lam: Lamination, horizon: int = 64) -> list[SuperGap]:
    _require_valid(lam)
    return _super_gaps(lam, horizon)[0]


def _super_gaps(lam: Lamination, horizon: int):
    d = lam.degree
    fs = FaceSet(lam)
    uf, steps = _components(lam)
    fatou = set()
    root_of = {x: uf.find(i) for i, c in enumerate(lam.classes) for x in c}
    members: dict[int, set[int]] = defaultdict(set)
    for f in fs:
        if not f.basis:
            continue
        if f.is_finite:
            members[root_of[f.basis[0]]].add(f.id)
        elif classify(lam, f, horizon, fs).kind.startswith("Fatou"):
            fatou.add(f.id)
    closing = _closing_leaves(fs, fatou)
    for e in closing:
        if root_of[e.a] != root_of[e.b]:
            raise InternalInconsistency(f"closing leaf {e} joined two components")
    comps: dict[int, list[Fraction]] = defaultdict(list)
    for x, r in root_of.items():
        comps[r].append(x)
    out = []
    for root in sorted(comps, key=lambda r: min(comps[r])):
        basis = AngleClass(comps[root])
        mem = frozenset(members.get(root, ()))
        kind, period, pre = _kind(d, basis, mem, horizon)
        if kind == "Wandering" and len(basis) > 2**d:
            raise InternalInconsistency(
                f"wandering super gap {basis} has {len(basis)} > 2^{d} angles")
        out.append(SuperGap(mem, basis, kind, period, pre))
    return out, uf, steps, closing


def finest_quotient(lam: Lamination, horizon: int = 64) -> FinestQuotient:
    _require_valid(lam)
    sgs, uf, steps, closing = _super_gaps(lam, horizon)
    classes = sorted(s.basis for s in sgs if len(s.basis) >= 2)
    home = {x: c for c in classes for x in c}
    cert: dict[AngleClass, list[MergeStep]] = {c: [] for c in classes}
    for step in steps:
        cert[home[step.point]].append(step)
    q = FinestQuotient(lam.degree, lam.depth, classes, cert, closing)
    _check_quotient(lam, q)
    return q


def _check_quotient(lam: Lamination, q: FinestQuotient) -> None:
    d = lam.degree
    qlam = q.as_lamination()
    bad = linked_pairs(qlam)
    if bad:
        i, j = bad[0]
        raise InternalInconsistency(
            f"quotient classes {q.classes[i]} and {q.classes[j]} are linked; "
            f"merges: {[str(s) for s in q.certificate[q.classes[i]]]}")
    home = {x: c for c in q.classes for x in c}
    for c in lam.classes:
        if len(c) >= 2 and len({home[x] for x in c}) != 1:
            raise InternalInconsistency(f"input class {c} split across quotient classes")
    for c in q.classes:
        img = image_class(d, c)
        if len(img) == 1:
            continue
        if len({home.get(x) for x in img}) != 1 or img[0] not in home:
            raise InternalInconsistency(
                f"image of {c} is not inside one class; "
                f"merges: {[str(s) for s in q.certificate[c]]}")


def no_siegel_check(q: FinestQuotient, depth_lam: Lamination, horizon: int = 64
                    ) -> list[int]:
    """Ids of faces of the quotient classified as Siegel; always empty for a
    quotient of a lamination generated by disjoint non-critical classes.

    Classification needs depth information, so the classes of ``depth_lam``
    are regrouped into quotient classes keeping their levels.
    """
    lam = quotient_lamination(depth_lam, q)
    fs = FaceSet(lam)
    return [f.id for f in fs if f.arcs and classify(lam, f, horizon, fs).kind == "FatouSiegel"]


def quotient_lamination(lam: Lamination, q: FinestQuotient) -> Lamination:
    """Quotient classes with levels, each at the deepest level of its members."""
    home = {x: i for i, c in enumerate(q.classes) for x in c}
    level: dict[int, int] = {}
    for c, lv in zip(lam.classes, lam.levels):
        i = home.get(c[0])
        if i is not None:
            level[i] = max(lv, level.get(i, 0))
    n = len(q.classes)
    return Lamination(lam.degree, list(q.classes), [level.get(i, 0) for i in range(n)],
                      [None] * n, ["quotient"] * n, lam.depth, "equivalence")


@dataclass
class ValenceEntry:
    point: Fraction
    leaves: tuple[Leaf, ...]
    middle: tuple[Leaf, ...]
    provenance: tuple[str, ...]
    explained: bool


@dataclass
class ValenceReport:
    entries: list[ValenceEntry]
    hard_violations: list[Fraction]
    max_valence: int

    @property
    def failed(self) -> bool:
        return bool(self.hard_violations)


def endpoint_valence_check(lam: Lamination) -> ValenceReport:
    """Endpoints met by three or more leaves, with the provenance of the
    middle ones; five or more leaves at one point is a hard violation."""
    owners = lam.leaves()
    at: dict[Fraction, list[Leaf]] = defaultdict(list)
    for e in owners:
        at[e.a].append(e)
        at[e.b].append(e)
    gap_edges = {e for e, idx in owners.items() if any(len(lam.classes[i]) >= 3 for i in idx)}
    entries, hard = [], []
    top = 0
    for x in sorted(at):
        es = at[x]
        top = max(top, len(es))
        if len(es) < 3:
            continue
        es = sorted(es, key=lambda e: ccw(x, e.b if e.a == x else e.a))
        middle = tuple(es[1:-1])
        prov = []
        ok = True
        for m in middle:
            idx = owners[m]
            level = min(lam.levels[i] for i in idx)
            if m in gap_edges:
                prov.append(f"{m}:gap-edge@{level}")
            elif level == 0:
                prov.append(f"{m}:generator")
            else:
                prov.append(f"{m}:leaf@{level}")
                ok = False
        if len(es) == 4 and not all(m in gap_edges for m in middle):
            ok = False
        if len(es) >= 5:
            hard.append(x)
        entries.append(ValenceEntry(x, tuple(es), middle, tuple(prov), ok))
    return ValenceReport(entries, hard, top)


def is_pairwise_unlinked(classes: list[AngleClass]) -> bool:
    return all(unlinked(classes[i], classes[j]) for i in range(len(classes))
               for j in range(i + 1, len(classes)))

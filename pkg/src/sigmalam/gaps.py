"""Faces of the chord arrangement, their images under the angle map, and their
dynamical classification."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .chords import AngleClass, Leaf, image_class, unlinked
from .circle import ccw, sigma, sigma_n
from .lamination import Lamination, linked_pairs


class InvalidLamination(ValueError):
    pass


class UnresolvableAtDepth(LookupError):
    pass


class NotPeriodic(ValueError):
    pass


class NotARotation(ValueError):
    pass


class InternalInconsistency(AssertionError):
    pass


KINDS = ("FinitePolygon", "WanderingPolygon", "AllCritical", "FatouParattracting",
         "FatouSiegel", "Undetermined")


@dataclass(frozen=True)
class Arc:
    start: Fraction
    end: Fraction

    def length(self) -> Fraction:
        return ccw(self.start, self.end) or Fraction(1)

    def midpoint(self) -> Fraction:
        return (self.start + self.length() / 2) % 1


@dataclass(frozen=True)
class GapFace:
    """Closure of a complementary region of the chords.

    ``boundary`` lists leaves and open arcs counterclockwise, starting at the
    least vertex. The whole-disk face of an empty lamination has no boundary.
    """

    id: int
    boundary: tuple[Union[Leaf, Arc], ...]
    basis: tuple[Fraction, ...]

    @property
    def leaves(self) -> tuple[Leaf, ...]:
        return tuple(x for x in self.boundary if isinstance(x, Leaf))

    @property
    def arcs(self) -> tuple[Arc, ...]:
        return tuple(x for x in self.boundary if isinstance(x, Arc))

    @property
    def is_finite(self) -> bool:
        """No circle arc on the boundary: a polygon bounded by leaves only."""
        return bool(self.basis) and not self.arcs

    def vertex_basis(self) -> AngleClass:
        return AngleClass(self.basis)

    def key(self) -> tuple:
        return (self.basis, tuple((a.start, a.end) for a in self.arcs))


@dataclass
class GapClassification:
    kind: str
    face_id: int
    period: Optional[int] = None
    preperiod: Optional[int] = None
    degree: Optional[int] = None
    rotation_number: Optional[tuple[Fraction, Fraction]] = None
    chain_bound: Optional[int] = None
    evidence_depth: Optional[int] = None
    basis_growth: tuple[int, ...] = ()


# ---------------------------------------------------------------------------
# face enumeration

class FaceSet:
    """All faces of a lamination plus point-location lookups."""

    def __init__(self, lam: Lamination):
        if linked_pairs(lam):
            raise InvalidLamination("classes are linked; faces are undefined")
        self.lam = lam
        self.leaf_set = set(lam.leaves())
        self.vertices = lam.vertices()
        self.faces = _trace_faces(self.vertices, self.leaf_set)
        self._by_vertex: dict[Fraction, list[int]] = {}
        self._by_arc: dict[Fraction, int] = {}
        self._by_key = {f.key(): f.id for f in self.faces}
        self._truncated: dict[int, FaceSet] = {}
        self._levels: Optional[dict[Fraction, int]] = None
        for f in self.faces:
            for x in f.basis:
                self._by_vertex.setdefault(x, []).append(f.id)
            for a in f.arcs:
                self._by_arc[a.start] = f.id

    def __iter__(self):
        return iter(self.faces)

    def __len__(self) -> int:
        return len(self.faces)

    def __getitem__(self, i: int) -> GapFace:
        return self.faces[i]

    def truncated(self, level: int) -> "FaceSet":
        """Faces of the sub-lamination up to ``level``, cached."""
        if level not in self._truncated:
            self._truncated[level] = FaceSet(self.lam.truncate(level))
        return self._truncated[level]

    def angle_levels(self) -> dict[Fraction, int]:
        if self._levels is None:
            self._levels = self.lam.level_of_angle()
        return self._levels

    def faces_at(self, x: Fraction) -> set[int]:
        """Faces whose closure contains the circle point ``x``."""
        if not self.vertices:
            return {0}
        if x in self._by_vertex:
            return set(self._by_vertex[x])
        i = bisect.bisect_left(self.vertices, x) - 1
        return {self._by_arc[self.vertices[i % len(self.vertices)]]}

    def faces_containing(self, pts) -> set[int]:
        out: Optional[set[int]] = None
        for x in pts:
            s = self.faces_at(x)
            out = s if out is None else out & s
            if not out:
                return set()
        return out if out is not None else set(range(len(self.faces)))

    def find(self, f: GapFace) -> Optional[GapFace]:
        i = self._by_key.get(f.key())
        return None if i is None else self.faces[i]


def _trace_faces(vertices: list[Fraction], leaves: set[Leaf]) -> list[GapFace]:
    if not vertices:
        return [GapFace(0, (), ())]
    n = len(vertices)
    succ = {vertices[i]: vertices[(i + 1) % n] for i in range(n)}
    pred = {vertices[i]: vertices[i - 1] for i in range(n)}
    # rotation system: at x, neighbours sorted by ccw distance; an arc to the
    # successor precedes a leaf to the same point, the arc from the
    # predecessor comes last
    nbrs: dict[Fraction, list[tuple]] = {x: [] for x in vertices}
    for x in vertices:
        nbrs[x].append(((ccw(x, succ[x]) or Fraction(1), 0), succ[x], "arc"))
        nbrs[x].append(((ccw(x, pred[x]) or Fraction(1), 2), pred[x], "back"))
    for e in leaves:
        nbrs[e.a].append(((ccw(e.a, e.b), 1), e.b, "leaf"))
        nbrs[e.b].append(((ccw(e.b, e.a), 1), e.a, "leaf"))
    for x in vertices:
        nbrs[x].sort(key=lambda t: t[0])
    keys = {x: [t[0] for t in nbrs[x]] for x in vertices}

    darts = [(x, succ[x], "arc") for x in vertices]
    darts += [(e.a, e.b, "leaf") for e in leaves] + [(e.b, e.a, "leaf") for e in leaves]
    seen: set[tuple] = set()
    raw = []
    for start in darts:
        if start in seen:
            continue
        cycle = []
        dart = start
        while dart not in seen:
            seen.add(dart)
            cycle.append(dart)
            u, v, kind = dart
            kin = (ccw(v, u) or Fraction(1), 2 if kind == "arc" else 1)
            j = bisect.bisect_left(keys[v], kin) - 1
            _, w, wk = nbrs[v][j]
            dart = (v, w, "arc" if wk == "arc" else "leaf")
        raw.append(cycle)

    faces = []
    for cycle in raw:
        k = min(range(len(cycle)), key=lambda i: cycle[i][0])
        cycle = cycle[k:] + cycle[:k]
        items = tuple(Arc(u, v) if kind == "arc" else Leaf(u, v) for u, v, kind in cycle)
        faces.append((tuple(sorted({u for u, _, _ in cycle})), items))
    faces.sort(key=lambda t: (t[0], [(a.start, a.end) if isinstance(a, Arc) else (a.a, a.b)
                                     for a in t[1]]))
    return [GapFace(i, items, basis) for i, (basis, items) in enumerate(faces)]


def faces(lam: Lamination) -> list[GapFace]:
    return FaceSet(lam).faces


# ---------------------------------------------------------------------------
# dynamics on faces

def _as_faceset(lam: Lamination, fs: Optional[FaceSet]) -> FaceSet:
    return fs if fs is not None and fs.lam is lam else FaceSet(lam)


def face_image(lam: Lamination, f: GapFace, fs: Optional[FaceSet] = None
               ) -> Union[GapFace, Leaf, Fraction]:
    """Face, leaf or point onto which ``f`` maps.

    The image is located from the images of the vertex basis; when those only
    span a leaf, images of short boundary arcs decide the side.
    """
    fs = _as_faceset(lam, fs)
    d = lam.degree
    if not f.basis:
        return fs[0]
    img = sorted({sigma(d, x) for x in f.basis})
    if len(img) == 1:
        return img[0]
    cand = fs.faces_containing(img)
    if len(img) == 2:
        leaf = Leaf(img[0], img[1])
        if not f.arcs and leaf in fs.leaf_set:
            return leaf
        if len(cand) > 1:
            votes = dict.fromkeys(cand, 0)
            for a in f.arcs:
                if a.length() < Fraction(1, d):
                    for i in fs.faces_at(sigma(d, a.midpoint())) & cand:
                        votes[i] += 1
            best = max(votes.values())
            top = [i for i, v in votes.items() if v == best]
            if best == 0 or len(top) > 1:
                raise UnresolvableAtDepth(f"image side of face {f.id} undetermined")
            cand = set(top)
    if len(cand) != 1:
        raise UnresolvableAtDepth(
            f"image of face {f.id} meets {len(cand)} faces at depth {lam.depth}")
    return fs[cand.pop()]


def _image_n(lam: Lamination, f: GapFace, m: int, fs: FaceSet):
    g = f
    for _ in range(m):
        if not isinstance(g, GapFace):
            return g
        g = face_image(lam, g, fs)
    return g


def _slot(basis: tuple[Fraction, ...], x: Fraction) -> int:
    """Position of ``x`` on the collapsed boundary: ``2i`` at ``basis[i]``,
    ``2i + 1`` strictly between ``basis[i]`` and its successor."""
    i = bisect.bisect_left(basis, x)
    if i < len(basis) and basis[i] == x:
        return 2 * i
    return (2 * (i - 1) + 1) % (2 * len(basis))


def _winding(lam: Lamination, f: GapFace, m: int) -> tuple[int, list[int]]:
    B = f.basis
    n2 = 2 * len(B)
    ys = [_slot(B, sigma_n(lam.degree, b, m)) for b in B]
    adv = [(ys[(i + 1) % len(B)] - ys[i]) % n2 for i in range(len(B))]
    total = sum(adv)
    return total // n2, ys


def _preimage_count(lam: Lamination, f: GapFace, m: int,
                    fs: Optional[FaceSet] = None) -> Optional[int]:
    lv = fs.angle_levels() if fs is not None else lam.level_of_angle()
    ok = [x for x in f.basis if lv.get(x, lam.depth) <= lam.depth - m]
    if not ok:
        return None
    v = min(ok, key=lambda x: (lv[x], x))
    return sum(1 for x in f.basis if sigma_n(lam.degree, x, m) == v)


def boundary_degree(lam: Lamination, f: GapFace, m: int,
                    fs: Optional[FaceSet] = None) -> int:
    """Degree of the m-th iterate on the collapsed boundary of a periodic face.

    Counted twice: as the winding of the image sequence around the collapsed
    circle, and as the number of m-th preimages of a shallow basis vertex
    inside the basis. The two must agree.
    """
    fs = _as_faceset(lam, fs)
    if not f.basis:
        return lam.degree**m
    g = _image_n(lam, f, m, fs)
    if not isinstance(g, GapFace) or g.id != f.id:
        raise NotPeriodic(f"face {f.id} is not {m}-periodic")
    wind, _ = _winding(lam, f, m)
    count = _preimage_count(lam, f, m, fs)
    if count is not None and count != wind:
        raise InternalInconsistency(
            f"face {f.id}: winding degree {wind} but {count} preimages in the basis")
    return wind


def rotation_bracket(lam: Lamination, f: GapFace, m: int, iterations: int
                     ) -> tuple[Fraction, Fraction]:
    """Min and max mean lift displacement (in turns) over ``iterations`` steps,
    started from every basis vertex."""
    d = lam.degree
    B = f.basis
    n, n2 = len(B), 2 * len(B)
    wind, ys = _winding(lam, f, m)
    if wind != 1:
        raise NotARotation(f"face {f.id} has boundary degree {wind}")
    lift = [ys[0]]
    for i in range(n - 1):
        lift.append(lift[-1] + (ys[i + 1] - ys[i]) % n2)

    def step(x: Fraction) -> tuple[Fraction, int]:
        y = sigma_n(d, x, m)
        s = _slot(B, x)
        i = s // 2
        target = lift[i] + (_slot(B, y) - ys[i]) % n2 if s % 2 else lift[i]
        return y, target - s

    disp = []
    for b in B:
        x, tot = b, 0
        for _ in range(iterations):
            x, dlt = step(x)
            tot += dlt
        disp.append(Fraction(tot, n2 * iterations))
    return min(disp), max(disp)


def rotation_number(lam: Lamination, f: GapFace, m: int, iterations: int = 256,
                    fs: Optional[FaceSet] = None) -> tuple[Fraction, Fraction]:
    """Interval bracketing the rotation number of a degree-one periodic face.

    Exact (a degenerate interval) when the iterate permutes the basis.
    """
    d = lam.degree
    B = f.basis
    if not B:
        raise NotARotation("the whole disk is not a rotation domain")
    if {sigma_n(d, b, m) for b in B} == set(B):
        wind, _ = _winding(lam, f, m)
        if wind != 1:
            raise NotARotation(f"face {f.id} has boundary degree {wind}")
        x, period = B[0], 0
        while True:
            x = sigma_n(d, x, m)
            period += 1
            if x == B[0]:
                break
        lo, hi = rotation_bracket(lam, f, m, period)
        if lo != hi:
            raise InternalInconsistency("permuted basis gave a non-degenerate bracket")
        return lo, hi
    return rotation_bracket(lam, f, m, iterations)


def chain_bound(lam: Lamination, f: GapFace) -> int:
    """Longest run of concatenated boundary leaves; a closed chain counts its edges."""
    items = f.boundary
    if not items:
        return 0
    if not f.arcs:
        return len(items)
    k = next(i for i, x in enumerate(items) if isinstance(x, Arc))
    items = items[k:] + items[:k]
    best = run = 0
    for x in items:
        run = run + 1 if isinstance(x, Leaf) else 0
        best = max(best, run)
    return best


def _coarse_basis_sizes(lam: Lamination, f: GapFace, step: int = 1,
                        fs: Optional[FaceSet] = None) -> tuple[int, ...]:
    """Basis sizes of the faces containing ``f`` at depth k-2s, k-s and k.

    A gap of period ``s`` only picks up new boundary leaves every ``s``
    levels, so the comparison steps by the period.
    """
    if not f.arcs:
        return (len(f.basis),)
    probe = f.arcs[0].midpoint()
    sizes = []
    for lv in (lam.depth - 2 * step, lam.depth - step):
        if lv < 0:
            continue
        sub = fs.truncated(lv) if fs is not None else FaceSet(lam.truncate(lv))
        (i,) = sub.faces_at(probe)
        sizes.append(len(sub[i].basis))
    sizes.append(len(f.basis))
    return tuple(sizes)


def classify(lam: Lamination, f: GapFace, horizon: int = 64,
             fs: Optional[FaceSet] = None, rotation_iterations: int = 256
             ) -> GapClassification:
    fs = _as_faceset(lam, fs)
    d = lam.degree
    out = GapClassification("Undetermined", f.id, evidence_depth=lam.depth,
                            chain_bound=chain_bound(lam, f))
    orbit: list[GapFace] = [f]
    for step in range(horizon):
        try:
            g = face_image(lam, orbit[-1], fs)
        except UnresolvableAtDepth:
            return out
        if isinstance(g, Fraction):
            out.kind, out.preperiod = "AllCritical", step
            return out
        if isinstance(g, Leaf):
            c = AngleClass(g.endpoints)
            seen = [c]
            while True:
                c = image_class(d, c)
                if len(c) < 2:
                    out.kind, out.preperiod = "AllCritical", step + len(seen)
                    return out
                if c in seen:
                    j = seen.index(c)
                    out.kind = "FinitePolygon"
                    out.preperiod, out.period = step + 1 + j, len(seen) - j
                    return out
                seen.append(c)
        if g in orbit:
            i = orbit.index(g)
            period = len(orbit) - i
            return _classify_cycle(lam, g, i, period, out, fs, rotation_iterations)
        orbit.append(g)
    bases = [AngleClass(o.basis) for o in orbit if o.basis]
    if all(unlinked(bases[i], bases[j]) for i in range(len(bases))
           for j in range(i + 1, len(bases))):
        if len(f.basis) > 2**d:
            raise InternalInconsistency(
                f"wandering face {f.id} has {len(f.basis)} > 2^{d} vertices")
        out.kind = "WanderingPolygon"
    return out


def _classify_cycle(lam, p, preperiod, period, out, fs, rotation_iterations):
    out.preperiod, out.period = preperiod, period
    if not p.basis:
        out.kind, out.degree = "FatouParattracting", lam.degree**period
        return out
    if p.is_finite:
        out.kind = "FinitePolygon"
        out.degree = boundary_degree(lam, p, period, fs)
        return out
    sizes = _coarse_basis_sizes(lam, p, period, fs)
    out.basis_growth = sizes
    if len(sizes) < 3:
        return out
    growing = sizes[0] < sizes[1] < sizes[2]
    if not growing:
        if sizes[0] == sizes[1] == sizes[2]:
            out.kind = "FinitePolygon"
            out.degree = boundary_degree(lam, p, period, fs)
        return out
    k = boundary_degree(lam, p, period, fs)
    out.degree = k
    if k >= 2:
        out.kind = "FatouParattracting"
    elif k == 1:
        out.kind = "FatouSiegel"
        out.rotation_number = rotation_number(lam, p, period, rotation_iterations, fs)
    return out


def classify_all(lam: Lamination, horizon: int = 64) -> list[GapClassification]:
    fs = FaceSet(lam)
    return [classify(lam, f, horizon, fs) for f in fs]


def classify_critical_leaves(lam: Lamination) -> list[tuple[Leaf, str, int]]:
    """Tag every leaf with a point image as Isolated, Separate or
    AllCriticalUnionBoundary, with the depth the judgement was made at."""
    fs = FaceSet(lam)
    d = lam.degree
    owners = lam.leaves()
    side: dict[Leaf, list[GapFace]] = {}
    for f in fs:
        for e in f.leaves:
            side.setdefault(e, []).append(f)
    out = []
    for e, idx in sorted(owners.items()):
        if sigma(d, e.a) != sigma(d, e.b):
            continue
        if any(len(lam.classes[i]) >= 3 and len(image_class(d, lam.classes[i])) == 1
               for i in idx):
            tag = "AllCriticalUnionBoundary"
        elif all(any(x != e for x in f.leaves) for f in side.get(e, [])):
            tag = "Isolated"
        else:
            tag = "Separate"
        out.append((e, tag, lam.depth))
    return out

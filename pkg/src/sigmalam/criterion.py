"""Well-slicing families on the circle and the non-degeneracy criterion
evaluated on lamination data."""

from __future__ import annotations

import random
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .chords import AngleClass, hull_edges, image_class, separates, unlinked
from .circle import format_angle
from .gaps import FaceSet, GapFace, classify, face_image
from .lamination import Lamination

VERDICTS = ("Growing", "Stable", "Inconclusive")


class InvalidFamily(ValueError):
    pass


Completion = Callable[[AngleClass, AngleClass], Optional[AngleClass]]


def _vertical_alpha(c: AngleClass) -> Optional[Fraction]:
    if len(c) == 2 and c[0] + c[1] == 1 and c[0] < Fraction(1, 2):
        return c[0]
    return None


def vertical_midpoint(c1: AngleClass, c2: AngleClass) -> Optional[AngleClass]:
    """The vertical pair halfway between two vertical pairs."""
    a, b = _vertical_alpha(c1), _vertical_alpha(c2)
    if a is None or b is None or a == b:
        return None
    m = (a + b) / 2
    return AngleClass([m, 1 - m])


COMPLETIONS: dict[str, Completion] = {"vertical": vertical_midpoint}


@dataclass(frozen=True)
class SlicingFamily:
    """Pairwise unlinked, pairwise disjoint closed sets of angles.

    ``completion`` names a rule producing further members of the ambient
    family on demand; a finite family without one cannot be well-slicing,
    because the two closest members never have a third between them.
    """

    members: tuple[AngleClass, ...]
    completion: Optional[str] = None

    def __init__(self, members, completion: Optional[str] = None):
        ms = tuple(sorted(m if isinstance(m, AngleClass) else AngleClass(m)
                          for m in members))
        if completion is not None and completion not in COMPLETIONS:
            raise InvalidFamily(f"unknown completion {completion!r}")
        object.__setattr__(self, "members", ms)
        object.__setattr__(self, "completion", completion)

    def __len__(self) -> int:
        return len(self.members)

    def check(self) -> None:
        ms = self.members
        if len(ms) < 2:
            return
        enc = _Encoded(self)
        if enc.q < _INT_LIMIT:
            pts, sizes = enc.padded()
            i, j = _kernels.first_linked(pts, sizes)
            if i >= 0:
                raise InvalidFamily(f"members {ms[i]} and {ms[j]} are linked or overlap")
            return
        for i in range(len(ms)):
            for j in range(i + 1, len(ms)):
                if not unlinked(ms[i], ms[j]):
                    raise InvalidFamily(f"members {ms[i]} and {ms[j]} are linked or overlap")

    def separator(self, c1: AngleClass, c2: AngleClass) -> Optional[AngleClass]:
        if self.completion is not None:
            cand = COMPLETIONS[self.completion](c1, c2)
            if cand is not None and separates(cand, c1, c2):
                return cand
        for c3 in self.members:
            if separates(c3, c1, c2):
                return c3
        return None


@dataclass
class SlicingResult:
    ok: bool
    counterexample: Optional[tuple[AngleClass, ...]] = None

    def __bool__(self) -> bool:
        return self.ok


_INT_LIMIT = 2**62


class _Encoded:
    """Members as sorted tuples of integer numerators over an even common
    denominator, so vertical midpoints stay integral."""

    def __init__(self, fam: SlicingFamily, extra_denominator: int = 1):
        dens = {x.denominator for m in fam.members for x in m}
        q = 2 * lcm(extra_denominator, *dens) if dens else 2
        self.q = q
        self.fam = fam
        self.members = [tuple(int(x * q) for x in m) for m in fam.members]

    def separates(self, sep: tuple, a: tuple, b: tuple) -> bool:
        n = len(sep)
        arcs = []
        for part in (a, b):
            idx = set()
            for x in part:
                k = bisect_left(sep, x)
                if k < n and sep[k] == x:
                    return False
                idx.add((k - 1) % n)
            if len(idx) != 1:
                return False
            arcs.append(idx.pop())
        return arcs[0] != arcs[1]

    def completion(self, a: tuple, b: tuple) -> Optional[tuple]:
        if self.fam.completion != "vertical":
            return None
        q = self.q
        if len(a) != 2 or len(b) != 2 or a[0] + a[1] != q or b[0] + b[1] != q or a == b:
            return None
        m = (a[0] + b[0]) // 2
        return (m, q - m)

    def separator(self, a: tuple, b: tuple) -> Optional[tuple]:
        cand = self.completion(a, b)
        if cand is not None and self.separates(cand, a, b):
            return cand
        for c in self.members:
            if self.separates(c, a, b):
                return c
        return None

    def padded(self) -> tuple[np.ndarray, np.ndarray]:
        k = max(len(m) for m in self.members)
        pts = np.full((len(self.members), k), self.q, dtype=np.int64)
        for i, m in enumerate(self.members):
            pts[i, :len(m)] = m
        return pts, np.array([len(m) for m in self.members], dtype=np.int64)


def is_well_slicing(fam: SlicingFamily) -> SlicingResult:
    fam.check()
    ms = fam.members
    if len(ms) < 2:
        return SlicingResult(False, ms)
    enc = _Encoded(fam)
    if enc.q < _INT_LIMIT:
        pts, sizes = enc.padded()
        i, j = _kernels.first_unseparated(pts, sizes, fam.completion == "vertical", enc.q)
        if i < 0:
            return SlicingResult(True)
        return SlicingResult(False, (ms[i], ms[j]))
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            if fam.separator(ms[i], ms[j]) is None:
                return SlicingResult(False, (ms[i], ms[j]))
    return SlicingResult(True)


def vertical_collection(bound: int, completion: Optional[str] = "vertical"
                        ) -> SlicingFamily:
    """All pairs ``{a, 1 - a}`` with ``0 < a < 1/2`` of denominator at most ``bound``."""
    if bound < 3:
        raise ValueError("bound must be at least 3")
    alphas = sorted({Fraction(p, q) for q in range(3, bound + 1)
                     for p in range(1, (q + 1) // 2) if gcd(p, q) == 1
                     and Fraction(p, q) < Fraction(1, 2)})
    return SlicingFamily([AngleClass([a, 1 - a]) for a in alphas], completion)


@dataclass
class LemmaReport:
    checked: dict[str, int]
    failures: list[tuple[str, tuple[AngleClass, ...]]]

    @property
    def ok(self) -> bool:
        return not self.failures


def ray_separation_lemmas_check(fam: SlicingFamily, samples: int, seed: int = 0,
                                chain_length: int = 4) -> LemmaReport:
    """Sample instances of three separation facts on the circle and confirm each.

    * a set separating two sets that each separate ``A`` from ``B`` itself
      separates ``A`` from ``B``;
    * if ``K1`` separates ``A`` from ``B`` and ``K2`` (disjoint from ``B``)
      separates ``A`` from ``K1``, then ``K2`` separates ``A`` from ``B``;
    * in a well-slicing family, repeatedly separating the last separator from
      ``C2`` produces pairwise distinct sets, all separating ``C1`` and ``C2``.

    ``A`` and ``B`` are random single angles on a grid four times finer than
    the family's denominators. Only instances whose hypotheses hold count.
    """
    fam.check()
    rng = random.Random(seed)
    checked = {"middle": 0, "sep_sep": 0, "no_finite": 0}
    failures: list[tuple[str, tuple[AngleClass, ...]]] = []
    if len(fam.members) < 2:
        return LemmaReport(checked, failures)
    enc = _Encoded(fam, extra_denominator=2)
    q, ms = enc.q, enc.members

    def back(t: tuple) -> AngleClass:
        return AngleClass(Fraction(x, q) for x in t)

    def point() -> tuple:
        return (rng.randrange(q),)

    attempts = 0
    while min(checked.values()) < samples and attempts < 200 * samples:
        attempts += 1
        which = min(checked, key=checked.get)
        if which == "middle":
            c1, c2 = rng.sample(ms, 2)
            a, b = point(), point()
            if not (enc.separates(c1, a, b) and enc.separates(c2, a, b)):
                continue
            c3 = enc.separator(c1, c2)
            if c3 is None or set(c3) & {a[0], b[0]}:
                continue
            checked["middle"] += 1
            if not enc.separates(c3, a, b):
                failures.append(("middle", tuple(map(back, (c1, c2, c3, a, b)))))
        elif which == "sep_sep":
            k1, k2 = rng.sample(ms, 2)
            a, b = point(), point()
            if not enc.separates(k1, a, b) or b[0] in k2 or not enc.separates(k2, a, k1):
                continue
            checked["sep_sep"] += 1
            if not enc.separates(k2, a, b):
                failures.append(("sep_sep", tuple(map(back, (k1, k2, a, b)))))
        else:
            c1, c2 = rng.sample(ms, 2)
            seps: list[tuple] = []
            last = c1
            for _ in range(chain_length):
                nxt = enc.separator(last, c2)
                if nxt is None:
                    break
                seps.append(nxt)
                last = nxt
            if len(seps) < chain_length and fam.completion is None:
                # a finite family is not well-slicing, so there is nothing to test
                continue
            checked["no_finite"] += 1
            if len(seps) < chain_length or len(set(seps)) != len(seps) or c1 in seps \
                    or not all(enc.separates(s, c1, c2) for s in seps):
                failures.append(("no_finite", tuple(map(back, (c1, c2, *seps)))))
    return LemmaReport(checked, failures)


# ---------------------------------------------------------------------------
# criterion on laminations

@dataclass
class SiegelWitness:
    classes: list[AngleClass]
    cycle: list[int]
    shared_leaves: list[str]
    evidence_depth: int
    label: str = "combinatorial only"


@dataclass
class CriterionReport:
    parattracting_found: bool
    parattracting_witness: Optional[str]
    census: dict[int, int]
    census_verdict: str
    siegel: Optional[SiegelWitness]
    overall: str
    overall_witness: Optional[str]
    depth: int
    period_bound: int
    notes: list[str] = field(default_factory=list)

    def to_text(self) -> str:
        lines = [
            f"depth: {self.depth}",
            f"period_bound: {self.period_bound}",
            f"parattracting_found: {str(self.parattracting_found).lower()}",
            f"parattracting_witness: {self.parattracting_witness or '-'}",
            "census: " + " ".join(f"{p}:{n}" for p, n in sorted(self.census.items())),
            f"census_verdict: {self.census_verdict}",
        ]
        if self.siegel is None:
            lines.append("siegel_configuration: absent")
        else:
            s = self.siegel
            lines.append("siegel_configuration: present (" + s.label + ")")
            lines.append("siegel_classes: " + " ; ".join(str(c) for c in s.classes))
            lines.append("siegel_cycle: " + " ".join(str(i) for i in s.cycle))
            lines.append("siegel_leaves: " + " ".join(s.shared_leaves))
            lines.append(f"siegel_evidence_depth: {s.evidence_depth}")
        lines.append(f"overall: {self.overall}")
        lines.append(f"overall_witness: {self.overall_witness or '-'}")
        return "\n".join(lines) + "\n"


def periodic_census(lam: Lamination, period_bound: int) -> dict[int, int]:
    """Number of classes with at least two angles of each exact period."""
    d = lam.degree
    out = {p: 0 for p in range(1, period_bound + 1)}
    for c in lam.class_set():
        if len(c) < 2:
            continue
        img = c
        for p in range(1, period_bound + 1):
            img = image_class(d, img)
            if img == c:
                out[p] += 1
                break
    return out


def census_verdict(census: dict[int, int], window: int = 3) -> str:
    """Growing when the last ``window`` counts strictly increase, Stable when
    they are all zero. Heuristic only: finite data cannot decide infinitude."""
    vals = [census[p] for p in sorted(census)][-window:]
    if len(vals) < window:
        return "Inconclusive"
    if all(v == 0 for v in vals):
        return "Stable"
    if all(vals[i] < vals[i + 1] for i in range(len(vals) - 1)):
        return "Growing"
    return "Inconclusive"


def _face_cycle(lam: Lamination, f: GapFace, period: int, fs: FaceSet) -> list[int]:
    cyc = [f.id]
    g = f
    for _ in range(period - 1):
        g = face_image(lam, g, fs)
        cyc.append(g.id)
    return cyc


def detect_siegel_configuration(lam: Lamination, horizon: int = 64,
                                fs: Optional[FaceSet] = None,
                                classes_by_face=None) -> Optional[SiegelWitness]:
    """All-critical classes with pairwise disjoint orbits, each sharing exactly
    one boundary leaf with one cycle of degree-one Fatou faces."""
    fs = fs or FaceSet(lam)
    if classes_by_face is None:
        classes_by_face = {f.id: classify(lam, f, horizon, fs) for f in fs}
    d = lam.degree
    cycles: list[list[int]] = []
    seen: set[int] = set()
    for f in fs:
        c = classes_by_face[f.id]
        if c.kind != "FatouSiegel" or c.preperiod != 0 or f.id in seen:
            continue
        cyc = _face_cycle(lam, f, c.period, fs)
        seen.update(cyc)
        cycles.append(cyc)
    if not cycles:
        return None
    crit = [c for c in lam.class_set() if len(c) >= 2 and len(image_class(d, c)) == 1]
    for cyc in cycles:
        bound = {e: fid for fid in cyc for e in fs[fid].leaves}
        chosen: list[AngleClass] = []
        leaves: list[str] = []
        for h in sorted(crit):
            shared = [e for e in hull_edges(h) if e in bound]
            if len(shared) != 1:
                continue
            if any(not _orbits_disjoint(d, h, k, horizon) for k in chosen):
                continue
            chosen.append(h)
            leaves.append(f"{shared[0]}@{bound[shared[0]]}")
        if chosen:
            return SiegelWitness(chosen, cyc, leaves, lam.depth)
    return None


def _orbit(d: int, c: AngleClass, horizon: int) -> set[Fraction]:
    pts = set(c)
    cur = c
    for _ in range(horizon):
        nxt = image_class(d, cur)
        if set(nxt) <= pts:
            break
        pts |= set(nxt)
        cur = nxt
    return pts


def _orbits_disjoint(d: int, a: AngleClass, b: AngleClass, horizon: int) -> bool:
    return not (_orbit(d, a, horizon) & _orbit(d, b, horizon))


def evaluate_criterion(lam: Lamination, period_bound: int, horizon: int = 64,
                       window: int = 3) -> CriterionReport:
    fs = FaceSet(lam)
    cls = {f.id: classify(lam, f, horizon, fs) for f in fs}
    para = None
    for f in fs:
        c = cls[f.id]
        # the bare disk of an empty lamination has no leaf to witness anything
        if c.kind == "FatouParattracting" and c.preperiod == 0 and f.basis:
            para = (f"face {f.id} period {c.period} degree {c.degree} "
                    f"vertex {format_angle(f.basis[0])}")
            break
    census = periodic_census(lam, period_bound)
    verdict = census_verdict(census, window)
    siegel = detect_siegel_configuration(lam, horizon, fs, cls)
    if para is not None:
        overall, why = "NonDegenerate", "condition 1: " + para
    elif verdict == "Growing":
        overall, why = "NonDegenerate", "condition 2: periodic class census growing (heuristic)"
    elif siegel is not None:
        overall, why = "NonDegenerate", "condition 3: Siegel configuration (combinatorial only)"
    else:
        overall, why = "NoEvidence", None
    return CriterionReport(para is not None, para, census, verdict, siegel,
                           overall, why, lam.depth, period_bound)

"""Text format for laminations (``.lam``) and slicing families (``.fam``).

A ``.lam`` file has header lines ``degree``, ``mode`` and ``depth``, then
``class`` lines for the level-0 classes and ``preimage-of <i>: ...`` lines
for pullbacks of the ``i``-th class (counting every class line and
preimage line in file order). ``#`` starts a comment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .chords import AngleClass
from .circle import format_angle
from .lamination import MODES, Lamination, generate, linked_pairs


class LamParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass
class LamFile:
    degree: int
    classes: list[AngleClass]
    mode: str = "equivalence"
    depth: int = 0
    preimages: list[tuple[int, AngleClass]] = field(default_factory=list)

    def all_classes(self) -> list[AngleClass]:
        return list(self.classes) + [c for _, c in self.preimages]


def _tokens(line: str):
    """Whitespace-separated tokens with their 1-based columns."""
    col = 0
    out = []
    for part in line.split():
        col = line.index(part, col)
        out.append((part, col + 1))
        col += len(part)
    return out


def _parse_angle(tok: str, line: int, col: int) -> Fraction:
    num, _, den = tok.partition("/")
    if not num.isdigit() or (den and not den.isdigit()):
        raise LamParseError(f"bad fraction {tok!r}", line, col)
    if den and int(den) == 0:
        raise LamParseError(f"zero denominator in {tok!r}", line, col)
    value = Fraction(int(num), int(den) if den else 1)
    if not 0 <= value < 1:
        raise LamParseError(f"angle {tok} outside [0, 1)", line, col)
    return value


def _parse_set(toks, line: int) -> AngleClass:
    seen: dict[Fraction, int] = {}
    for tok, col in toks:
        x = _parse_angle(tok, line, col)
        if x in seen:
            raise LamParseError(f"duplicate angle {format_angle(x)}", line, col)
        seen[x] = col
    if not seen:
        raise LamParseError("empty angle list", line)
    return AngleClass(seen)


def _parse_int(toks, key: str, line: int) -> int:
    if len(toks) != 2 or not toks[1][0].isdigit():
        raise LamParseError(f"expected '{key} <integer>'", line, toks[-1][1])
    return int(toks[1][0])


def parse(text: str, check_linked: bool = True) -> LamFile:
    """Read a ``.lam`` file. With ``check_linked`` off, linked classes are
    accepted so that a validator can report them."""
    degree: Optional[int] = None
    mode, depth = "equivalence", 0
    classes: list[AngleClass] = []
    pre: list[tuple[int, AngleClass]] = []
    where: list[int] = []
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        key = toks[0][0]
        if key == "degree":
            degree = _parse_int(toks, key, n)
            if degree < 2:
                raise LamParseError("degree must be at least 2", n, toks[1][1])
        elif key == "depth":
            depth = _parse_int(toks, key, n)
        elif key == "mode":
            if len(toks) != 2 or toks[1][0] not in MODES:
                raise LamParseError(f"mode must be one of {', '.join(MODES)}", n,
                                    toks[-1][1])
            mode = toks[1][0]
        elif key == "class":
            if pre:
                raise LamParseError("class lines must precede preimage-of lines", n)
            classes.append(_parse_set(toks[1:], n))
            where.append(n)
        elif key == "preimage-of":
            if len(toks) < 2 or not toks[1][0].endswith(":") or not toks[1][0][:-1].isdigit():
                raise LamParseError("expected 'preimage-of <index>: <angles>'", n,
                                    toks[1][1] if len(toks) > 1 else 1)
            idx = int(toks[1][0][:-1])
            if idx >= len(classes) + len(pre):
                raise LamParseError(f"preimage-of refers to unknown class {idx}", n,
                                    toks[1][1])
            pre.append((idx, _parse_set(toks[2:], n)))
            where.append(n)
        else:
            raise LamParseError(f"unknown keyword {key!r}", n, toks[0][1])
    if degree is None:
        raise LamParseError("missing 'degree' line", 1)
    lf = LamFile(degree, classes, mode, depth, pre)
    if not check_linked:
        return lf
    allc = lf.all_classes()
    bad = linked_pairs(Lamination.from_classes(degree, allc, mode=mode))
    if bad:
        i, j = bad[0]
        raise LamParseError(f"linked classes {allc[i]} and {allc[j]}", where[j])
    return lf


def serialize(lf: LamFile) -> str:
    lam = to_lamination(lf) if lf.preimages else None
    if lam is not None:
        lf = from_lamination(lam)
    else:
        lf = LamFile(lf.degree, sorted(lf.classes), lf.mode, lf.depth)
    out = [f"degree {lf.degree}", f"mode {lf.mode}", f"depth {lf.depth}"]
    out += ["class " + " ".join(format_angle(x) for x in c) for c in lf.classes]
    out += [f"preimage-of {i}: " + " ".join(format_angle(x) for x in c)
            for i, c in lf.preimages]
    return "\n".join(out) + "\n"


def to_lamination(lf: LamFile, depth: Optional[int] = None,
                  allow_critical: bool = False) -> Lamination:
    """The recorded lamination, or one generated from the class lines when the
    file carries no preimage lines and a positive depth is asked for. At depth
    0 the class lines are taken literally, so a validator sees them as written."""
    depth = lf.depth if depth is None else depth
    if not lf.preimages:
        if not lf.classes:
            return Lamination(lf.degree, [], [], [], [], depth, lf.mode)
        if depth == 0:
            return Lamination.from_classes(lf.degree, lf.classes, 0, lf.mode)
        return generate(lf.degree, lf.classes, depth, mode=lf.mode,
                        allow_critical=allow_critical)
    classes = lf.all_classes()
    n0 = len(lf.classes)
    levels = [0] * n0
    parents: list[Optional[int]] = [None] * n0
    for idx, _ in lf.preimages:
        levels.append(levels[idx] + 1)
        parents.append(idx)
    tags = ["generator"] * n0 + ["pullback"] * len(lf.preimages)
    return Lamination(lf.degree, classes, levels, parents, tags,
                      max(lf.depth, max(levels)), lf.mode)


def from_lamination(lam: Lamination) -> LamFile:
    """Canonical file form: level by level, classes sorted by least angle."""
    order = sorted(range(len(lam.classes)), key=lambda i: (lam.levels[i], lam.classes[i]))
    new = {old: k for k, old in enumerate(order)}
    classes = [lam.classes[i] for i in order if lam.levels[i] == 0]
    pre = []
    for i in order:
        if lam.levels[i] == 0:
            continue
        p = lam.parents[i]
        if p is None:
            raise ValueError(f"class {lam.classes[i]} at level {lam.levels[i]} has no parent")
        pre.append((new[p], lam.classes[i]))
    return LamFile(lam.degree, classes, lam.mode, lam.depth, pre)


# ---------------------------------------------------------------------------
# family files

@dataclass
class FamFile:
    members: list[AngleClass]
    completion: Optional[str] = None


def parse_family(text: str) -> FamFile:
    members = []
    completion = None
    for n, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw.split("#", 1)[0])
        if not toks:
            continue
        key = toks[0][0]
        if key == "set":
            members.append(_parse_set(toks[1:], n))
        elif key == "completion":
            if len(toks) != 2:
                raise LamParseError("expected 'completion <name>'", n)
            completion = toks[1][0]
        else:
            raise LamParseError(f"unknown keyword {key!r}", n, toks[0][1])
    return FamFile(members, completion)


def serialize_family(ff: FamFile) -> str:
    out = [] if ff.completion is None else [f"completion {ff.completion}"]
    out += ["set " + " ".join(format_angle(x) for x in c) for c in sorted(ff.members)]
    return "\n".join(out) + "\n"

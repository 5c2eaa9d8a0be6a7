"""Command line entry point: ``sigmalam <command> FILE [options]``.

Exit status is 0 on success, 1 when violations are found and 2 on input
errors.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path
from typing import Optional

from .circle import format_angle
from .criterion import InvalidFamily, SlicingFamily, evaluate_criterion, is_well_slicing
from .finest import endpoint_valence_check, finest_quotient
from .gaps import FaceSet, InternalInconsistency, InvalidLamination, classify
from .lamfile import (LamFile, LamParseError, from_lamination, parse, parse_family,
                      serialize, to_lamination)
from .lamination import Lamination, LaminationError, validate
from .render import RenderOptions, render

OK, VIOLATION, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


def _fmt_set(c) -> str:
    return "{" + " ".join(format_angle(x) for x in c) + "}"


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None


def _load(args, check_linked: bool = True) -> Lamination:
    text = _read(args.file)
    try:
        lf = parse(text, check_linked)
    except LamParseError as e:
        raise InputError(f"{args.file}: {e}") from None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            lam = to_lamination(lf, args.depth)
        except (LaminationError, ValueError) as e:
            raise InputError(f"{args.file}: {e}") from None
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return lam


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    lam = _load(args, check_linked=False)
    rep = validate(lam)
    val = endpoint_valence_check(lam)
    lines = [f"classes: {len(lam.classes)}", f"depth: {lam.depth}"]
    lines += [f"{k}: {v}" for k, v in rep.verdict.items()]
    lines += [f"linked: {_fmt_set(a)} {_fmt_set(b)}" for a, b in rep.unlinked_violations]
    lines += [f"image-missing: {_fmt_set(c)} -> {_fmt_set(img)}"
              for c, img, _ in rep.forward_violations]
    lines += [f"preimage-incomplete: {_fmt_set(c)}" for c in rep.backward_violations]
    lines += [f"not-covering: {_fmt_set(c)}" for c in rep.covering_violations]
    lines += [f"wandering-too-large: {_fmt_set(c)}" for c in rep.wandering_violations]
    lines.append(f"max-endpoint-valence: {val.max_valence}")
    lines += [f"valence-violation: {format_angle(x)}" for x in val.hard_violations]
    _emit("\n".join(lines) + "\n", args.out)
    return OK if rep.ok and not val.failed else VIOLATION


def cmd_expand(args) -> int:
    lam = _load(args)
    _emit(serialize(from_lamination(lam)), args.out)
    return OK


def cmd_gaps(args) -> int:
    lam = _load(args)
    fs = _faces(lam)
    lines = []
    for f in fs:
        kind = "finite" if f.is_finite else ("disk" if not f.basis else "open")
        lines.append(f"face {f.id} {kind} vertices {len(f.basis)} arcs {len(f.arcs)} "
                     f"basis {_fmt_set(f.basis)}")
    _emit("\n".join(lines) + "\n", args.out)
    return OK


def _faces(lam: Lamination) -> FaceSet:
    try:
        return FaceSet(lam)
    except InvalidLamination as e:
        raise InputError(str(e)) from None


def cmd_classify(args) -> int:
    lam = _load(args)
    fs = _faces(lam)
    lines = []
    for f in fs:
        c = classify(lam, f, args.horizon, fs)
        rot = "-" if c.rotation_number is None else \
            f"[{format_angle(c.rotation_number[0])},{format_angle(c.rotation_number[1])}]"
        lines.append(
            f"face {f.id} {c.kind} period {c.period if c.period is not None else '-'} "
            f"preperiod {c.preperiod if c.preperiod is not None else '-'} "
            f"degree {c.degree if c.degree is not None else '-'} rotation {rot} "
            f"growth {','.join(map(str, c.basis_growth)) or '-'}")
    _emit("\n".join(lines) + "\n", args.out)
    return OK


def cmd_finest(args) -> int:
    lam = _load(args)
    try:
        q = finest_quotient(lam, args.horizon)
    except InvalidLamination as e:
        raise InputError(str(e)) from None
    except InternalInconsistency as e:
        print(f"internal inconsistency: {e}", file=sys.stderr)
        return VIOLATION
    body = serialize(LamFile(lam.degree, list(q.classes), "equivalence", 0))
    cert = q.certificate_text()
    if args.out:
        Path(args.out).write_text(body)
        Path(args.out + ".cert").write_text(cert)
    else:
        sys.stdout.write(body + "# certificate\n" +
                         "".join(f"# {line}\n" for line in cert.splitlines()))
    return OK


def cmd_criterion(args) -> int:
    lam = _load(args)
    _faces(lam)
    rep = evaluate_criterion(lam, args.period_bound, args.horizon)
    _emit(rep.to_text(), args.out)
    return OK


def cmd_slice_check(args) -> int:
    try:
        ff = parse_family(_read(args.file))
        fam = SlicingFamily(ff.members, ff.completion)
        res = is_well_slicing(fam)
    except (LamParseError, InvalidFamily) as e:
        raise InputError(f"{args.file}: {e}") from None
    if res.ok:
        _emit(f"members: {len(fam)}\nwell-slicing: true\n", args.out)
        return OK
    pair = " ".join(_fmt_set(c) for c in res.counterexample or ())
    _emit(f"members: {len(fam)}\nwell-slicing: false\nunseparated: {pair}\n", args.out)
    return VIOLATION


def cmd_render(args) -> int:
    lam = _load(args)
    _faces(lam)
    _emit(render(lam, RenderOptions(arcs=args.arcs, tint=args.tint, horizon=args.horizon)),
          args.out)
    return OK


COMMANDS = {
    "validate": cmd_validate,
    "expand": cmd_expand,
    "gaps": cmd_gaps,
    "classify": cmd_classify,
    "finest": cmd_finest,
    "criterion": cmd_criterion,
    "slice-check": cmd_slice_check,
    "render": cmd_render,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sigmalam",
                                description="Invariant laminations under angle multiplication.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("file", help=".lam file, or .fam file for slice-check")
    p.add_argument("--depth", type=int, default=None,
                   help="pullback depth when the file lists only generators")
    p.add_argument("--horizon", type=int, default=64, help="orbit steps before giving up")
    p.add_argument("--period-bound", type=int, default=12, help="largest period in the census")
    p.add_argument("--out", default=None, help="write output here instead of stdout")
    p.add_argument("--tint", action="store_true", help="fill faces by classification")
    p.add_argument("--arcs", action="store_true", help="draw leaves as hyperbolic geodesics")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else OK
    if args.depth is not None and args.depth < 0:
        print("error: --depth must be non-negative", file=sys.stderr)
        return INPUT_ERROR
    try:
        return COMMANDS[args.command](args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())

"""Exact angle arithmetic on the circle R/Z and the angle-multiplication map."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Angle = Fraction
AngleLike = Union[Fraction, int, str]

ORBIT_STEP_CAP = 10**6


class InvalidDegree(ValueError):
    pass


def angle(x: AngleLike) -> Fraction:
    """Coerce ``x`` to an exact angle in [0, 1).

    Strings are read as ``"p/q"`` (or a bare integer); floats are refused
    because they cannot represent the dynamics exactly.
    """
    if isinstance(x, float):
        raise TypeError("floating point angles are not supported")
    if isinstance(x, str):
        x = Fraction(x.strip())
    return Fraction(x) % 1


def format_angle(a: Fraction) -> str:
    return "0" if a == 0 else f"{a.numerator}/{a.denominator}"


def _check_degree(d: int) -> None:
    if not isinstance(d, int) or d < 2:
        raise InvalidDegree(f"degree must be an integer >= 2, got {d!r}")


def sigma(d: int, a: Fraction) -> Fraction:
    _check_degree(d)
    return (d * a) % 1


def sigma_n(d: int, a: Fraction, n: int) -> Fraction:
    _check_degree(d)
    return (pow(d, n) * a) % 1


@dataclass(frozen=True)
class OrbitInfo:
    preperiod: int
    period: int
    orbit: tuple[Fraction, ...]

    @property
    def cycle(self) -> tuple[Fraction, ...]:
        return self.orbit[self.preperiod:]


def orbit(d: int, a: Fraction, cap: int = ORBIT_STEP_CAP) -> OrbitInfo:
    """Preperiod, period and the orbit of ``a`` up to its first repeat.

    ``orbit[preperiod + period]`` would equal ``orbit[preperiod]``; the stored
    tuple stops just before that repeat.
    """
    _check_degree(d)
    a = angle(a)
    seen: dict[Fraction, int] = {}
    pts: list[Fraction] = []
    x = a
    while x not in seen:
        if len(pts) >= cap:
            raise RuntimeError(f"orbit of {a} did not close within {cap} steps")
        seen[x] = len(pts)
        pts.append(x)
        x = (d * x) % 1
    pre = seen[x]
    return OrbitInfo(preperiod=pre, period=len(pts) - pre, orbit=tuple(pts))


def is_periodic(d: int, a: Fraction) -> bool:
    return orbit(d, a).preperiod == 0


def preimages(d: int, a: Fraction) -> list[Fraction]:
    _check_degree(d)
    a = angle(a)
    return sorted((a + i) / d for i in range(d))


def rho(a: Fraction, b: Fraction) -> Fraction:
    """Length of the shorter arc between ``a`` and ``b``."""
    t = abs(a - b) % 1
    return min(t, 1 - t)


def epsilon_d(d: int) -> Fraction:
    """Expansion constant: ``rho`` strictly grows under ``sigma`` below it."""
    _check_degree(d)
    return Fraction(1, 2 * d)


def ccw(a: Fraction, b: Fraction) -> Fraction:
    """Counterclockwise distance from ``a`` to ``b``, in [0, 1)."""
    return (b - a) % 1


def in_open_arc(x: Fraction, s: Fraction, t: Fraction) -> bool:
    """True iff ``x`` lies in the open counterclockwise arc from ``s`` to ``t``.

    With ``s == t`` the arc is the whole circle minus that point.
    """
    if s == t:
        return x != s
    return 0 < ccw(s, x) < ccw(s, t)

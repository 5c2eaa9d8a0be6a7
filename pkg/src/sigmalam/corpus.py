"""Random generating families and the laminations they generate.

Generators are classes of two or three angles with denominator
``d**p - 1`` (periodic angles) or ``d * (d**p - 1)`` (their preimages). A
candidate is kept only if its forward orbit stays unlinked, disjoint from
the other generators and never loses points, and if every pullback level
finds admissible lifts.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .chords import AngleClass
from .lamination import Lamination, LaminationError, PullbackWarning, forward_closure, generate

MAX_DEPTH = {2: 4, 3: 3, 4: 2}


@dataclass
class Sample:
    seed: int
    degree: int
    generators: list[AngleClass]
    depth: int
    mode: str
    lamination: Lamination


def _random_class(rng: random.Random, d: int) -> AngleClass:
    p = rng.randint(1, 5 if d == 2 else 3)
    den = d**p - 1
    if rng.random() < 0.25:
        den *= d
    size = rng.choice((2, 2, 3))
    nums = rng.sample(range(den), min(size, den))
    return AngleClass(Fraction(n, den) for n in nums)


def random_family(rng: random.Random, d: int, mode: str, tries: int = 200
                  ) -> Optional[list[AngleClass]]:
    for _ in range(tries):
        gens = [_random_class(rng, d) for _ in range(rng.choice((1, 1, 2)))]
        if len(gens) == 2 and set(gens[0]) & set(gens[1]):
            continue
        if any(len(g) < 2 for g in gens):
            continue
        try:
            forward_closure(d, gens, mode)
        except LaminationError:
            continue
        return gens
    return None


def random_lamination(seed: int) -> Optional[Sample]:
    rng = random.Random(seed)
    d = rng.choice((2, 3, 4))
    mode = rng.choice(("equivalence", "geometric"))
    gens = random_family(rng, d, mode)
    if gens is None:
        return None
    depth = rng.randint(1, MAX_DEPTH[d])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PullbackWarning)
        try:
            lam = generate(d, gens, depth, mode=mode)
        except LaminationError:
            return None
    if lam.dropped:
        return None
    return Sample(seed, d, gens, depth, mode, lam)


def corpus(size: int, start_seed: int = 0, max_leaves: Optional[int] = None
           ) -> Iterator[Sample]:
    """``size`` samples from consecutive seeds, skipping rejected ones."""
    seed = start_seed
    made = 0
    while made < size:
        s = random_lamination(seed)
        seed += 1
        if s is None:
            continue
        if max_leaves is not None and len(s.lamination.leaves()) > max_leaves:
            continue
        made += 1
        yield s

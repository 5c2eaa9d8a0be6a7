"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Run it with the numba backend active (the default); the numpy versions are
always importable alongside it.
"""

import argparse
import timeit
from fractions import Fraction

import numpy as np

from sigmalam import _kernels
from sigmalam.chords import AngleClass, hull_edges
from sigmalam.criterion import _Encoded, vertical_collection
from sigmalam.lamination import _common_denominator, generate


def chord_arrays(depth):
    lam = generate(2, [AngleClass([Fraction(1, 7), Fraction(2, 7), Fraction(4, 7)])], depth)
    q = _common_denominator(lam.classes, 1, 0)
    edges = [e for c in lam.classes for e in hull_edges(c)]
    lo = np.array([int(e.a * q) for e in edges], dtype=np.int64)
    hi = np.array([int(e.b * q) for e in edges], dtype=np.int64)
    return lo, hi


def family_arrays(bound):
    fam = vertical_collection(bound)
    enc = _Encoded(fam)
    pts, sizes = enc.padded()
    return pts, sizes, enc.q


def best(fn, repeat):
    fn()  # compile / warm caches
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    if _kernels.BACKEND != "numba":
        print("numba backend is disabled; both columns would time numpy")
        return

    lo, hi = chord_arrays(7)
    pts, sizes, q = family_arrays(40)
    cases = [
        (f"crossing_pairs ({lo.size} chords)",
         lambda: _kernels.crossing_pairs(lo, hi),
         lambda: _kernels.numpy_crossing_pairs(lo, hi)),
        (f"crosses_any ({lo.size} chords)",
         lambda: _kernels.crosses_any(lo, hi, int(lo[0]) + 1, int(hi[0]) + 1),
         lambda: _kernels.numpy_crosses_any(lo, hi, int(lo[0]) + 1, int(hi[0]) + 1)),
        (f"first_linked ({pts.shape[0]} sets)",
         lambda: _kernels.first_linked(pts, sizes),
         lambda: _kernels.numpy_first_linked(pts, sizes)),
        (f"first_unseparated ({pts.shape[0]} sets, stops at first pair)",
         lambda: _kernels.first_unseparated(pts, sizes, False, q),
         lambda: _kernels.numpy_first_unseparated(pts, sizes, False, q)),
        (f"first_unseparated ({pts.shape[0]} sets, vertical midpoints)",
         lambda: _kernels.first_unseparated(pts, sizes, True, q),
         lambda: _kernels.numpy_first_unseparated(pts, sizes, True, q)),
    ]
    print(f"{'kernel':52s} {'numba':>10s} {'numpy':>10s} {'ratio':>7s}")
    for name, fast, slow in cases:
        a = best(fast, args.repeat)
        b = best(slow, args.repeat)
        print(f"{name:52s} {a * 1e3:8.2f}ms {b * 1e3:8.2f}ms {b / a:6.1f}x")


if __name__ == "__main__":
    main()

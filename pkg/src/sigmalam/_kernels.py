"""Chord-crossing kernels on integer-encoded angles.

Angles sharing a common denominator ``Q`` are passed as int64 numerators in
``[0, Q)``; each chord is a row ``(lo, hi)`` with ``lo < hi``. Two backends
exist: numba-compiled loops and vectorised numpy. Set
``SIGMALAM_DISABLE_NUMBA=1`` to force the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

BACKEND = "numpy"

if os.environ.get("SIGMALAM_DISABLE_NUMBA", "") not in ("", "0"):
    njit = None
else:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        njit = None


def _np_crosses_any(lo, hi, x, y):
    if lo.size == 0:
        return False
    distinct = (lo != x) & (lo != y) & (hi != x) & (hi != y)
    inx = (lo < x) & (x < hi)
    iny = (lo < y) & (y < hi)
    return bool(np.any(distinct & (inx != iny)))


def _np_crossing_pairs(lo, hi):
    n = lo.size
    if n < 2:
        return np.empty((0, 2), dtype=np.int64)
    a, b = lo[:, None], hi[:, None]
    x, y = lo[None, :], hi[None, :]
    distinct = (a != x) & (a != y) & (b != x) & (b != y)
    m = distinct & (((a < x) & (x < b)) != ((a < y) & (y < b)))
    i, j = np.nonzero(np.triu(m, 1))
    return np.stack([i, j], axis=1).astype(np.int64)


def _py_crosses_any(lo, hi, x, y):
    for k in range(lo.shape[0]):
        a = lo[k]
        b = hi[k]
        if a == x or a == y or b == x or b == y:
            continue
        if ((a < x) and (x < b)) != ((a < y) and (y < b)):
            return True
    return False


def _py_crossing_pairs(lo, hi):
    n = lo.shape[0]
    out = np.empty((n * (n - 1) // 2 if n > 1 else 0, 2), dtype=np.int64)
    c = 0
    for i in range(n):
        a = lo[i]
        b = hi[i]
        for j in range(i + 1, n):
            x = lo[j]
            y = hi[j]
            if a == x or a == y or b == x or b == y:
                continue
            if ((a < x) and (x < b)) != ((a < y) and (y < b)):
                out[c, 0] = i
                out[c, 1] = j
                c += 1
    return out[:c]


def _np_first_unseparated(pts, sizes, vertical, q):
    """Pairs are padded rows of ``pts``; padding slots hold ``q`` (never an angle)."""
    n = pts.shape[0]
    k = pts.shape[1]
    valid = np.arange(k)[None, :] < sizes[:, None]
    for i in range(n - 1):
        js = np.arange(i + 1, n)
        done = np.zeros(js.size, dtype=bool)
        if vertical:
            pair_i = sizes[i] == 2 and pts[i, 0] + pts[i, 1] == q
            pair_j = (sizes[js] == 2) & (pts[js, 0] + pts[js, 1] == q)
            if pair_i:
                m = (pts[i, 0] + pts[js, 0]) // 2
                # a vertical pair {m, q - m} separates {a, q - a} and {b, q - b}
                # exactly when m lies strictly between a and b
                lo = np.minimum(pts[i, 0], pts[js, 0])
                hi = np.maximum(pts[i, 0], pts[js, 0])
                done = pair_j & (lo < m) & (m < hi)
        for t in np.nonzero(~done)[0]:
            j = js[t]
            if not _np_any_separator(pts, sizes, valid, i, j):
                return i, j
    return -1, -1


def _np_any_separator(pts, sizes, valid, i, j):
    big = pts[:, :, None]
    ok = valid[:, :, None]
    res = np.ones(pts.shape[0], dtype=bool)
    idx = []
    for c in (i, j):
        x = pts[c, :sizes[c]][None, None, :]
        hit = np.any(ok & (big == x), axis=1).any(axis=1)
        below = np.sum(ok & (big < x), axis=1)
        arc = (below - 1) % sizes[:, None]
        same = np.all(arc == arc[:, :1], axis=1)
        res &= ~hit & same
        idx.append(arc[:, 0])
    res &= idx[0] != idx[1]
    res[i] = False
    res[j] = False
    return bool(np.any(res))


def _py_arc(pts, s, size, x):
    below = 0
    for t in range(size):
        v = pts[s, t]
        if v == x:
            return -1
        if v < x:
            below += 1
    return (below - 1) % size


def _py_separates(pts, sizes, s, a, b):
    first_a = -2
    for t in range(sizes[a]):
        r = _py_arc(pts, s, sizes[s], pts[a, t])
        if r < 0 or (first_a != -2 and r != first_a):
            return False
        first_a = r
    first_b = -2
    for t in range(sizes[b]):
        r = _py_arc(pts, s, sizes[s], pts[b, t])
        if r < 0 or (first_b != -2 and r != first_b):
            return False
        first_b = r
    return first_a != first_b


def _py_first_unseparated(pts, sizes, vertical, q):
    n = pts.shape[0]
    for i in range(n - 1):
        for j in range(i + 1, n):
            if vertical and sizes[i] == 2 and sizes[j] == 2 \
                    and pts[i, 0] + pts[i, 1] == q and pts[j, 0] + pts[j, 1] == q:
                a = pts[i, 0]
                b = pts[j, 0]
                m = (a + b) // 2
                if min(a, b) < m < max(a, b):
                    continue
            found = False
            for s in range(n):
                if s != i and s != j and _py_separates(pts, sizes, s, i, j):
                    found = True
                    break
            if not found:
                return i, j
    return -1, -1


def _np_first_linked(pts, sizes):
    n, k = pts.shape
    valid = np.arange(k)[None, :] < sizes[:, None]
    for i in range(n - 1):
        sep = pts[i, :sizes[i]]
        rest = pts[i + 1:]
        ok = valid[i + 1:]
        hit = np.any(ok[:, :, None] & (rest[:, :, None] == sep[None, None, :]), axis=(1, 2))
        below = np.sum(rest[:, :, None] > sep[None, None, :], axis=2)
        arc = np.where(ok, (below - 1) % sizes[i], -1)
        first = arc[:, :1]
        same = np.all(~ok | (arc == first), axis=1)
        bad = np.nonzero(hit | ~same)[0]
        if bad.size:
            return i, i + 1 + int(bad[0])
    return -1, -1


def _py_first_linked(pts, sizes):
    n = pts.shape[0]
    for i in range(n - 1):
        for j in range(i + 1, n):
            first = -2
            for t in range(sizes[j]):
                r = _py_arc(pts, i, sizes[i], pts[j, t])
                if r < 0 or (first != -2 and r != first):
                    return i, j
                first = r
    return -1, -1


if njit is not None:
    crosses_any = njit(cache=True)(_py_crosses_any)
    crossing_pairs = njit(cache=True)(_py_crossing_pairs)
    # numba resolves helpers by global name, so the helpers are rebound first
    _py_arc = njit(cache=True)(_py_arc)
    _py_separates = njit(cache=True)(_py_separates)
    first_unseparated = njit(cache=True)(_py_first_unseparated)
    first_linked = njit(cache=True)(_py_first_linked)
    BACKEND = "numba"
else:
    crosses_any = _np_crosses_any
    crossing_pairs = _np_crossing_pairs
    first_unseparated = _np_first_unseparated
    first_linked = _np_first_linked

numpy_crosses_any = _np_crosses_any
numpy_crossing_pairs = _np_crossing_pairs
numpy_first_unseparated = _np_first_unseparated
numpy_first_linked = _np_first_linked

"""Pure-Python integer Gauss-Jordan elimination.

Reference backend for :mod:`hoinv.kernels`; the Cython extension implements
the same algorithm on int64 and must return identical results.
"""
from math import gcd


def _content(row):
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                break
    return g


def rref_int(rows, ncols):
    """Row-reduce an integer matrix without leaving the integers.

    Returns ``(reduced, pivots)`` where ``reduced`` holds the nonzero rows of
    the reduced echelon form, each scaled to a primitive integer vector with
    positive pivot, and ``pivots`` the pivot column of each row.
    """
    a = [list(r) for r in rows]
    m = len(a)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        p = -1
        best = 0
        for i in range(r, m):
            v = a[i][c]
            if v:
                av = -v if v < 0 else v
                if p < 0 or av < best:
                    p, best = i, av
        if p < 0:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        prow = a[r]
        if prow[c] < 0:
            prow = a[r] = [-x for x in prow]
        pv = prow[c]
        nz = [j for j in range(ncols) if prow[j]]
        for i in range(m):
            if i == r:
                continue
            row = a[i]
            b = row[c]
            if not b:
                continue
            g = gcd(pv, b)
            ma, mb = pv // g, b // g
            if ma != 1:
                row = [ma * x for x in row]
            for j in nz:
                row[j] -= mb * prow[j]
            g = _content(row)
            if g > 1:
                row = [x // g for x in row]
            a[i] = row
        g = _content(prow)
        if g > 1:
            a[r] = [x // g for x in prow]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def matmul_int(x, y, ncols):
    """Integer product of ``x`` (list of rows) and ``y`` (list of rows, ``ncols`` wide)."""
    out = []
    for row in x:
        acc = [0] * ncols
        for k, v in enumerate(row):
            if v:
                yk = y[k]
                for j in range(ncols):
                    w = yk[j]
                    if w:
                        acc[j] += v * w
        out.append(acc)
    return out

"""Pure-Python elimination kernels.

Reference implementation of the hot elimination loops; ``_kernels.pyx`` mirrors
these functions exactly and is preferred when the extension is built.
"""

from math import lcm


def int_pivots(rows, ncols):
    """Pivot columns of an integer matrix by fraction-free (Bareiss) elimination.

    Columns are scanned left to right and the first remaining row with a
    nonzero entry is taken as pivot, so the returned columns are the greedy
    left-to-right basis of the column family.
    """
    a = [list(r) for r in rows]
    m = len(a)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == m:
            break
        p = r
        while p < m and a[p][c] == 0:
            p += 1
        if p == m:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        row_r = a[r]
        for i in range(r + 1, m):
            row_i = a[i]
            f = row_i[c]
            for j in range(c + 1, ncols):
                row_i[j] = (piv * row_i[j] - f * row_r[j]) // prev
            row_i[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return pivots


def float_pivots(rows, ncols, tol):
    """Pivot columns of a float matrix, partial pivoting, relative threshold.

    An entry counts as zero when ``|v| <= tol * scale`` with ``scale`` the
    largest absolute entry of the input.
    """
    a = [[float(v) for v in r] for r in rows]
    m = len(a)
    scale = 0.0
    for row in a:
        for v in row:
            if abs(v) > scale:
                scale = abs(v)
    thresh = tol * scale
    pivots = []
    if scale == 0.0:
        return pivots
    r = 0
    for c in range(ncols):
        if r == m:
            break
        p = r
        best = abs(a[r][c])
        for i in range(r + 1, m):
            if abs(a[i][c]) > best:
                best = abs(a[i][c])
                p = i
        if best <= thresh:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        row_r = a[r]
        piv = row_r[c]
        for i in range(r + 1, m):
            row_i = a[i]
            f = row_i[c] / piv
            if f != 0.0:
                for j in range(c + 1, ncols):
                    row_i[j] -= f * row_r[j]
            row_i[c] = 0.0
        pivots.append(c)
        r += 1
    return pivots


def rational_pivots(rows, ncols):
    """Pivot columns of a matrix of ``Fraction`` entries.

    Each row is scaled by the lcm of its denominators first; row scaling
    leaves column dependencies unchanged.
    """
    int_rows = []
    for r in rows:
        d = lcm(*(v.denominator for v in r))
        int_rows.append([v.numerator * (d // v.denominator) for v in r])
    return int_pivots(int_rows, ncols)

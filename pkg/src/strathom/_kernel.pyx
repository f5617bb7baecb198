# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled row-reduction kernels.

Two entry points, both mutating `rows` (list of lists) in place and
returning the pivot column list, exactly like the pure-Python core:

* rref_fp    -- GF(p) with p < 2**30, machine-word arithmetic
* rref_frac  -- QQ, fraction-free integer elimination with a per-row
                denominator, normalized back to Fractions at the end

The optional `transform` argument is an identity-seeded square list of
lists receiving the same row operations.
"""

import array
import math
from fractions import Fraction


cdef long long _inv_mod(long long a, long long p):
    cdef long long t = 0, newt = 1
    cdef long long r = p, newr = a % p
    cdef long long q, tmp
    while newr != 0:
        q = r / newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rref_fp(list rows, int ncols, long long p, list transform):
    cdef Py_ssize_t n = len(rows)
    cdef Py_ssize_t i, j
    cdef int c, r, pivot_row
    cdef long long inv, factor, v
    if n == 0 or ncols == 0:
        return []

    data = array.array("q", [0]) * 0
    for i in range(n):
        row = rows[i]
        data.extend([row[j] % p for j in range(ncols)])
    cdef long long[::1] buf = data

    cdef long long[::1] tbuf = None
    tdata = None
    cdef bint with_t = transform is not None
    if with_t:
        tdata = array.array("q", [0]) * 0
        for i in range(n):
            trow = transform[i]
            tdata.extend([trow[j] % p for j in range(n)])
        tbuf = tdata

    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = -1
        for i in range(r, n):
            if buf[i * ncols + c] != 0:
                pivot_row = i
                break
        if pivot_row < 0:
            continue
        if pivot_row != r:
            for j in range(c, ncols):
                v = buf[r * ncols + j]
                buf[r * ncols + j] = buf[pivot_row * ncols + j]
                buf[pivot_row * ncols + j] = v
            if with_t:
                for j in range(n):
                    v = tbuf[r * n + j]
                    tbuf[r * n + j] = tbuf[pivot_row * n + j]
                    tbuf[pivot_row * n + j] = v
        inv = _inv_mod(buf[r * ncols + c], p)
        if inv != 1:
            for j in range(c, ncols):
                buf[r * ncols + j] = (buf[r * ncols + j] * inv) % p
            if with_t:
                for j in range(n):
                    tbuf[r * n + j] = (tbuf[r * n + j] * inv) % p
        for i in range(n):
            if i == r:
                continue
            factor = buf[i * ncols + c]
            if factor == 0:
                continue
            for j in range(c, ncols):
                buf[i * ncols + j] = (buf[i * ncols + j] - factor * buf[r * ncols + j]) % p
            if with_t:
                for j in range(n):
                    tbuf[i * n + j] = (tbuf[i * n + j] - factor * tbuf[r * n + j]) % p
        pivots.append(c)
        r += 1
        if r == n:
            break

    for i in range(n):
        row = rows[i]
        for j in range(ncols):
            row[j] = buf[i * ncols + j] % p
    if with_t:
        for i in range(n):
            trow = transform[i]
            for j in range(n):
                trow[j] = tbuf[i * n + j] % p
    return pivots


cdef object _row_gcd(list row, object den):
    cdef Py_ssize_t j, n = len(row)
    g = den
    for j in range(n):
        x = row[j]
        if x:
            g = math.gcd(g, x)
            if g == 1:
                return 1
    return g


def rref_frac(list rows, int ncols, list transform):
    cdef Py_ssize_t n = len(rows)
    cdef Py_ssize_t i, j, idx
    cdef int c, r, pivot_row
    if n == 0 or ncols == 0:
        return []
    cdef Py_ssize_t tcols = n if transform is not None else 0
    cdef Py_ssize_t width = ncols + tcols
    cdef bint with_t = transform is not None

    # num[i] is the integer row scaled by den[i]: true row = num[i] / den[i]
    num = []
    den = []
    for i in range(n):
        row = rows[i]
        d = 1
        for j in range(ncols):
            d = d // math.gcd(d, row[j].denominator) * row[j].denominator
        if with_t:
            trow = transform[i]
            for j in range(tcols):
                d = d // math.gcd(d, trow[j].denominator) * trow[j].denominator
        ints = [row[j].numerator * (d // row[j].denominator) for j in range(ncols)]
        if with_t:
            trow = transform[i]
            ints.extend(trow[j].numerator * (d // trow[j].denominator) for j in range(tcols))
        num.append(ints)
        den.append(d)

    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = -1
        for i in range(r, n):
            if num[i][c] != 0:
                pivot_row = i
                break
        if pivot_row < 0:
            continue
        if pivot_row != r:
            num[r], num[pivot_row] = num[pivot_row], num[r]
            den[r], den[pivot_row] = den[pivot_row], den[r]
        prow = num[r]
        pval = prow[c]
        for i in range(n):
            if i == r:
                continue
            irow = num[i]
            factor = irow[c]
            if factor == 0:
                continue
            for j in range(width):
                irow[j] = irow[j] * pval - prow[j] * factor
            den[i] = den[i] * pval
            g = _row_gcd(irow, den[i])
            if g > 1:
                for j in range(width):
                    irow[j] = irow[j] // g
                den[i] = den[i] // g
        pivots.append(c)
        r += 1
        if r == n:
            break

    cdef Py_ssize_t rank = len(pivots)
    for idx in range(n):
        irow = num[idx]
        if idx < rank:
            d = irow[pivots[idx]]
        else:
            d = den[idx]
        row = rows[idx]
        for j in range(ncols):
            row[j] = Fraction(irow[j], d)
        if with_t:
            trow = transform[idx]
            for j in range(tcols):
                trow[j] = Fraction(irow[ncols + j], d)
    return pivots

# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled field kernels for moduli below 62 bits.

Same API as `mith._purecore`; products are taken in 128-bit
intermediates, so callers must keep p < 2^62 (enforced by
`mith._core.ops_for`).
"""

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

ctypedef unsigned long long u64
ctypedef long long i64

BACKEND = "cython"

MAX_MODULUS_BITS = 62


cdef inline u64 _addmod(u64 a, u64 b, u64 p) nogil:
    cdef u64 s = a + b
    return s - p if s >= p else s


cdef inline u64 _submod(u64 a, u64 b, u64 p) nogil:
    return a - b + p if a < b else a - b


cdef inline u64 _mulmod(u64 a, u64 b, u64 p) nogil:
    return <u64>((<u128>a * b) % p)


cdef u64 _invmod(u64 a, u64 p) except? 0:
    # Extended Euclid on signed 64-bit; p < 2^62 keeps coefficients in range.
    cdef i64 t = 0, newt = 1, r = <i64>p, newr = <i64>(a % p), q, tmp
    if newr == 0:
        raise ZeroDivisionError("inverse of zero")
    while newr != 0:
        q = r / newr
        tmp = t - q * newt; t = newt; newt = tmp
        tmp = r - q * newr; r = newr; newr = tmp
    if t < 0:
        t += <i64>p
    return <u64>t


cdef inline u64 _poly2(u64 c0, u64 c1, u64 c2, u64 x, u64 p) nogil:
    return _addmod(c0, _mulmod(x, _addmod(c1, _mulmod(x, c2, p), p), p), p)


def addmod(a, b, p):
    return _addmod(a, b, p)


def submod(a, b, p):
    return _submod(a, b, p)


def mulmod(a, b, p):
    return _mulmod(a, b, p)


def invmod(a, p):
    return _invmod(a, p)


def poly2_eval(c0, c1, c2, x, p):
    return _poly2(c0, c1, c2, x, p)


def share5(s, a1, a2, p):
    cdef u64 cs = s, c1 = a1, c2 = a2, cp = p
    return (_poly2(cs, c1, c2, 1, cp), _poly2(cs, c1, c2, 2, cp),
            _poly2(cs, c1, c2, 3, cp), _poly2(cs, c1, c2, 4, cp),
            _poly2(cs, c1, c2, 5, cp))


def dot5(w, y, p):
    cdef u64 cp = p, acc = 0
    cdef int i
    for i in range(5):
        acc = _addmod(acc, _mulmod(w[i], y[i], cp), cp)
    return acc


def lagrange_weights(xs, p):
    cdef u64 cp = p, num, den, xi, xj
    cdef int n = len(xs), i, j
    out = []
    for i in range(n):
        xi = xs[i]
        num = 1
        den = 1
        for j in range(n):
            if j != i:
                xj = xs[j]
                num = _mulmod(num, xj, cp)
                den = _mulmod(den, _submod(xj, xi, cp), cp)
        out.append(_mulmod(num, _invmod(den, cp), cp))
    return tuple(out)


def lagrange_at_zero(xs, ys, p):
    cdef u64 cp = p, acc = 0
    cdef int i
    ws = lagrange_weights(xs, p)
    for i in range(len(xs)):
        acc = _addmod(acc, _mulmod(ws[i], ys[i], cp), cp)
    return acc


def mul_gate5(l, r, b1, b2, lam, p):
    cdef u64 cp = p, d
    cdef u64[5][5] rows
    cdef u64[5] cl, cr, cb1, cb2, clam, out
    cdef int k, q
    for k in range(5):
        cl[k] = l[k]; cr[k] = r[k]; cb1[k] = b1[k]; cb2[k] = b2[k]; clam[k] = lam[k]
    for k in range(5):
        d = _mulmod(cl[k], cr[k], cp)
        for q in range(5):
            rows[k][q] = _poly2(d, cb1[k], cb2[k], q + 1, cp)
    for q in range(5):
        out[q] = 0
        for k in range(5):
            out[q] = _addmod(out[q], _mulmod(clam[k], rows[k][q], cp), cp)
    py_rows = tuple(tuple(rows[k][q] for q in range(5)) for k in range(5))
    return py_rows, tuple(out[q] for q in range(5))


def refresh5(shares, c1, c2, p):
    cdef u64 cp = p
    cdef u64[5][5] rows
    cdef u64[5] csh, cc1, cc2, ref
    cdef int k, q
    for k in range(5):
        csh[k] = shares[k]; cc1[k] = c1[k]; cc2[k] = c2[k]
    for k in range(5):
        for q in range(5):
            rows[k][q] = _poly2(0, cc1[k], cc2[k], q + 1, cp)
    for q in range(5):
        ref[q] = csh[q]
        for k in range(5):
            ref[q] = _addmod(ref[q], rows[k][q], cp)
    py_rows = tuple(tuple(rows[k][q] for q in range(5)) for k in range(5))
    return py_rows, tuple(ref[q] for q in range(5))

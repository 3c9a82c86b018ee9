"""Pure-Python field kernels.

Fallback implementation of the hot inner loops (modular arithmetic,
degree-2 polynomial sharing, Lagrange recombination, the BGW
multiplication and refresh rounds).  `mith._fastcore` provides the same
API compiled with Cython for moduli that fit in 62 bits; backend choice
happens in `mith._core`.

All functions take and return plain ints reduced mod p.  Party k
(1-based) corresponds to index k-1 in every 5-tuple.
"""

BACKEND = "pure"

# No width restriction: Python ints are arbitrary precision.
MAX_MODULUS_BITS = None


def addmod(a, b, p):
    return (a + b) % p


def submod(a, b, p):
    return (a - b) % p


def mulmod(a, b, p):
    return (a * b) % p


def invmod(a, p):
    if a % p == 0:
        raise ZeroDivisionError("inverse of zero")
    return pow(a, -1, p)


def poly2_eval(c0, c1, c2, x, p):
    """c0 + c1*x + c2*x^2 mod p."""
    return (c0 + x * (c1 + x * c2)) % p


def share5(s, a1, a2, p):
    """Evaluate s + a1*x + a2*x^2 at x = 1..5."""
    return tuple((s + x * (a1 + x * a2)) % p for x in (1, 2, 3, 4, 5))


def dot5(w, y, p):
    return (w[0] * y[0] + w[1] * y[1] + w[2] * y[2] + w[3] * y[3] + w[4] * y[4]) % p


def lagrange_weights(xs, p):
    """Lagrange coefficients at 0 for pairwise-distinct nonzero points."""
    ws = []
    for i, xi in enumerate(xs):
        num = 1
        den = 1
        for j, xj in enumerate(xs):
            if j != i:
                num = num * xj % p
                den = den * (xj - xi) % p
        ws.append(num * pow(den, -1, p) % p)
    return tuple(ws)


def lagrange_at_zero(xs, ys, p):
    ws = lagrange_weights(xs, p)
    return sum(w * y for w, y in zip(ws, ys)) % p


def mul_gate5(l, r, b1, b2, lam, p):
    """One BGW multiplication round.

    Party k holds product share l[k]*r[k] (a degree-4 point) and reshares
    it with the fresh degree-2 polynomial (b1[k], b2[k]).  rows[k][q] is
    the value party k+1 sends to party q+1; the output share of party q
    recombines the incoming column with the degree-4 weights lam.
    Returns (rows, out_shares).
    """
    rows = []
    for k in range(5):
        d = l[k] * r[k] % p
        rows.append(share5(d, b1[k], b2[k], p))
    out = tuple(
        (lam[0] * rows[0][q] + lam[1] * rows[1][q] + lam[2] * rows[2][q]
         + lam[3] * rows[3][q] + lam[4] * rows[4][q]) % p
        for q in range(5)
    )
    return tuple(rows), out


def refresh5(shares, c1, c2, p):
    """Re-randomize a sharing by adding five fresh sharings of zero.

    rows[k][q] = party k+1's zero-share contribution sent to party q+1.
    Returns (rows, refreshed_shares).
    """
    rows = tuple(share5(0, c1[k], c2[k], p) for k in range(5))
    refreshed = tuple(
        (shares[q] + rows[0][q] + rows[1][q] + rows[2][q] + rows[3][q] + rows[4][q]) % p
        for q in range(5)
    )
    return rows, refreshed

"""Exact integer and rational linear algebra.

Everything runs on arbitrary-precision Python ints and fractions.Fraction;
there is no floating point anywhere in the engine.
"""

from fractions import Fraction
from math import gcd


def gcd_list(values):
    g = 0
    for v in values:
        g = gcd(g, abs(v))
    return g


def primitive(v):
    """Divide a nonzero integer vector by the gcd of its entries."""
    g = gcd_list(v)
    if g == 0:
        raise ValueError("not a direction")
    return tuple(x // g for x in v)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(c, a):
    return tuple(c * x for x in a)


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_vec(M, v):
    return tuple(dot(row, v) for row in M)


def mat_mul(A, B):
    n = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(n)]
            for i in range(len(A))]


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def smith_normal_form(A):
    """Smith normal form with transformations.

    Returns (S, U, V) with U*A*V = S, S diagonal with d_i | d_{i+1} and
    d_i >= 0, and U, V unimodular.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    S = [list(row) for row in A]
    U = identity_matrix(m)
    V = identity_matrix(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in S:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        # row dst += q * row src
        S[dst] = [a + q * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for r in S:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    def negate_row(i):
        S[i] = [-a for a in S[i]]
        U[i] = [-a for a in U[i]]

    t = 0
    while t < min(m, n):
        pi = pj = -1
        pv = 0
        for i in range(t, m):
            for j in range(t, n):
                a = abs(S[i][j])
                if a and (pv == 0 or a < pv):
                    pi, pj, pv = i, j, a
        if pv == 0:
            break
        swap_rows(t, pi)
        swap_cols(t, pj)
        if S[t][t] < 0:
            negate_row(t)
        while True:
            restart = False
            for i in range(t + 1, m):
                if S[i][t]:
                    q = S[i][t] // S[t][t]
                    add_row(i, t, -q)
                    if S[i][t]:
                        swap_rows(t, i)
                        if S[t][t] < 0:
                            negate_row(t)
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, n):
                if S[t][j]:
                    q = S[t][j] // S[t][t]
                    add_col(j, t, -q)
                    if S[t][j]:
                        swap_cols(t, j)
                        if S[t][t] < 0:
                            negate_row(t)
                        restart = True
                        break
            if restart:
                continue
            # pivot must divide the remaining block for the divisor chain
            merged = False
            for i in range(t + 1, m):
                if any(S[i][j] % S[t][t] for j in range(t + 1, n)):
                    add_row(t, i, 1)
                    merged = True
                    break
            if not merged:
                break
        t += 1
    return S, U, V


def snf_diagonal(A):
    """The invariant factors of an integer matrix (nonzero diagonal of its SNF)."""
    S, _, _ = smith_normal_form(A)
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i]]


def int_rank(A):
    return len(snf_diagonal(A))


def int_kernel(A):
    """Basis of the saturated integer kernel {x : A x = 0}, as a list of vectors."""
    m = len(A)
    n = len(A[0]) if m else 0
    if n == 0:
        return []
    if m == 0:
        return [tuple(row) for row in identity_matrix(n)]
    S, _, V = smith_normal_form(A)
    r = len([i for i in range(min(m, n)) if S[i][i]])
    cols = transpose(V)
    return [tuple(cols[j]) for j in range(r, n)]


def solve_integer(A, b):
    """An integer solution of A x = b, or None."""
    m = len(A)
    n = len(A[0]) if m else 0
    S, U, V = smith_normal_form(A)
    ub = mat_vec(U, b)
    y = [0] * n
    for i in range(m):
        d = S[i][i] if i < min(m, n) else 0
        if d:
            if ub[i] % d:
                return None
            y[i] = ub[i] // d
        elif ub[i]:
            return None
    return mat_vec(V, y)


def solve_rational(A, b):
    """Exact solution set of A x = b over the rationals.

    Returns (particular, kernel_basis) with Fraction entries, or None when the
    system is inconsistent. Free variables are set to zero in the particular
    solution; the kernel basis has one vector per free variable.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[Fraction(x) for x in row] + [Fraction(bv)] for row, bv in zip(A, b)]
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if M[i][c]), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        pv = M[r][c]
        M[r] = [x / pv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if M[i][n]:
            return None
    particular = [Fraction(0)] * n
    for k, c in enumerate(pivots):
        particular[c] = M[k][n]
    free = [c for c in range(n) if c not in pivots]
    kernel = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for k, c in enumerate(pivots):
            v[c] = -M[k][fc]
        kernel.append(tuple(v))
    return tuple(particular), kernel


def rational_rank(A):
    """Rank of a matrix with Fraction/int entries, by Gaussian elimination."""
    M = [[Fraction(x) for x in row] for row in A]
    m = len(M)
    n = len(M[0]) if m else 0
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if M[i][c]), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        pv = M[r][c]
        for i in range(r + 1, m):
            if M[i][c]:
                f = M[i][c] / pv
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        r += 1
        if r == m:
            break
    return r


def det_int(A):
    """Determinant of a square integer matrix (Bareiss fraction-free)."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(row) for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if M[i][k]), None)
            if piv is None:
                return 0
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def invert_unimodular(A):
    """Inverse of a unimodular integer matrix, as an integer matrix."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    aug = [row + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
           for i, row in enumerate(M)]
    for c in range(n):
        pr = next(i for i in range(c, n) if aug[i][c])
        aug[c], aug[pr] = aug[pr], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    inv = [[aug[i][n + j] for j in range(n)] for i in range(n)]
    out = []
    for row in inv:
        irow = []
        for x in row:
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
            irow.append(int(x))
        out.append(irow)
    return out


def adapted_basis(vectors, n):
    """A basis of Z^n adapted to the saturation of span(vectors).

    Returns (W, r): W is a unimodular matrix whose first r rows are a basis of
    the saturated sublattice span(vectors) & Z^n and whose remaining rows
    complete it to a basis of Z^n.
    """
    rows = [list(v) for v in vectors]
    if not rows:
        return identity_matrix(n), 0
    S, _, V = smith_normal_form(rows)
    r = len([i for i in range(min(len(rows), n)) if S[i][i]])
    W = invert_unimodular(V)
    return W, r


def coords_in_basis(W, v):
    """Coordinates of integer vector v in the basis given by the rows of W."""
    Vt = invert_unimodular(W)
    # v = c @ W, so c = v @ W^{-1}
    return tuple(sum(v[i] * Vt[i][j] for i in range(len(v))) for j in range(len(v)))


def lcm_list(values):
    out = 1
    for v in values:
        v = abs(v)
        if v:
            out = out * v // gcd(out, v)
    return out

"""Exact linear inequality systems: feasibility, boundedness, lattice points.

A system is a conjunction of rows <a, x> >= c or <a, x> > c with rational
data. Rows are normalized to integer form. Feasibility and witnesses come
from Fourier-Motzkin elimination, which handles strict rows natively.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

from .linalg import gcd_list, lcm_list


def make_row(coeffs, const, strict=False):
    """Normalize a row <coeffs, x> >= const (or >) to coprime integer data."""
    fr = [Fraction(c) for c in coeffs] + [Fraction(const)]
    den = lcm_list([f.denominator for f in fr])
    ints = [int(f * den) for f in fr]
    g = gcd_list(ints)
    if g:
        ints = [x // g for x in ints]
    return tuple(ints[:-1]), ints[-1], bool(strict)


@dataclass(frozen=True)
class IneqSystem:
    """Rows (a, c, strict) meaning <a, x> >= c, or > c when strict."""

    dim: int
    rows: tuple

    @staticmethod
    def build(dim, triples):
        rows = tuple(make_row(a, c, s) for a, c, s in triples)
        for a, _, _ in rows:
            if len(a) != dim:
                raise ValueError("covector length does not match ambient rank")
        return IneqSystem(dim, rows)


def _trivial_row_ok(c, strict):
    # row 0 >= c (or >): holds iff c <= 0 (resp. < 0)
    return c < 0 if strict else c <= 0


def _eliminate(rows, k):
    """Project away variable k (exact Fourier-Motzkin step)."""
    lows, ups, rest = [], [], []
    for a, c, s in rows:
        if a[k] > 0:
            lows.append((a, c, s))
        elif a[k] < 0:
            ups.append((a, c, s))
        else:
            rest.append((a, c, s))
    out = set(rest)
    for al, cl, sl in lows:
        p = al[k]
        for au, cu, su in ups:
            q = -au[k]
            a = tuple(q * x + p * y for x, y in zip(al, au))
            c = q * cl + p * cu
            g = gcd_list(list(a) + [c])
            if g:
                a = tuple(x // g for x in a)
                c = c // g
            out.add((a, c, sl or su))
    return sorted(out)


def _levels(sys):
    """levels[k] involves only variables < k; levels[n] is the input rows."""
    n = sys.dim
    levels = [None] * (n + 1)
    levels[n] = list(sys.rows)
    for k in range(n - 1, -1, -1):
        levels[k] = _eliminate(levels[k + 1], k)
    return levels


def _level_ok(rows):
    return all(_trivial_row_ok(c, s) for a, c, s in rows if not any(a))


def _bounds_at(levels, k, x):
    """Bounds on variable k given chosen values x[0..k-1]."""
    lo = hi = None
    lo_s = hi_s = False
    for a, c, s in levels[k + 1]:
        if a[k] == 0:
            continue
        residual = Fraction(c - sum(a[i] * x[i] for i in range(k)), a[k])
        if a[k] > 0:
            if lo is None or residual > lo:
                lo, lo_s = residual, s
            elif residual == lo:
                lo_s = lo_s or s
        else:
            if hi is None or residual < hi:
                hi, hi_s = residual, s
            elif residual == hi:
                hi_s = hi_s or s
    return lo, lo_s, hi, hi_s


def _pick(lo, lo_s, hi, hi_s):
    def ok(t):
        if lo is not None and (t < lo or (t == lo and lo_s)):
            return False
        if hi is not None and (t > hi or (t == hi and hi_s)):
            return False
        return True

    if ok(Fraction(0)):
        return Fraction(0)
    if lo is None:
        return hi - 1 if hi_s else hi
    if hi is None:
        return lo + 1 if lo_s else lo
    if lo == hi:
        return lo
    return (lo + hi) / 2


def feasible(sys):
    """An exact rational witness satisfying every row, or None."""
    levels = _levels(sys)
    for k in range(sys.dim + 1):
        if not _level_ok(levels[k]):
            return None
    x = []
    for k in range(sys.dim):
        lo, lo_s, hi, hi_s = _bounds_at(levels, k, x)
        x.append(_pick(lo, lo_s, hi, hi_s))
    return tuple(x)


def _recession_rows(sys):
    return tuple((a, 0, False) for a, c, s in sys.rows)


def _unit(k, n, sgn=1):
    return tuple(sgn if i == k else 0 for i in range(n))


def is_bounded(sys):
    """Whether the closure of the solution set is bounded.

    Raises on an infeasible input. The recession cone of the weak closure is
    probed against every +-coordinate direction.
    """
    if feasible(sys) is None:
        raise ValueError("empty region")
    return recession_direction(sys) is None


def recession_direction(sys):
    """A nonzero integer recession direction of the weak closure, or None."""
    rec = _recession_rows(sys)
    n = sys.dim
    for k in range(n):
        for sgn in (1, -1):
            probe = IneqSystem(n, rec + ((_unit(k, n, sgn), 1, False),))
            w = feasible(probe)
            if w is not None:
                den = lcm_list([f.denominator for f in w])
                v = [int(f * den) for f in w]
                g = gcd_list(v)
                return tuple(x // g for x in v)
    return None


def _int_low(v, strict):
    return floor(v) + 1 if strict else ceil(v)


def _int_high(v, strict):
    return ceil(v) - 1 if strict else floor(v)


def lattice_points(sys):
    """All integer points of a bounded region, in lexicographic order."""
    if feasible(sys) is None:
        return []
    if not is_bounded(sys):
        raise ValueError("unbounded region")
    levels = _levels(sys)
    n = sys.dim
    out = []

    def rec(k, x):
        if k == n:
            out.append(tuple(x))
            return
        lo, lo_s, hi, hi_s = _bounds_at(levels, k, x)
        if lo is None or hi is None:
            raise ValueError("unbounded region")
        for v in range(_int_low(lo, lo_s), _int_high(hi, hi_s) + 1):
            rec(k + 1, x + [v])

    rec(0, [])
    return out


def count_lattice_points(sys):
    return len(lattice_points(sys))


def has_lattice_point(sys):
    """Integer feasibility of a possibly unbounded rational region.

    Splits off an integer recession direction via a unimodular change of
    coordinates and projects; the projection is handled recursively until the
    remaining region is bounded.
    """
    from .linalg import adapted_basis

    if feasible(sys) is None:
        return False
    n = sys.dim
    if n == 0:
        return True
    d = recession_direction(sys)
    if d is None:
        levels = _levels(sys)

        def search(k, x):
            if k == n:
                return True
            lo, lo_s, hi, hi_s = _bounds_at(levels, k, x)
            for v in range(_int_low(lo, lo_s), _int_high(hi, hi_s) + 1):
                if search(k + 1, x + [v]):
                    return True
            return False

        return search(0, [])
    W, _ = adapted_basis([d], n)
    # x = sum_j y_j W[j]; y integral iff x integral, and +y_0 runs along d,
    # so the y_0 interval over any feasible projection point is infinite
    new_rows = []
    for a, c, s in sys.rows:
        a2 = tuple(sum(a[i] * W[j][i] for i in range(n)) for j in range(n))
        new_rows.append((a2, c, s))
    projected = _eliminate(new_rows, 0)
    if n == 1:
        return _level_ok(projected)
    sub = IneqSystem(n - 1, tuple((a[1:], c, s) for a, c, s in projected))
    return has_lattice_point(sub)


def subtract_cones(dim, base_rows, cone_hreps):
    """A witness in the base region outside every listed cone, or None.

    base_rows are normalized row triples; each cone is (ineqs, eqs) lists of
    integer covectors. Decides exact covering of a region by cones via the
    disjoint set-difference decomposition over each cone's halfspaces.
    """
    pieces = [list(base_rows)]
    for ineqs, eqs in cone_hreps:
        halfspaces = [tuple(w) for w in ineqs]
        for e in eqs:
            halfspaces.append(tuple(e))
            halfspaces.append(tuple(-x for x in e))
        new_pieces = []
        for piece in pieces:
            prefix = []
            for h in halfspaces:
                cand = piece + prefix + [(tuple(-x for x in h), 0, True)]
                if feasible(IneqSystem(dim, tuple(cand))) is not None:
                    new_pieces.append(cand)
                prefix.append((h, 0, False))
        pieces = new_pieces
        if not pieces:
            return None
    return feasible(IneqSystem(dim, tuple(pieces[0])))

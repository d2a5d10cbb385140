"""Exact Phase-I simplex for feasibility in nonnegative variables.

Used for cone membership tests, where the natural variables (coefficients of
generators) are already sign-constrained. Bland's rule guarantees termination.
"""

from fractions import Fraction


def standard_feasible(A, b):
    """A point x >= 0 with A x = b, or None.

    A is a list of m rows of length n (ints or Fractions), b a length-m vector.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return tuple(Fraction(0) for _ in range(n))
    T = []
    rhs = []
    for i in range(m):
        row = [Fraction(x) for x in A[i]]
        bv = Fraction(b[i])
        if bv < 0:
            row = [-x for x in row]
            bv = -bv
        T.append(row + [Fraction(1) if j == i else Fraction(0) for j in range(m)])
        rhs.append(bv)
    total = n + m
    basis = list(range(n, total))
    cost = [Fraction(0)] * n + [Fraction(1)] * m

    while True:
        # price out: y solves y B = c_B sequentially via the tableau being
        # kept in basis-canonical form, so reduced costs read off directly
        reduced = []
        for j in range(total):
            rc = cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(m))
            reduced.append(rc)
        enter = next((j for j in range(total) if reduced[j] < 0), None)
        if enter is None:
            break
        ratios = [(rhs[i] / T[i][enter], basis[i], i)
                  for i in range(m) if T[i][enter] > 0]
        if not ratios:
            raise RuntimeError("phase-I objective unbounded")  # cannot happen
        _, _, leave = min(ratios)
        piv = T[leave][enter]
        T[leave] = [x / piv for x in T[leave]]
        rhs[leave] /= piv
        for i in range(m):
            if i != leave and T[i][enter]:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[leave])]
                rhs[i] -= f * rhs[leave]
        basis[leave] = enter

    total_cost = sum(cost[basis[i]] * rhs[i] for i in range(m))
    if total_cost != 0:
        return None
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = rhs[i]
    return tuple(x)


def in_cone(v, generators):
    """Whether v is a nonnegative rational combination of the generators."""
    if not generators:
        return all(x == 0 for x in v)
    n = len(v)
    A = [[g[i] for g in generators] for i in range(n)]
    return standard_feasible(A, list(v)) is not None

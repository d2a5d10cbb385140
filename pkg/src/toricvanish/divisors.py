"""Torus-invariant divisors: Cartier data, positivity, klt pairs, discrepancies.

A divisor on a fan is a tuple of exact rational coefficients, one per ray in
the fan's ray order. Transfers between fans always match rays by value, never
by index.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

from .fans import Fan, _cone_hrep, cone_contains, is_complete, is_simplicial, support_is_convex
from .linalg import (
    adapted_basis,
    dot,
    int_rank,
    invert_unimodular,
    lcm_list,
    solve_rational,
)
from .regions import IneqSystem, count_lattice_points, feasible, has_lattice_point, is_bounded, make_row


def coeffs_of(fan, mapping, default=Fraction(0)):
    """Divisor from a {ray vector: coefficient} mapping."""
    return tuple(Fraction(mapping.get(r, default)) for r in fan.rays)


def ray_divisor(fan, ray):
    """The prime divisor attached to one ray."""
    idx = fan.ray_index(ray)
    return tuple(Fraction(1) if i == idx else Fraction(0) for i in range(len(fan.rays)))


def canonical(fan):
    """K = -(sum of all prime torus-invariant divisors)."""
    return tuple(Fraction(-1) for _ in fan.rays)


def principal(fan, m):
    """div(m) = sum <m, u_rho> D_rho for a rational covector m."""
    return tuple(Fraction(dot(m, r)) for r in fan.rays)


def add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a):
    return tuple(Fraction(c) * x for x in a)


def round_divisor(coeffs, direction):
    """Coefficientwise ceiling ('up') or floor ('down')."""
    if direction == "up":
        return tuple(Fraction(ceil(x)) for x in coeffs)
    if direction == "down":
        return tuple(Fraction(floor(x)) for x in coeffs)
    raise ValueError("direction must be 'up' or 'down'")


@dataclass(frozen=True)
class CartierData:
    """One rational covector per maximal cone: <m_sigma, u_rho> = -a_rho on sigma."""

    covectors: tuple


@dataclass(frozen=True)
class NotQCartier:
    cone_index: int


def cartier_data(fan, coeffs):
    """Solve the per-cone linear systems; NotQCartier carries the witness cone.

    On cones of less-than-full dimension the covector is the canonical one
    vanishing on an adapted-basis complement of the cone's saturated span.
    """
    covectors = []
    for ci, cone in enumerate(fan.max_cones):
        rays = [fan.rays[i] for i in cone]
        rhs = [-coeffs[i] for i in cone]
        sol = solve_rational([list(r) for r in rays], rhs)
        if sol is None:
            return NotQCartier(ci)
        particular, kernel = sol
        if not kernel:
            covectors.append(tuple(particular))
            continue
        # canonical representative: vanishes on the adapted-basis complement
        # of the cone's saturated span
        W, r_span = adapted_basis(rays, fan.rank)
        Winv = invert_unimodular(W)
        coords = [[sum(ray[i] * Winv[i][j] for i in range(fan.rank))
                   for j in range(r_span)] for ray in rays]
        sub_sol = solve_rational(coords, rhs)
        assert sub_sol is not None
        z = sub_sol[0]
        m = tuple(sum(z[j] * Winv[i][j] for j in range(r_span))
                  for i in range(fan.rank))
        covectors.append(m)
    return CartierData(tuple(covectors))


def support_value(fan, cd, v):
    """Value of the divisor's support function at v: phi_D(v) = -<m_sigma, v>."""
    for cone, m in zip(fan.max_cones, cd.covectors):
        if cone_contains(fan, cone, v):
            return -Fraction(dot(m, v))
    raise ValueError("point outside the support")


@dataclass(frozen=True)
class Positivity:
    nef: bool
    ample: bool
    big: bool


def _section_rows(fan, coeffs):
    return [make_row(r, -coeffs[i]) for i, r in enumerate(fan.rays)]


def section_system(fan, coeffs):
    """P_D = {m : <m, u_rho> >= -a_rho for every ray}."""
    return IneqSystem(fan.rank, tuple(_section_rows(fan, coeffs)))


def polytope_dim(fan, coeffs):
    """Dimension of P_D (-1 when empty), via implicit-equality detection."""
    sys = section_system(fan, coeffs)
    if feasible(sys) is None:
        return -1
    implicit = []
    for i, row in enumerate(sys.rows):
        a, c, _ = row
        probe = IneqSystem(fan.rank, sys.rows + ((a, c, True),))
        if feasible(probe) is None:
            implicit.append(list(a))
    if not implicit:
        return fan.rank
    from .linalg import rational_rank

    return fan.rank - rational_rank(implicit)


def positivity(fan, coeffs, cd=None):
    """Nef/ample/big verdicts for a Q-Cartier divisor."""
    if cd is None:
        cd = cartier_data(fan, coeffs)
    if isinstance(cd, NotQCartier):
        raise ValueError(f"not Q-Cartier (cone {cd.cone_index})")
    nef = True
    # fans with a torus factor admit no strictly convex support function
    full_span = bool(fan.rays) and int_rank([list(r) for r in fan.rays]) == fan.rank
    ample = (len(set(cd.covectors)) == len(cd.covectors)
             and bool(fan.max_cones) and full_span)
    for cone, m in zip(fan.max_cones, cd.covectors):
        for i, ray in enumerate(fan.rays):
            val = Fraction(dot(m, ray))
            if val < -coeffs[i]:
                nef = False
                ample = False
            elif i not in cone and val == -coeffs[i]:
                ample = False
    big = polytope_dim(fan, coeffs) == fan.rank
    return Positivity(nef=nef, ample=ample and nef, big=big)


@dataclass(frozen=True)
class SemiampleWitness:
    multiple: int
    sections: tuple  # one lattice covector per maximal cone, in l*P_{lD}


@dataclass(frozen=True)
class NotNef:
    cone_index: int
    ray_index: int


def semiample_witness(fan, coeffs):
    """Base-point-freeness certificate for a nef divisor (a multiple of it)."""
    cd = cartier_data(fan, coeffs)
    if isinstance(cd, NotQCartier):
        raise ValueError(f"not Q-Cartier (cone {cd.cone_index})")
    for ci, (cone, m) in enumerate(zip(fan.max_cones, cd.covectors)):
        for i, ray in enumerate(fan.rays):
            if Fraction(dot(m, ray)) < -coeffs[i]:
                return NotNef(ci, i)
    dens = [x.denominator for m in cd.covectors for x in m]
    dens += [c.denominator for c in coeffs]
    ell = lcm_list(dens) if dens else 1
    sections = []
    for m in cd.covectors:
        lm = tuple(int(x * ell) for x in m)
        for i, ray in enumerate(fan.rays):
            assert Fraction(dot(lm, ray)) >= -ell * coeffs[i]
        sections.append(lm)
    return SemiampleWitness(ell, tuple(sections))


def klt_check(fan, b_coeffs):
    """Toric klt criterion: K+B Q-Cartier and every coefficient in [0, 1)."""
    for i, b in enumerate(b_coeffs):
        if not (0 <= b < 1):
            return False, f"coefficient {b} at ray {fan.rays[i]} not in [0, 1)"
    cd = cartier_data(fan, add(canonical(fan), b_coeffs))
    if isinstance(cd, NotQCartier):
        return False, f"K+B not Q-Cartier on cone {fan.max_cones[cd.cone_index]}"
    return True, "ok"


def discrepancy(fan, b_coeffs, v):
    """Discrepancy of the pair at the divisorial valuation of v in |Sigma|.

    a(v) = -1 + phi(v) for the piecewise-linear phi with phi(u_rho) = 1 - b_rho.
    For v equal to a ray the answer is -b_rho.
    """
    v = tuple(v)
    if v in fan.rays:
        return -b_coeffs[fan.ray_index(v)]
    minus_k_b = tuple(Fraction(1) - b for b in b_coeffs)
    cd = cartier_data(fan, minus_k_b)
    if isinstance(cd, NotQCartier):
        raise ValueError("K+B is not Q-Cartier")
    return Fraction(-1) + support_value(fan, cd, v)


def pullback(m, coeffs):
    """Pullback of a Q-Cartier divisor along a toric morphism m (target -> source)."""
    tgt = m.target
    cd = cartier_data(tgt, coeffs)
    if isinstance(cd, NotQCartier):
        raise ValueError("pullback needs a Q-Cartier divisor")
    out = []
    for ray in m.source.rays:
        image = m.apply(ray)
        out.append(support_value(tgt, cd, image))
    return tuple(out)


def pushforward(m, coeffs):
    """Restrict coefficients to the target's rays, matched through the map."""
    src, tgt = m.source, m.target
    images = {}
    for i, ray in enumerate(src.rays):
        img = m.apply(ray)
        if any(img):
            images[tuple(img)] = coeffs[i]
    out = []
    for ray in tgt.rays:
        if ray not in images:
            raise ValueError(f"target ray {ray} is not the image of a source ray")
        out.append(images[ray])
    return tuple(out)


ZERO = "zero"
INFINITE = "infinite"


def h0_dim(fan, coeffs):
    """dim H^0 = #(P_D & M): a count, 'zero', or 'infinite'."""
    sys = section_system(fan, coeffs)
    if not has_lattice_point(sys):
        return ZERO
    if feasible(sys) is not None and is_bounded(sys):
        n = count_lattice_points(sys)
        return n if n else ZERO
    return INFINITE


def q_cartier_index(fan, coeffs):
    """Smallest l >= 1 with l*D Cartier, or None if not Q-Cartier."""
    cd = cartier_data(fan, coeffs)
    if isinstance(cd, NotQCartier):
        return None
    dens = [x.denominator for m in cd.covectors for x in m]
    dens += [c.denominator for c in coeffs]
    return lcm_list(dens) if dens else 1

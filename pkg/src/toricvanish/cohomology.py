"""Combinatorial sheaf cohomology of torus-invariant divisors.

The degree-m piece of H^p(X, O(D)) on a simplicial fan is the reduced
(co)homology in degree p-1 of the full subcomplex of the incidence complex
induced on the rays where the section inequality <m, u_rho> >= -a_rho fails.
Chambers of constant sign pattern are enumerated exactly; homology is read
off integer boundary matrices once and reduced to any coefficient field via
their invariant factors (Q: nonzero ones; F_p: those not divisible by p).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .fans import incidence_complex, is_complete, is_simplicial
from .linalg import dot, snf_diagonal
from .regions import (
    IneqSystem,
    feasible,
    has_lattice_point,
    is_bounded,
    lattice_points,
    make_row,
)


def parse_field(name):
    """'q' -> None (rationals), 'f<p>' -> the prime p."""
    if name in (None, "q", "Q"):
        return None
    s = str(name).lower()
    if s.startswith("f") and s[1:].isdigit():
        p = int(s[1:])
        if p >= 2:
            return p
    raise ValueError(f"unknown field {name!r}")


def field_name(field):
    return "q" if field is None else f"f{field}"


def neg_complex(fan, neg):
    """Maximal faces of the full subcomplex induced on the given ray set."""
    ic = incidence_complex(fan)
    neg = frozenset(neg)
    faces = {tuple(sorted(set(f) & neg)) for f in ic.facets}
    faces = {f for f in faces}
    maximal = [f for f in faces
               if not any(f != g and set(f) <= set(g) for g in faces)]
    return tuple(sorted(f for f in maximal if f))


def _faces_by_dim(maximal_faces):
    by_dim = {}
    for f in maximal_faces:
        for k in range(1, len(f) + 1):
            for sub in combinations(f, k):
                by_dim.setdefault(k - 1, set()).add(sub)
    return {k: sorted(v) for k, v in by_dim.items()}


@lru_cache(maxsize=65536)
def _boundary_divisors(maximal_faces):
    """Per-degree (n_k, invariant factors of the boundary matrix d_k)."""
    faces = _faces_by_dim(maximal_faces)
    top = max(faces) if faces else -1
    out = {}
    n0 = len(faces.get(0, []))
    # augmentation d_0 : C_0 -> C_{-1}
    out[0] = (n0, (1,) if n0 else ())
    for k in range(1, top + 1):
        rows = {f: i for i, f in enumerate(faces[k - 1])}
        cols = faces[k]
        matrix = [[0] * len(cols) for _ in rows]
        for j, f in enumerate(cols):
            for drop in range(len(f)):
                sub = f[:drop] + f[drop + 1:]
                matrix[rows[sub]][j] = (-1) ** drop
        out[k] = (len(cols), tuple(snf_diagonal(matrix)) if matrix else ())
    return out


def _rank_over(divisors, field):
    if field is None:
        return len(divisors)
    return len([d for d in divisors if d % field])


def homology_dims(maximal_faces, field, top_degree):
    """Reduced homology dimensions in degrees -1..top_degree over the field."""
    data = _boundary_divisors(maximal_faces)
    dims = {}
    r = {k: _rank_over(divs, field) for k, (_, divs) in data.items()}
    n = {k: nk for k, (nk, _) in data.items()}
    dims[-1] = 1 - r.get(0, 0)
    for k in range(0, top_degree + 1):
        dims[k] = n.get(k, 0) - r.get(k, 0) - r.get(k + 1, 0)
    return dims


@lru_cache(maxsize=65536)
def _pattern_homology(fan, pattern):
    return neg_complex(fan, pattern)


def reduced_homology(maximal_faces, field):
    """Reduced homology of an abstract simplicial complex given by facets."""
    faces = tuple(sorted(tuple(sorted(set(f))) for f in maximal_faces if f))
    top = max((len(f) for f in faces), default=0) - 1
    return homology_dims(faces, field, max(top, 0))


@dataclass(frozen=True)
class ChamberReport:
    pattern: tuple  # sorted ray indices with <m, u> < -a
    region: IneqSystem
    bounded: bool
    witness: tuple


@lru_cache(maxsize=512)
def _chambers_cached(fan, coeffs):
    n = len(fan.rays)
    if n > 20:
        raise ValueError("too many rays for subset enumeration")
    cells = [((), (), tuple(Fraction(0) for _ in range(fan.rank)))]
    for i, ray in enumerate(fan.rays):
        a = Fraction(coeffs[i])
        row_pos = make_row(ray, -a, False)
        row_neg = make_row([-x for x in ray], a, True)
        new_cells = []
        for pattern, rows, witness in cells:
            val = sum(Fraction(r) * w for r, w in zip(ray, witness)) + a
            children = []
            if val >= 0:
                children.append((pattern, rows + (row_pos,), witness, True))
                children.append((pattern + (i,), rows + (row_neg,), None, False))
            else:
                children.append((pattern, rows + (row_pos,), None, False))
                children.append((pattern + (i,), rows + (row_neg,), witness, True))
            for pat, rws, wit, have in children:
                if not have:
                    wit = feasible(IneqSystem(fan.rank, rws))
                    if wit is None:
                        continue
                new_cells.append((pat, rws, wit))
        cells = new_cells
    out = []
    for pattern, rows, witness in cells:
        region = IneqSystem(fan.rank, rows)
        out.append(ChamberReport(pattern, region, is_bounded(region), witness))
    return tuple(out)


def chambers(fan, coeffs):
    """Feasible sign-pattern chambers of D, in binary order over the rays."""
    if not is_simplicial(fan):
        raise ValueError("chamber decomposition requires a simplicial fan")
    return list(_chambers_cached(fan, tuple(Fraction(c) for c in coeffs)))


@dataclass(frozen=True)
class CohomologyReport:
    field: object
    dims: tuple
    chamber_data: tuple  # (pattern, bounded, lattice_count, homology dims)


def coh_dims(fan, coeffs, field=None):
    """h^0..h^rank of O(D) on a complete simplicial fan over the field.

    Graded pieces are indexed by lattice points, so only chambers containing
    lattice points contribute; a chamber with nonzero homology, a lattice
    point and an unbounded region would make the totals infinite and raises.
    """
    if not is_complete(fan):
        raise ValueError("coh_dims requires a complete fan; use vanishing_higher")
    field = parse_field(field) if isinstance(field, str) else field
    dims = [0] * (fan.rank + 1)
    details = []
    for ch in chambers(fan, coeffs):
        hom = homology_dims(_pattern_homology(fan, ch.pattern), field, fan.rank - 1)
        if any(hom.values()):
            if not ch.bounded:
                if has_lattice_point(ch.region):
                    raise RuntimeError("unbounded chamber with nonzero homology "
                                       "and lattice points on a complete fan")
                count = 0
            else:
                count = len(lattice_points(ch.region))
        else:
            count = 0
        for p in range(fan.rank + 1):
            dims[p] += count * hom.get(p - 1, 0)
        details.append((ch.pattern, ch.bounded, count, tuple(sorted(hom.items()))))
    return CohomologyReport(field_name(field), tuple(dims), tuple(details))


def vanishing_higher(fan, coeffs, field=None):
    """Whether the degree->=1 cohomology vanishes, chamber by chamber.

    Works on any simplicial fan with convex support; boundedness of chambers
    is not required. Only chambers holding a lattice point can contribute a
    graded piece. Returns (True, None) or (False, (pattern, degree)).
    """
    field = parse_field(field) if isinstance(field, str) else field
    for ch in chambers(fan, coeffs):
        hom = homology_dims(_pattern_homology(fan, ch.pattern), field, fan.rank - 1)
        bad = next((p for p in range(1, fan.rank + 1) if hom.get(p - 1, 0)), None)
        if bad is not None and has_lattice_point(ch.region):
            return False, (ch.pattern, bad)
    return True, None


def pattern_of(fan, coeffs, m):
    return tuple(i for i, ray in enumerate(fan.rays)
                 if Fraction(dot(m, ray)) < -Fraction(coeffs[i]))


def graded_piece(fan, coeffs, m, field=None):
    """Chamber-formula dimensions of the degree-m piece, h^0..h^rank."""
    field = parse_field(field) if isinstance(field, str) else field
    hom = homology_dims(_pattern_homology(fan, pattern_of(fan, coeffs, m)),
                        field, fan.rank - 1)
    return tuple(hom.get(p - 1, 0) for p in range(fan.rank + 1))


def cech_graded(fan, coeffs, m, field=None):
    """Independent oracle: degree-m piece of the Cech complex on the cover
    by maximal-cone charts; dimensions for degrees 0..rank."""
    field = parse_field(field) if isinstance(field, str) else field
    if not is_simplicial(fan):
        raise ValueError("cech_graded requires a simplicial fan")
    ncones = len(fan.max_cones)

    def admits(subset):
        common = set(fan.max_cones[subset[0]])
        for i in subset[1:]:
            common &= set(fan.max_cones[i])
        return all(Fraction(dot(m, fan.rays[i])) >= -Fraction(coeffs[i])
                   for i in common)

    basis = {p: [s for s in combinations(range(ncones), p + 1) if admits(s)]
             for p in range(fan.rank + 2)}
    ranks = {}
    for p in range(fan.rank + 1):
        rows = {s: i for i, s in enumerate(basis[p + 1])}
        cols = basis[p]
        if not rows or not cols:
            ranks[p] = 0
            continue
        matrix = [[0] * len(cols) for _ in rows]
        col_index = {s: j for j, s in enumerate(cols)}
        for s, i in rows.items():
            for drop in range(len(s)):
                sub = s[:drop] + s[drop + 1:]
                j = col_index.get(sub)
                if j is not None:
                    matrix[i][j] += (-1) ** drop
        ranks[p] = _rank_over(snf_diagonal(matrix), field)
    return tuple(len(basis[p]) - ranks.get(p, 0) - ranks.get(p - 1, 0)
                 for p in range(fan.rank + 1))


def euler_characteristic(report):
    return sum((-1) ** i * d for i, d in enumerate(report.dims))

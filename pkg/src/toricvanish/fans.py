"""Fans of strongly convex rational polyhedral cones and toric morphisms.

A fan stores primitive ray generators plus maximal cones as ray-index sets.
Rays are kept lexicographically sorted and cone index sets sorted, so fan
equality is structural.
"""

from dataclasses import dataclass
from functools import lru_cache

from . import cones
from .linalg import (
    adapted_basis,
    coords_in_basis,
    det_int,
    dot,
    gcd_list,
    mat_vec,
    primitive,
    snf_diagonal,
)
from .regions import subtract_cones


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple
    max_cones: tuple

    def ray_index(self, v):
        return self.rays.index(tuple(v))

    def cone_rays(self, cone):
        return [self.rays[i] for i in cone]


def make_fan(rank, rays, max_cones):
    """Build a normalized Fan: rays sorted, index sets remapped and sorted."""
    rays = [tuple(int(x) for x in r) for r in rays]
    for r in rays:
        if len(r) != rank:
            raise ValueError("ray length does not match rank")
        if gcd_list(r) != 1:
            raise ValueError(f"ray {r} is not primitive")
    if len(set(rays)) != len(rays):
        raise ValueError("duplicate rays")
    order = sorted(range(len(rays)), key=lambda i: rays[i])
    remap = {old: new for new, old in enumerate(order)}
    sorted_rays = tuple(rays[i] for i in order)
    new_cones = sorted({tuple(sorted(remap[i] for i in set(c))) for c in max_cones})
    return Fan(rank, sorted_rays, tuple(new_cones))


@lru_cache(maxsize=16384)
def _cone_hrep(fan, cone):
    gens = [fan.rays[i] for i in cone]
    return cones.cone_hrep(gens, fan.rank)


@lru_cache(maxsize=16384)
def _cone_dim(fan, cone):
    return cones.cone_dim([fan.rays[i] for i in cone])


def cone_contains(fan, cone, v):
    return cones.in_cone_hrep(_cone_hrep(fan, cone), v)


def support_contains(fan, v):
    if not fan.max_cones:
        return not any(v)
    return any(cone_contains(fan, c, v) for c in fan.max_cones)


def _facets(fan, cone):
    """Facets of a maximal cone as tuples of ray indices."""
    gens = [fan.rays[i] for i in cone]
    out = []
    for w, idx in cones.cone_facets(gens, fan.rank):
        out.append((w, tuple(cone[i] for i in idx)))
    return out


def validate(fan):
    """Every Fan invariant; returns a list of defects (empty when valid)."""
    defects = []
    used = set()
    for c in fan.max_cones:
        used.update(c)
        gens = [fan.rays[i] for i in c]
        if not c:
            defects.append("empty cone listed")
            continue
        if not cones.cone_is_pointed(gens, fan.rank):
            defects.append(f"cone {c} is not strongly convex")
            continue
        extreme = set(cones.extreme_ray_indices(gens, fan.rank))
        if extreme != set(range(len(gens))):
            bad = [c[i] for i in range(len(gens)) if i not in extreme]
            defects.append(f"cone {c} lists non-extreme rays {bad}")
    if set(range(len(fan.rays))) - used:
        missing = sorted(set(range(len(fan.rays))) - used)
        defects.append(f"rays {missing} appear in no cone")
    if defects:
        return defects
    for ai in range(len(fan.max_cones)):
        for bi in range(ai + 1, len(fan.max_cones)):
            ca, cb = fan.max_cones[ai], fan.max_cones[bi]
            if set(ca) <= set(cb) or set(cb) <= set(ca):
                defects.append(f"cone {ca} is a face of cone {cb}")
                continue
            if not _intersection_is_common_face(fan, ca, cb):
                defects.append(f"intersection of cones {ca} and {cb} is not a face")
    return defects


def _intersection_is_common_face(fan, ca, cb):
    ha = _cone_hrep(fan, ca)
    hb = _cone_hrep(fan, cb)
    rows = [list(w) for w in ha[0]] + [list(w) for w in hb[0]]
    for e in list(ha[1]) + list(hb[1]):
        rows.append(list(e))
        rows.append([-x for x in e])
    gens, lin = cones.dd_cone(rows, fan.rank)
    if lin:
        return False
    for cone, hrep, other in ((ca, ha, hb), (cb, hb, ha)):
        crays = [fan.rays[i] for i in cone]
        zero_normals = [w for w in hrep[0] if all(dot(w, g) == 0 for g in gens)]
        face = [g for g in crays if all(dot(w, g) == 0 for w in zero_normals)]
        for g in face:
            if not cones.in_cone_hrep(other, g):
                return False
    return True


@dataclass(frozen=True)
class FanProperties:
    simplicial: bool
    smooth: bool
    complete: bool
    support_convex: bool
    q_gorenstein_index_of_K: object


def _is_simplicial_cone(fan, cone):
    return len(cone) == _cone_dim(fan, cone)


def _is_smooth_cone(fan, cone):
    if not _is_simplicial_cone(fan, cone):
        return False
    divs = snf_diagonal([list(fan.rays[i]) for i in cone])
    return all(d == 1 for d in divs)


def is_simplicial(fan):
    return all(_is_simplicial_cone(fan, c) for c in fan.max_cones)


def _facet_two_sided_everywhere(fan):
    for c in fan.max_cones:
        if _cone_dim(fan, c) != fan.rank:
            return False
        for _, fidx in _facets(fan, c):
            fset = set(fidx)
            adj = [c2 for c2 in fan.max_cones if fset <= set(c2)]
            if len(adj) != 2:
                return False
    return True


def support_is_convex(fan):
    """Whether the union of cones equals the cone generated by all rays."""
    if not fan.max_cones:
        return True
    hull_ineqs, hull_eqs = cones.cone_hrep(list(fan.rays), fan.rank)
    base = [(tuple(w), 0, False) for w in hull_ineqs]
    for e in hull_eqs:
        base.append((tuple(e), 0, False))
        base.append((tuple(-x for x in e), 0, False))
    hreps = [_cone_hrep(fan, c) for c in fan.max_cones]
    return subtract_cones(fan.rank, base, hreps) is None


def is_complete(fan):
    if fan.rank == 0:
        return True
    if not fan.max_cones:
        return False
    return _facet_two_sided_everywhere(fan) and support_is_convex(fan)


def q_gorenstein_index(fan):
    """Smallest l with l*K Cartier, or None (computed from the canonical data)."""
    from .divisors import canonical, cartier_data, NotQCartier
    from .linalg import lcm_list

    cd = cartier_data(fan, canonical(fan))
    if isinstance(cd, NotQCartier):
        return None
    dens = []
    for m in cd.covectors:
        dens.extend(x.denominator for x in m)
    return lcm_list(dens) if dens else 1


def properties(fan):
    defects = validate(fan)
    if defects:
        raise ValueError("invalid fan: " + "; ".join(defects))
    return FanProperties(
        simplicial=is_simplicial(fan),
        smooth=all(_is_smooth_cone(fan, c) for c in fan.max_cones),
        complete=is_complete(fan),
        support_convex=support_is_convex(fan),
        q_gorenstein_index_of_K=q_gorenstein_index(fan),
    )


@dataclass(frozen=True)
class ToricMap:
    """Lattice homomorphism (matrix rows act as x -> M @ x) between fans."""

    matrix: tuple
    source: Fan
    target: Fan

    def apply(self, v):
        return mat_vec(self.matrix, v)


def identity_map(source, target):
    n = source.rank
    return ToricMap(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)),
                    source, target)


def torus_factor(fan):
    """Split off the torus factor: (reduced fan, r, change_of_basis rows W).

    W is unimodular; its first rank-r rows span the saturated span of the
    support, and reduced rays are coordinates in those rows.
    """
    W, r_span = adapted_basis(list(fan.rays), fan.rank)
    r = fan.rank - r_span
    if r == 0:
        return fan, 0, W
    new_rays = []
    for ray in fan.rays:
        coords = coords_in_basis(W, ray)
        assert all(c == 0 for c in coords[r_span:])
        new_rays.append(coords[:r_span])
    reduced = make_fan(r_span, new_rays, [tuple(c) for c in fan.max_cones])
    return reduced, r, W


def star_subdivide(fan, v):
    """Star subdivision at a primitive vector in the support (new ray v)."""
    v = tuple(v)
    if primitive(v) != v:
        raise ValueError("subdivision point must be primitive")
    if v in fan.rays:
        raise ValueError("already a ray")
    if not support_contains(fan, v):
        raise ValueError("point outside the support")
    new_rays = list(fan.rays) + [v]
    vidx = len(fan.rays)
    new_cones = []
    for c in fan.max_cones:
        if not cone_contains(fan, c, v):
            new_cones.append(tuple(c))
            continue
        for _, fidx in _facets(fan, c):
            if cones.in_cone_hrep(_cone_hrep(fan, fidx), v):
                continue
            new_cones.append(tuple(sorted(fidx + (vidx,))))
    out = make_fan(fan.rank, new_rays, new_cones)
    return out, identity_map(out, fan)


def _pull_triangulate(fan, cone):
    """Pulling triangulation of a cone at its lowest-index ray, recursively."""
    if _is_simplicial_cone(fan, cone):
        return [tuple(sorted(cone))]
    r0 = min(cone)
    pieces = []
    for _, fidx in _facets(fan, cone):
        if r0 in fidx:
            continue
        for sub in _pull_triangulate(fan, fidx):
            pieces.append(tuple(sorted(set(sub) | {r0})))
    return pieces


def q_factorialize(fan):
    """Simplicial subdivision on the same rays (small): pulling triangulation."""
    if is_simplicial(fan):
        return fan, identity_map(fan, fan)
    new_cones = []
    for c in fan.max_cones:
        new_cones.extend(_pull_triangulate(fan, c))
    out = make_fan(fan.rank, list(fan.rays), new_cones)
    return out, identity_map(out, fan)


def _target_hreps(tgt):
    """H-representations of the target's maximal cones; the zero cone when none."""
    if tgt.max_cones:
        return [_cone_hrep(tgt, tc) for tc in tgt.max_cones]
    basis = [tuple(1 if i == j else 0 for i in range(tgt.rank)) for j in range(tgt.rank)]
    return [((), tuple(basis))]


def check_map(m):
    """Well-definedness, properness and birationality of a toric morphism."""
    src, tgt = m.source, m.target
    tgt_hreps = _target_hreps(tgt)
    well = True
    for c in src.max_cones:
        images = [m.apply(src.rays[i]) for i in c]
        if not any(all(cones.in_cone_hrep(h, im) for im in images) for h in tgt_hreps):
            well = False
            break
    proper = well
    if proper:
        # preimage of each target cone must be covered by the source cones
        src_hreps = [_cone_hrep(src, c) for c in src.max_cones]
        if not src_hreps:
            basis = [tuple(1 if i == j else 0 for i in range(src.rank))
                     for j in range(src.rank)]
            src_hreps = [((), tuple(basis))]
        cols = list(zip(*m.matrix)) if m.matrix else [() for _ in range(src.rank)]
        for ineqs, eqs in tgt_hreps:
            rows = []
            for w in ineqs:
                rows.append((tuple(dot(w, col) for col in cols), 0, False))
            for e in eqs:
                we = tuple(dot(e, col) for col in cols)
                rows.append((we, 0, False))
                rows.append((tuple(-x for x in we), 0, False))
            if subtract_cones(src.rank, rows, src_hreps) is not None:
                proper = False
                break
    unimodular = (src.rank == tgt.rank and len(m.matrix) == src.rank
                  and abs(det_int([list(r) for r in m.matrix])) == 1)
    return {"well_defined": well, "proper": proper,
            "birational": bool(unimodular and proper)}


@dataclass(frozen=True)
class IncidenceComplex:
    vertices: tuple
    facets: tuple


def incidence_complex(fan):
    if not is_simplicial(fan):
        raise ValueError("incidence complex requires a simplicial fan")
    return IncidenceComplex(tuple(range(len(fan.rays))),
                            tuple(tuple(sorted(c)) for c in fan.max_cones))

"""Extremal contractions, flips, the common-resolution flip diagram, and the
divisor-directed minimal model program on simplicial fans with convex support.

Each flip step carries a certificate with the discrepancy a of the inserted
divisor, the rounding defect b of the pulled-back divisor, the flip
coefficient c, and the case split on -a+b (below 1 or not), including the
unique nonnegative shift m for the low case.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

from . import cones
from .divisors import (
    CartierData,
    NotQCartier,
    cartier_data,
    discrepancy,
    pullback,
    pushforward,
    round_divisor,
)
from .fans import (
    Fan,
    ToricMap,
    _cone_dim,
    identity_map,
    is_simplicial,
    make_fan,
    star_subdivide,
    support_is_convex,
    validate,
)
from .linalg import (
    adapted_basis,
    int_kernel,
    int_rank,
    invert_unimodular,
    mat_vec,
    primitive,
)
from .mori import _primitive_direction, curve_class, extremal_rays, intersect, walls

STEP_CAP = 10000


@dataclass(frozen=True)
class ContractionResult:
    kind: str  # "divisorial" | "flipping" | "fibration"
    target: Fan
    map: ToricMap
    removed_ray: object  # ray vector for divisorial contractions
    merged_groups: tuple  # per group: tuple of source max-cone indices


def _merge_groups(fan, ray_direction):
    parent = list(range(len(fan.max_cones)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    on_ray = []
    for w in walls(fan):
        if _primitive_direction(curve_class(fan, w).pairing) == ray_direction:
            on_ray.append(w)
            a, b = find(w.cone_a), find(w.cone_b)
            if a != b:
                parent[a] = b
    if not on_ray:
        raise ValueError("no wall class lies on the given ray")
    groups = {}
    for i in range(len(fan.max_cones)):
        groups.setdefault(find(i), []).append(i)
    return [tuple(v) for _, v in sorted(groups.items())], on_ray


def contract(fan, extremal):
    """Contract an extremal ray of the relative Mori cone.

    `extremal` is an entry of mori.extremal_rays: (direction, walls).
    """
    direction = extremal[0]
    groups, _ = _merge_groups(fan, direction)
    merged = [g for g in groups if len(g) > 1]
    if not merged:
        raise ValueError("ray contracts nothing")
    group_rays = []
    lineal = []
    for g in merged:
        idx = sorted(set().union(*(fan.max_cones[ci] for ci in g)))
        group_rays.append(idx)
        lineal.extend(cones.cone_lineality([fan.rays[i] for i in idx], fan.rank))

    if lineal:
        return _fibration(fan, merged, lineal)

    removed = set()
    new_cones = {}
    for g, idx in zip(merged, group_rays):
        gens = [fan.rays[i] for i in idx]
        extreme = cones.extreme_ray_indices(gens, fan.rank)
        removed.update(idx[k] for k in range(len(idx)) if k not in extreme)
        new_cones[g] = tuple(idx[k] for k in extreme)

    untouched = [tuple(fan.max_cones[gi[0]]) for gi in groups if len(gi) == 1]
    merged_cone_list = [new_cones[g] for g in merged]

    if removed:
        if len(removed) != 1:
            raise ValueError("not an extremal contraction (several interior rays)")
        for mc in merged_cone_list:
            if len(mc) != _cone_dim(fan, tuple(mc)):
                raise ValueError("not an extremal contraction (merged cone stays "
                                 "non-simplicial after removing the interior ray)")
        kind = "divisorial"
        removed_ray = fan.rays[next(iter(removed))]
    else:
        kind = "flipping"
        for mc in merged_cone_list:
            if len(mc) == _cone_dim(fan, tuple(mc)):
                raise ValueError("merged cone is simplicial; nothing to flip")
        removed_ray = None

    used = sorted(set().union(*map(set, untouched + merged_cone_list)))
    reindex = {old: pos for pos, old in enumerate(used)}
    target = make_fan(fan.rank, [fan.rays[i] for i in used],
                      [tuple(reindex[i] for i in c) for c in untouched + merged_cone_list])
    defects = validate(target)
    if defects:
        raise ValueError("contracted structure is not a fan: " + "; ".join(defects))
    mp = identity_map(fan, target)
    return ContractionResult(kind, target, mp, removed_ray, tuple(merged))


def _fibration(fan, merged, lineal):
    W, k = adapted_basis(lineal, fan.rank)
    Winv = invert_unimodular(W)
    # quotient by the lineality span: keep the last rank-k adapted coordinates
    q_matrix = tuple(tuple(Winv[i][j] for i in range(fan.rank))
                     for j in range(k, fan.rank))
    new_rank = fan.rank - k
    image_cones = []
    for c in fan.max_cones:
        imgs = []
        for i in c:
            v = mat_vec(q_matrix, fan.rays[i])
            if any(v):
                imgs.append(primitive(v))
        image_cones.append(imgs)
    ray_list = sorted({v for imgs in image_cones for v in imgs})
    cone_sets = []
    for imgs in image_cones:
        if not imgs:
            continue
        keep = cones.extreme_ray_indices(imgs, new_rank)
        cone_sets.append(tuple(ray_list.index(imgs[i]) for i in keep))
    maximal = []
    for c in cone_sets:
        if not any(set(c) < set(o) for o in cone_sets):
            maximal.append(c)
    target = make_fan(new_rank, ray_list, maximal)
    defects = validate(target)
    if defects:
        raise ValueError("fibration target is not a fan: " + "; ".join(defects))
    mp = ToricMap(q_matrix, fan, target)
    return ContractionResult("fibration", target, mp, None, tuple(merged))


def _circuit(fan, ray_indices):
    """The (unique up to sign) relation among the rays of a circuit cone."""
    matrix = [[fan.rays[i][k] for i in ray_indices] for k in range(fan.rank)]
    kernel = int_kernel(matrix)
    if len(kernel) != 1:
        raise ValueError("merged cone is not a circuit")
    return kernel[0]


def _sides(fan, ray_indices, rel):
    plus = tuple(i for i, r in zip(ray_indices, rel) if r > 0)
    minus = tuple(i for i, r in zip(ray_indices, rel) if r < 0)
    return plus, minus


def flip(fan, extremal, coeffs):
    """The opposite small simplicial model over a flipping contraction.

    Returns (flipped fan, contraction result of the original fan).
    """
    res = contract(fan, extremal)
    if res.kind != "flipping":
        raise ValueError(f"ray is {res.kind}, not flipping")
    rep_wall = extremal[1][0]
    if intersect(fan, coeffs, rep_wall) >= 0:
        raise ValueError("divisor is not negative on the flipping ray")
    current = {frozenset(fan.max_cones[ci]) for g in res.merged_groups for ci in g}
    new_cones = [tuple(c) for c in fan.max_cones
                 if frozenset(c) not in current]
    flip_families = []
    for g in res.merged_groups:
        idx = sorted(set().union(*(fan.max_cones[ci] for ci in g)))
        rel = _circuit(fan, idx)
        plus, minus = _sides(fan, idx, rel)
        t_plus = {frozenset(set(idx) - {i}) for i in plus}
        t_minus = {frozenset(set(idx) - {j}) for j in minus}
        group_cones = {frozenset(fan.max_cones[ci]) for ci in g}
        if group_cones == t_plus:
            other = t_minus
        elif group_cones == t_minus:
            other = t_plus
        else:
            raise ValueError("merged group is not a circuit triangulation")
        if len(other) < 2:
            raise ValueError("opposite side is divisorial, not a flip")
        family = [tuple(sorted(s)) for s in sorted(other, key=sorted)]
        new_cones.extend(family)
        flip_families.append(family)
    flipped = make_fan(fan.rank, list(fan.rays), new_cones)
    assert flipped.rays == fan.rays
    defects = validate(flipped)
    assert not defects, defects
    # strict transform must be ample over the contraction: positive on the
    # new wall curves inside each flipped family
    for family in flip_families:
        fam = {frozenset(c) for c in family}
        for w in walls(flipped):
            ca = frozenset(flipped.max_cones[w.cone_a])
            cb = frozenset(flipped.max_cones[w.cone_b])
            if ca in fam and cb in fam:
                val = intersect(flipped, coeffs, w)
                if val <= 0:
                    raise ValueError("strict transform is not relatively ample")
    return flipped, res


@dataclass(frozen=True)
class FlipDiagram:
    theta: Fan
    e_ray: tuple
    gamma: object  # CurveClass on the source: F.Gamma = kappa(F)
    psi: ToricMap
    psi_prime: ToricMap


def flip_diagram(x_fan, x_plus, z_fan):
    """Common resolution of the two sides of a flip by one star subdivision.

    Verifies psi*F = psi'*F' - (F.Gamma) E exactly on the coordinate divisors
    and returns the diagram data.
    """
    non_simplicial = [c for c in z_fan.max_cones
                      if len(c) != _cone_dim(z_fan, tuple(c))]
    if len(non_simplicial) != 1:
        raise ValueError("flip diagram needs a single-circuit flip")
    idx = non_simplicial[0]
    rel = _circuit(z_fan, idx)
    plus = [(i, r) for i, r in zip(idx, rel) if r > 0]
    w_raw = [0] * z_fan.rank
    for i, r in plus:
        for k in range(z_fan.rank):
            w_raw[k] += r * z_fan.rays[i][k]
    e_ray = primitive(tuple(w_raw))
    theta, psi = star_subdivide(x_fan, e_ray)
    theta2, psi_prime = star_subdivide(x_plus, e_ray)
    if theta != theta2:
        raise ValueError("star subdivisions of the two sides disagree")
    psi_prime = ToricMap(psi_prime.matrix, theta, x_plus)
    e_idx = theta.ray_index(e_ray)
    kappa = []
    for i in range(len(x_fan.rays)):
        f_coeffs = tuple(Fraction(1) if j == i else Fraction(0)
                         for j in range(len(x_fan.rays)))
        pb = pullback(psi, f_coeffs)
        f_plus = tuple(Fraction(1) if x_plus.rays[j] == x_fan.rays[i] else Fraction(0)
                       for j in range(len(x_plus.rays)))
        pb_plus = pullback(psi_prime, f_plus)
        for j in range(len(theta.rays)):
            if j != e_idx and pb[j] != pb_plus[j]:
                raise ValueError("pullbacks differ away from the exceptional ray")
        kappa.append(pb_plus[e_idx] - pb[e_idx])
    gamma = curve_class_from_pairing(tuple(kappa))
    if not any(kappa):
        raise ValueError("flip diagram produced a zero 1-cycle")
    return FlipDiagram(theta, e_ray, gamma, psi, psi_prime)


def curve_class_from_pairing(pairing):
    from .mori import CurveClass

    return CurveClass(tuple(Fraction(x) for x in pairing))


@dataclass(frozen=True)
class StepCertificate:
    kind: str  # "divisorial" | "flip"
    a: Fraction
    b: object = None
    c: object = None
    case: object = None  # "low" | "high"
    m_shift: object = None
    exceptional: object = None
    d_y: object = None


def step_certificate(x_fan, b_coeffs, d_coeffs, diagram):
    """Per-flip quantities a, b, c, the case tag and the shift m.

    a: discrepancy of (X, B) at the inserted ray; b: ceiling defect of the
    pullback of D there; c: the flip coefficient; asserts a > -1, b in [0,1),
    c > 0 and the case-specific bounds.
    """
    w = diagram.e_ray
    a = discrepancy(x_fan, b_coeffs, w)
    pb = pullback(diagram.psi, d_coeffs)
    e_idx = diagram.theta.ray_index(w)
    x_val = pb[e_idx]
    b = Fraction(ceil(x_val)) - x_val
    c = -diagram.gamma.pair(d_coeffs)
    assert a > -1, f"discrepancy {a} <= -1: pair is not klt"
    assert 0 <= b < 1
    assert c > 0, f"flip coefficient {c} <= 0"
    gap = -a + b
    if gap < 1:
        case = "low"
        m_shift = -floor(gap)
        assert m_shift >= 0 and 0 <= gap + m_shift < 1
        d_y = tuple(x + (m_shift if i == e_idx else 0)
                    for i, x in enumerate(round_divisor(pb, "up")))
    else:
        case = "high"
        assert 0 < -a < 1 and 0 < b < 1
        m_shift = None
        d_y = round_divisor(pb, "down")
    return StepCertificate("flip", a, b, c, case, m_shift, w, d_y)


@dataclass(frozen=True)
class MMPStep:
    kind: str  # "divisorial" | "flip" | "fibration"
    source_index: int
    contraction: ContractionResult
    certificate: object
    diagram: object = None


@dataclass(frozen=True)
class MMPRun:
    models: tuple  # fans X_0 .. X_N
    divisors: tuple
    boundaries: tuple
    steps: tuple
    end: str  # "nef" | "mori_fibre_space"
    end_data: object = None  # the fibration contraction for an MFS end


def _check_mmp_input(fan, coeffs):
    if not is_simplicial(fan):
        raise ValueError("the divisor-directed program needs a simplicial fan")
    if not support_is_convex(fan):
        raise ValueError("the program needs convex support")
    if fan.rays and int_rank([list(r) for r in fan.rays]) != fan.rank:
        raise ValueError("split off the torus factor first")
    if isinstance(cartier_data(fan, coeffs), NotQCartier):
        raise ValueError("divisor is not Q-Cartier")


def run_mmp(fan, d_coeffs, b_coeffs):
    """Run the D-directed program: contract D-negative extremal rays until
    D is nef or a Mori fibre space appears."""
    _check_mmp_input(fan, d_coeffs)
    models = [fan]
    divisors = [tuple(Fraction(x) for x in d_coeffs)]
    boundaries = [tuple(Fraction(x) for x in b_coeffs)]
    steps = []
    for _ in range(STEP_CAP):
        x_n, d_n, b_n = models[-1], divisors[-1], boundaries[-1]
        cd = cartier_data(x_n, d_n)
        assert isinstance(cd, CartierData)
        ws = walls(x_n)
        if all(intersect(x_n, d_n, w, cd=cd) >= 0 for w in ws):
            return MMPRun(tuple(models), tuple(divisors), tuple(boundaries),
                          tuple(steps), "nef")
        chosen = None
        for item in extremal_rays(x_n):
            if intersect(x_n, d_n, item[1][0], cd=cd) < 0:
                chosen = item
                break
        assert chosen is not None, "negative wall but no negative extremal ray"
        res = contract(x_n, chosen)
        if res.kind == "fibration":
            steps.append(MMPStep("fibration", len(models) - 1, res, None))
            return MMPRun(tuple(models), tuple(divisors), tuple(boundaries),
                          tuple(steps), "mori_fibre_space", res)
        if res.kind == "divisorial":
            d_next = pushforward(res.map, d_n)
            b_next = pushforward(res.map, b_n)
            pb = pullback(res.map, d_next)
            e_idx = x_n.ray_index(res.removed_ray)
            a = d_n[e_idx] - pb[e_idx]
            assert a > 0, f"divisorial coefficient {a} <= 0"
            assert tuple(x + (a if i == e_idx else 0) for i, x in enumerate(pb)) == d_n
            cert = StepCertificate("divisorial", a, exceptional=res.removed_ray)
            steps.append(MMPStep("divisorial", len(models) - 1, res, cert))
            models.append(res.target)
            divisors.append(d_next)
            boundaries.append(b_next)
            continue
        flipped, _ = flip(x_n, chosen, d_n)
        diagram = flip_diagram(x_n, flipped, res.target)
        cert = step_certificate(x_n, b_n, d_n, diagram)
        steps.append(MMPStep("flip", len(models) - 1, res, cert, diagram))
        models.append(flipped)
        divisors.append(tuple(d_n))
        boundaries.append(tuple(b_n))
    raise RuntimeError("step cap exceeded; the program did not terminate")

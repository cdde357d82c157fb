"""Fans of Weyl chambers and the induced toric morphisms.

A Fan lives in the lattice N(R) dual to the root lattice, in coordinates
dual to the base simple set of the root system: the pairing of a root with a
ray is the dot product of the root's base-coordinates with the ray vector.

Cones are sorted tuples of ray indices; the empty tuple is the zero cone.
Rays and max-cone lists are canonicalized (lexicographic) on construction,
so equal fans compare equal structurally.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg, roots as rootsmod
from .errors import NotInSpan, NotRootSpan, NotSurjective


@dataclass(frozen=True)
class Fan:
    lattice_rank: int
    rays: tuple        # primitive integer vectors, lex sorted, distinct
    max_cones: tuple   # sorted tuples of ray indices, lex sorted

    def ray_index(self, vec):
        try:
            return self.rays.index(tuple(vec))
        except ValueError:
            raise NotInSpan(f"{tuple(vec)} is not a ray of the fan") from None


def make_fan(rank, rays, cones):
    """Canonicalize rays and cones into a Fan."""
    rays = [tuple(v) for v in rays]
    if len(set(rays)) != len(rays):
        raise ValueError("duplicate rays")
    for v in rays:
        if linalg.vec_is_zero(v) or linalg.vec_primitive(v) != v:
            raise ValueError(f"ray {v} is not primitive")
    order = sorted(range(len(rays)), key=lambda i: rays[i])
    remap = {old: new for new, old in enumerate(order)}
    new_rays = tuple(rays[i] for i in order)
    new_cones = sorted({tuple(sorted(remap[i] for i in cone)) for cone in cones})
    return Fan(rank, new_rays, tuple(new_cones))


def fan_to_json(f):
    return {
        "rank": f.lattice_rank,
        "rays": [list(v) for v in f.rays],
        "max_cones": [list(c) for c in f.max_cones],
    }


def fan_from_json(obj):
    return make_fan(obj["rank"], [tuple(v) for v in obj["rays"]],
                    [tuple(c) for c in obj["max_cones"]])


@lru_cache(maxsize=None)
def _chamber_data(r):
    """(fan, chamber map) for the fan of Weyl chambers of ``r``.

    The chamber map sends each max cone (sorted ray-index tuple) to its set
    of simple roots (sorted root-index tuple).  Chambers are found as the
    reflection orbit of the base chamber; the rays of a reflected chamber are
    the duals of its simple roots, obtained by the contragredient reflection
    v -> v - <alpha, v> alpha^vee on N(R).
    """
    n = r.rank
    table = rootsmod.reflection_table(r) if r.roots else ()
    corts = rootsmod.coroot_ncoords(r) if r.roots else ()

    def dual_reflect(a, v):
        c = linalg.vec_dot(r.mcoords[a], v)
        return linalg.vec_sub(v, linalg.vec_scale(c, corts[a]))

    start = tuple(zip(r.base_simple_set, linalg.identity_matrix(n)))
    seen = {tuple(sorted(r.base_simple_set))}
    queue = [start]
    chambers = []
    while queue:
        ch = queue.pop(0)
        chambers.append(ch)
        for a, _ in ch:
            new = tuple(sorted((table[a][b], dual_reflect(a, v)) for b, v in ch))
            key = tuple(p[0] for p in new)
            if key not in seen:
                seen.add(key)
                queue.append(new)

    ray_ids = {}
    raw_cones = []
    for ch in chambers:
        cone = []
        for _, v in ch:
            if v not in ray_ids:
                ray_ids[v] = len(ray_ids)
            cone.append(ray_ids[v])
        raw_cones.append(tuple(sorted(cone)))

    rays = [None] * len(ray_ids)
    for v, i in ray_ids.items():
        rays[i] = v
    order = sorted(range(len(rays)), key=lambda i: rays[i])
    remap = {old: new for new, old in enumerate(order)}
    fan = Fan(n, tuple(rays[i] for i in order),
              tuple(sorted(tuple(sorted(remap[i] for i in c)) for c in raw_cones)))
    chamber_map = {}
    for ch, cone in zip(chambers, raw_cones):
        key = tuple(sorted(remap[i] for i in cone))
        chamber_map[key] = tuple(p[0] for p in ch)
    return fan, chamber_map


def weyl_chamber_fan(r):
    """The complete smooth fan whose maximal cones are the Weyl chambers."""
    return _chamber_data(r)[0]


def chamber_simple_sets(r):
    """Map max cone (ray-index tuple) -> simple root set (root-index tuple)."""
    return _chamber_data(r)[1]


@lru_cache(maxsize=None)
def _cone_inverses(f):
    """Integer inverse of each max cone's ray matrix (None if not square)."""
    out = []
    for cone in f.max_cones:
        mat = tuple(f.rays[i] for i in cone)
        if len(mat) != f.lattice_rank or abs(linalg.det(mat)) != 1:
            out.append(None)
        else:
            out.append(linalg.int_inverse(mat))
    return tuple(out)


def minimal_containing_cone(f, v):
    """The unique cone of a complete simplicial unimodular fan containing v
    in its relative interior, as a sorted tuple of ray indices."""
    v = tuple(Fraction(x) for x in v)
    for cone, inv in zip(f.max_cones, _cone_inverses(f)):
        if inv is None:
            raise ValueError("fan has a non-unimodular max cone")
        coeffs = linalg.vec_matmul(v, inv)
        if all(c >= 0 for c in coeffs):
            return tuple(sorted(i for i, c in zip(cone, coeffs) if c > 0))
    raise ValueError(f"{v} is not covered; fan is not complete")


def cone_contains(f, cone, v):
    """Membership of v in the closed cone (for simplicial unimodular fans)."""
    face = minimal_containing_cone(f, v)
    return set(face) <= set(cone)


def _cone_facets(f, cone):
    """Facets of a full-dimensional max cone, each as the frozenset of the
    cone's rays lying on the facet hyperplane.

    Simplicial cones: all (rank-1)-subsets.  Otherwise facets are found from
    supporting hyperplanes spanned by rank-1 of the generators.
    """
    n = f.lattice_rank
    rays = [f.rays[i] for i in cone]
    if len(cone) == n:
        return {frozenset(cone) - {i} for i in cone}
    from itertools import combinations

    facets = set()
    for sub in combinations(range(len(cone)), n - 1):
        mat = tuple(rays[i] for i in sub)
        kern = linalg.kernel_basis(linalg.transpose(mat))
        if len(kern) != 1:
            continue
        w = kern[0]
        vals = [linalg.vec_dot(ray, w) for ray in rays]
        if all(x >= 0 for x in vals) or all(x <= 0 for x in vals):
            on = frozenset(cone[i] for i, x in enumerate(vals) if x == 0)
            if linalg.rank(tuple(f.rays[i] for i in on)) == n - 1:
                facets.add(on)
    return facets


def check_complete(f):
    """Every max cone full-dimensional and every facet shared by exactly two."""
    counts = {}
    for cone in f.max_cones:
        mat = tuple(f.rays[i] for i in cone)
        if linalg.rank(mat) != f.lattice_rank:
            return False
        for facet in _cone_facets(f, cone):
            counts[facet] = counts.get(facet, 0) + 1
    return all(c == 2 for c in counts.values())


def check_smooth(f):
    """Each max cone's rays form a Z-basis of N."""
    for cone in f.max_cones:
        if len(cone) != f.lattice_rank:
            return False
        if abs(linalg.det(tuple(f.rays[i] for i in cone))) != 1:
            return False
    return True


@dataclass(frozen=True)
class FanMorphism:
    source: Fan
    target: Fan
    lattice_map: tuple   # matrix L: source N-coords v map to v * L
    cone_image: tuple    # pairs (source max cone, target cone)

    def map_vector(self, v):
        return linalg.vec_matmul(v, self.lattice_map)

    def image_cone(self, source_cone):
        for src, dst in self.cone_image:
            if src == source_cone:
                return dst
        raise KeyError(source_cone)


def _morphism_from_lattice_inclusion(r, rprime):
    """Fan morphism Sigma(r) -> Sigma(rprime) for M(rprime) inside M(r).

    Both systems live in the same ambient space; the dual surjection
    N(r) -> N(rprime) is computed in base coordinates.
    """
    f = weyl_chamber_fan(r)
    fp = weyl_chamber_fan(rprime)
    # Rows: each base simple root of rprime in the base coordinates of r.
    p = tuple(rootsmod.mcoords_of_vector(r, rprime.roots[i])
              for i in rprime.base_simple_set)
    lattice_map = linalg.transpose(p)  # v -> v * P^T
    images = []
    for cone in f.max_cones:
        interior = tuple(sum(col) for col in zip(*(f.rays[i] for i in cone)))
        w = linalg.vec_matmul(interior, lattice_map)
        target = minimal_containing_cone(fp, w) if rprime.rank else ()
        # every ray of the source cone must land inside the recorded cone
        for i in cone:
            img = linalg.vec_matmul(f.rays[i], lattice_map)
            if rprime.rank and not cone_contains(fp, target, img):
                raise NotInSpan(f"ray {f.rays[i]} escapes the image cone")
        images.append((cone, target))
    return FanMorphism(f, fp, lattice_map, tuple(images))


def subsystem_morphism(r, subspace_basis):
    """Restrict to the root subsystem cut out by a subspace.

    Returns (rprime, morphism) where rprime = R intersect span(subspace_basis)
    and the morphism is the induced surjection of chamber fans.
    Raises NotRootSpan if the intersection does not span the subspace.
    """
    basis = tuple(tuple(v) for v in subspace_basis)
    sub = [v for v in r.roots if linalg.in_rational_span(basis, v)]
    if linalg.rank(tuple(sub)) != linalg.rank(basis):
        raise NotRootSpan("subspace is not spanned by the roots it contains")
    if len(sub) == len(r.roots):
        f = weyl_chamber_fan(r)
        ident = linalg.identity_matrix(r.rank)
        images = tuple((c, c) for c in f.max_cones)
        return r, FanMorphism(f, f, ident, images)
    rprime = rootsmod.root_system_from_roots(sub, r.ambient_dim)
    return rprime, _morphism_from_lattice_inclusion(r, rprime)


@dataclass(frozen=True)
class EmbeddingEquations:
    kernel_mcoords: tuple   # Z-basis of ker(mu) in M(R')-coordinates
    kernel_ambient: tuple   # the same basis as ambient vectors of E'
    per_chart: tuple        # (simple set S', tuple of (pos roots, neg roots))


def projection_embedding_equations(r, rprime, mu):
    """Equations of the embedding induced by a projection of root systems.

    ``mu`` maps the ambient space of rprime onto the ambient space of r (rows
    are images of the standard basis vectors), carrying every root of rprime
    to an integer multiple of a root of r and M(rprime) onto M(r).  Returns
    the kernel lattice and, per simple set S' of rprime, binomial equations
    prod x^{alpha_i} = prod x^{beta_j} with alpha_i, beta_j in S'.
    """
    mu = tuple(tuple(row) for row in mu)
    for v in rprime.roots:
        img = linalg.vec_matmul(v, mu)
        if not _is_root_multiple(r, img):
            raise NotInSpan(f"mu sends {v} to {img}, not a root multiple")
    # mu on root lattices, in base coordinates: M(R') -> M(R).
    p = tuple(
        rootsmod.mcoords_of_vector(
            r, linalg.vec_matmul(rprime.roots[i], mu))
        for i in rprime.base_simple_set
    )
    if not linalg.lattices_equal(p, linalg.identity_matrix(r.rank)):
        raise NotSurjective("mu does not map M(R') onto M(R)")
    kern = linalg.kernel_basis(p)
    kern_ambient = tuple(
        linalg.vec_matmul(x, rprime.root_lattice_basis) for x in kern)
    charts = []
    for s in rootsmod.enumerate_simple_root_sets(rprime):
        basis = tuple(rprime.mcoords[i] for i in s)
        inv = linalg.int_inverse(basis)
        eqs = []
        for x in kern:
            c = linalg.vec_matmul(x, inv)
            pos, neg = [], []
            for root_idx, coeff in zip(s, c):
                if coeff > 0:
                    pos.extend([root_idx] * coeff)
                elif coeff < 0:
                    neg.extend([root_idx] * (-coeff))
            eqs.append((tuple(pos), tuple(neg)))
        charts.append((s, tuple(eqs)))
    return EmbeddingEquations(kern, kern_ambient, tuple(charts))


def _is_root_multiple(r, v):
    """True iff v = a * alpha for some root alpha and integer a (incl. 0)."""
    v = tuple(v)
    if linalg.vec_is_zero(v):
        return True
    w = linalg.vec_primitive(v)
    for alpha in r.roots:
        if linalg.vec_primitive(alpha) != w:
            continue
        k = next(i for i, x in enumerate(alpha) if x != 0)
        a, rem = divmod(v[k], alpha[k])
        if rem == 0 and linalg.vec_scale(a, alpha) == v:
            return True
    return False


@dataclass(frozen=True)
class OrbitClosure:
    subsystem: object        # RootSystem on the roots orthogonal to the cone
    subsystem_root_indices: tuple   # indices into r.roots
    charts: tuple            # (S, S', S \ S') as root-index tuples of r
    factors: tuple           # Dynkin components of the first chart's S'


def orbit_closure(r, f, tau):
    """The torus-orbit closure for a cone of the chamber fan.

    Returns the root subsystem orthogonal to tau, the chart restrictions
    (for every chamber containing tau: its simple set S, the surviving part
    S' = S orthogonal to tau, and the vanishing set S minus S'), and the
    Dynkin components of S'.
    """
    fan, chambers = _chamber_data(r)
    tau = tuple(sorted(tau))
    tau_rays = [fan.rays[i] for i in tau]
    if not any(set(tau) <= set(c) for c in fan.max_cones):
        raise NotInSpan(f"{tau} is not a cone of the fan")

    def orth(i):
        return all(rootsmod.pairing_with_ray(r, i, ray) == 0 for ray in tau_rays)

    sub_idx = tuple(i for i in range(len(r.roots)) if orth(i))
    charts = []
    for cone in fan.max_cones:
        if set(tau) <= set(cone):
            s = chambers[cone]
            s_prime = tuple(i for i in s if orth(i))
            vanish = tuple(i for i in s if not orth(i))
            charts.append((tuple(sorted(s)), tuple(sorted(s_prime)),
                           tuple(sorted(vanish))))
    charts = tuple(sorted(charts))
    if not tau:
        sub = r
    else:
        base = [r.roots[i] for i in charts[0][1]]
        sub = rootsmod.root_system_from_roots(
            [r.roots[i] for i in sub_idx], r.ambient_dim, base=base)
    factors = rootsmod.dynkin_components(r, charts[0][1]) if charts[0][1] else ()
    return OrbitClosure(sub, sub_idx, charts, factors)


@dataclass(frozen=True)
class SectionPair:
    plus_cone: tuple
    minus_cone: tuple
    plus_vanishing: tuple    # root indices with <root, v> > 0, v interior of tau
    minus_vanishing: tuple


def opposite_sections(r, tau):
    """tau and -tau as cones of the chamber fan, with the root sets whose
    characters vanish on the corresponding orbit closures."""
    fan = weyl_chamber_fan(r)
    tau = tuple(sorted(tau))
    if not any(set(tau) <= set(c) for c in fan.max_cones):
        raise NotInSpan(f"{tau} is not a cone of the fan")
    minus = tuple(sorted(fan.ray_index(linalg.vec_neg(fan.rays[i])) for i in tau))
    if not any(set(minus) <= set(c) for c in fan.max_cones):
        raise NotInSpan("the opposite cone is missing; fan is not symmetric")
    if tau:
        v = tuple(sum(col) for col in zip(*(fan.rays[i] for i in tau)))
    else:
        v = (0,) * fan.lattice_rank
    plus_vanish = tuple(i for i in range(len(r.roots))
                        if rootsmod.pairing_with_ray(r, i, v) > 0)
    minus_vanish = tuple(i for i in range(len(r.roots))
                         if rootsmod.pairing_with_ray(r, i, v) < 0)
    return SectionPair(tau, minus, plus_vanish, minus_vanish)

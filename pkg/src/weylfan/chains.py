"""Stable pointed chains of projective lines over Q and their ratio data.

A marked chain is an ordered partition of the label set (which component
carries which mark, read from the s_- end) together with one projective
coordinate per mark on its component, in coordinates where the component's
poles are (1:0) and (0:1).  Marks may coincide but never sit on a pole.

The pairwise data of a chain assigns to each ordered label pair (i, j) the
ratio (t_ij : t_ji): the position of mark i in the coordinates that put mark
j at (1:1) when both lie on one component, (1:0) when i is on an earlier
component than j, and (0:1) when later.  Chains and data determine each
other exactly; the translation runs in both directions here, together with
contractions, the embedded-curve membership test, and the combinatorial
types over the torus orbits of the chamber fan.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import fans, linalg, rdata as rdatamod, roots as rootsmod, typea
from .errors import EmptyKeep, NotPreorder
from .rdata import ProjectiveRatio


@dataclass(frozen=True)
class CombType:
    """Ordered partition of the labels; first block carries s_-."""

    blocks: tuple  # tuple of sorted label tuples

    @staticmethod
    def of(blocks):
        blocks = tuple(tuple(sorted(b)) for b in blocks)
        if any(not b for b in blocks):
            raise ValueError("empty block in a combinatorial type")
        flat = [x for b in blocks for x in b]
        if len(set(flat)) != len(flat):
            raise ValueError("blocks are not disjoint")
        return CombType(blocks)

    @property
    def labels(self):
        return tuple(sorted(x for b in self.blocks for x in b))

    def block_of(self, label):
        for k, b in enumerate(self.blocks):
            if label in b:
                return k
        raise KeyError(label)


@dataclass(frozen=True)
class MarkedChain:
    ctype: CombType
    coords: tuple  # sorted tuple of (label, ProjectiveRatio), entries nonzero

    @staticmethod
    def of(ctype, coords):
        coords = tuple(sorted((k, v) for k, v in dict(coords).items()))
        if tuple(k for k, _ in coords) != ctype.labels:
            raise ValueError("coordinates do not match the labels")
        for k, v in coords:
            if v.is_degenerate:
                raise ValueError(f"mark {k} sits on a pole or node")
        return MarkedChain(ctype, coords)

    @property
    def labels(self):
        return self.ctype.labels

    def coord_of(self, label):
        return dict(self.coords)[label]


def data_ratio(data, i, j):
    """(t_ij : t_ji) for any ordered pair, from the i<j keyed dict."""
    if i < j:
        return data[(i, j)]
    return data[(j, i)].swap()


def comb_type_from_data(data, labels):
    """Blocks of the total preorder defined by the degeneration pattern.

    i precedes j when the ratio is (1:0), follows when (0:1), shares a
    component otherwise.  Totality and transitivity are verified; failures
    raise NotPreorder.
    """
    labels = tuple(sorted(labels))

    def cmp(i, j):
        if i == j:
            return 0
        t = data_ratio(data, i, j)
        if t.is_one_zero:
            return -1
        if t.is_zero_one:
            return 1
        return 0

    # equivalence classes of "same component"
    blocks = []
    for i in labels:
        for b in blocks:
            if cmp(i, b[0]) == 0:
                b.append(i)
                break
        else:
            blocks.append([i])
    # verify class consistency and collect the order
    for b in blocks:
        for x in b:
            for y in b:
                if x < y and cmp(x, y) != 0:
                    raise NotPreorder(f"marks {x},{y} disagree about sharing a component")
    for a in range(len(blocks)):
        for b in range(len(blocks)):
            if a == b:
                continue
            signs = {cmp(x, y) for x in blocks[a] for y in blocks[b]}
            if len(signs) != 1 or 0 in signs:
                raise NotPreorder(f"blocks {blocks[a]},{blocks[b]} are not totally ordered")
    reps_before = [b[0] for b in blocks]
    blocks.sort(key=lambda b: sum(cmp(b[0], c) for c in reps_before))
    order = CombType.of(blocks)
    # transitivity across three blocks
    m = len(order.blocks)
    reps = [b[0] for b in order.blocks]
    for a in range(m):
        for c in range(a + 1, m):
            if cmp(reps[a], reps[c]) != -1:
                raise NotPreorder("the block order is not transitive")
    return order


def chain_from_data(data, labels):
    """Build a chain realizing the data: per block, the minimal label is
    anchored at (1:1) and every other mark sits at its ratio against it."""
    ctype = comb_type_from_data(data, labels)
    coords = {}
    for b in ctype.blocks:
        anchor = b[0]
        coords[anchor] = ProjectiveRatio.of(1, 1)
        for i in b[1:]:
            coords[i] = data_ratio(data, i, anchor)
    chain = MarkedChain.of(ctype, coords)
    assert data_from_chain(chain) == dict(data), "chain does not reproduce its data"
    return chain


def data_from_chain(chain):
    """Extract the pairwise ratios of a chain, keyed by i < j."""
    out = {}
    labels = chain.labels
    coords = dict(chain.coords)
    for a, i in enumerate(labels):
        for j in labels[a + 1:]:
            bi = chain.ctype.block_of(i)
            bj = chain.ctype.block_of(j)
            if bi < bj:
                out[(i, j)] = ProjectiveRatio.of(1, 0)
            elif bi > bj:
                out[(i, j)] = ProjectiveRatio.of(0, 1)
            else:
                pi, pj = coords[i], coords[j]
                out[(i, j)] = ProjectiveRatio.of(pi.num * pj.den, pi.den * pj.num)
    return out


def normalize_chain(chain):
    """Rescale every component so its minimal mark sits at (1:1)."""
    coords = {}
    cd = dict(chain.coords)
    for b in chain.ctype.blocks:
        anchor = cd[b[0]]
        for i in b:
            p = cd[i]
            coords[i] = ProjectiveRatio.of(p.num * anchor.den, p.den * anchor.num)
    return MarkedChain.of(chain.ctype, coords)


def chains_isomorphic(c1, c2):
    """Isomorphism = equal type and componentwise equality after anchoring."""
    return normalize_chain(c1) == normalize_chain(c2)


def contract(chain, keep):
    """Forget the marks outside ``keep`` and collapse unstable components.

    Kept components keep their relative positions (renormalized to the new
    anchors); the operation is functorial under nested keeps.
    """
    keep = set(keep)
    if not keep:
        raise EmptyKeep("cannot contract away every mark")
    if not keep <= set(chain.labels):
        raise ValueError("keep contains unknown labels")
    cd = dict(chain.coords)
    blocks = []
    coords = {}
    for b in chain.ctype.blocks:
        kept = [i for i in b if i in keep]
        if not kept:
            continue
        blocks.append(kept)
        anchor = cd[kept[0]]
        for i in kept:
            p = cd[i]
            coords[i] = ProjectiveRatio.of(p.num * anchor.den, p.den * anchor.num)
    return MarkedChain.of(CombType.of(blocks), coords)


def curve_membership(data, labels, zs):
    """Membership of a point in the embedded chain cut out by the data.

    ``zs`` maps each label i to the slot-i ratio (z at the minus pole : z at
    the plus pole).  Returns (ok, components): ok iff every cross-multiplied
    binomial equation holds, and components lists the chain components
    containing the point (two at a node).
    """
    labels = tuple(sorted(labels))
    for a, i in enumerate(labels):
        for j in labels[a + 1:]:
            t = data_ratio(data, i, j)
            zi, zj = zs[i], zs[j]
            if t.num * zj.den * zi.num != t.den * zj.num * zi.den:
                return False, ()
    ctype = comb_type_from_data(data, labels)
    comps = []
    for k in range(len(ctype.blocks)):
        good = True
        for kk, b in enumerate(ctype.blocks):
            if kk < k and any(not zs[i].is_zero_one for i in b):
                good = False
            if kk > k and any(not zs[i].is_one_zero for i in b):
                good = False
        if good:
            comps.append(k)
    assert comps, "point satisfies the equations but lies on no component"
    return True, tuple(comps)


def marked_point_image(data, labels, i):
    """The slot ratios of the embedded image of mark i."""
    zs = {}
    for j in sorted(labels):
        zs[j] = ProjectiveRatio.of(1, 1) if j == i else data_ratio(data, i, j)
    return zs


# -- the universal chain over the chamber variety ---------------------------

@dataclass(frozen=True)
class SectionInfo:
    label: int
    kernel_root: tuple   # ambient vector of u_label - u_{n+2}
    lattice_map: tuple   # section's map on base coordinates


@dataclass(frozen=True)
class UniversalCurve:
    n: int
    morphism: object          # FanMorphism of the chamber fans
    total_system: object      # the bigger root system
    base_system: object       # the smaller one, realized in the same ambient
    sections: tuple
    pole_minus_ray: int       # ray index of -v_{n+2} in the source fan
    pole_plus_ray: int        # ray index of v_{n+2}
    fiber_counts: dict        # target max cone -> number of source chambers


def _natural_a_base(dim):
    """Ambient vectors u_t - u_{t+1}, t = 1..dim-1."""
    out = []
    for t in range(dim - 1):
        v = [0] * dim
        v[t], v[t + 1] = 1, -1
        out.append(tuple(v))
    return out


@lru_cache(maxsize=None)
def universal_curve_structure(n):
    """The chain-of-lines family over the type-A chamber variety, at the
    level of fans: the projection, one section per label, and the two pole
    divisors."""
    big = rootsmod.build_root_system(rootsmod.RootSystemSpec.parse([("A", n + 1)]))
    dim = n + 2
    sub_roots = [v for v in big.roots if v[-1] == 0]
    base = _natural_a_base(dim - 1)
    base = [tuple(v) + (0,) for v in base]
    small = rootsmod.root_system_from_roots(sub_roots, dim, base=base) if n >= 1 \
        else rootsmod.root_system_from_roots([], dim)
    morphism = fans._morphism_from_lattice_inclusion(big, small)

    proj = tuple(
        rootsmod.mcoords_of_vector(big, small.roots[i]) for i in small.base_simple_set
    )  # rows: small base in big base coordinates
    sections = []
    for label in range(1, n + 2):
        # ambient: u_t -> u_t for t <= n+1, u_{n+2} -> u_label
        amb = [list(row) for row in linalg.identity_matrix(dim)]
        amb[dim - 1] = [0] * dim
        amb[dim - 1][label - 1] = 1
        amb = tuple(tuple(row) for row in amb)
        lat = tuple(
            rootsmod.mcoords_of_vector(
                small, linalg.vec_matmul(big.roots[i], amb))
            for i in big.base_simple_set
        ) if n >= 1 else tuple(() for _ in big.base_simple_set)
        kernel_root = [0] * dim
        kernel_root[label - 1], kernel_root[dim - 1] = 1, -1
        sections.append(SectionInfo(label, tuple(kernel_root), lat))
        # composition: include then project must be the identity
        if n >= 1:
            comp = linalg.matmul(proj, lat)
            assert comp == linalg.identity_matrix(n), "section does not split the projection"

    src = morphism.source
    v_last = tuple([0] * n + [-1])
    pole_plus = src.ray_index(v_last)
    pole_minus = src.ray_index(linalg.vec_neg(v_last))
    counts = {}
    for _, dst in morphism.cone_image:
        counts[dst] = counts.get(dst, 0) + 1
    return UniversalCurve(
        n=n,
        morphism=morphism,
        total_system=big,
        base_system=small,
        sections=tuple(sections),
        pole_minus_ray=pole_minus,
        pole_plus_ray=pole_plus,
        fiber_counts=counts,
    )


def comb_type_over_cone(n, chain_masks):
    """Combinatorial type of the fibers over the orbit of a fan cone.

    The cone is a nested chain of subsets; the type reads off the common
    refinement: complement of the largest set first, then the successive
    differences down to the smallest set.
    """
    chain = tuple(chain_masks)
    if not typea.is_chain(chain) or any(
            not 0 < a < typea.full_mask(n) for a in chain):
        raise ValueError("not a nested chain of proper nonempty subsets")
    blocks = []
    prev = typea.full_mask(n)
    for a in reversed(chain):
        blocks.append(typea.members(prev & ~a))
        prev = a
    blocks.append(typea.members(prev))
    return CombType.of(blocks)


@lru_cache(maxsize=None)
def _an_system(n):
    return rootsmod.build_root_system(rootsmod.RootSystemSpec.parse([("A", n)]))


def _pair_of_root(r, idx):
    v = r.roots[idx]
    i = v.index(1) + 1
    j = v.index(-1) + 1
    return i, j


def an_data_from_rdata(r, d):
    """Ratio dict keyed by (i, j), i < j, from the generic pair data."""
    out = {}
    for idx, t in d.ratios:
        i, j = _pair_of_root(r, idx)
        out[(i, j) if i < j else (j, i)] = t if i < j else t.swap()
    return out


def rdata_from_an_data(n, data):
    r = _an_system(n)
    out = {}
    for (i, j), t in data.items():
        v = [0] * (n + 1)
        v[i - 1], v[j - 1] = 1, -1
        idx = r.root_index(tuple(v))
        if idx in r.positive:
            out[idx] = t
        else:
            out[r.neg[idx]] = t.swap()
    return rdatamod.RData.of(out)


def validate_an_data(n, data):
    """Violated additive triples of the ratio dict (empty list = valid)."""
    r = _an_system(n)
    return rdatamod.validate_rdata(r, rdata_from_an_data(n, data))


def generic_data_over_cone(n, chain_masks):
    """Sample ratios over the orbit of a cone: the tautological data at a
    chart point whose free coordinates are distinct primes."""
    r = _an_system(n)
    ctype = comb_type_over_cone(n, chain_masks)
    # a chamber containing the cone: refine the partition reading blocks
    # from the s_- side, i.e. from the last block of the type backwards
    ordering = [i for b in reversed(ctype.blocks) for i in b]
    simple = []
    for t in range(n):
        v = [0] * (n + 1)
        v[ordering[t] - 1], v[ordering[t + 1] - 1] = 1, -1
        simple.append(r.root_index(tuple(v)))
    chart = tuple(sorted(simple))
    block_index = {i: ctype.block_of(i) for i in ctype.labels}
    primes = _primes(n)
    coords = []
    for idx in chart:
        i, j = _pair_of_root(r, idx)
        if block_index[i] == block_index[j]:
            coords.append(Fraction(primes.pop()))
        else:
            coords.append(Fraction(0))
    point = rdatamod.ChartPoint(chart=chart, coords=tuple(coords))
    d = rdatamod.universal_rdata_at(r, point)
    return an_data_from_rdata(r, d)


def _primes(n):
    out = []
    x = 2
    while len(out) < n + 1:
        if all(x % p for p in out):
            out.append(x)
        x += 1
    return out


def random_marked_chain(n, rng):
    """A seeded random stable chain with n+1 marks; marks may coincide."""
    labels = list(range(1, n + 2))
    rng.shuffle(labels)
    blocks = []
    cur = [labels[0]]
    for x in labels[1:]:
        if rng.random() < 0.4:
            blocks.append(cur)
            cur = [x]
        else:
            cur.append(x)
    blocks.append(cur)
    coords = {}
    for b in blocks:
        for i in b:
            num = rng.choice([x for x in range(-7, 8) if x])
            den = rng.randrange(1, 8)
            coords[i] = ProjectiveRatio.of(num, den)
    return MarkedChain.of(CombType.of(blocks), coords)


# -- JSON -------------------------------------------------------------------

def chain_to_json(chain):
    return {
        "n": len(chain.labels) - 1,
        "blocks": [list(b) for b in chain.ctype.blocks],
        "coords": [{"i": k, "pos": v.to_json()} for k, v in chain.coords],
    }


def chain_from_json(obj):
    ctype = CombType.of([tuple(b) for b in obj["blocks"]])
    coords = {e["i"]: ProjectiveRatio.from_json(e["pos"]) for e in obj["coords"]}
    return MarkedChain.of(ctype, coords)


def an_data_to_json(n, data):
    r = _an_system(n)
    return rdatamod.rdata_to_json(r, rdata_from_an_data(n, data))


def an_data_from_json(n, obj):
    r = _an_system(n)
    return an_data_from_rdata(r, rdatamod.rdata_from_json(r, obj))

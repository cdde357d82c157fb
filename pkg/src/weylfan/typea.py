"""The chamber fan of type A and its cohomology, divisors, and polytope.

Proper nonempty subsets A of {1, ..., n+1} are stored as bitmasks (member k
is bit k-1).  The ray of a subset, in the N-coordinates dual to the base
simple roots, is v_A[j] = [j in A] - [j+1 in A]; the maximal cones of the
chamber fan are the maximal strictly nested chains of subsets.

Homology is presented by monomials l_A indexed by nested chains ("chain
monomials"): the unit is the empty chain, and a chain of length m spans the
codimension-m part.  The straightening relations rewrite any chain monomial
into the basis indexed by permutation descent sets; the rewriting strictly
increases a lexicographic sequence order, which forces termination.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import comb, factorial

from . import linalg
from .errors import InconsistentPL
from .fans import make_fan

MAX_MEMBERS = 63  # bitmask width cap; asserted, never silently truncated


def _check_n(n):
    if not (1 <= n + 1 <= MAX_MEMBERS):
        raise ValueError(f"n must satisfy 1 <= n+1 <= {MAX_MEMBERS}")


def full_mask(n):
    return (1 << (n + 1)) - 1


def members(mask):
    out = []
    k = 1
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return tuple(out)


def mask_of(member_list):
    m = 0
    for k in member_list:
        m |= 1 << (k - 1)
    return m


def subset_ray(mask, n):
    """v_A in the coordinates dual to the base simple roots."""
    return tuple(
        ((mask >> (j - 1)) & 1) - ((mask >> j) & 1) for j in range(1, n + 1)
    )


def _submasks_strictly_between(lower, upper):
    """All masks B with lower < B < upper in the subset order."""
    gap = upper & ~lower
    sub = (gap - 1) & gap
    while sub:
        yield lower | sub
        sub = (sub - 1) & gap


@lru_cache(maxsize=None)
def chain_fan(n):
    """The chamber fan of type A from the nested-subset description."""
    _check_n(n)
    full = full_mask(n)
    rays = [subset_ray(a, n) for a in range(1, full)]
    ray_id = {a: i for i, a in enumerate(range(1, full))}
    cones = []
    for perm in permutations(range(1, n + 2)):
        acc = 0
        cone = []
        for k in perm[:-1]:
            acc |= 1 << (k - 1)
            cone.append(ray_id[acc])
        cones.append(tuple(sorted(cone)))
    return make_fan(n, rays, cones)


@lru_cache(maxsize=None)
def ray_masks(n):
    """Map ray index of chain_fan(n) -> subset mask, and back."""
    f = chain_fan(n)
    by_vec = {subset_ray(a, n): a for a in range(1, full_mask(n))}
    to_mask = tuple(by_vec[v] for v in f.rays)
    to_ray = {a: i for i, a in enumerate(to_mask)}
    return to_mask, to_ray


def surjection_count(m, t):
    """Number of surjections from an m-set onto a t-set."""
    return sum((-1) ** j * comb(t, j) * (t - j) ** m for j in range(t + 1))


def cone_counts(n):
    """Number of k-dimensional cones of the chamber fan, k = 0..n.

    A k-chain of proper nonempty subsets is an ordered partition of the
    member set into k+1 blocks.
    """
    return tuple(surjection_count(n + 1, k + 1) for k in range(n + 1))


def eulerian_numbers(m):
    """Row m of the Eulerian triangle: counts of permutations by descents."""
    row = [1]
    for size in range(2, m + 1):
        prev = row
        row = [0] * size
        for k in range(size):
            row[k] = (k + 1) * (prev[k] if k < len(prev) else 0)
            row[k] += (size - k) * (prev[k - 1] if k >= 1 else 0)
    return tuple(row[:m])


def betti_numbers(n):
    """Even Betti numbers b_0, b_2, ..., b_2n via the h-vector transform.

    Internally cross-checked against the Eulerian recurrence; the total rank
    is (n+1)!.
    """
    _check_n(n)
    f = cone_counts(n)
    # h(t) = sum_k f_k (t-1)^{n-k}
    h = [0] * (n + 1)
    for k in range(n + 1):
        e = n - k
        for j in range(e + 1):
            h[j] += f[k] * comb(e, j) * (-1) ** (e - j)
    h = tuple(h)
    assert h == eulerian_numbers(n + 1), "h-vector disagrees with the Eulerian recurrence"
    assert sum(h) == factorial(n + 1)
    return h


# -- chain monomials and the descent basis ---------------------------------

def is_chain(masks):
    for a, b in zip(masks, masks[1:]):
        if not (a & ~b) == 0 or a == b:
            return False
    return True


def partition_blocks(chain, n):
    """The ordered partition P_1, ..., P_{m+1} attached to a chain monomial."""
    blocks = []
    prev = 0
    for a in chain:
        blocks.append(a & ~prev)
        prev = a
    blocks.append(full_mask(n) & ~prev)
    return blocks


def d_statistic(chain, n):
    """Number of adjacent block pairs with min P_k > max P_{k+1}."""
    blocks = partition_blocks(chain, n)
    return sum(
        1
        for t in range(len(blocks) - 1)
        if blocks[t] and blocks[t + 1]
        and (blocks[t] & -blocks[t]) > blocks[t + 1]
    )


def sequence_key(chain, n):
    """The tie-breaking sequence: blocks read last to first, each ascending."""
    blocks = partition_blocks(chain, n)
    seq = []
    for b in reversed(blocks):
        seq.extend(members(b))
    return tuple(seq)


def descent_basis(n):
    """One chain monomial per permutation: prefixes at non-descent positions."""
    _check_n(n)
    out = []
    for perm in permutations(range(1, n + 2)):
        acc = 0
        chain = []
        for k in range(n):
            acc |= 1 << (perm[k] - 1)
            if perm[k] < perm[k + 1]:
                chain.append(acc)
        out.append(tuple(chain))
    return tuple(out)


def _rewrite_step(chain, t, n):
    """One straightening step at bad position t (0-based gap of the chain).

    Returns {new_chain: sign} with the convention old = sum(sign * new).
    The witnesses are forced: i = min P_{t+1} and j = max P_{t+2}; any other
    choice admits a replacement with an equal sequence key (insert the set
    P_{t+1} plus the maximum of the next block), breaking the strict
    order increase that guarantees termination.
    """
    blocks = partition_blocks(chain, n)
    bk, bk1 = blocks[t], blocks[t + 1]
    i_bit = bk & -bk
    j_bit = 1 << (bk1.bit_length() - 1)
    lower = chain[t - 1] if t >= 1 else 0
    upper = chain[t + 1] if t + 1 < len(chain) else full_mask(n)
    a_k = chain[t]
    out = {}
    for b in _submasks_strictly_between(lower, upper):
        if b == a_k:
            continue
        has_i = bool(b & i_bit)
        has_j = bool(b & j_bit)
        if has_i and not has_j:
            sign = -1
        elif has_j and not has_i:
            sign = 1
        else:
            continue
        new_chain = chain[:t] + (b,) + chain[t + 1:]
        out[new_chain] = out.get(new_chain, 0) + sign
    return {c: s for c, s in out.items() if s}


def _bad_positions(chain, n):
    blocks = partition_blocks(chain, n)
    return [
        t
        for t in range(len(blocks) - 1)
        if blocks[t] and blocks[t + 1]
        and (blocks[t] & -blocks[t]) > blocks[t + 1]
    ]


def reduce_to_basis(terms, n, rng=None):
    """Rewrite a combination of chain monomials into the descent basis.

    The canonical strategy rewrites at the smallest bad position; with
    ``rng`` the bad position is chosen at random instead (the witnesses i, j
    are forced either way, see _rewrite_step).  Every strategy reaches the
    same normal form.
    """
    _check_n(n)
    out = {}
    work = {}
    for chain, coeff in terms.items():
        if coeff:
            work[tuple(chain)] = work.get(tuple(chain), 0) + coeff
    while work:
        chain, coeff = work.popitem()
        if coeff == 0:
            continue
        bad = _bad_positions(chain, n)
        if not bad:
            out[chain] = out.get(chain, 0) + coeff
            if out[chain] == 0:
                del out[chain]
            continue
        t = bad[0] if rng is None else rng.choice(bad)
        key = sequence_key(chain, n)
        for new_chain, sign in _rewrite_step(chain, t, n).items():
            assert sequence_key(new_chain, n) > key, "rewrite must increase the order"
            c = work.get(new_chain, 0) + sign * coeff
            if c:
                work[new_chain] = c
            elif new_chain in work:
                del work[new_chain]
    return out


def _comparable(a, b):
    return (a & ~b) == 0 or (b & ~a) == 0


def _expand_squares(mult, n):
    """Express a multiset of pairwise comparable subsets (multiplicity <= 2)
    as a combination of squarefree chain monomials, eliminating duplicates
    through straightening relations.  Returns {chain: coeff}."""
    dup = next((a for a, b in zip(mult, mult[1:]) if a == b), None)
    if dup is None:
        return {mult: 1}
    distinct = tuple(sorted(set(mult), key=lambda m: (bin(m).count("1"), m)))
    pos = distinct.index(dup)
    lower = distinct[pos - 1] if pos else 0
    upper = distinct[pos + 1] if pos + 1 < len(distinct) else full_mask(n)
    i_bit = (dup & ~lower) & -(dup & ~lower)
    j_gap = upper & ~dup
    j_bit = j_gap & -j_gap
    remainder = list(mult)
    remainder.remove(dup)
    out = {}
    for b in _submasks_strictly_between(lower, upper):
        if b == dup:
            continue
        has_i = bool(b & i_bit)
        has_j = bool(b & j_bit)
        if has_i and not has_j:
            sign = -1
        elif has_j and not has_i:
            sign = 1
        else:
            continue
        if any(not _comparable(b, x) for x in remainder):
            continue
        new_mult = tuple(sorted(remainder + [b], key=lambda m: (bin(m).count("1"), m)))
        for c, s in _expand_squares(new_mult, n).items():
            v = out.get(c, 0) + sign * s
            if v:
                out[c] = v
            elif c in out:
                del out[c]
    return out


def multiply(a, b, n):
    """Product of two chain monomials, reduced to the descent basis.

    Zero when the merged factors contain an incomparable pair; squares are
    eliminated by straightening before the final reduction.
    """
    _check_n(n)
    mult = tuple(sorted(tuple(a) + tuple(b), key=lambda m: (bin(m).count("1"), m)))
    for x, y in combinations(set(mult), 2):
        if not _comparable(x, y):
            return {}
    return reduce_to_basis(_expand_squares(mult, n), n)


# -- primitive collections, nef and ample divisors -------------------------

@dataclass(frozen=True)
class PrimitiveRelationRecord:
    pair: tuple     # (A, A') masks, incomparable, A < A'
    kind: str       # opposite | union | intersection | both
    rhs: tuple      # masks on the right-hand side of v_A + v_A' = sum rhs


def primitive_collections(n):
    """All primitive collections of the chamber fan with their relations.

    They are exactly the incomparable pairs of subsets; the relation type is
    decided by whether the union is everything and the intersection empty.
    """
    _check_n(n)
    full = full_mask(n)
    out = []
    for a in range(1, full):
        for b in range(a + 1, full):
            if _comparable(a, b):
                continue
            inter, union = a & b, a | b
            if inter == 0 and union == full:
                kind, rhs = "opposite", ()
            elif inter == 0:
                kind, rhs = "union", (union,)
            elif union == full:
                kind, rhs = "intersection", (inter,)
            else:
                kind, rhs = "both", (inter, union)
            out.append(PrimitiveRelationRecord((a, b), kind, rhs))
    return tuple(out)


def _coeff(coeffs, mask, n):
    if mask == 0 or mask == full_mask(n):
        return 0
    return coeffs.get(mask, 0)


def is_nef(coeffs, n):
    """Pairwise criterion: a_A + a_A' >= a_{A∩A'} + a_{A∪A'} on every
    incomparable pair (with a of the empty and full set equal to 0)."""
    for rec in primitive_collections(n):
        a, b = rec.pair
        if (_coeff(coeffs, a, n) + _coeff(coeffs, b, n)
                < _coeff(coeffs, a & b, n) + _coeff(coeffs, a | b, n)):
            return False
    return True


def is_ample(coeffs, n):
    """Strict version of the pairwise criterion."""
    for rec in primitive_collections(n):
        a, b = rec.pair
        if (_coeff(coeffs, a, n) + _coeff(coeffs, b, n)
                <= _coeff(coeffs, a & b, n) + _coeff(coeffs, a | b, n)):
            return False
    return True


@lru_cache(maxsize=None)
def _wall_structure(n):
    """Per max cone: ray list and the transposed inverse of its ray matrix;
    plus all walls (facet, the two adjacent cones with their opposite rays)."""
    f = chain_fan(n)
    to_mask, _ = ray_masks(n)
    inv_t = []
    for cone in f.max_cones:
        mat = tuple(f.rays[i] for i in cone)
        if len(mat) != n or abs(linalg.det(mat)) != 1:
            raise InconsistentPL("max cone rays do not determine a linear functional")
        inv_t.append(linalg.transpose(linalg.int_inverse(mat)))
    facets = {}
    for idx, cone in enumerate(f.max_cones):
        for drop in cone:
            key = tuple(sorted(set(cone) - {drop}))
            facets.setdefault(key, []).append((idx, drop))
    walls = tuple(
        (pair[0], pair[1]) for pair in facets.values() if len(pair) == 2
    )
    return f, to_mask, tuple(inv_t), walls


def nef_oracle(coeffs, n):
    """Wall-convexity check of the support function.

    Builds the linear functional of each chamber interpolating -a on its
    rays and verifies, across every wall, that the neighbouring chamber's
    opposite ray evaluates to at least its own -a value.
    """
    _check_n(n)
    f, to_mask, inv_t, walls = _wall_structure(n)
    values = tuple(-_coeff(coeffs, to_mask[i], n) for i in range(len(f.rays)))
    functionals = {}

    def functional(idx):
        if idx not in functionals:
            cone = f.max_cones[idx]
            b = tuple(values[i] for i in cone)
            functionals[idx] = linalg.vec_matmul(b, inv_t[idx])
        return functionals[idx]

    for (idx1, drop1), (idx2, drop2) in walls:
        m = functional(idx1)
        w = f.rays[drop2]
        if linalg.vec_dot(m, w) < values[drop2]:
            return False
    return True


# -- the reflexive polytope of the roots and its fans -----------------------

@dataclass(frozen=True)
class PolytopeInfo:
    n: int
    vertices: tuple        # root coordinates in the base simple basis
    lattice_points: tuple
    interior_points: tuple
    is_reflexive: bool
    polar_vertices: tuple  # vertices of the polar, in N-coordinates


def _root_mcoords(n):
    """Coordinates of the roots in the base simple basis: consecutive sums."""
    out = []
    for i in range(1, n + 2):
        for j in range(1, n + 2):
            if i == j:
                continue
            v = [0] * n
            lo, hi, s = (i, j, 1) if i < j else (j, i, -1)
            for t in range(lo, hi):
                v[t - 1] = s
            out.append(tuple(v))
    return tuple(sorted(set(out)))


def _solve_cramer(rows, rhs):
    d = linalg.det(rows)
    if d == 0:
        return None
    k = len(rows)
    sol = []
    for t in range(k):
        mt = tuple(r[:t] + (rhs[idx],) + r[t + 1:] for idx, r in enumerate(rows))
        sol.append(Fraction(linalg.det(mt), d))
    return tuple(sol)


def _h_polytope_vertices(normals):
    """Vertices of {x : <x, w> >= -1 for w in normals}, by basic solutions."""
    k = len(normals[0])
    rhs = (-1,) * k
    seen = set()
    verts = set()
    for sub in combinations(normals, k):
        x = _solve_cramer(sub, rhs)
        if x is None or x in seen:
            continue
        seen.add(x)
        if all(linalg.vec_dot(x, w) >= -1 for w in normals):
            verts.add(x)
    return verts


@lru_cache(maxsize=None)
def delta_polytope(n):
    """The convex hull of the roots: vertices, lattice points, reflexivity.

    Vertex sets of the polytope and of its polar are enumerated exactly from
    the facet descriptions; reflexivity holds iff the polar has only lattice
    vertices.  Coordinates are in the base simple basis (polytope side) and
    its dual (polar side).
    """
    _check_n(n)
    root_pts = _root_mcoords(n)
    normals = tuple(subset_ray(a, n) for a in range(1, full_mask(n)))
    verts = _h_polytope_vertices(normals)
    assert verts == {tuple(map(Fraction, p)) for p in root_pts}, \
        "facet description disagrees with the hull of the roots"

    # lattice points: the polytope sits inside the unit box of these coords
    lattice, interior = [], []
    def scan(prefix):
        if len(prefix) == n:
            vals = [linalg.vec_dot(prefix, w) for w in normals]
            if all(v >= -1 for v in vals):
                lattice.append(tuple(prefix))
                if all(v > -1 for v in vals):
                    interior.append(tuple(prefix))
            return
        for c in (-1, 0, 1):
            scan(prefix + [c])
    scan([])

    polar_verts = _h_polytope_vertices(root_pts)
    is_reflexive = all(all(x.denominator == 1 for x in v) for v in polar_verts)
    polar = tuple(sorted(tuple(int(x) for x in v) for v in polar_verts)) \
        if is_reflexive else tuple(sorted(polar_verts))
    return PolytopeInfo(
        n=n,
        vertices=tuple(sorted(root_pts)),
        lattice_points=tuple(sorted(lattice)),
        interior_points=tuple(sorted(interior)),
        is_reflexive=is_reflexive,
        polar_vertices=polar,
    )


def subdivide_cone(b1, b2, n):
    """Chains subdividing the cone of all subsets between b1 and b2, one per
    permutation of the gap members."""
    gap = members(b2 & ~b1)
    chains = []
    for perm in permutations(gap):
        acc = b1
        chain = [acc]
        for k in perm:
            acc |= 1 << (k - 1)
            chain.append(acc)
        chains.append(tuple(chain))
    return tuple(chains)


@lru_cache(maxsize=None)
def sigma_delta_fan(n):
    """The normal fan of the root polytope: cones of all subsets nested
    between a singleton and a co-singleton."""
    _check_n(n)
    full = full_mask(n)
    rays = [subset_ray(a, n) for a in range(1, full)]
    ray_id = {a: i for i, a in enumerate(range(1, full))}
    cones = []
    for i in range(1, n + 2):
        for j in range(1, n + 2):
            if i == j:
                continue
            b1 = 1 << (i - 1)
            b2 = full & ~(1 << (j - 1))
            cone = [ray_id[b1]]
            for b in _submasks_strictly_between(b1, b2):
                cone.append(ray_id[b])
            if b2 != b1:
                cone.append(ray_id[b2])
            cones.append(tuple(sorted(set(cone))))
    return make_fan(n, rays, cones)


@lru_cache(maxsize=None)
def crepant_subdivision(n):
    """Subdivide each cone of the root-polytope fan along permutation chains;
    the result is the chamber fan again."""
    _check_n(n)
    full = full_mask(n)
    rays = [subset_ray(a, n) for a in range(1, full)]
    ray_id = {a: i for i, a in enumerate(range(1, full))}
    cones = []
    for i in range(1, n + 2):
        for j in range(1, n + 2):
            if i == j:
                continue
            b1 = 1 << (i - 1)
            b2 = full & ~(1 << (j - 1))
            for chain in subdivide_cone(b1, b2, n):
                cones.append(tuple(sorted(ray_id[a] for a in chain)))
    return make_fan(n, rays, cones)


# -- JSON -------------------------------------------------------------------

def cohom_class_to_json(terms, n):
    items = sorted(terms.items())
    return {
        "n": n,
        "terms": [
            {"chain": [list(members(a)) for a in chain], "coeff": coeff}
            for chain, coeff in items
        ],
    }


def cohom_class_from_json(obj):
    n = int(obj["n"])
    _check_n(n)
    terms = {}
    for entry in obj["terms"]:
        chain = tuple(mask_of(part) for part in entry["chain"])
        if not all(0 < a < full_mask(n) for a in chain) or not is_chain(chain):
            raise ValueError(f"not a nested chain of proper subsets: {entry['chain']}")
        terms[chain] = terms.get(chain, 0) + int(entry["coeff"])
    return {c: v for c, v in terms.items() if v}, n


def divisor_to_json(coeffs, n):
    return {
        "coeffs": [
            {"subset": list(members(a)), "a": v}
            for a, v in sorted(coeffs.items())
            if v
        ]
    }


def divisor_from_json(obj, n):
    out = {}
    for entry in obj["coeffs"]:
        a = mask_of(entry["subset"])
        if not 0 < a < full_mask(n):
            raise ValueError(f"subset out of range: {entry['subset']}")
        out[a] = out.get(a, 0) + int(entry["a"])
    return out

"""Exact integer and rational linear algebra on row vectors.

Vectors are tuples of Python ints (or Fractions), matrices are tuples of row
vectors.  Everything is arbitrary precision and immutable; no floats appear
anywhere in this package.

Conventions:

* lattices are row spans: the lattice generated by a matrix is the set of
  integer combinations of its rows;
* ``hermite_normal_form`` is row-style: echelon shape, positive pivots,
  entries above each pivot reduced into [0, pivot).  This makes the nonzero
  rows a canonical basis of the row span, so lattice equality is a direct
  comparison.
"""

from fractions import Fraction
from math import gcd

from .errors import NotUnimodular

IntVector = tuple
IntMatrix = tuple


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vec_neg(a):
    return tuple(-x for x in a)


def vec_scale(c, a):
    return tuple(c * x for x in a)


def vec_dot(a, b):
    return sum(x * y for x, y in zip(a, b, strict=True))


def vec_is_zero(a):
    return all(x == 0 for x in a)


def vec_primitive(a):
    """Divide out the gcd of the entries; sign is preserved. Zero stays zero."""
    g = 0
    for x in a:
        g = gcd(g, abs(x))
    if g <= 1:
        return tuple(a)
    return tuple(x // g for x in a)


def identity_matrix(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m):
    return tuple(zip(*m)) if m else ()


def matmul(a, b):
    """Product of row matrices: (a @ b)[i][j] = sum_k a[i][k] b[k][j]."""
    bt = transpose(b)
    return tuple(tuple(vec_dot(row, col) for col in bt) for row in a)


def vec_matmul(v, m):
    """Row vector times matrix."""
    return tuple(vec_dot(v, col) for col in transpose(m))


def hermite_normal_form(m):
    """Return (h, u) with u unimodular, u*m = h, h in row Hermite normal form.

    h has the same shape as m; zero rows sink to the bottom.  Pivots are
    positive and entries above a pivot are reduced into [0, pivot).
    """
    h = [list(row) for row in m]
    k = len(h)
    ncols = len(h[0]) if k else 0
    u = [[int(i == j) for j in range(k)] for i in range(k)]
    row = 0
    for col in range(ncols):
        if row == k:
            break
        piv = next((i for i in range(row, k) if h[i][col] != 0), None)
        if piv is None:
            continue
        if piv != row:
            h[row], h[piv] = h[piv], h[row]
            u[row], u[piv] = u[piv], u[row]
        for i in range(row + 1, k):
            # Euclid on (h[row][col], h[i][col]) by alternating row subtractions.
            while h[i][col] != 0:
                q = h[row][col] // h[i][col]
                h[row] = [x - q * y for x, y in zip(h[row], h[i])]
                u[row] = [x - q * y for x, y in zip(u[row], u[i])]
                h[row], h[i] = h[i], h[row]
                u[row], u[i] = u[i], u[row]
        if h[row][col] < 0:
            h[row] = [-x for x in h[row]]
            u[row] = [-x for x in u[row]]
        p = h[row][col]
        for i in range(row):
            q = h[i][col] // p
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[row])]
                u[i] = [x - q * y for x, y in zip(u[i], u[row])]
        row += 1
    return tuple(map(tuple, h)), tuple(map(tuple, u))


def hnf_basis(m):
    """Canonical basis of the row span: nonzero rows of the HNF."""
    h, _ = hermite_normal_form(m)
    return tuple(row for row in h if not vec_is_zero(row))


def kernel_basis(m):
    """Canonical Z-basis of the left integer kernel {x : x*m = 0}.

    Empty tuple iff the kernel is trivial.
    """
    h, u = hermite_normal_form(m)
    kern = tuple(u[i] for i in range(len(h)) if vec_is_zero(h[i]))
    return hnf_basis(kern) if kern else ()


def lattices_equal(a, b):
    """True iff the row spans of a and b coincide as lattices."""
    return hnf_basis(a) == hnf_basis(b)


def rank(m):
    return len(hnf_basis(m)) if m else 0


def det(m):
    """Determinant of a square integer matrix (Bareiss, exact)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def dual_basis(b):
    """For a square unimodular b, the matrix d with b * d^T = identity.

    Rows of d are the dual basis of the rows of b under the standard pairing.
    Raises NotUnimodular when |det b| != 1.
    """
    n = len(b)
    if any(len(row) != n for row in b):
        raise NotUnimodular("matrix is not square")
    h, u = hermite_normal_form(b)
    if h != identity_matrix(n):
        raise NotUnimodular(f"determinant {det(b)} is not ±1")
    # u = b^{-1}, so d^T = u.
    return transpose(u)


def int_inverse(b):
    """Exact inverse of a unimodular integer matrix (integer entries)."""
    n = len(b)
    h, u = hermite_normal_form(b)
    if h != identity_matrix(n):
        raise NotUnimodular(f"determinant {det(b)} is not ±1")
    return u


def solve_left(basis, target):
    """Solve x * basis = target over Q; None if inconsistent.

    ``basis`` must have linearly independent rows, so the solution is unique
    when it exists.  Entries of x are Fractions.
    """
    # Gaussian elimination on the system basis^T * x^T = target^T.
    k = len(basis)
    ncols = len(target)
    aug = [[Fraction(basis[i][j]) for i in range(k)] + [Fraction(target[j])]
           for j in range(ncols)]
    pivots = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, ncols) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pr = aug[r][c]
        aug[r] = [x / pr for x in aug[r]]
        for i in range(ncols):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if len(pivots) != k:
        raise ValueError("basis rows are linearly dependent")
    # Remaining rows must be consistent.
    for i in range(r, ncols):
        if aug[i][k] != 0:
            return None
    x = [Fraction(0)] * k
    for i, c in enumerate(pivots):
        x[c] = aug[i][k]
    return tuple(x)


def solve_left_int(basis, target):
    """Like solve_left but demands an integer solution; None otherwise."""
    x = solve_left(basis, target)
    if x is None or any(f.denominator != 1 for f in x):
        return None
    return tuple(int(f) for f in x)


def in_rational_span(basis, v):
    """True iff v lies in the Q-span of the rows of basis."""
    if vec_is_zero(v):
        return True
    if not basis:
        return False
    return rank(tuple(basis) + (tuple(v),)) == rank(basis)


def fraction_inverse(m):
    """Inverse of a square matrix over Q, as Fraction rows."""
    n = len(m)
    a = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        pr = a[c][c]
        a[c] = [x / pr for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return tuple(tuple(row[n:]) for row in a)

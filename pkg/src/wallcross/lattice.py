"""Exact rational linear algebra over character and cocharacter lattices.

Everything here is exact: vectors are tuples of ``fractions.Fraction`` (or
plain ints for primitive lattice vectors) and no floating point enters any
computation.  Downstream numerical modules only ever evaluate the exact
objects produced here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class SingularBasis(ValueError):
    """The selected characters do not form a basis."""


class NotAHyperplane(ValueError):
    """Wall characters do not span a hyperplane."""


# ---------------------------------------------------------------------------
# vectors


def ratvec(entries):
    return tuple(Fraction(x) for x in entries)


def intvec(entries):
    out = []
    for x in entries:
        f = Fraction(x)
        if f.denominator != 1:
            raise ValueError("non-integral entry %r" % (x,))
        out.append(int(f))
    return tuple(out)


def vdot(a, b):
    assert len(a) == len(b), "dimension mismatch"
    return sum((Fraction(x) * Fraction(y) for x, y in zip(a, b)), Fraction(0))


def vadd(a, b):
    return tuple(Fraction(x) + Fraction(y) for x, y in zip(a, b))


def vsub(a, b):
    return tuple(Fraction(x) - Fraction(y) for x, y in zip(a, b))


def vscale(c, a):
    c = Fraction(c)
    return tuple(c * Fraction(x) for x in a)


def zero_vec(n):
    return (Fraction(0),) * n


def is_integral(v):
    return all(Fraction(x).denominator == 1 for x in v)


def frac_part(q):
    q = Fraction(q)
    return q - (q.numerator // q.denominator)


# ---------------------------------------------------------------------------
# exact Gaussian elimination


def _rref(rows, width):
    """Reduced row echelon form; returns (rref_rows, pivot_columns)."""
    mat = [list(map(Fraction, row)) for row in rows]
    pivots = []
    rank = 0
    for col in range(width):
        pivot_row = None
        for i in range(rank, len(mat)):
            if mat[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        mat[rank], mat[pivot_row] = mat[pivot_row], mat[rank]
        pv = mat[rank][col]
        mat[rank] = [x / pv for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(mat):
            break
    return mat, pivots


def matrix_rank(rows):
    if not rows:
        return 0
    _, pivots = _rref(rows, len(rows[0]))
    return len(pivots)


def solve_square(rows, rhs):
    """Solve M x = rhs exactly for a square matrix given by rows.

    Raises SingularBasis when M is singular.
    """
    n = len(rows)
    assert all(len(r) == n for r in rows) and len(rhs) == n
    aug = [list(map(Fraction, row)) + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    red, pivots = _rref(aug, n)
    if len(pivots) < n:
        raise SingularBasis("matrix is singular")
    sol = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        sol[col] = red[i][n]
    return tuple(sol)


def solve_rectangular(rows, rhs):
    """One exact solution of M x = rhs, or None when inconsistent.

    M may have more rows than columns; free coordinates are set to zero.
    """
    if not rows:
        return None
    ncol = len(rows[0])
    aug = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(rows, rhs)]
    red, pivots = _rref(aug, ncol + 1)
    if ncol in pivots:  # pivot in the rhs column: inconsistent
        return None
    sol = [Fraction(0)] * ncol
    for i, col in enumerate(pivots):
        sol[col] = red[i][ncol]
    return tuple(sol)


def right_kernel(rows, width):
    """Basis of {x : row . x = 0 for every row}, exact."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(width)) for i in range(width)]
    red, pivots = _rref(rows, width)
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * width
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -red[i][fc]
        basis.append(tuple(vec))
    return basis


def content(v):
    g = 0
    for x in v:
        g = gcd(g, abs(int(x)))
    return g


def primitive_integer_vector(v):
    """Scale a nonzero rational vector to a primitive integer vector."""
    denoms = [Fraction(x).denominator for x in v]
    scale = 1
    for d in denoms:
        scale = scale * d // gcd(scale, d)
    ints = [int(Fraction(x) * scale) for x in v]
    g = content(ints)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(x // g for x in ints)


# ---------------------------------------------------------------------------
# the operations used by the GIT layer


def express_in_anticone_basis(D, delta, j):
    """Coordinates of D[j] in the basis {D[i] : i in delta}.

    Returns the tuple c (ordered like ``delta``) with D[j] = sum c_i D[i].
    Raises SingularBasis when the delta-submatrix is singular, which signals
    that ``delta`` is not a valid minimal anticone.
    """
    r = len(D[delta[0]])
    assert len(delta) == r, "need exactly r characters for a basis"
    rows = [[Fraction(D[i][k]) for i in delta] for k in range(r)]
    rhs = [Fraction(D[j][k]) for k in range(r)]
    return solve_square(rows, rhs)


def primitive_wall_normal(wall_chars, positive_side):
    """Primitive integer normal of the hyperplane spanned by ``wall_chars``.

    The sign is fixed so that the normal pairs positively with
    ``positive_side``.
    """
    r = len(positive_side)
    rows = [tuple(map(Fraction, w)) for w in wall_chars if any(Fraction(x) != 0 for x in w)]
    if matrix_rank(rows) != r - 1:
        raise NotAHyperplane("wall characters span a subspace of dimension != r-1")
    kern = right_kernel(rows, r)
    if len(kern) != 1:
        raise NotAHyperplane("kernel of the wall pairing is not a line")
    e = primitive_integer_vector(kern[0])
    s = vdot(positive_side, e)
    if s == 0:
        raise NotAHyperplane("positive side lies on the wall")
    if s < 0:
        e = tuple(-x for x in e)
    return e


def rational_line_membership(v, e):
    """The unique alpha in [0,1) with v - alpha*e integral, if it exists.

    ``e`` must be a primitive integer vector; primitivity makes alpha unique
    modulo 1.  Candidates are enumerated from a fixed nonzero coordinate of
    ``e``, which is finite and complete.
    """
    v = ratvec(v)
    e = intvec(e)
    i = next((k for k, x in enumerate(e) if x != 0), None)
    assert i is not None, "e must be nonzero"
    seen = set()
    for k in range(abs(e[i])):
        alpha = frac_part((v[i] - k) / Fraction(e[i]))
        if alpha in seen:
            continue
        seen.add(alpha)
        if is_integral(vsub(v, vscale(alpha, e))):
            return alpha
    return None


# ---------------------------------------------------------------------------
# integer lattices and Hermite reduction


def hermite_row_form(rows):
    """Row-style Hermite normal form of an integer matrix.

    Returns the nonzero rows: upper echelon, positive pivots, entries above
    each pivot reduced into [0, pivot).  This is the canonical form used for
    deterministic lattice output.
    """
    mat = [list(map(int, r)) for r in rows]
    if not mat:
        return []
    ncol = len(mat[0])
    row = 0
    for col in range(ncol):
        pivot = None
        for i in range(row, len(mat)):
            if mat[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        # clear below by gcd steps
        for i in range(row + 1, len(mat)):
            while mat[i][col] != 0:
                q = mat[row][col] // mat[i][col]
                mat[row] = [a - q * b for a, b in zip(mat[row], mat[i])]
                mat[row], mat[i] = mat[i], mat[row]
        if mat[row][col] < 0:
            mat[row] = [-a for a in mat[row]]
        for i in range(row):
            q = mat[i][col] // mat[row][col]
            if q:
                mat[i] = [a - q * b for a, b in zip(mat[i], mat[row])]
        row += 1
        if row == len(mat):
            break
    return [tuple(r) for r in mat[:row]]


def hermite_with_transform(rows):
    """Row Hermite form with the unimodular transform: U A = H.

    Returns (H, U) with H including its zero rows, so kernel vectors of A
    can be read off the U-rows facing zero H-rows.
    """
    mat = [list(map(int, r)) for r in rows]
    n = len(mat)
    if not mat:
        return [], []
    ncol = len(mat[0])
    unim = [[int(i == j) for j in range(n)] for i in range(n)]
    row = 0
    for col in range(ncol):
        pivot = None
        for i in range(row, n):
            if mat[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        unim[row], unim[pivot] = unim[pivot], unim[row]
        for i in range(row + 1, n):
            while mat[i][col] != 0:
                q = mat[row][col] // mat[i][col]
                mat[row] = [a - q * b for a, b in zip(mat[row], mat[i])]
                unim[row] = [a - q * b for a, b in zip(unim[row], unim[i])]
                mat[row], mat[i] = mat[i], mat[row]
                unim[row], unim[i] = unim[i], unim[row]
        if mat[row][col] < 0:
            mat[row] = [-a for a in mat[row]]
            unim[row] = [-a for a in unim[row]]
        for i in range(row):
            q = mat[i][col] // mat[row][col]
            if q:
                mat[i] = [a - q * b for a, b in zip(mat[i], mat[row])]
                unim[i] = [a - q * b for a, b in zip(unim[i], unim[row])]
        row += 1
        if row == n:
            break
    return [tuple(r) for r in mat], [tuple(r) for r in unim]


def integer_kernel_basis(cond_rows, dim):
    """Basis of the saturated integer kernel {k in Z^dim : cond . k = 0}.

    Conditions may be rational; they are cleared to integers first.  The
    kernel basis appears as the transform rows facing zero rows of the
    Hermite form of the transposed condition matrix.
    """
    cleared = []
    for cond in cond_rows:
        cond = ratvec(cond)
        scale = 1
        for x in cond:
            scale = scale * x.denominator // gcd(scale, x.denominator)
        cleared.append([int(x * scale) for x in cond])
    if not cleared:
        return [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    # rows of the transpose are the coordinates; U A^T = H
    At = [[cleared[c][i] for c in range(len(cleared))] for i in range(dim)]
    H, U = hermite_with_transform(At)
    return [U[i] for i in range(dim) if all(x == 0 for x in H[i])]


def quotient_transversal(gens):
    """Coset representatives of Z^r modulo the row span of ``gens``.

    ``gens`` must generate a finite-index sublattice of Z^r.  The
    representatives are the integer points of the Hermite pivot box, listed
    in lexicographic order.
    """
    H = hermite_row_form(gens)
    r = len(gens[0])
    if len(H) != r:
        raise ValueError("sublattice does not have finite index")
    diag = [H[i][i] for i in range(r)]
    reps = []

    def rec(i, current):
        if i == r:
            reps.append(tuple(current))
            return
        for k in range(diag[i]):
            rec(i + 1, current + [k])

    rec(0, [])
    return reps


@dataclass(frozen=True)
class LatticeBasis:
    """Canonical basis of a full-rank finitely generated subgroup of Q^r."""

    rows: tuple

    @property
    def dim(self):
        return len(self.rows)

    def contains(self, v):
        sol = solve_square([list(col) for col in zip(*self.rows)], ratvec(v))
        return is_integral(sol)

    def index_over(self, other):
        """Index [self : other] when other is a sublattice of self."""
        d_self = _det(self.rows)
        d_other = _det(other.rows)
        idx = abs(d_other / d_self)
        if idx.denominator != 1 or idx == 0:
            raise ValueError("not a finite-index sublattice")
        return int(idx)

    def dual(self):
        """The dual lattice {v : v.g in Z for every generator g}.

        The i-th dual basis vector d_i pairs to delta_ij with the basis rows,
        i.e. it solves B d_i = e_i for the basis matrix B.
        """
        n = self.dim
        dual_rows = []
        for k in range(n):
            rhs = [Fraction(int(i == k)) for i in range(n)]
            dual_rows.append(solve_square(self.rows, rhs))
        return lattice_from_generators(dual_rows, n)


def _det(rows):
    mat = [list(map(Fraction, r)) for r in rows]
    n = len(mat)
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if mat[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        for i in range(col + 1, n):
            f = mat[i][col] * inv
            if f:
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[col])]
    return det


def lattice_from_generators(gens, dim):
    """Canonical LatticeBasis for the group generated by rational vectors."""
    gens = [ratvec(g) for g in gens]
    scale = 1
    for g in gens:
        for x in g:
            d = x.denominator
            scale = scale * d // gcd(scale, d)
    int_rows = [[int(x * scale) for x in g] for g in gens]
    H = hermite_row_form(int_rows)
    if len(H) != dim:
        raise ValueError("generators do not span a rank-%d lattice" % dim)
    rows = tuple(tuple(Fraction(x, scale) for x in row) for row in H)
    return LatticeBasis(rows=rows)


def standard_lattice(dim):
    return LatticeBasis(rows=tuple(tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)))


def extended_lattice(git, omega):
    """Lattice generated by Z^r together with all box representatives.

    The box classes are enumerated on the validated stability condition, so
    validation errors propagate.
    """
    from . import gitfan  # local import: gitfan builds on this module

    sectors = gitfan.box_elements(git, omega)
    gens = [tuple(Fraction(int(i == j)) for j in range(git.r)) for i in range(git.r)]
    gens.extend(s.f for s in sectors)
    return lattice_from_generators(gens, git.r)

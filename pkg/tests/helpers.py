"""Shared test utilities: an independent exact cone oracle and a seeded
generator of random crepant wall-crossings.

The cone oracle decides strict membership in an open cone by exact
Fourier-Motzkin elimination and shares no code with the production
membership test, so the two can cross-validate each other.
"""

from fractions import Fraction

from wallcross.gitfan import NotAdjacent, NotCrepant, EmptyQuotient, NotDeligneMumford, make_git, wall_crossing
from wallcross.lattice import primitive_integer_vector


def _rref_with_free(rows, ncols):
    mat = [list(map(Fraction, r)) for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        pv = mat[rank][col]
        mat[rank] = [x / pv for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[rank])]
        pivots.append(col)
        rank += 1
    return mat, pivots


def in_open_cone(D, indices, omega):
    """Exact strict feasibility of omega = sum_{i in indices} a_i D_i, a_i > 0.

    Solves the equality system for pivot variables, then eliminates the free
    variables by Fourier-Motzkin with strict inequalities.
    """
    indices = list(indices)
    omega = [Fraction(x) for x in omega]
    if not indices:
        return all(x == 0 for x in omega)
    r = len(omega)
    k = len(indices)
    # augmented system: rows over coordinates, unknowns a_1..a_k
    aug = [[Fraction(D[i][c]) for i in indices] + [omega[c]] for c in range(r)]
    red, pivots = _rref_with_free(aug, k + 1)
    if k in pivots:
        return False  # inconsistent
    free = [c for c in range(k) if c not in pivots]
    # each variable as an affine function of the free variables:
    # expr = (const, {free_col: coeff})
    exprs = {}
    for c in free:
        exprs[c] = (Fraction(0), {c: Fraction(1)})
    for row_idx, c in enumerate(pivots):
        const = red[row_idx][k]
        coeffs = {fc: -red[row_idx][fc] for fc in free if red[row_idx][fc] != 0}
        exprs[c] = (const, coeffs)
    # strict constraints expr > 0 for every variable
    constraints = [exprs[c] for c in range(k)]
    for var in free:
        lowers, uppers, rest = [], [], []
        for const, coeffs in constraints:
            cv = coeffs.get(var, Fraction(0))
            reduced = (const, {c: v for c, v in coeffs.items() if c != var})
            if cv > 0:
                lowers.append((cv, reduced))
            elif cv < 0:
                uppers.append((-cv, reduced))
            else:
                rest.append(reduced)
        new = list(rest)
        for cl, (lconst, lcoeffs) in lowers:
            for cu, (uconst, ucoeffs) in uppers:
                # cl*var + L > 0 and -cu*var + U > 0  =>  cu*L + cl*U > 0
                const = cu * lconst + cl * uconst
                coeffs = dict()
                for c, v in lcoeffs.items():
                    coeffs[c] = coeffs.get(c, Fraction(0)) + cu * v
                for c, v in ucoeffs.items():
                    coeffs[c] = coeffs.get(c, Fraction(0)) + cl * v
                coeffs = {c: v for c, v in coeffs.items() if v != 0}
                new.append((const, coeffs))
        constraints = new
    return all(const > 0 for const, coeffs in constraints if not coeffs)


def oracle_anticones(git, omega):
    """All anticones by the independent strict-cone oracle."""
    import itertools

    out = []
    for size in range(0, git.m + 1):
        for I in itertools.combinations(range(git.m), size):
            if in_open_cone(git.D, I, omega):
                out.append(I)
    return out


def _dual_unit(e):
    """Small integer vector pairing to 1 with a primitive integer vector."""
    import itertools

    n = len(e)
    for radius in range(1, 6):
        for g in itertools.product(range(-radius, radius + 1), repeat=n):
            if sum(a * b for a, b in zip(g, e)) == 1:
                return tuple(g)
    raise AssertionError("no small dual vector found for %r" % (e,))


def random_crepant_crossing(rng, max_r=3, max_m=7, max_tries=400):
    """A random valid crepant adjacent wall-crossing, by rejection sampling.

    The wall normal is drawn first and the characters are corrected to have
    prescribed pairings summing to zero, which enforces crepancy by
    construction; validity and adjacency are then checked by the production
    code and failures are resampled.
    """
    for _ in range(max_tries):
        r = rng.randint(1, max_r)
        m = rng.randint(max(r + 2, 3), max_m)
        e_raw = tuple(rng.randint(-2, 2) for _ in range(r))
        if all(x == 0 for x in e_raw):
            continue
        e = primitive_integer_vector(e_raw)
        g = _dual_unit(e)
        values = [rng.randint(-2, 2) for _ in range(m - 1)]
        values.append(-sum(values))
        if abs(values[-1]) > 3:
            continue
        if not (any(v > 0 for v in values) and any(v < 0 for v in values)):
            continue
        D = []
        for i in range(m):
            row = [rng.randint(-2, 2) for _ in range(r)]
            pairing = sum(a * b for a, b in zip(row, e))
            row = [a + (values[i] - pairing) * b for a, b in zip(row, g)]
            D.append(tuple(row))
        try:
            git = make_git(D)
        except ValueError:
            continue
        wall = [i for i in range(m) if values[i] == 0]
        omega0 = tuple(
            sum(rng.randint(1, 3) * Fraction(git.D[i][c]) for i in wall) if wall else Fraction(0)
            for c in range(r)
        )
        for eps_den in (4, 8, 16):
            eps = Fraction(1, eps_den)
            omega_plus = tuple(o + eps * gg for o, gg in zip(omega0, g))
            omega_minus = tuple(o - eps * gg for o, gg in zip(omega0, g))
            try:
                return wall_crossing(git, omega_plus, omega_minus)
            except (NotAdjacent, NotCrepant, EmptyQuotient, NotDeligneMumford, ValueError):
                continue
    raise RuntimeError("random generator failed to produce a crossing")


def oracle_box(git, A):
    """Brute-force box classes: every candidate denominator is bounded by the
    anticone determinants, so scanning one common refinement is complete."""
    import itertools
    from fractions import Fraction
    from math import gcd

    from wallcross.lattice import _det

    N = 1
    for delta in A.minimal:
        d = abs(int(_det([[Fraction(git.D[i][k]) for k in range(git.r)] for i in delta])))
        N = N * d // gcd(N, d)
    out = []
    for coords in itertools.product(range(N), repeat=git.r):
        f = tuple(Fraction(c, N) for c in coords)
        I_f = tuple(i for i in range(git.m) if (sum(Fraction(git.D[i][k]) * f[k] for k in range(git.r))).denominator == 1)
        if A.contains(I_f):
            out.append(f)
    return sorted(out)

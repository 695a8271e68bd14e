"""GIT data, chamber/anticone/box combinatorics, and wall-crossing data.

Indices into the character list are 0-based throughout.  A stability
condition omega selects the set of anticones A_omega = {I : omega is a
strictly positive combination of the characters indexed by I}; minimal
anticones (size r) index torus fixed points.  Crossing a single wall between
two adjacent chambers produces a WallCrossing record holding the wall normal,
the index partitions, the classification case and the splitting vectors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .lattice import (
    _det as det_frac,
    frac_part,
    intvec,
    is_integral,
    matrix_rank,
    primitive_wall_normal,
    NotAHyperplane,
    quotient_transversal,
    ratvec,
    rational_line_membership,
    solve_rectangular,
    solve_square,
    vdot,
    vscale,
    vsub,
    zero_vec,
)


class EmptyQuotient(ValueError):
    """Stability condition with {0..m-1} not an anticone: empty quotient."""


class NotDeligneMumford(ValueError):
    """Some anticone fails the spanning condition."""


class NotAdjacent(ValueError):
    """The two chambers do not share a facet."""


class NotCrepant(ValueError):
    """The character sum does not lie on the wall."""


# ---------------------------------------------------------------------------
# GIT data


@dataclass(frozen=True)
class GITData:
    """A torus rank r and m integer characters, given as rows of D."""

    r: int
    m: int
    D: tuple  # m rows, each an r-tuple of ints
    labels: tuple = None

    def __post_init__(self):
        if not (self.m >= self.r >= 1):
            raise ValueError("need m >= r >= 1")
        if len(self.D) != self.m or any(len(row) != self.r for row in self.D):
            raise ValueError("D must be an m x r integer matrix")
        object.__setattr__(self, "D", tuple(intvec(row) for row in self.D))
        if matrix_rank(self.D) != self.r:
            raise ValueError("characters must span the full rank-r lattice")
        if self.labels is not None and len(self.labels) != self.m:
            raise ValueError("labels must match the number of characters")

    def pair(self, i, v):
        """<D_i, v> for v in the cocharacter space."""
        return vdot(self.D[i], v)


def make_git(D, labels=None):
    D = tuple(tuple(row) for row in D)
    return GITData(r=len(D[0]), m=len(D), D=D, labels=tuple(labels) if labels else None)


def vadd_frac(a, b):
    return tuple(Fraction(x) + Fraction(y) for x, y in zip(a, b))


def vneg_tuple(v):
    return tuple(-Fraction(x) for x in v)


# ---------------------------------------------------------------------------
# anticones


@dataclass(frozen=True)
class AnticoneSet:
    """All anticones of a validated stability condition.

    Only the minimal anticones are stored; validity guarantees the full set
    is their closure under enlargement.
    """

    omega: tuple
    m: int
    r: int
    minimal: tuple  # sorted tuple of sorted index tuples, each of size r

    def contains(self, I):
        I = frozenset(I)
        return any(set(d) <= I for d in self.minimal)

    def all_anticones(self):
        for size in range(self.r, self.m + 1):
            for I in itertools.combinations(range(self.m), size):
                if self.contains(I):
                    yield I

    @property
    def s_set(self):
        common = set(self.minimal[0])
        for d in self.minimal[1:]:
            common &= set(d)
        return tuple(sorted(common))


def _positive_combination(git, indices, omega):
    """Exact coefficients of omega over an independent index set, or None.

    Returns the coefficient tuple when omega is a strictly positive
    combination of the (linearly independent) selected characters.
    """
    omega = ratvec(omega)
    if not indices:
        return () if all(x == 0 for x in omega) else None
    rows = [[Fraction(git.D[i][k]) for i in indices] for k in range(git.r)]
    sol = solve_rectangular(rows, list(omega))
    if sol is None:
        return None
    recon = tuple(
        sum((sol[t] * Fraction(git.D[idx][k]) for t, idx in enumerate(indices)), Fraction(0))
        for k in range(git.r)
    )
    if recon != omega:
        return None
    if all(c > 0 for c in sol):
        return sol
    return None


def validate_stability(git, omega):
    """Check both stability assumptions and return the anticone set.

    Membership of omega in the open cone over an index set is decided
    exactly.  Every anticone contains, by Caratheodory reduction, a linearly
    independent index set that is itself an anticone, so enumerating the
    independent ones decides both assumptions and yields the minimal
    anticones.
    """
    omega = ratvec(omega)
    if len(omega) != git.r:
        raise ValueError("omega has wrong dimension")
    minimal = []
    for size in range(0, git.r + 1):
        undersized = None
        for I in itertools.combinations(range(git.m), size):
            sub = [git.D[i] for i in I]
            if sub and matrix_rank(sub) != size:
                continue
            if _positive_combination(git, I, omega) is not None:
                if size < git.r:
                    undersized = I
                    break
                minimal.append(tuple(I))
        if undersized is not None:
            raise NotDeligneMumford(
                "Assumption(2) spanning fails for I=%s" % (set(undersized) or "{}",)
            )
    if not minimal:
        raise EmptyQuotient("Assumption(1) fails: {0..m-1} is not an anticone")
    return AnticoneSet(omega=omega, m=git.m, r=git.r, minimal=tuple(sorted(minimal)))


def minimal_anticones(A):
    return list(A.minimal)


def s_set(A):
    return A.s_set


# ---------------------------------------------------------------------------
# sectors (box elements) and fixed points


@dataclass(frozen=True)
class SectorLabel:
    """A box class: canonical representative f, its isotropy set and age."""

    f: tuple
    I_f: tuple
    age: Fraction
    side: str = None

    @property
    def is_zero(self):
        return all(x == 0 for x in self.f)


def _canonical_rep(v):
    return tuple(frac_part(x) for x in v)


def _sector_from_rep(git, A, f, side=None):
    f = _canonical_rep(f)
    I_f = tuple(i for i in range(git.m) if git.pair(i, f).denominator == 1)
    age = sum((frac_part(git.pair(i, f)) for i in range(git.m) if i not in I_f), Fraction(0))
    assert A.contains(I_f), "sector isotropy set must be an anticone"
    return SectorLabel(f=f, I_f=I_f, age=age, side=side)


def box_elements(git, omega, side=None):
    """All box classes of the stability condition, zero sector first.

    Every box class is supported on some minimal anticone's isotropy, so the
    enumeration runs over coset representatives per minimal anticone and
    dedupes canonical representatives.
    """
    A = omega if isinstance(omega, AnticoneSet) else validate_stability(git, omega)
    seen = {}
    for delta in A.minimal:
        M = [git.D[i] for i in delta]
        # classes f with all pairings integral correspond to pairing vectors
        # k = (D_i . f) modulo the image of the integer lattice, which is the
        # column span of the anticone matrix
        cols = [tuple(git.D[i][a] for i in delta) for a in range(git.r)]
        for k in quotient_transversal(cols):
            f = solve_square(M, [Fraction(x) for x in k])
            sec = _sector_from_rep(git, A, f, side=side)
            seen.setdefault(sec.f, sec)
    out = sorted(seen.values(), key=lambda s: s.f)
    out.sort(key=lambda s: not s.is_zero)
    return out


def inv_sector(git, A, sector):
    """The sector of the inverse stabilizer class [-f]."""
    inv = _sector_from_rep(git, A, vneg_tuple(sector.f), side=sector.side)
    assert inv.I_f == sector.I_f
    return inv


@dataclass(frozen=True)
class FixedPointLabel:
    """A torus fixed point on the inertia stack: minimal anticone + sector."""

    delta: tuple
    sector: SectorLabel

    @property
    def f(self):
        return self.sector.f

    def describe(self):
        return "(delta=%s, f=(%s))" % (list(self.delta), ",".join(str(x) for x in self.sector.f))


def fixed_point_labels(git, A, side=None):
    """All (delta, f) pairs, sorted: delta lex, zero sector first."""
    sectors = box_elements(git, A, side=side)
    out = []
    for delta in A.minimal:
        for sec in sectors:
            if all(i in sec.I_f for i in delta):
                out.append(FixedPointLabel(delta=delta, sector=sec))
    out.sort(key=lambda l: (l.delta, not l.sector.is_zero, l.sector.f))
    return out


# ---------------------------------------------------------------------------
# wall-crossing


@dataclass(frozen=True)
class WallCrossing:
    git: GITData
    omega_plus: tuple
    omega_minus: tuple
    A_plus: AnticoneSet
    A_minus: AnticoneSet
    e: tuple
    M_plus: tuple
    M_minus: tuple
    M_zero: tuple
    S_plus: tuple
    S_minus: tuple
    S_zero: tuple
    case: str
    xi_plus: dict = field(hash=False)
    xi_minus: dict = field(hash=False)

    def pair_e(self, i):
        return int(vdot(self.git.D[i], self.e))

    def on_wall(self, v):
        return vdot(v, self.e) == 0


def _wall_hyperplanes(git):
    """Distinct candidate wall hyperplanes spanned by r-1 characters.

    Returned as a dict mapping each sign-normalized primitive normal to one
    spanning index set.
    """
    normals = {}
    if git.r == 1:
        normals[(1,)] = ()
        return normals
    for J in itertools.combinations(range(git.m), git.r - 1):
        rows = [git.D[j] for j in J]
        if matrix_rank(rows) != git.r - 1:
            continue
        try:
            n = primitive_wall_normal(rows, _any_off_hyperplane(git, rows))
        except NotAHyperplane:
            continue
        if n[_first_nonzero(n)] < 0:
            n = tuple(-x for x in n)
        normals.setdefault(n, J)
    return normals


def _first_nonzero(v):
    return next(i for i, x in enumerate(v) if x != 0)


def _any_off_hyperplane(git, rows):
    for i in range(git.m):
        if matrix_rank(list(rows) + [git.D[i]]) == len(rows) + 1:
            return git.D[i]
    raise NotAHyperplane("characters all lie on one hyperplane")


def _in_closed_cone(git, indices, v):
    """v in the closed cone over an independent character set, exactly."""
    v = ratvec(v)
    if not indices:
        return all(x == 0 for x in v)
    rows = [[Fraction(git.D[i][k]) for i in indices] for k in range(git.r)]
    sol = solve_rectangular(rows, list(v))
    if sol is None:
        return False
    recon = tuple(
        sum((sol[t] * Fraction(git.D[idx][k]) for t, idx in enumerate(indices)), Fraction(0))
        for k in range(git.r)
    )
    if recon != v:
        return False
    return all(c >= 0 for c in sol)


def _in_wall_cone(git, normal, point):
    """Whether the crossing point lies in the closed cone of wall characters."""
    cone_indices = [i for i in range(git.m) if vdot(git.D[i], normal) == 0]
    for size in range(0, git.r):
        for K in itertools.combinations(cone_indices, size):
            rows = [git.D[k] for k in K]
            if rows and matrix_rank(rows) != size:
                continue
            if _in_closed_cone(git, K, point):
                return True
    return False


def _classify(S_plus, S_minus, M_plus, M_minus):
    S_plus, S_minus = set(S_plus), set(S_minus)
    cases = []
    if S_plus == S_minus and len(M_plus) >= 2 and len(M_minus) >= 2:
        cases.append("I")
    if S_plus < S_minus and S_minus - S_plus == set(M_minus) and len(M_minus) == 1 and len(M_plus) >= 2:
        cases.append("II-i")
    if S_minus < S_plus and S_plus - S_minus == set(M_plus) and len(M_plus) == 1 and len(M_minus) >= 2:
        cases.append("II-ii")
    if (
        len(M_plus) == 1
        and len(M_minus) == 1
        and S_plus - S_minus == set(M_plus)
        and S_minus - S_plus == set(M_minus)
    ):
        cases.append("III")
    if len(cases) != 1:
        raise NotAdjacent("wall-crossing does not satisfy the one-case classification: %s" % cases)
    return cases[0]


def _xi_vectors(git, A, S):
    """The splitting vectors xi_j, one per extended index j in S.

    xi_j pairs to 1 with D_j, to 0 with the other members of the minimal
    anticone whose fan cone contains the extended vector, and to minus the
    cone coefficients there.  Minimal anticones are scanned in lex order for
    a nonnegative representation; the relative-interior support makes the
    result canonical.
    """
    xi = {}
    for j in S:
        found = None
        for delta in A.minimal:
            rows = [git.D[k] for k in delta]
            rhs = [Fraction(int(k == j)) for k in delta]
            v = solve_square(rows, rhs)
            coeffs = {i: -git.pair(i, v) for i in range(git.m) if i not in delta and i != j}
            if all(c >= 0 for c in coeffs.values()):
                found = v
                break
        if found is None:
            raise ValueError("no fan cone contains the extended vector for index %d" % j)
        xi[j] = found
    return xi


def vadd_scaled(a, b, t):
    return tuple((1 - t) * Fraction(x) + t * Fraction(y) for x, y in zip(a, b))


def wall_crossing(git, omega_plus, omega_minus):
    """Full wall-crossing record for two adjacent crepant chambers."""
    omega_plus, omega_minus = ratvec(omega_plus), ratvec(omega_minus)
    A_plus = validate_stability(git, omega_plus)
    A_minus = validate_stability(git, omega_minus)
    if set(A_plus.minimal) == set(A_minus.minimal):
        raise NotAdjacent("both stability conditions lie in the same chamber")

    # scan every candidate wall hyperplane for genuine crossings of the
    # segment from omega_plus to omega_minus; a crossing is genuine only if
    # the crossing point lies in the actual wall cone, not merely on the
    # hyperplane extension
    crossings = {}
    for n in _wall_hyperplanes(git):
        a = vdot(omega_plus, n)
        b = vdot(omega_minus, n)
        if (a > 0 and b < 0) or (a < 0 and b > 0):
            t = a / (a - b)
            point = vadd_scaled(omega_plus, omega_minus, t)
            if _in_wall_cone(git, n, point):
                crossings[n] = t
    if len(crossings) != 1:
        raise NotAdjacent(
            "segment between the chambers crosses %d wall cones, need exactly 1" % len(crossings)
        )
    (normal, _t), = crossings.items()
    e = normal if vdot(omega_plus, normal) > 0 else tuple(-x for x in normal)

    if sum(vdot(git.D[i], e) for i in range(git.m)) != 0:
        raise NotCrepant("sum of characters does not lie on the wall")

    pair = lambda i: int(vdot(git.D[i], e))
    M_plus = tuple(i for i in range(git.m) if pair(i) > 0)
    M_minus = tuple(i for i in range(git.m) if pair(i) < 0)
    M_zero = tuple(i for i in range(git.m) if pair(i) == 0)
    if not M_plus or not M_minus:
        raise NotAdjacent("wall normal pairs with one sign only")
    S_plus = A_plus.s_set
    S_minus = A_minus.s_set
    S_zero = tuple(sorted(set(S_plus) & set(S_minus)))
    case = _classify(S_plus, S_minus, M_plus, M_minus)
    xi_plus = _xi_vectors(git, A_plus, S_plus)
    xi_minus = _xi_vectors(git, A_minus, S_minus)
    return WallCrossing(
        git=git,
        omega_plus=omega_plus,
        omega_minus=omega_minus,
        A_plus=A_plus,
        A_minus=A_minus,
        e=e,
        M_plus=M_plus,
        M_minus=M_minus,
        M_zero=M_zero,
        S_plus=S_plus,
        S_minus=S_minus,
        S_zero=S_zero,
        case=case,
        xi_plus=xi_plus,
        xi_minus=xi_minus,
    )


# ---------------------------------------------------------------------------
# next-to pairs


def anticones_next_to(wc, delta_plus, delta_minus):
    """Whether two minimal anticones share a wall facet across the crossing."""
    sp, sm = set(delta_plus), set(delta_minus)
    if len(sp & sm) != wc.git.r - 1:
        return False
    extra_p = (sp - sm).pop()
    extra_m = (sm - sp).pop()
    if any(wc.pair_e(i) != 0 for i in sp & sm):
        return False
    return wc.pair_e(extra_p) > 0 and wc.pair_e(extra_m) < 0


def next_to_pairs(wc):
    """All next-to pairs of inertia fixed points across the wall.

    Pairs are (plus label, minus label); the sectors must differ by a
    rational multiple of the wall normal modulo the cocharacter lattice.
    """
    labels_plus = fixed_point_labels(wc.git, wc.A_plus, side="plus")
    labels_minus = fixed_point_labels(wc.git, wc.A_minus, side="minus")
    minus_min = set(wc.A_minus.minimal)
    plus_min = set(wc.A_plus.minimal)
    out = []
    for lp in labels_plus:
        if lp.delta in minus_min:
            continue
        for lm in labels_minus:
            if lm.delta in plus_min:
                continue
            if not anticones_next_to(wc, lp.delta, lm.delta):
                continue
            if rational_line_membership(vsub(lm.f, lp.f), wc.e) is not None:
                out.append((lp, lm))
    return out


def compatible_minus_lift(wc, label_plus, label_minus):
    """Lift of the minus sector with f_minus - f_plus a rational multiple of e."""
    alpha = rational_line_membership(vsub(label_minus.f, label_plus.f), wc.e)
    if alpha is None:
        raise ValueError("sectors are not next to each other")
    return vadd_frac(label_plus.f, vscale(alpha, wc.e))


# ---------------------------------------------------------------------------
# the secondary-moduli coordinate change


@dataclass(frozen=True)
class CoordinateChange:
    """Exponents of the chart transition between the two large-radius charts."""

    c: Fraction
    c_i: tuple
    A: int
    B: int
    A_i: tuple


@dataclass(frozen=True)
class WallFrame:
    """Ordered integral bases adapted to the wall on both sides.

    The first r-1 vectors are shared and lie on the wall; the last vector on
    each side is the unique off-wall basis vector.
    """

    sfp_plus: tuple
    sfp_minus: tuple
    change: CoordinateChange


def _dual_of_extended(git, omega):
    from .lattice import extended_lattice

    return extended_lattice(git, omega).dual()


def _in_nef_cone(git, A, v):
    for delta in A.minimal:
        rows = [[Fraction(git.D[i][k]) for i in delta] for k in range(git.r)]
        coeffs = solve_square(rows, list(v))
        if any(c < 0 for c in coeffs):
            return False
    return True


def _int_det(mat):
    d = det_frac([list(map(Fraction, r)) for r in mat])
    assert d.denominator == 1
    return int(d)


def _saturated(coord_rows):
    """Whether integer vectors extend to a lattice basis: maximal minors
    have gcd 1."""
    k = len(coord_rows)
    n = len(coord_rows[0])
    g = 0
    for cols in itertools.combinations(range(n), k):
        sub = [[row[c] for c in cols] for row in coord_rows]
        g = gcd(g, abs(_int_det(sub)))
        if g == 1:
            return True
    return g == 1


def _coords_in(basis, v):
    sol = solve_square([list(col) for col in zip(*basis.rows)], list(v))
    assert is_integral(sol), "vector is not in the lattice"
    return tuple(int(x) for x in sol)


def _constrained_sublattice(dual, conditions):
    """Basis (as ambient vectors) of the dual-lattice points annihilated by
    the given rational functionals."""
    from .lattice import integer_kernel_basis

    r = dual.dim
    cond_rows = [[vdot(dual.rows[i], cond) for i in range(r)] for cond in conditions]
    kernel = integer_kernel_basis(cond_rows, r)
    out = []
    for k in kernel:
        v = zero_vec(r)
        for coef, row in zip(k, dual.rows):
            v = vadd_frac(v, vscale(coef, row))
        out.append(v)
    return out


def _search_basis(generators, accept, need, full_det_one, max_radius=24):
    """Backtracking search for `need` vectors over the generator lattice.

    Candidates are integer combinations enumerated by sup-norm radius and
    lex order; each prefix must be extendable to a lattice basis (maximal
    minors coprime), and the full selection must be unimodular over the
    generators when `full_det_one` is set.  Deterministic.
    """
    rank = len(generators)

    def candidates(radius):
        for k in itertools.product(range(-radius, radius + 1), repeat=rank):
            if max((abs(x) for x in k), default=0) != radius:
                continue
            v = zero_vec(len(generators[0]))
            for coef, row in zip(k, generators):
                v = vadd_frac(v, vscale(coef, row))
            yield k, v

    pool = []

    def extend(chosen_k, chosen_v):
        if len(chosen_v) == need:
            if full_det_one and abs(_int_det(chosen_k)) != 1:
                return None
            return list(chosen_v)
        for k, v in pool:
            rows = list(chosen_k) + [k]
            if matrix_rank(rows) != len(rows) or not _saturated(rows):
                continue
            result = extend(rows, list(chosen_v) + [v])
            if result is not None:
                return result
        return None

    for radius in range(1, max_radius + 1):
        pool.extend((k, v) for k, v in candidates(radius) if accept(v))
        result = extend([], [])
        if result is not None:
            return result
    return None


def wall_frame(wc, search_radius=24):
    """Construct the adapted integral bases and the chart transition.

    Wall vectors come first and are shared by both sides: the extended
    characters common to both, then integral points of the shared wall
    sublattice lying on the closure of the common facet, chosen smallest
    first with backtracking.  The final off-wall vector on each side is the
    extended character when one exists, else the smallest nef integral
    point completing a basis.
    """
    git = wc.git
    dual_plus = _dual_of_extended(git, wc.omega_plus)
    dual_minus = _dual_of_extended(git, wc.omega_minus)

    seed = [ratvec(git.D[j]) for j in wc.S_zero]
    ell = git.r - 1 - len(wc.S_zero)

    # the shared facet's sublattice: on the wall, annihilated by every
    # splitting vector of both sides
    conditions = [ratvec(wc.e)]
    conditions += [wc.xi_plus[i] for i in wc.S_plus]
    conditions += [wc.xi_minus[i] for i in wc.S_minus]
    facet_gens = _constrained_sublattice(dual_plus, conditions)
    assert len(facet_gens) == ell, "facet sublattice has unexpected rank"

    def wall_accept(v):
        if all(x == 0 for x in v):
            return False
        if not (dual_minus.contains(v) and dual_plus.contains(v)):
            return False
        return _in_nef_cone(git, wc.A_plus, v) and _in_nef_cone(git, wc.A_minus, v)

    if ell:
        found = _search_basis(facet_gens, wall_accept, ell, full_det_one=True,
                              max_radius=search_radius)
        if found is None:
            raise ValueError("no integral wall basis found within search radius")
        wall = seed + found
    else:
        wall = list(seed)

    if wall:
        for dual in (dual_plus, dual_minus):
            coords = [_coords_in(dual, w) for w in wall]
            assert matrix_rank(coords) == len(wall) and _saturated(coords)

    def last_vector(side):
        A = wc.A_plus if side == "plus" else wc.A_minus
        dual = dual_plus if side == "plus" else dual_minus
        S = wc.S_plus if side == "plus" else wc.S_minus
        xi = wc.xi_plus if side == "plus" else wc.xi_minus
        extra = sorted(set(S) - set(wc.S_zero))
        if extra:
            v = ratvec(git.D[extra[0]])
            coords = [_coords_in(dual, w) for w in wall + [v]]
            assert abs(_int_det(coords)) == 1, "extended character does not complete a basis"
            return v
        # the ambient-side sublattice: annihilated by the side's splitting
        # vectors only; the off-wall completion lives here
        side_gens = _constrained_sublattice(dual, [xi[i] for i in S])
        wall_coords = [_coords_in(dual, w) for w in wall]
        for radius in range(1, search_radius + 1):
            for k in itertools.product(range(-radius, radius + 1), repeat=len(side_gens)):
                if max((abs(x) for x in k), default=0) != radius:
                    continue
                v = zero_vec(git.r)
                for coef, row in zip(k, side_gens):
                    v = vadd_frac(v, vscale(coef, row))
                if wc.on_wall(v):
                    continue
                if not _in_nef_cone(git, A, v):
                    continue
                coords = wall_coords + [_coords_in(dual, v)]
                if abs(_int_det(coords)) == 1:
                    return v
        raise ValueError("no off-wall nef basis vector found within search radius")

    last_plus = last_vector("plus")
    last_minus = last_vector("minus")
    sfp_plus = tuple(wall) + (last_plus,)
    sfp_minus = tuple(wall) + (last_minus,)

    # last_plus = sum_i c_i * wall_i - c * last_minus
    rows = [[w[k] for w in list(wall) + [last_minus]] for k in range(git.r)]
    coeffs = solve_square(rows, list(last_plus))
    c = -coeffs[-1]
    assert c > 0, "transition exponent must be positive"
    c_i = tuple(coeffs[:-1])
    B = c.denominator
    for x in c_i:
        B = B * x.denominator // gcd(B, x.denominator)
    change = CoordinateChange(c=c, c_i=c_i, A=int(c * B), B=B, A_i=tuple(int(x * B) for x in c_i))
    return WallFrame(sfp_plus=sfp_plus, sfp_minus=sfp_minus, change=change)


def coordinate_change(wc):
    return wall_frame(wc).change

"""Hypergeometric series at fixed points: inner sums, ODE check, constants.

The inner sum at an inertia fixed point is a one-variable series in the wall
monomial; its coefficients are ratios of Gamma values assembled in log space,
with factors at exact integer arguments handled exactly (a reciprocal Gamma
at a nonpositive integer kills the term).  All series are normalized so the
k = 0 coefficient is 1.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .gitfan import FixedPointLabel, fixed_point_labels
from .lattice import is_integral, ratvec, solve_square, vdot
from .localization import restrict_u

TWO_PI_I = 2j * math.pi


class PoleCollision(ValueError):
    """A Gamma factor was evaluated too close to a nonpositive integer."""


class CrepancyViolation(ValueError):
    """The two expressions for the index shift disagree."""


# ---------------------------------------------------------------------------
# complex log-Gamma (Lanczos, g = 607/128, 15 terms) with reflection

_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_LOG_SQRT_2PI = 0.9189385332046727417803297


def log_sin_pi(z):
    """A logarithm of sin(pi z), stable for large imaginary part.

    The branch is unspecified; callers only ever exponentiate sums of these.
    """
    z = complex(z)
    if abs(z.imag) < 20.0:
        s = cmath.sin(math.pi * z)
        if s == 0:
            raise PoleCollision("sin(pi z) vanishes at z=%r" % (z,))
        return cmath.log(s)
    if z.imag > 0:
        # sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z})
        return cmath.log(0.5j) - 1j * math.pi * z + cmath.log(1 - cmath.exp(2j * math.pi * z))
    return cmath.log(-0.5j) + 1j * math.pi * z + cmath.log(1 - cmath.exp(-2j * math.pi * z))


def log_gamma(z):
    """log Gamma(z) for complex z, accurate to ~1e-14 relative.

    Right half-plane by the Lanczos sum; left half-plane by reflection.  The
    branch on the left is not the principal one, which is harmless here
    because results are only exponentiated.
    """
    z = complex(z)
    if z.real < 0.5:
        if z.imag == 0 and z.real == int(z.real):
            raise PoleCollision("log_gamma pole at %r" % (z,))
        return math.log(math.pi) - log_sin_pi(z) - log_gamma(1.0 - z)
    zm1 = z - 1.0
    s = _LANCZOS_C[0]
    for k in range(1, len(_LANCZOS_C)):
        s += _LANCZOS_C[k] / (zm1 + k)
    t = zm1 + _LANCZOS_G + 0.5
    return _LOG_SQRT_2PI + (zm1 + 0.5) * cmath.log(t) - t + cmath.log(s)


def gamma(z):
    return cmath.exp(log_gamma(z))


def check_generic(arg, clearance):
    """Raise PoleCollision when arg is within clearance of a nonpositive integer."""
    n = round(arg.real)
    if n <= 0 and abs(arg - n) < clearance:
        raise PoleCollision("Gamma argument %r within %g of pole" % (arg, clearance))


# ---------------------------------------------------------------------------
# exact constants of the wall


def conifold_point(wc):
    """The degeneration point of the wall monomial, an exact rational."""
    c = Fraction(1)
    for i in range(wc.git.m):
        a = wc.pair_e(i)
        if a != 0:
            c *= Fraction(a) ** a
    return c


def w_constant(wc):
    """The integer phase shift of the continuation path.

    Computed by both equivalent expressions; their agreement is the crepancy
    condition and is asserted.
    """
    neg = -1 - sum(wc.pair_e(i) for i in range(wc.git.m) if wc.pair_e(i) < 0)
    pos = -1 + sum(wc.pair_e(i) for i in range(wc.git.m) if wc.pair_e(i) > 0)
    if neg != pos:
        raise CrepancyViolation("index shift expressions disagree: %d vs %d" % (neg, pos))
    return neg


# ---------------------------------------------------------------------------
# inner series data


@dataclass(frozen=True)
class InnerSeriesSpec:
    """One inner series: fixed point, base exponent class and pairings."""

    label: FixedPointLabel
    d_plus: tuple  # rational vector, base exponent of the series
    d: tuple  # D_j . d_plus, Fractions
    e: tuple  # D_j . e, ints
    beta_forms: tuple  # u_j(delta) as LinearForms
    delta: tuple

    def betas(self, lam):
        """u_j(delta)(lam) / (2 pi i) for every j."""
        return tuple(form(lam) / TWO_PI_I for form in self.beta_forms)


def canonical_d_plus(wc, label, wall_bound=12):
    """Smallest base exponent representing the label's sector.

    In coordinates c_i = D_i . d over i in delta, the base exponent has
    nonnegative wall coordinates, positive coordinate of the off-wall index
    below its pairing with the wall normal, and is congruent to the sector.
    The lexicographically smallest such coordinate vector is chosen.
    """
    git = wc.git
    delta = label.delta
    target = [vdot(git.D[i], label.f) for i in delta]
    e_coords = [wc.pair_e(i) for i in delta]
    off = [k for k, v in enumerate(e_coords) if v != 0]
    assert len(off) == 1 and e_coords[off[0]] > 0, "label must sit across the wall"
    c_plus = e_coords[off[0]]
    # the coordinate map d -> (D_i . d) over delta; integral d give the
    # congruence lattice of reachable coordinate vectors
    char_rows = [list(git.D[i]) for i in delta]

    def congruent(kvec):
        diff = [Fraction(kvec[t]) - target[t] for t in range(git.r)]
        return is_integral(solve_square(char_rows, diff))

    ranges = []
    for t in range(git.r):
        if t == off[0]:
            ranges.append(range(0, c_plus))
        else:
            ranges.append(range(0, wall_bound + 1))
    import itertools

    for kvec in sorted(itertools.product(*ranges)):
        if congruent(kvec):
            return solve_square(char_rows, [Fraction(x) for x in kvec])
    raise ValueError("no base exponent found within the wall bound")


def make_inner_spec(wc, label, d_plus=None):
    git = wc.git
    if d_plus is None:
        d_plus = canonical_d_plus(wc, label)
    d_plus = ratvec(d_plus)
    d = tuple(vdot(git.D[j], d_plus) for j in range(git.m))
    e = tuple(wc.pair_e(j) for j in range(git.m))
    beta_forms = restrict_u(git, label.delta)
    for i in label.delta:
        assert d[i].denominator == 1 and d[i] >= 0, "base exponent must be effective"
    return InnerSeriesSpec(
        label=label, d_plus=d_plus, d=d, e=e, beta_forms=beta_forms, delta=label.delta
    )


def _exact_gamma_ratio(d0, dk):
    """Gamma(1+d0)/Gamma(1+dk) for integers, exactly; zero when dk < 0."""
    if dk < 0:
        return Fraction(0)
    assert d0 >= 0
    if dk >= d0:
        den = 1
        for t in range(d0 + 1, dk + 1):
            den *= t
        return Fraction(1, den)
    num = 1
    for t in range(dk + 1, d0 + 1):
        num *= t
    return Fraction(num)


def inner_sum_coefficient(spec, k, lam, clearance=1e-8):
    """Coefficient of the k-th power of the wall monomial, normalized to
    coefficient 1 at k = 0.

    Factors whose argument is exactly integral (in particular every factor
    over the defining anticone) are evaluated exactly; a reciprocal Gamma at
    a nonpositive integer makes the coefficient vanish.  Generic factors are
    assembled in log space.
    """
    assert k >= 0
    betas = spec.betas(lam)
    exact = Fraction(1)
    log_acc = 0j
    for j in range(len(spec.d)):
        d0, ej, b = spec.d[j], spec.e[j], betas[j]
        if b == 0 and d0.denominator == 1:
            exact *= _exact_gamma_ratio(int(d0), int(d0) + k * ej)
            if exact == 0:
                return 0j
            continue
        a0 = 1 + b + complex(d0)
        ak = a0 + k * ej
        check_generic(a0, clearance)
        check_generic(ak, clearance)
        log_acc += log_gamma(a0) - log_gamma(ak)
    # the exact part and the Gamma part can separately over- or underflow
    # at large k while their product stays moderate; combine in log space
    log_exact = math.log(abs(exact.numerator)) - math.log(exact.denominator)
    sign = 1 if exact > 0 else -1
    return sign * cmath.exp(log_acc + log_exact)


@dataclass(frozen=True)
class TruncatedSeries:
    """Finite initial segment of a one-variable power series."""

    variable: str
    coeffs: tuple  # complex, indices 0..order
    order: int

    def eval(self, x):
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def inner_series(spec, order, lam):
    coeffs = tuple(inner_sum_coefficient(spec, k, lam) for k in range(order + 1))
    return TruncatedSeries(variable="x", coeffs=coeffs, order=order)


def enumerate_d_plus(wc, label, wall_bound):
    """All base exponent classes for a label with wall coordinates bounded."""
    git = wc.git
    delta = label.delta
    target = [vdot(git.D[i], label.f) for i in delta]
    e_coords = [wc.pair_e(i) for i in delta]
    off = [t for t, v in enumerate(e_coords) if v != 0]
    assert len(off) == 1 and e_coords[off[0]] > 0
    c_plus = e_coords[off[0]]
    char_rows = [list(git.D[i]) for i in delta]
    import itertools

    ranges = []
    for t in range(git.r):
        if t == off[0]:
            ranges.append(range(0, c_plus))
        else:
            ranges.append(range(0, wall_bound + 1))
    out = []
    for kvec in sorted(itertools.product(*ranges)):
        diff = [Fraction(kvec[t]) - target[t] for t in range(git.r)]
        if is_integral(solve_square(char_rows, diff)):
            out.append(solve_square(char_rows, [Fraction(x) for x in kvec]))
    return out


def h_restriction_series(wc, label, order, wall_bound, lam):
    """Inner series of the fixed-point restriction, one per base exponent."""
    out = {}
    for d_plus in enumerate_d_plus(wc, label, wall_bound):
        spec = make_inner_spec(wc, label, d_plus)
        out[d_plus] = inner_series(spec, order, lam)
    return out


# ---------------------------------------------------------------------------
# the one-variable ODE annihilating the inner series


def _euler_products(spec, lam, n):
    """Evaluate the two Euler-operator products on the monomial of degree n."""
    betas = spec.betas(lam)
    plus = 1.0 + 0j
    minus = 1.0 + 0j
    for j in range(len(spec.d)):
        ej = spec.e[j]
        base = complex(spec.d[j]) + betas[j]
        if ej > 0:
            for l in range(ej):
                plus *= ej * n + base - l
        elif ej < 0:
            for l in range(-ej):
                minus *= ej * n + base - l
    return plus, minus


def gkz_ode_residual(series, spec, lam):
    """Largest relative residual of the annihilating operator on the series.

    The operator is the difference of the positive-direction Euler product
    and the monomial times the negative-direction product; it vanishes
    identically on the exact series.
    """
    K = series.order
    residuals = []
    scale = 0.0
    a_prev = None
    for n in range(K + 1):
        plus, minus = _euler_products(spec, lam, n)
        term_plus = plus * series.coeffs[n]
        if n == 0:
            resid = term_plus
            scale = max(scale, abs(term_plus))
        else:
            prev_minus = _euler_products(spec, lam, n - 1)[1]
            term_minus = prev_minus * series.coeffs[n - 1]
            resid = term_plus - term_minus
            scale = max(scale, abs(term_plus), abs(term_minus))
        residuals.append(abs(resid))
    if scale == 0.0:
        return 0.0
    return max(residuals) / scale


# ---------------------------------------------------------------------------
# cohomological series coefficients (finite products, no Gamma functions)


def i_restriction_coefficient(git, delta, d, lam, z):
    """Fixed-point coefficient of one exponent of the cohomological series.

    A finite product over characters: the factors (u_j + a z) with a running
    over the pairing's congruence class appear in the denominator on (0, d_j]
    for positive pairings, and in the numerator on (d_j, 0] for negative
    ones.
    """
    u = restrict_u(git, delta)
    val = 1.0 + 0j
    for j in range(git.m):
        dj = vdot(git.D[j], d)
        uj = u[j](lam)
        if dj > 0:
            a = dj
            while a > 0:
                val /= uj + complex(a) * z
                a -= 1
        elif dj < 0:
            a = dj + 1
            while a <= 0:
                val *= uj + complex(a) * z
                a += 1
    return val


def i_leading_terms(wc, side, z, lam):
    """Leading coefficient of the normalized cohomological series per label.

    Zero sectors lead with 1 (the trivial exponent); other sectors lead at
    their smallest base exponent.
    """
    git = wc.git
    A = wc.A_plus if side == "plus" else wc.A_minus
    out = {}
    for label in fixed_point_labels(git, A, side=side):
        if label.sector.is_zero:
            out[label] = 1.0 + 0j
        else:
            d = _minimal_sector_exponent(wc, label)
            out[label] = i_restriction_coefficient(git, label.delta, d, lam, z)
    return out


def _minimal_sector_exponent(wc, label):
    """Smallest effective exponent with the label's sector class."""
    git = wc.git
    delta = label.delta
    char_rows = [list(git.D[i]) for i in delta]
    target = [vdot(git.D[i], label.f) for i in delta]
    import itertools

    for radius in range(0, 40):
        for kvec in itertools.product(range(0, radius + 1), repeat=git.r):
            if max(kvec, default=0) != radius:
                continue
            diff = [Fraction(kvec[t]) - target[t] for t in range(git.r)]
            if is_integral(solve_square(char_rows, diff)):
                return solve_square(char_rows, [Fraction(x) for x in kvec])
    raise ValueError("no effective exponent found")


# ---------------------------------------------------------------------------
# seeded generic sampling of torus parameters


def sample_lambdas(m, count, seed, radius=0.4, im_min=0.05):
    """Deterministic generic samples of the torus parameters.

    Real parts are uniform in [-radius, radius]; imaginary parts have
    magnitude in [im_min, radius] with random sign, which keeps Gamma
    arguments away from the real resonance locus.  The radius keeps the
    restricted classes small enough for rapid convergence but large enough
    that point-class restrictions stay well above the sensitivity floor of
    the verification suites.
    """
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        lam = []
        for _i in range(m):
            re = rng.uniform(-radius, radius)
            im = rng.uniform(im_min, radius) * (1 if rng.random() < 0.5 else -1)
            lam.append(complex(re, im))
        out.append(tuple(lam))
    return out


def genericity_gap(wc, lam):
    """Smallest distance of any restricted class from zero over both sides."""
    gap = float("inf")
    for A in (wc.A_plus, wc.A_minus):
        for delta in A.minimal:
            u = restrict_u(wc.git, delta)
            for j in range(wc.git.m):
                if j in delta:
                    continue
                gap = min(gap, abs(u[j](lam)))
    return gap


def generic_lambdas(wc, count, seed, clearance=1e-3):
    """Seeded samples filtered for genericity; one resample then hard error."""
    raw = sample_lambdas(wc.git.m, 2 * count + 4, seed)
    out = []
    for lam in raw:
        if genericity_gap(wc, lam) > clearance:
            out.append(lam)
        if len(out) == count:
            return out
    raise PoleCollision("could not draw %d generic samples" % count)

"""Analytic continuation of inner series by a vertical-line Barnes integral.

The inner series at a fixed point across the wall is represented as a
contour integral of Gamma-function ratios along a vertical line.  Closing
the contour to the right recovers the series; closing to the left produces
the continued expansion, whose residue classes group into closed-form
connection coefficients between next-to fixed points.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from scipy.integrate import quad

from .gitfan import compatible_minus_lift, fixed_point_labels, next_to_pairs
from .hypergeom import (
    PoleCollision,
    conifold_point,
    log_gamma,
    log_sin_pi,
    make_inner_spec,
    w_constant,
)
from .lattice import ratvec, vdot, vsub
from .localization import restrict_u

TWO_PI_I = 2j * math.pi
LOG_PI = math.log(math.pi)


class ContourTooClose(ValueError):
    """No admissible abscissa keeps the stated clearance from all poles."""


class NonConvergent(ValueError):
    """The argument of the wall monomial is outside the convergence sector."""


class IncompatibleLifts(ValueError):
    """Sector lifts do not differ by a rational multiple of the wall normal."""


# ---------------------------------------------------------------------------
# closed-form connection coefficients


@dataclass(frozen=True)
class ContinuationCoefficient:
    """Connection coefficient between a next-to pair of fixed points."""

    label_plus: object
    label_minus: object
    j_minus: int
    l: int
    w: int
    lift_plus: tuple
    lift_minus: tuple
    u_form: object  # u_{j-}(delta_plus) as a LinearForm
    shift: Fraction  # D_{j-} . (f_plus - f_minus)
    ratio_js: tuple  # other negative-pairing indices

    def value(self, wc, lam):
        return _coefficient_value(wc, self, lam)

    def describe(self):
        return (
            "exp(-pi*i*%d/%d * X) * sin(pi X)/(%d sin(pi X/%d)) * prod over j in %s"
            " of sin(pi(u_j(d+)/2pi i + D_j f+))/sin(pi(u_j(d-)/2pi i + D_j f-));"
            " X = (%s)/(2 pi i) + %s"
            % (self.w, self.l, self.l, self.l, list(self.ratio_js), self.u_form, self.shift)
        )


def _is_rational_multiple(v, e):
    """Exact test that v lies on the rational line spanned by e."""
    scalar = None
    for vi, ei in zip(v, e):
        if ei == 0:
            if Fraction(vi) != 0:
                return False
        else:
            s = Fraction(vi) / Fraction(ei)
            if scalar is None:
                scalar = s
            elif s != scalar:
                return False
    return True


def continuation_coefficient(wc, pair, lift_plus=None, lift_minus=None):
    """Closed-form connection coefficient for a next-to pair of labels.

    Lifts default to the canonical plus representative and the compatible
    minus lift; explicitly supplied lifts must differ by a rational multiple
    of the wall normal.
    """
    label_plus, label_minus = pair
    if lift_plus is None:
        lift_plus = label_plus.f
    if lift_minus is None:
        lift_minus = compatible_minus_lift(wc, label_plus, label_minus)
    lift_plus, lift_minus = ratvec(lift_plus), ratvec(lift_minus)
    for lift, label in ((lift_plus, label_plus), (lift_minus, label_minus)):
        if not all(x.denominator == 1 for x in vsub(lift, label.f)):
            raise IncompatibleLifts("lift does not represent the sector class")
    if not _is_rational_multiple(vsub(lift_plus, lift_minus), wc.e):
        raise IncompatibleLifts("lifts do not differ by a multiple of the wall normal")
    j_minus = next(i for i in label_minus.delta if i not in label_plus.delta)
    l = -wc.pair_e(j_minus)
    assert l > 0
    u_plus = restrict_u(wc.git, label_plus.delta)
    shift = vdot(wc.git.D[j_minus], vsub(lift_plus, lift_minus))
    ratio_js = tuple(j for j in wc.M_minus if j != j_minus)
    return ContinuationCoefficient(
        label_plus=label_plus,
        label_minus=label_minus,
        j_minus=j_minus,
        l=l,
        w=w_constant(wc),
        lift_plus=lift_plus,
        lift_minus=lift_minus,
        u_form=u_plus[j_minus],
        shift=shift,
        ratio_js=ratio_js,
    )


def _coefficient_value(wc, coeff, lam):
    git = wc.git
    X = coeff.u_form(lam) / TWO_PI_I + complex(coeff.shift)
    val = cmath.exp(-1j * math.pi * coeff.w * X / coeff.l)
    if coeff.l == 1:
        principal = 1.0 + 0j
    else:
        principal = cmath.sin(math.pi * X) / (coeff.l * cmath.sin(math.pi * X / coeff.l))
    val *= principal
    u_plus = restrict_u(git, coeff.label_plus.delta)
    u_minus = restrict_u(git, coeff.label_minus.delta)
    for j in coeff.ratio_js:
        num = u_plus[j](lam) / TWO_PI_I + complex(vdot(git.D[j], coeff.lift_plus))
        den = u_minus[j](lam) / TWO_PI_I + complex(vdot(git.D[j], coeff.lift_minus))
        val *= cmath.sin(math.pi * num) / cmath.sin(math.pi * den)
    return val


def lift_invariance_check(wc, pair, lam, tol=1e-12):
    """Evaluate the coefficient with distinct compatible lift pairs.

    Shifting the plus lift by the wall normal, the minus lift against it,
    and both lifts by an integer vector must leave the value unchanged.
    """
    base = continuation_coefficient(wc, pair)
    f_plus, f_minus = base.lift_plus, base.lift_minus
    e = ratvec(wc.e)
    unit = tuple(Fraction(int(i == 0)) for i in range(wc.git.r))
    variants = [
        (tuple(a + b for a, b in zip(f_plus, e)), f_minus),
        (f_plus, tuple(a - b for a, b in zip(f_minus, e))),
        (tuple(a + b for a, b in zip(f_plus, unit)), tuple(a + b for a, b in zip(f_minus, unit))),
    ]
    v0 = base.value(wc, lam)
    for lp, lm in variants:
        v = continuation_coefficient(wc, pair, lp, lm).value(wc, lam)
        if abs(v - v0) > tol * max(1.0, abs(v0)):
            return False
    return True


# ---------------------------------------------------------------------------
# the continuation matrix


@dataclass(frozen=True)
class ContinuationMatrix:
    rows: tuple  # plus labels
    cols: tuple  # minus labels
    kinds: dict  # (i, j) -> "identity" | "coefficient" | "zero"
    coefficients: dict  # (i, j) -> ContinuationCoefficient for coefficient entries

    def entry_value(self, wc, i, j, lam):
        kind = self.kinds[(i, j)]
        if kind == "identity":
            return 1.0 + 0j
        if kind == "zero":
            return 0.0 + 0j
        return self.coefficients[(i, j)].value(wc, lam)


def continuation_matrix(wc, lam=None):
    """Block transformation of fixed-point restrictions across the wall.

    Rows over plus fixed points, columns over minus fixed points: identity
    on common anticones, a connection coefficient on next-to pairs, zero
    elsewhere.
    """
    rows = tuple(fixed_point_labels(wc.git, wc.A_plus, side="plus"))
    cols = tuple(fixed_point_labels(wc.git, wc.A_minus, side="minus"))
    pairs = {(lp.delta, lp.f, lm.delta, lm.f): (lp, lm) for lp, lm in next_to_pairs(wc)}
    kinds = {}
    coeffs = {}
    for i, lp in enumerate(rows):
        for j, lm in enumerate(cols):
            if lp.delta == lm.delta and lp.f == lm.f:
                kinds[(i, j)] = "identity"
            elif (lp.delta, lp.f, lm.delta, lm.f) in pairs:
                kinds[(i, j)] = "coefficient"
                coeffs[(i, j)] = continuation_coefficient(wc, (lp, lm))
            else:
                kinds[(i, j)] = "zero"
    return ContinuationMatrix(rows=rows, cols=cols, kinds=kinds, coefficients=coeffs)


# ---------------------------------------------------------------------------
# the Barnes integral


@dataclass(frozen=True)
class ContourSpec:
    abscissa: float = None  # auto-scan when None
    t_max: float = 40.0
    quad_tol: float = 1e-11
    clearance: float = 1e-3


def _log_integrand(spec, lam):
    betas = spec.betas(lam)

    def logF(s, log_xi):
        acc = LOG_PI - log_sin_pi(s) + s * log_xi
        for j in range(len(spec.d)):
            ej = spec.e[j]
            arg_base = betas[j] + complex(spec.d[j])
            if ej < 0:
                acc += log_gamma(-arg_base - s * ej)
            else:
                acc -= log_gamma(1 + arg_base + s * ej)
        return acc

    return logF


def left_poles(spec, lam, re_min=-3.0, re_max=2.0):
    """The non-integer poles of the integrand with real part in a window."""
    betas = spec.betas(lam)
    poles = []
    for j in range(len(spec.d)):
        if spec.e[j] >= 0:
            continue
        l = -spec.e[j]
        base = betas[j] + complex(spec.d[j])
        n = 0
        while True:
            p = (base - n) / l
            if p.real < re_min:
                break
            if p.real <= re_max:
                poles.append((j, n, p))
            n += 1
    return poles


def pole_separation(spec, lam):
    """Minimum pairwise distance among all left poles and the integers."""
    pts = [p for _j, _n, p in left_poles(spec, lam)]
    sep = float("inf")
    for i in range(len(pts)):
        for k in range(i + 1, len(pts)):
            sep = min(sep, abs(pts[i] - pts[k]))
        nearest_int = round(pts[i].real)
        sep = min(sep, abs(pts[i] - nearest_int))
    return sep


def choose_abscissa(spec, lam, contour):
    """Abscissa in [-0.45, -0.05] farthest from every pole's real part."""
    if contour.abscissa is not None:
        return contour.abscissa
    res = [p.real for _j, _n, p in left_poles(spec, lam)] + [0.0, -1.0]
    best, best_gap = None, -1.0
    for k in range(41):
        sigma = -0.45 + 0.01 * k
        gap = min(abs(sigma - x) for x in res)
        if gap > best_gap:
            best, best_gap = sigma, gap
    if best_gap < contour.clearance:
        raise ContourTooClose("best abscissa clears poles by only %g" % best_gap)
    return best


def _split_xi(x, w):
    """The rotated variable and its principal logarithm.

    The base of the s-power is the wall monomial rotated by the path phase;
    convergence needs its argument strictly inside (-pi, pi).
    """
    xi = complex(x) * cmath.exp(-1j * math.pi * w)
    if xi == 0:
        raise NonConvergent("wall monomial vanishes")
    if abs(cmath.phase(xi)) > math.pi * (1 - 1e-12):
        raise NonConvergent("argument of the wall monomial is outside the sector")
    return xi, cmath.log(xi)


def _interesting_residue(spec, betas, log_xi, j_minus, n):
    """Residue of the integrand at the n-th pole of one negative direction."""
    l = -spec.e[j_minus]
    base = betas[j_minus] + complex(spec.d[j_minus])
    p = (base - n) / l
    log_term = -log_gamma(n + 1.0) - math.log(l) + LOG_PI - log_sin_pi(p) + p * log_xi
    for j in range(len(spec.d)):
        if j == j_minus:
            continue
        ej = spec.e[j]
        bj = betas[j] + complex(spec.d[j])
        if ej < 0:
            log_term += log_gamma(-bj - p * ej)
        else:
            log_term -= log_gamma(1 + bj + p * ej)
    return (-1) ** (n % 2) * cmath.exp(log_term)


def mb_integral(spec, x, lam, contour=ContourSpec()):
    value, _err = mb_integral_with_error(spec, x, lam, contour)
    return value


def mb_integral_with_error(spec, x, lam, contour=ContourSpec()):
    """Barnes integral along the separating contour, as a vertical line plus
    residue corrections.

    The contour must keep the nonnegative integer poles on its right and all
    other poles on its left.  Non-integer poles whose real part exceeds the
    chosen abscissa are accounted for by adding their residues to the
    straight-line integral, which amounts to bending the line around them.
    The normalization makes the value equal the sum of right residues inside
    the degeneration radius and minus the sum of left residues outside it.
    """
    w = w_constant_from_spec(spec)
    xi, log_xi = _split_xi(x, w)
    if pole_separation(spec, lam) < contour.clearance:
        raise PoleCollision("left poles are closer than the clearance radius")
    sigma = choose_abscissa(spec, lam, contour)
    logF = _log_integrand(spec, lam)

    def F(t):
        return cmath.exp(logF(complex(sigma, t), log_xi))

    re_val, re_err = quad(lambda t: F(t).real, -contour.t_max, contour.t_max,
                          epsabs=contour.quad_tol, epsrel=1e-12, limit=400)
    im_val, im_err = quad(lambda t: F(t).imag, -contour.t_max, contour.t_max,
                          epsabs=contour.quad_tol, epsrel=1e-12, limit=400)
    decay = math.pi - abs(cmath.phase(xi))
    tail = (abs(F(contour.t_max)) + abs(F(-contour.t_max))) / max(decay, 1e-9)
    value = -(re_val + 1j * im_val) / (2 * math.pi)

    betas = spec.betas(lam)
    for j, n, p in left_poles(spec, lam, re_min=sigma, re_max=float("inf")):
        if p.real > sigma:
            value -= _interesting_residue(spec, betas, log_xi, j, n)
    return value, (re_err + im_err + tail) / (2 * math.pi)


def w_constant_from_spec(spec):
    return -1 + sum(e for e in spec.e if e > 0)


# ---------------------------------------------------------------------------
# residue sums


def _log_gamma_block(spec, betas, s):
    """Sum of the log-Gamma factors of the integrand except the sine part."""
    acc = 0j
    for j in range(len(spec.d)):
        ej = spec.e[j]
        base = betas[j] + complex(spec.d[j])
        if ej < 0:
            acc += log_gamma(-base - s * ej)
        else:
            acc -= log_gamma(1 + base + s * ej)
    return acc


def right_residue_sum(spec, x, lam, k_max=80, rel_tol=1e-14):
    """Sum of residues at the nonnegative integers; converges inside the
    degeneration radius."""
    w = w_constant_from_spec(spec)
    xi, log_xi = _split_xi(x, w)
    betas = spec.betas(lam)
    total = 0j
    small = 0
    for k in range(k_max + 1):
        term = (-1) ** k * cmath.exp(_log_gamma_block(spec, betas, complex(k)) + k * log_xi)
        total += term
        if abs(term) < rel_tol * max(1.0, abs(total)):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
    return total


def left_residue_terms(spec, x, lam, j_minus, residue_class, k_max=200, rel_tol=1e-14):
    """Minus the residues in one congruence class of one negative direction.

    Terms with n = k*l + residue_class for k = 0, 1, ...; their sum is the
    contribution of a single next-to partner to the continued series.
    """
    w = w_constant_from_spec(spec)
    xi, log_xi = _split_xi(x, w)
    betas = spec.betas(lam)
    l = -spec.e[j_minus]
    total = 0j
    small = 0
    for k in range(k_max + 1):
        n = k * l + residue_class
        term = _interesting_residue(spec, betas, log_xi, j_minus, n)
        total += term
        if abs(term) < rel_tol * max(1.0, abs(total)):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
    return -total


def left_residue_sum(spec, x, lam, k_max=200):
    """Sum of all residues left of the contour (sign unflipped)."""
    total = 0j
    for j in range(len(spec.d)):
        if spec.e[j] >= 0:
            continue
        for residue_class in range(-spec.e[j]):
            total -= left_residue_terms(spec, x, lam, j, residue_class, k_max=k_max)
    return total


def negative_integer_residue_is_zero(spec, n):
    """The residue at -1-n carries a reciprocal Gamma at a nonpositive
    integer over the defining anticone, hence vanishes identically."""
    s = -1 - n
    for j in spec.delta:
        arg = 1 + int(spec.d[j]) + s * spec.e[j]
        if arg <= 0:
            return True
    return False


@dataclass(frozen=True)
class ResidueReport:
    label: object
    x_inside: complex
    x_outside: complex
    residual_inside: float
    residual_outside: float
    quad_error_inside: float
    quad_error_outside: float


def verify_residue_identity(wc, label_plus, x_inside, x_outside, lam, contour=ContourSpec()):
    """Compare the Barnes integral against both residue expansions.

    Inside the degeneration radius the integral equals the right residue
    sum; outside it equals minus the left residue sum.
    """
    c = abs(float(conifold_point(wc)))
    if not (abs(x_inside) < c < abs(x_outside)):
        raise ValueError("need |x_inside| < |conifold| < |x_outside|")
    spec = make_inner_spec(wc, label_plus)
    v_in, err_in = mb_integral_with_error(spec, x_inside, lam, contour)
    v_out, err_out = mb_integral_with_error(spec, x_outside, lam, contour)
    right = right_residue_sum(spec, x_inside, lam)
    left = left_residue_sum(spec, x_outside, lam)
    return ResidueReport(
        label=label_plus,
        x_inside=complex(x_inside),
        x_outside=complex(x_outside),
        residual_inside=abs(v_in - right),
        residual_outside=abs(v_out + left),
        quad_error_inside=err_in,
        quad_error_outside=err_out,
    )


# ---------------------------------------------------------------------------
# numerical oracle for the closed-form coefficients


def _unnormalized_minus_series(wc, label_minus, d_minus, x, lam, k_max=200, rel_tol=1e-14):
    """Sum over k of x^{-k} / prod Gamma(1 + u_j(d-)/2pi i + D_j d- - k D_j e)."""
    git = wc.git
    u = restrict_u(git, label_minus.delta)
    gammas = tuple(form(lam) / TWO_PI_I for form in u)
    total = 0j
    small = 0
    inv_x = 1.0 / complex(x)
    for k in range(k_max + 1):
        log_term = 0j
        zero = False
        for j in range(git.m):
            d_j = vdot(git.D[j], d_minus)
            arg = 1 + gammas[j] + complex(d_j) - k * wc.pair_e(j)
            if gammas[j] == 0 and d_j.denominator == 1:
                ai = int(d_j) + 1 - k * wc.pair_e(j)
                if ai <= 0:
                    zero = True
                    break
                log_term -= log_gamma(float(ai))
            else:
                log_term -= log_gamma(arg)
        if not zero:
            term = cmath.exp(log_term) * inv_x ** k
            total += term
            if abs(term) < rel_tol * max(1.0, abs(total)):
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
    return total


def continuation_numeric(wc, pair, x, lam, contour=ContourSpec()):
    """Connection coefficient extracted from grouped left residues.

    This is fully independent of the closed form: it divides one residue
    class of the continued integral by the minus-side series it multiplies.
    """
    label_plus, label_minus = pair
    spec = make_inner_spec(wc, label_plus)
    j_minus = next(i for i in label_minus.delta if i not in label_plus.delta)
    l = -wc.pair_e(j_minus)
    w = w_constant(wc)
    betas = spec.betas(lam)

    # the residue class of this partner: l' = D_{j-} . d_minus mod pairing
    lift_minus = compatible_minus_lift(wc, label_plus, label_minus)
    # d_minus = d_plus + ((D_{j-}.d_plus - l') / l) e with [d_minus] = f_minus
    d_plus_pair = spec.d[j_minus]
    residue_class = None
    for cand in range(l):
        q = (d_plus_pair - cand) / l
        d_minus = tuple(a + q * b for a, b in zip(spec.d_plus, ratvec(wc.e)))
        diff = vsub(d_minus, lift_minus)
        from .lattice import is_integral

        if is_integral(diff):
            residue_class = cand
            d_minus_vec = d_minus
            break
    if residue_class is None:
        raise ValueError("no residue class matches the minus sector")

    group = left_residue_terms(spec, x, lam, j_minus, residue_class)

    prefactor = 1.0 + 0j
    for j in range(wc.git.m):
        if spec.e[j] < 0:
            prefactor *= cmath.sin(math.pi * (-betas[j] - complex(spec.d[j]))) / math.pi

    xi, log_xi = _split_xi(x, w)
    log_ye = log_xi + 1j * math.pi * w
    p0 = (betas[j_minus] + complex(d_plus_pair) - residue_class) / l
    power = cmath.exp(-p0 * log_ye)

    series = _unnormalized_minus_series(wc, label_minus, d_minus_vec, x, lam)
    return prefactor * group * power / series

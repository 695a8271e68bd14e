"""Localized equivariant K-theory at fixed points and the pull-push transform.

Classes are finite integer combinations of monomials in the inverse divisor
bundles S_j, a character line bundle L(p), a torus character, and optionally
a distinguished root generator t attached to one negative direction.  The
pull-push transform of a point basis element is computed in closed form and
compared, through fixed-point Chern characters, with the analytic
continuation coefficients; the Euler pairing is evaluated by an inertia
fixed-point sum.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .gitfan import (
    box_elements,
    compatible_minus_lift,
    fixed_point_labels,
    next_to_pairs,
    vneg_tuple,
)
from .hypergeom import check_generic, log_gamma
from .lattice import frac_part, intvec, ratvec, solve_square, vdot
from .localization import LinearForm, restrict_u, theta_restrict, zero_form
from .mellinbarnes import continuation_coefficient

TWO_PI_I = 2j * math.pi


class NonLaurent(ValueError):
    """Root-averaging left fractional powers; indicates an internal bug."""


class ResonantSample(ValueError):
    """A localization denominator is too close to zero at this sample."""


class Monomial(NamedTuple):
    s: tuple  # exponents of S_1..S_m
    p: tuple  # character of the line bundle factor
    ch: tuple  # torus character exponents
    t: int  # exponent of the root generator


class TRootDatum(NamedTuple):
    j_minus: int
    l: int
    zeta: Fraction  # the root of unity exp(2 pi i zeta)


@dataclass(frozen=True)
class KClass:
    """Finite integer combination of K-theory monomials."""

    m: int
    r: int
    terms: tuple  # sorted tuple of (Monomial, int)
    t_datum: Optional[TRootDatum] = None

    def as_dict(self):
        return dict(self.terms)

    def __add__(self, other):
        assert (self.m, self.r) == (other.m, other.r)
        datum = self.t_datum or other.t_datum
        acc = dict(self.terms)
        for mono, c in other.terms:
            acc[mono] = acc.get(mono, 0) + c
        return _from_dict(self.m, self.r, acc, datum)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return _from_dict(self.m, self.r, {mono: c * v for mono, v in self.terms}, self.t_datum)

    def __mul__(self, other):
        assert (self.m, self.r) == (other.m, other.r)
        datum = self.t_datum or other.t_datum
        acc = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                mono = Monomial(
                    s=tuple(a + b for a, b in zip(m1.s, m2.s)),
                    p=tuple(a + b for a, b in zip(m1.p, m2.p)),
                    ch=tuple(a + b for a, b in zip(m1.ch, m2.ch)),
                    t=m1.t + m2.t,
                )
                acc[mono] = acc.get(mono, 0) + c1 * c2
        return _from_dict(self.m, self.r, acc, datum)

    def dual(self):
        acc = {}
        for mono, c in self.terms:
            acc[
                Monomial(
                    s=tuple(-a for a in mono.s),
                    p=tuple(-a for a in mono.p),
                    ch=tuple(-a for a in mono.ch),
                    t=-mono.t,
                )
            ] = c
        return _from_dict(self.m, self.r, acc, self.t_datum)

    def describe(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.terms:
            factors = []
            for j, a in enumerate(mono.s):
                if a:
                    factors.append("S%d%s" % (j + 1, "" if a == 1 else "^%d" % a))
            if any(mono.p):
                factors.append("L(%s)" % ",".join(map(str, mono.p)))
            for i, a in enumerate(mono.ch):
                if a:
                    factors.append("E%d%s" % (i + 1, "" if a == 1 else "^%d" % a))
            if mono.t:
                factors.append("t^%d" % mono.t)
            body = "*".join(factors) if factors else "1"
            if c == 1:
                parts.append("+" + body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append("%+d*%s" % (c, body))
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out


def _from_dict(m, r, acc, datum=None):
    items = tuple(sorted((mono, c) for mono, c in acc.items() if c != 0))
    if not any(mono.t for mono, _ in items):
        datum = None
    return KClass(m=m, r=r, terms=items, t_datum=datum)


def _unit_monomial(m, r):
    return Monomial(s=(0,) * m, p=(0,) * r, ch=(0,) * m, t=0)


def kc_zero(git):
    return KClass(m=git.m, r=git.r, terms=())


def kc_one(git):
    return KClass(m=git.m, r=git.r, terms=((_unit_monomial(git.m, git.r), 1),))


def kc_line(git, p):
    mono = _unit_monomial(git.m, git.r)._replace(p=intvec(p))
    return KClass(m=git.m, r=git.r, terms=((mono, 1),))


def kc_s(git, j, power=1):
    s = [0] * git.m
    s[j] = power
    mono = _unit_monomial(git.m, git.r)._replace(s=tuple(s))
    return KClass(m=git.m, r=git.r, terms=((mono, 1),))


def kc_char(git, n):
    mono = _unit_monomial(git.m, git.r)._replace(ch=intvec(n))
    return KClass(m=git.m, r=git.r, terms=((mono, 1),))


def kc_t(git, datum, power=1):
    mono = _unit_monomial(git.m, git.r)._replace(t=power)
    return KClass(m=git.m, r=git.r, terms=((mono, 1),), t_datum=datum)


# ---------------------------------------------------------------------------
# point basis and representation lifts


def basis_e(git, A, delta, rho_hat):
    """Point class at a minimal anticone twisted by a character lift."""
    out = kc_line(git, rho_hat)
    for i in range(git.m):
        if i not in delta:
            out = out * (kc_one(git) - kc_s(git, i))
    return out


def isotropy_order(git, delta):
    from .lattice import _det

    d = _det([[Fraction(git.D[i][k]) for k in range(git.r)] for i in delta])
    return abs(int(d))


def canonical_rho_lifts(git, delta):
    """Canonical character lifts of the isotropy representations at a point.

    The lift of each class is the unique coset member whose coordinates over
    the anticone's character basis lie in [0, 1).
    """
    from .lattice import quotient_transversal

    rows = [git.D[i] for i in delta]
    lifts = []
    for k in quotient_transversal(rows):
        # coordinates of k over the rows, reduced into [0,1)
        cols = [[Fraction(git.D[i][a]) for i in delta] for a in range(git.r)]
        t = solve_square(cols, [Fraction(x) for x in k])
        t = [frac_part(x) for x in t]
        lift = [Fraction(0)] * git.r
        for coef, i in zip(t, delta):
            for a in range(git.r):
                lift[a] += coef * git.D[i][a]
        lifts.append(intvec(lift))
    return lifts


def minus_basis(wc):
    """All (delta, rho_hat) labels of the minus-side point basis."""
    out = []
    for delta in wc.A_minus.minimal:
        for rho in canonical_rho_lifts(wc.git, delta):
            out.append((delta, rho))
    return out


# ---------------------------------------------------------------------------
# the pull-push transform


def roots_projector(l, n):
    """Average of the n-th power over the l roots: the exponent of the
    underlying bundle when l divides n, else None."""
    assert l >= 1
    if n % l != 0:
        return None
    return n // l


def fm_transform(wc, delta_minus, rho_hat):
    """Pull-push image of a minus-side point basis element, on the plus side.

    Common anticones map identically.  Across the wall the image is the root
    average of an exact Laurent polynomial in the root generator; the
    averaged result has integer powers only.
    """
    git = wc.git
    if delta_minus in wc.A_plus.minimal:
        return basis_e(git, wc.A_plus, delta_minus, rho_hat)
    j_minus = next(i for i in delta_minus if wc.pair_e(i) < 0)
    assert all(wc.pair_e(i) == 0 for i in delta_minus if i != j_minus), (
        "minus anticone across the wall must have a single negative direction"
    )
    l = -wc.pair_e(j_minus)
    datum = TRootDatum(j_minus=j_minus, l=l, zeta=Fraction(0))

    # (1 - S_{j-}) / (1 - t^{-1}) = 1 + t^{-1} + ... + t^{-(l-1)}
    poly = kc_zero(git)
    for i in range(l):
        poly = poly + kc_t(git, datum, -i)

    rho_e = int(vdot(rho_hat, wc.e))
    poly = poly * kc_line(git, rho_hat) * kc_t(git, datum, rho_e)
    for j in range(git.m):
        if j in delta_minus:
            continue
        k_j = max(wc.pair_e(j), 0)
        poly = poly * (kc_one(git) - kc_t(git, datum, -k_j) * kc_s(git, j))

    # root averaging: only exponents divisible by l survive, as powers of
    # the inverse of S_{j-}
    acc = {}
    for mono, c in poly.terms:
        exp = roots_projector(l, mono.t)
        if exp is None:
            continue
        s = list(mono.s)
        if s[j_minus] != 0:
            raise NonLaurent("S_{j-} power before averaging")
        s[j_minus] = -exp
        acc_mono = mono._replace(s=tuple(s), t=0)
        acc[acc_mono] = acc.get(acc_mono, 0) + c
    return _from_dict(git.m, git.r, acc)


# ---------------------------------------------------------------------------
# fixed-point Chern characters


def restriction_terms(git, kclass, delta, f_lift):
    """Symbolic fixed-point restriction: (coeff, phase, form) triples.

    The value of a triple is coeff * exp(2 pi i phase) * exp(form(lam)); the
    phase is an exact rational reduced mod 1 and the form is an exact linear
    form, so zero restrictions cancel exactly.
    """
    u = restrict_u(git, delta)
    f_lift = ratvec(f_lift)
    out = []
    for mono, c in kclass.terms:
        phase = Fraction(0)
        form = zero_form(git.m)
        if any(mono.p):
            phase += vdot(mono.p, f_lift)
            form = form + theta_restrict(git, delta, [Fraction(x) for x in mono.p])
        for j, a in enumerate(mono.s):
            if a:
                phase += a * (-vdot(git.D[j], f_lift))
                form = form + u[j].scale(-a)
        coeffs = [Fraction(x) for x in mono.ch]
        if any(coeffs):
            form = form + LinearForm(tuple(coeffs))
        if mono.t:
            datum = kclass.t_datum
            assert datum is not None
            phase += mono.t * (datum.zeta + vdot(git.D[datum.j_minus], f_lift) / datum.l)
            form = form + u[datum.j_minus].scale(Fraction(mono.t, datum.l))
        out.append((c, frac_part(phase), form))
    return tuple(out)


def eval_terms(terms, lam):
    acc = 0j
    for c, phase, form in terms:
        acc += c * cmath.exp(TWO_PI_I * complex(phase)) * cmath.exp(form(lam))
    return acc


def chern_restrict(git, kclass, label, lam, lift=None):
    """Numeric fixed-point restriction of the orbifold Chern character."""
    if lift is None:
        lift = label.f
    return eval_terms(restriction_terms(git, kclass, label.delta, lift), lam)


# ---------------------------------------------------------------------------
# Gamma class and framing at fixed points


def gamma_restrict(git, label, lam, z=1.0, clearance=1e-9):
    """Fixed-point value of the Gamma class, degree-two arguments over z."""
    u = restrict_u(git, label.delta)
    acc = 0j
    for j in range(git.m):
        if j in label.delta:
            continue
        fj = frac_part(vdot(git.D[j], label.f))
        arg = 1 - complex(fj) + u[j](lam) / z
        check_generic(arg, clearance)
        acc += log_gamma(arg)
    return cmath.exp(acc)


@dataclass(frozen=True)
class FramingValue:
    label: object
    value: complex
    lam: tuple
    z: complex
    log_z: complex
    s_power: Fraction


def framing_restrict(git, E, label, lam, z, log_z=None):
    """Fixed-point value of the framing map applied to a K-class.

    Realized by the rescaling contract: the degree operator sends the torus
    parameters to 2 pi i times themselves inside the Chern character; the
    grading twist divides every degree-two argument by z and multiplies by
    z^(dim/2 - age); the first-Chern twist contributes exp of (the restricted
    tangent class over z) times log z; the inertia involution pulls the
    Chern character back from the inverse sector.
    """
    if log_z is None:
        log_z = cmath.log(z)
    dim = git.m - git.r
    age = label.sector.age
    u = restrict_u(git, label.delta)

    inv_lift = vneg_tuple(label.f)
    lam_scaled = tuple(TWO_PI_I * li / z for li in lam)
    ch_part = eval_terms(restriction_terms(git, E, label.delta, inv_lift), lam_scaled)
    gamma_part = gamma_restrict(git, label, lam, z=z)
    rho_val = sum(u[j](lam) for j in range(git.m) if j not in label.delta)
    value = (
        cmath.exp((Fraction(dim, 2) - age) * log_z)
        * cmath.exp((rho_val / z) * log_z)
        * gamma_part
        * ch_part
    )
    return FramingValue(
        label=label, value=value, lam=tuple(lam), z=complex(z), log_z=log_z,
        s_power=Fraction(dim, 2) - age,
    )


# ---------------------------------------------------------------------------
# Euler pairing by inertia fixed-point sum


def euler_pairing(git, A, E, F, lam, z=None, clearance=1e-9):
    """Equivariant Euler pairing by summation over inertia fixed points.

    Each inertia fixed point contributes the restriction of dual(E) * F
    divided by the isotropy order and by the product over normal directions
    of (1 - phase * exp(-u)); the modified pairing substitutes 2 pi i lam/z
    for lam first.
    """
    lam_eff = tuple(TWO_PI_I * li / z for li in lam) if z is not None else tuple(lam)
    integrand = E.dual() * F
    total = 0j
    for delta in A.minimal:
        u = restrict_u(git, delta)
        order = isotropy_order(git, delta)
        for sec in box_elements(git, A):
            if not all(i in sec.I_f for i in delta):
                continue
            num = eval_terms(restriction_terms(git, integrand, delta, sec.f), lam_eff)
            den = 1.0 + 0j
            for j in range(git.m):
                if j in delta:
                    continue
                phase = cmath.exp(-TWO_PI_I * complex(frac_part(vdot(git.D[j], sec.f))))
                factor = 1 - phase * cmath.exp(-u[j](lam_eff))
                if abs(factor) < clearance:
                    raise ResonantSample("localization denominator %g at %s" % (abs(factor), delta))
                den *= factor
            total += num / (order * den)
    return total


# ---------------------------------------------------------------------------
# verification drivers


@dataclass(frozen=True)
class UhfmReport:
    max_residual: float
    worst: tuple
    n_checked: int


def _rhs_terms(wc, delta_minus, rho_hat, e_minus, label_plus, pairs_by_plus):
    """The continued value at one plus fixed point: identity on common
    anticones, coefficient-weighted sum over next-to partners otherwise."""
    git = wc.git
    if label_plus.delta in wc.A_minus.minimal:
        return [(None, 1.0 + 0j, label_plus, label_plus.f)]
    out = []
    for lm in pairs_by_plus.get((label_plus.delta, label_plus.f), ()):
        lift_minus = compatible_minus_lift(wc, label_plus, lm)
        coeff = continuation_coefficient(wc, (label_plus, lm), label_plus.f, lift_minus)
        out.append((coeff, None, lm, lift_minus))
    return out


def verify_uhfm(wc, lam_samples, perturb=None):
    """Residuals of the continuation/pull-push compatibility.

    For every minus basis element, every plus fixed point and every sample,
    compares the restriction of the transformed class against the
    coefficient-weighted combination of minus-side restrictions.  ``perturb``
    optionally adds a constant to one coefficient entry of the continuation
    matrix, keyed by the next-to pair, to measure sensitivity.
    """
    git = wc.git
    plus_labels = fixed_point_labels(git, wc.A_plus, side="plus")
    pairs_by_plus = {}
    for lp, lm in next_to_pairs(wc):
        pairs_by_plus.setdefault((lp.delta, lp.f), []).append(lm)

    max_residual = 0.0
    worst = None
    n = 0
    for delta_minus, rho_hat in minus_basis(wc):
        image = fm_transform(wc, delta_minus, rho_hat)
        e_minus = basis_e(git, wc.A_minus, delta_minus, rho_hat)
        for lp in plus_labels:
            rhs_spec = _rhs_terms(wc, delta_minus, rho_hat, e_minus, lp, pairs_by_plus)
            for lam in lam_samples:
                lhs = chern_restrict(git, image, lp, lam)
                rhs = 0j
                for coeff, unit, lm, lift in rhs_spec:
                    value = unit if coeff is None else coeff.value(wc, lam)
                    if (
                        perturb is not None
                        and coeff is not None
                        and perturb[:4] == (lp.delta, lp.f, lm.delta, lm.f)
                    ):
                        value += perturb[4]
                    rhs += value * chern_restrict(git, e_minus, lm, lam, lift=lift)
                resid = abs(lhs - rhs)
                n += 1
                if resid > max_residual:
                    max_residual = resid
                    worst = (delta_minus, tuple(rho_hat), lp.delta, lp.f)
    return UhfmReport(max_residual=max_residual, worst=worst, n_checked=n)


def uhfm_sensitivity(wc, lam_samples, epsilon=1e-3):
    """Smallest residual produced by perturbing any one coefficient entry.

    Every coefficient entry of the continuation matrix is bumped by epsilon
    in turn and the full residual suite re-run over the samples; the minimum
    over entries shows the suite cannot pass vacuously.
    """
    smallest = float("inf")
    for lp, lm in next_to_pairs(wc):
        report = verify_uhfm(
            wc, lam_samples, perturb=(lp.delta, lp.f, lm.delta, lm.f, epsilon)
        )
        smallest = min(smallest, report.max_residual)
    return smallest


def verify_pairing_preserved(wc, lam, z, basis=None):
    """Max residual of pairing preservation over ordered basis pairs."""
    git = wc.git
    if basis is None:
        basis = minus_basis(wc)
    classes = [(basis_e(git, wc.A_minus, d, rho), fm_transform(wc, d, rho)) for d, rho in basis]
    worst = 0.0
    for e1, f1 in classes:
        for e2, f2 in classes:
            minus_val = euler_pairing(git, wc.A_minus, e1, e2, lam, z=z)
            plus_val = euler_pairing(git, wc.A_plus, f1, f2, lam, z=z)
            worst = max(worst, abs(minus_val - plus_val))
    return worst

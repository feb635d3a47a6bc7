"""Second-kind 2-forms with a double pole along one ramification fibre.

Near a branch point ``t`` (a simple root of the Jacobian covariant) the
classifying map to the moduli stack is ramified.  The Weierstrass model over the
base is only locally a pullback from the universal curve after a gauge change
``(x, y) -> (x / lam^2, y / lam^3)`` with ``lam = sqrt(g6 / g4)``; in that gauge
the curve reads ``Y^2 = 4X^3 - r X - r`` with ``r = g4^3 / g6^2``, so ``r`` is a
coordinate on the stack and ``dv = dX / Y`` pulls back from the universal curve.
Since ``dz ^ dX/Y = lam dz ^ dx/y``, a candidate form

    ``(a + b w) / w^2 dz ^ dx/y``,   ``w = z - t``,

has local coefficients computed in the coordinate ``z_P`` with ``z_P^2 = r - r(t)``.
The residue coefficient ``a_{P,0}`` is a linear function of ``(a, b)``;
:func:`second_kind_form_at` derives it by series expansion and returns the
surviving direction.  It comes out as ``b = kappa a`` with
``kappa = lam'(t) / lam(t) = g4'(t) / (4 g4(t))``, which the code checks
against the series result rather than assuming.
"""

from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from .errors import BothFormulasDegenerate, NotRamified, SeriesPrecisionExhausted
from .numerics import Ball, eval_with_error, isolate_roots, theorem_tolerance
from .series import Series

DEFAULT_TERMS = 6


@dataclass(frozen=True)
class BranchPoint:
    index: int
    t: Ball
    e: int = 2


@dataclass(frozen=True)
class LocalFrame:
    """Gauge data of the Weierstrass model at a branch point."""

    g4: Ball
    g6: Ball
    dg4: Ball
    lam: Ball      # sqrt(g6 / g4) at t, principal branch
    kappa: Ball    # lam' / lam at t
    s2: Ball       # leading coefficient of r(t + w) - r(t)


@dataclass(frozen=True)
class SecondKindForm:
    """``mu * (a + b w) / w^2 dz ^ dx/y`` with ``a_{P,-1} = 1`` in the coordinate ``w``.

    ``a_minus1`` is the polar coefficient of ``dw ^ dv`` (``dv`` pulled back from
    the universal curve); ``a0`` the residue coefficient in ``z_P``, which is
    zero for a second-kind form; ``complement_a0`` is the residue coefficient of
    the rejected direction ``(a, b) = (0, 1)``.
    """

    branch: BranchPoint
    frame: LocalFrame
    a: Ball
    b: Ball
    a_minus1: Ball
    a0: Ball
    a_minus1_zp: Ball
    complement_a0: Ball
    mu: Ball = Ball(1)

    def scaled(self, mu):
        return SecondKindForm(self.branch, self.frame, self.a, self.b, self.a_minus1, self.a0,
                              self.a_minus1_zp, self.complement_a0, Ball.coerce(mu))


@dataclass(frozen=True)
class SectionExpansion:
    branch_index: int
    label: str
    c1: Ball
    used_fallback: bool = False


# -- branch points ----------------------------------------------------------


def jacobian_affine(model):
    """``J(1, z) = 4 g4 g6' - 6 g6 g4'`` as a univariate polynomial."""
    g4, g6 = model.g4z, model.g6z
    return g4 * g6.diff("z") * 4 - g6 * g4.diff("z") * 6


def ramification_points(model, precision_bits):
    """The 8 branch points: certified simple roots of ``J(1, z)``."""
    J = jacobian_affine(model)
    if J.degree() != 8:
        raise NotRamified("Jacobian covariant does not have 8 affine roots", degree=J.degree())
    roots = isolate_roots(J, precision_bits, certify=True)
    return [BranchPoint(i, r) for i, r in enumerate(roots)]


# -- local frame ------------------------------------------------------------


def _coeffs(poly):
    return poly.univariate_coeffs()


def local_frame(model, branch, terms=DEFAULT_TERMS):
    """Taylor data of ``g4, g6`` and the universal gauge at the branch point."""
    g4s = Series.taylor(_coeffs(model.g4z), branch.t, terms + 2)
    g6s = Series.taylor(_coeffs(model.g6z), branch.t, terms + 2)
    lam2 = g6s / g4s
    lam = lam2.sqrt()
    r = (g4s * g4s * g4s) / (g6s * g6s)
    s1 = r.coeff(1)
    if not s1.contains_zero():
        raise NotRamified("stack coordinate is unramified at the point", linear_term=s1)
    s2 = r.coeff(2)
    if s2.contains_zero():
        raise NotRamified("ramification is not simple", quadratic_term=s2)
    kappa = lam.coeff(1) / lam.coeff(0)
    return LocalFrame(g4s.coeff(0), g6s.coeff(0), g4s.coeff(1), lam.coeff(0), kappa, s2), (g4s, g6s, lam, r)


def stack_coordinate_series(r):
    """``z_P(w)`` with ``z_P^2 = r(t + w) - r(t)``; the linear term of ``r`` vanishes at ``t``."""
    # r(t) and r'(t) are dropped: the first is subtracted, the second is zero at a branch point
    s_over_w2 = Series(r.coeffs[2:], 0)
    return s_over_w2.sqrt().shift(1)


def form_expansion(a, b, lam, zp):
    """Laurent coefficients of ``(a + b w)/(w^2 lam) dw ^ dv`` re-expanded in ``z_P``.

    Returns the series ``h`` with ``form = h(z_P) dz_P ^ dv``.
    """
    n = len(zp)
    w_of_zp = zp.reverse()
    k = (Series([a, b] + [0] * (n - 2), 0) / lam).truncate(n)
    # h(z_P) = k(w(z_P)) / w(z_P)^2 * w'(z_P)
    m = w_of_zp.shift(-1)  # w = z_P * m
    h = (k.compose(w_of_zp) * (m * m).inverse() * w_of_zp.deriv()).shift(-2)
    return h


def second_kind_form_at(model, branch, terms=DEFAULT_TERMS):
    """The second-kind form at a branch point, normalised to ``a_{P,-1} = 1`` in ``w``.

    The residue condition is the linear map ``(a, b) -> a_{P,0}`` obtained from the
    ``z_P`` expansion; its kernel is one-dimensional, spanned by ``(1, b/a)``.
    """
    if branch.e != 2:
        raise NotRamified("only simple ramification is supported", e=branch.e)
    frame, (g4s, g6s, lam, r) = local_frame(model, branch, terms)
    zp = stack_coordinate_series(r)
    h10 = form_expansion(1, 0, lam, zp)
    h01 = form_expansion(0, 1, lam, zp)
    c_am1_a, c_a0_a = h10.coeff(-2), h10.coeff(-1)
    c_am1_b, c_a0_b = h01.coeff(-2), h01.coeff(-1)
    if c_a0_b.contains_zero():
        raise SeriesPrecisionExhausted("residue condition does not constrain the form", a0=c_a0_b)
    ratio = -(c_a0_a / c_a0_b)  # b / a on the second-kind line
    # a_{-1} in the coordinate w is a / lam(t); normalise it to 1
    a = frame.lam
    b = ratio * a
    a_m1_zp = c_am1_a * a + c_am1_b * b
    a0 = c_a0_a * a + c_a0_b * b
    return SecondKindForm(branch, frame, a, b, Ball(1), a0, a_m1_zp, c_a0_b)


def second_kind_dimension(form, precision_bits):
    """Dimension of the second-kind subspace of the 2-dimensional candidate space."""
    tol = theorem_tolerance(precision_bits)
    return 2 - (1 if form.complement_a0.lower() > tol else 0)


# -- sections ---------------------------------------------------------------


def section_expansion(section, form, model=None):
    """First Taylor coefficient ``c1`` of the section in the universal fibre coordinate.

    Along the section, ``dv/dw = (dX/dw) / Y`` at the branch point (the stack
    coordinate is stationary there), which in the model's gauge is
    ``lam (x' - 2 kappa x) / y``.  When ``y(t)`` is indistinguishable from zero
    the derivative of the Weierstrass relation gives
    ``2 lam (y' - 3 kappa y) / (12 x^2 - g4)``.
    """
    if section.is_zero_section or section.label == "F":
        return SectionExpansion(form.branch.index, section.label, Ball(0))
    t = form.branch.t
    fr = form.frame
    x = eval_with_error(section.x, t)
    y = eval_with_error(section.y, t)
    if not y.contains_zero():
        dx = eval_with_error(section.x.diff(), t)
        c1 = fr.lam * (dx - fr.kappa * x * 2) / y
        return SectionExpansion(form.branch.index, section.label, c1)
    den = x * x * 12 - fr.g4
    if den.contains_zero():
        raise BothFormulasDegenerate("section meets a singular point of the fibre",
                                     label=section.label, branch=form.branch.index)
    dy = eval_with_error(section.y.diff(), t)
    c1 = fr.lam * (dy - fr.kappa * y * 3) * 2 / den
    return SectionExpansion(form.branch.index, section.label, c1, used_fallback=True)


def section_c1_fallback(section, form):
    """The fallback formula for ``c1``, exposed for cross-checking the primary one."""
    t = form.branch.t
    fr = form.frame
    x = eval_with_error(section.x, t)
    y = eval_with_error(section.y, t)
    dy = eval_with_error(section.y.diff(), t)
    return fr.lam * (dy - fr.kappa * y * 3) * 2 / (x * x * 12 - fr.g4)


# -- self-tests -------------------------------------------------------------


def pairing_in_coordinate(form, expansion, gamma, delta):
    """``(a_{-1}, residue, c1)`` recomputed in the coordinate ``w' = gamma w + delta w^2``.

    The polar and section coefficients change by reciprocal factors, so
    ``a_{-1} c1`` must equal ``form.a_minus1 * expansion.c1``, and the residue
    stays zero.
    """
    w_of = Series([gamma, delta, 0, 0], 1).reverse()
    m = w_of.shift(-1)
    # w^2 times the form coefficient, known through w^1: a_{-1} + 0 w
    polar = Series([form.a_minus1, 0], 0)
    h = (polar.compose(w_of) * (m * m).inverse() * w_of.deriv()).shift(-2)
    v = Series([expansion.c1], 1).compose(w_of)
    return h.coeff(-2), h.coeff(-1), v.coeff(1)


def contour_residue(model, form, a=None, b=None, radius=None, points=64):
    """Numerical ``(1/2 pi i)`` contour integral of ``(a + b w)/(w^2 lam(t + w)) dw`` around ``t``.

    Uses the trapezoid rule on a circle well inside the disc where ``g4 g6`` has
    no zero; ``lam`` is continued from its value at ``t``.  In ``w`` the residue
    is ``(b - kappa a) / lam(t)``, so it vanishes on the second-kind line.
    """
    a = form.a if a is None else Ball.coerce(a)
    b = form.b if b is None else Ball.coerce(b)
    t = form.branch.t.mid
    g4 = [mpmath.mpf(c.numerator) / c.denominator for c in model.g4z.univariate_coeffs()]
    g6 = [mpmath.mpf(c.numerator) / c.denominator for c in model.g6z.univariate_coeffs()]
    if radius is None:
        zeros = list(mpmath.polyroots(g4[::-1], maxsteps=200, extraprec=mp.prec)) + \
            list(mpmath.polyroots(g6[::-1], maxsteps=200, extraprec=mp.prec))
        radius = min(abs(t - q) for q in zeros) / 8
    lam0 = form.frame.lam.mid
    ratio0 = lam0 * lam0
    total = mpmath.mpc(0)
    for k in range(points):
        w = radius * mpmath.expjpi(mpf(2 * k) / points)
        ratio = mpmath.polyval(g6[::-1], t + w) / mpmath.polyval(g4[::-1], t + w)
        lam = lam0 * mpmath.sqrt(ratio / ratio0)
        total += (a.mid + b.mid * w) / (w * w * lam) * w
    return total / points

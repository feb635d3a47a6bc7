"""Arbitrary-precision complex balls, certified root isolation, ball linear solves.

A :class:`Ball` is a midpoint in ``mpmath.mpc`` plus a radius bounding the
absolute error.  Every operation adds the propagated input error and a rounding
term of a few units in the last place of the result, evaluated at the mpmath
precision in force when the operation runs.  Callers choose the precision with
``mpmath.workprec``.

Root isolation runs companion-matrix eigenvalues at low precision, refines by
simultaneous Newton corrections (Aberth) at full precision, and certifies with
the Weierstrass-correction inclusion disks: the union of the disks
``D(z_i, n |W_i|)`` contains every root, and a connected component of ``k``
disks contains exactly ``k`` roots.  Pairwise disjoint disks therefore isolate
one root each.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mp, mpc, mpf

from .errors import DenominatorNearZero, NonSquareFree, PrecisionExhausted, SingularWithinError
from .exact_algebra import ExactPoly, RationalFunction, discriminant


_ULP = {}


def unit_roundoff():
    prec = mp.prec
    u = _ULP.get(prec)
    if u is None:
        u = _ULP[prec] = mpf(2) ** (1 - prec)
    return u


def _mag(z):
    # cheap upper bound for |z|
    return abs(z.real) + abs(z.imag)


def to_mp(x):
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return x


class Ball:
    """Complex ball ``mid +- rad``."""

    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=0):
        if isinstance(mid, Ball):
            self.mid, self.rad = mid.mid, mid.rad + mpf(rad)
            return
        if isinstance(mid, Fraction):
            m = mpc(mpf(mid.numerator) / mid.denominator)
            rad = mpf(rad) + (_mag(m) * unit_roundoff() if mid.denominator != 1 else 0)
            self.mid, self.rad = m, mpf(rad)
            return
        self.mid = mpc(mid)
        self.rad = mpf(rad)

    @staticmethod
    def coerce(x):
        return x if isinstance(x, Ball) else Ball(x)

    # -- queries ----------------------------------------------------------

    def upper(self):
        """Upper bound for the absolute value of every point of the ball."""
        return abs(self.mid) + self.rad

    def lower(self):
        return max(abs(self.mid) - self.rad, mpf(0))

    def contains_zero(self):
        return abs(self.mid) <= self.rad

    def contains(self, z):
        return abs(self.mid - mpc(to_mp(z))) <= self.rad

    def overlaps(self, other):
        other = Ball.coerce(other)
        return abs(self.mid - other.mid) <= self.rad + other.rad

    @property
    def real(self):
        return self.mid.real

    @property
    def imag(self):
        return self.mid.imag

    def conjugate(self):
        return Ball(mpmath.conj(self.mid), self.rad)

    def __repr__(self):
        return f"Ball({mpmath.nstr(self.mid, 20)} +- {mpmath.nstr(self.rad, 3)})"

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Ball):
            if isinstance(other, (int, Fraction, mpf, mpc, float, complex)):
                other = Ball(other)
            else:
                return NotImplemented
        m = self.mid + other.mid
        return Ball(m, self.rad + other.rad + _mag(m) * unit_roundoff())

    __radd__ = __add__

    def __neg__(self):
        return Ball(-self.mid, self.rad)

    def __sub__(self, other):
        if not isinstance(other, Ball):
            if isinstance(other, (int, Fraction, mpf, mpc, float, complex)):
                other = Ball(other)
            else:
                return NotImplemented
        m = self.mid - other.mid
        return Ball(m, self.rad + other.rad + _mag(m) * unit_roundoff())

    def __rsub__(self, other):
        return Ball.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Ball):
            if isinstance(other, int) and not isinstance(other, bool):
                m = self.mid * other
                return Ball(m, self.rad * abs(other) + _mag(m) * unit_roundoff())
            if isinstance(other, (Fraction, mpf, mpc, float, complex)):
                other = Ball(other)
            else:
                return NotImplemented
        m = self.mid * other.mid
        rad = (_mag(self.mid) * other.rad + _mag(other.mid) * self.rad
               + self.rad * other.rad + 4 * _mag(m) * unit_roundoff())
        return Ball(m, rad)

    __rmul__ = __mul__

    def inverse(self):
        a = abs(self.mid)
        if a <= self.rad:
            raise DenominatorNearZero("ball contains zero", ball=self)
        m = 1 / self.mid
        rad = self.rad / (a * (a - self.rad)) + 4 * _mag(m) * unit_roundoff()
        return Ball(m, rad)

    def __truediv__(self, other):
        if isinstance(other, int) and not isinstance(other, bool) and other:
            m = self.mid / other
            return Ball(m, self.rad / abs(other) + _mag(m) * unit_roundoff())
        return self * Ball.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Ball.coerce(other) * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = Ball(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def sqrt(self):
        """Principal square root of the midpoint, continued over the ball."""
        a = abs(self.mid)
        if a <= self.rad:
            raise DenominatorNearZero("square root of a ball containing zero", ball=self)
        m = mpmath.sqrt(self.mid)
        rad = self.rad / (mpmath.sqrt(a) + mpmath.sqrt(a - self.rad)) + 4 * _mag(m) * unit_roundoff()
        return Ball(m, rad)


def ball_zero():
    return Ball(0)


def theorem_tolerance(precision_bits, scale=1):
    """Tolerance for theorem checks: ``2^(-precision/2)`` times a conditioning scale."""
    return mpf(2) ** (-(precision_bits // 2)) * scale


def relative_error(values):
    """Largest ``radius / |midpoint|`` over balls with nonzero midpoint."""
    worst = mpf(0)
    for v in values:
        v = Ball.coerce(v)
        a = abs(v.mid)
        if a:
            worst = max(worst, v.rad / a)
    return worst


def conditioned_tolerance(precision_bits, values):
    """``2^(-precision/2)`` scaled by the square root of the measured error amplification.

    The amplification is the certified relative error of ``values`` in units of
    ``2^-precision``; the tolerance therefore sits halfway, in bits, between the
    certified error level and 1.  Raises :class:`PrecisionExhausted` when the
    inputs carry less than a quarter of the working precision.
    """
    rel = relative_error(values)
    u = mpf(2) ** (-precision_bits)
    amp = max(mpf(1), rel / u)
    if rel > mpf(2) ** (-(precision_bits // 4)):
        raise PrecisionExhausted("accumulated error leaves too few correct bits", relative_error=rel)
    return theorem_tolerance(precision_bits, mpmath.sqrt(amp))


# -- evaluation -------------------------------------------------------------


def _coeff_list(f):
    if isinstance(f, ExactPoly):
        return f.univariate_coeffs()
    return list(f)


def horner(coeffs, z):
    """Evaluate a coefficient list (low degree first) at a ball."""
    z = Ball.coerce(z)
    acc = Ball(0)
    for c in reversed(coeffs):
        acc = acc * z + Ball.coerce(c)
    return acc


def eval_with_error(f, z):
    """Evaluate an exact univariate polynomial or rational function at a ball.

    The returned ball contains the exact value for every point of ``z``.
    """
    z = Ball.coerce(z)
    if isinstance(f, RationalFunction):
        num = horner(f.num.univariate_coeffs(), z)
        den = horner(f.den.univariate_coeffs(), z)
        if den.contains_zero():
            raise DenominatorNearZero("denominator vanishes within the error radius", value=den)
        return num / den
    return horner(_coeff_list(f), z)


# -- roots ------------------------------------------------------------------


@dataclass(frozen=True)
class RootSet:
    roots: list
    source_degree: int
    precision: int
    certified: bool = True
    iterations: int = 0
    meta: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __getitem__(self, i):
        return self.roots[i]


def _initial_roots(coeffs):
    n = len(coeffs) - 1
    with mp.workprec(80):
        lc = to_mp(coeffs[-1])
        monic = [to_mp(c) / lc for c in coeffs]
        comp = mpmath.zeros(n, n)
        for i in range(1, n):
            comp[i, i - 1] = 1
        for i in range(n):
            comp[i, n - 1] = -monic[i]
        try:
            ev = mpmath.eig(comp, left=False, right=False)
        except Exception:  # noqa: BLE001 - fall back to mpmath's own iteration
            ev = mpmath.polyroots(list(reversed(monic)), maxsteps=200, extraprec=80)
        # nudge off exact symmetry so simultaneous iteration can separate roots
        return [mpc(e) + mpc(mpf(1) / (1000 + 37 * k), mpf(1) / (1100 + 53 * k)) * mpf(2) ** -40
                for k, e in enumerate(ev)]


def _aberth(coeffs, z, wp, maxit):
    """Simultaneous Newton (Aberth) refinement.

    A root counts as converged once its correction is within a small multiple
    of the rounding noise of the Newton step, ``u * sum |c_k| |z|^k / |p'(z)|``.
    """
    n = len(coeffs) - 1
    with mp.workprec(wp):
        c = [to_mp(x) for x in coeffs]
        rc = c[::-1]
        dc = [i * c[i] for i in range(1, n + 1)][::-1]
        ac = [abs(x) for x in rc]
        u = unit_roundoff()
        z = [mpc(x) for x in z]
        calm = 0
        for it in range(1, maxit + 1):
            done = True
            for i in range(n):
                zi = z[i]
                p = mpmath.polyval(rc, zi)
                if p == 0:
                    continue
                dp = mpmath.polyval(dc, zi)
                ratio = p / dp if dp != 0 else mpc(mpf(2) ** -20)
                s = mpc(0)
                for j in range(n):
                    if j != i:
                        s += 1 / (zi - z[j])
                step = ratio / (1 - ratio * s)
                z[i] = zi - step
                noise = 16 * u * mpmath.polyval(ac, abs(zi)) / abs(dp) if dp != 0 else mpmath.inf
                if abs(step) > max(noise, 16 * u * max(1, abs(zi))):
                    done = False
            if done:
                calm += 1
                if calm >= 2:
                    return z, it
            else:
                calm = 0
        raise PrecisionExhausted("root refinement did not converge", iterations=maxit)


def _sort_key(z):
    return (float(mpmath.nstr(z.real, 15)), float(mpmath.nstr(z.imag, 15)))


def isolate_roots(f, precision_bits=256, certify=True, maxit=400):
    """Isolate every complex root of an exact univariate polynomial.

    With ``certify=True`` the exact discriminant must be nonzero, and the
    returned disks are certified pairwise disjoint, one root each.  Each radius
    is at most ``2^(-precision_bits/2) * max(1, |center|)``.  Roots are sorted by
    real part, then imaginary part.
    """
    coeffs = [Fraction(c) for c in _coeff_list(f)]
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    if not coeffs:
        raise ValueError("cannot isolate the roots of the zero polynomial")
    n = len(coeffs) - 1
    if n == 0:
        return RootSet([], 0, precision_bits, certified=certify)
    if certify and n >= 2 and discriminant(ExactPoly.from_univariate(coeffs)) == 0:
        raise NonSquareFree("exact discriminant vanishes")
    wp = precision_bits + 24
    z = _initial_roots(coeffs) if n > 1 else [mpc(to_mp(-coeffs[0] / coeffs[1]))]
    z, iters = _aberth(coeffs, z, wp, maxit) if n > 1 else (z, 0)
    with mp.workprec(precision_bits):
        centers = [mpc(x) for x in z]
        bcoeffs = [Ball(c) for c in coeffs]
        radii = []
        for i, zi in enumerate(centers):
            val = horner(bcoeffs, Ball(zi))
            den = bcoeffs[-1]
            for j, zj in enumerate(centers):
                if j != i:
                    den = den * (Ball(zi) - Ball(zj))
            w = val / den
            radii.append(n * w.upper() + 4 * abs(zi) * unit_roundoff())
        if certify:
            for i in range(n):
                for j in range(i + 1, n):
                    if abs(centers[i] - centers[j]) <= radii[i] + radii[j]:
                        raise PrecisionExhausted("inclusion disks overlap", i=i, j=j)
            limit = mpf(2) ** (-(precision_bits / 2))
            for c, r in zip(centers, radii):
                if r > limit * max(1, abs(c)):
                    raise PrecisionExhausted("inclusion radius too large", radius=r)
        balls = sorted((Ball(c, r) for c, r in zip(centers, radii)), key=lambda b: _sort_key(b.mid))
    return RootSet(balls, n, precision_bits, certified=certify, iterations=iters)


# -- linear algebra ---------------------------------------------------------


def solve_linear_complex(A, b):
    """Solve ``A x = b`` by Gaussian elimination with partial pivoting on balls.

    ``b`` may be a vector or a list of column vectors.  Raises
    :class:`SingularWithinError` when a pivot ball contains zero.
    """
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("matrix must be square")
    multi = bool(b) and isinstance(b[0], (list, tuple))
    cols = [list(c) for c in b] if multi else [list(b)]
    M = [[Ball.coerce(x) for x in row] for row in A]
    R = [[Ball.coerce(c[i]) for c in cols] for i in range(n)]
    for k in range(n):
        piv = max(range(k, n), key=lambda i: abs(M[i][k].mid))
        if M[piv][k].contains_zero():
            raise SingularWithinError("pivot indistinguishable from zero", column=k)
        M[k], M[piv] = M[piv], M[k]
        R[k], R[piv] = R[piv], R[k]
        inv = M[k][k].inverse()
        for i in range(k + 1, n):
            f = M[i][k] * inv
            if f.mid == 0 and f.rad == 0:
                continue
            for j in range(k + 1, n):
                M[i][j] = M[i][j] - f * M[k][j]
            for j in range(len(cols)):
                R[i][j] = R[i][j] - f * R[k][j]
    X = [[None] * len(cols) for _ in range(n)]
    for i in reversed(range(n)):
        for j in range(len(cols)):
            s = R[i][j]
            for k in range(i + 1, n):
                s = s - M[i][k] * X[k][j]
            X[i][j] = s / M[i][i]
    if multi:
        return [[X[i][j] for i in range(n)] for j in range(len(cols))]
    return [X[i][0] for i in range(n)]


def matmul(A, B):
    """Product of matrices given as lists of rows (balls, ints or Fractions)."""
    inner = len(B)
    out = []
    for row in A:
        out.append([sum((Ball.coerce(row[k]) * B[k][j] for k in range(inner)), Ball(0))
                    for j in range(len(B[0]))])
    return out


def transpose(A):
    return [list(c) for c in zip(*A)]


def max_abs(entries):
    """Largest upper bound over an iterable of balls."""
    return max((Ball.coerce(x).upper() for x in entries), default=mpf(0))


def decimal_string(x, precision_bits):
    """Decimal rendering carrying the full working precision."""
    digits = int(precision_bits * 0.30103) + 2
    return mpmath.nstr(mpf(x), digits)

"""Truncated Laurent series with ball coefficients.

``Series(coeffs, val)`` stands for ``sum(coeffs[i] * w**(val + i))`` known up to
(but excluding) the power ``val + len(coeffs)``.
"""

from fractions import Fraction

from .errors import SeriesPrecisionExhausted
from .numerics import Ball


def _b(x):
    return Ball.coerce(x)


class Series:
    __slots__ = ("coeffs", "val")

    def __init__(self, coeffs, val=0):
        self.coeffs = [_b(c) for c in coeffs]
        self.val = val

    @property
    def order(self):
        """First power not represented."""
        return self.val + len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def coeff(self, power):
        i = power - self.val
        if i < 0:
            return Ball(0)
        if i >= len(self.coeffs):
            raise SeriesPrecisionExhausted(f"coefficient of w^{power} beyond truncation order {self.order}")
        return self.coeffs[i]

    def __repr__(self):
        return f"Series(val={self.val}, {self.coeffs})"

    @staticmethod
    def taylor(coeffs, t, n):
        """First ``n`` Taylor coefficients at ``t`` of a polynomial (coefficient list, low first)."""
        work = [_b(c) for c in coeffs]
        t = _b(t)
        out = []
        for _ in range(n):
            if not work:
                out.append(Ball(0))
                continue
            # synthetic division by (w - t): remainder is the current value
            acc = Ball(0)
            quot = []
            for c in reversed(work):
                acc = acc * t + c
                quot.append(acc)
            out.append(quot.pop())
            work = list(reversed(quot))
        return Series(out, 0)

    @staticmethod
    def variable(n):
        return Series([0, 1] + [0] * (n - 2), 0)

    def truncate(self, order):
        keep = max(order - self.val, 0)
        return Series(self.coeffs[:keep], self.val)

    def drop_leading(self, k=1):
        """Remove leading terms known to vanish; raises the valuation."""
        return Series(self.coeffs[k:], self.val + k)

    def shift(self, k):
        return Series(self.coeffs, self.val + k)

    def __add__(self, other):
        if not isinstance(other, Series):
            if self.order <= 0:
                return self
            other = Series([other] + [0] * (self.order - 1), 0)
        lo = min(self.val, other.val)
        hi = min(self.order, other.order)
        out = []
        for p in range(lo, hi):
            a = self.coeffs[p - self.val] if self.val <= p < self.order else Ball(0)
            b = other.coeffs[p - other.val] if other.val <= p < other.order else Ball(0)
            out.append(a + b)
        return Series(out, lo)

    __radd__ = __add__

    def __neg__(self):
        return Series([-c for c in self.coeffs], self.val)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Series) else -_b(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Series):
            o = _b(other)
            return Series([c * o for c in self.coeffs], self.val)
        n = min(len(self), len(other))
        out = []
        for k in range(n):
            acc = Ball(0)
            for i in range(k + 1):
                acc = acc + self.coeffs[i] * other.coeffs[k - i]
            out.append(acc)
        return Series(out, self.val + other.val)

    __rmul__ = __mul__

    def inverse(self):
        lead = self.coeffs[0]
        if lead.contains_zero():
            raise SeriesPrecisionExhausted("leading coefficient indistinguishable from zero")
        inv0 = lead.inverse()
        out = [inv0]
        for k in range(1, len(self)):
            acc = Ball(0)
            for i in range(1, k + 1):
                acc = acc + self.coeffs[i] * out[k - i]
            out.append(-(acc * inv0))
        return Series(out, -self.val)

    def __truediv__(self, other):
        if isinstance(other, Series):
            return self * other.inverse()
        return self * _b(other).inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = Series([1] + [0] * (len(self) - 1), 0)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def sqrt(self):
        """Square root with the principal root of the leading coefficient; even valuation only."""
        if self.val % 2:
            raise SeriesPrecisionExhausted("square root of a series of odd valuation")
        lead = self.coeffs[0]
        if lead.contains_zero():
            raise SeriesPrecisionExhausted("leading coefficient indistinguishable from zero")
        r0 = lead.sqrt()
        two_r0_inv = (r0 * 2).inverse()
        out = [r0]
        for k in range(1, len(self)):
            acc = self.coeffs[k]
            for i in range(1, k):
                acc = acc - out[i] * out[k - i]
            out.append(acc * two_r0_inv)
        return Series(out, self.val // 2)

    def deriv(self):
        out = Series([c * (self.val + i) for i, c in enumerate(self.coeffs)], self.val - 1)
        # a constant term differentiates to an exact zero leading slot
        return out.drop_leading(1) if self.val == 0 and out.coeffs else out

    def compose(self, inner):
        """``self(inner(w))`` for ``inner`` of valuation >= 1; ``self`` may be Laurent."""
        if inner.val < 1:
            raise ValueError("inner series must vanish at 0")
        v = inner.val
        m = inner.shift(-v)  # inner = w^v m(w)
        total = None
        # inner^p = w^(v p) m^p, powers built incrementally from m^val
        mp_ = m ** self.val
        for i, c in enumerate(self.coeffs):
            p = self.val + i
            if i:
                mp_ = mp_ * m
            term = (mp_ * c).shift(v * p)
            total = term if total is None else total + term
        if total is None:
            return Series([], 0)
        # accuracy: limited by the first omitted term of self and by m's truncation
        limit = min(v * self.order, self.val * v + len(m))
        return total.truncate(min(limit, total.order))

    def reverse(self):
        """Compositional inverse of a series ``a1 w + a2 w^2 + ...`` with ``a1`` nonzero."""
        if self.val != 1:
            raise ValueError("reversion needs a series with a simple zero at 0")
        n = len(self)
        a1inv = self.coeffs[0].inverse()
        # fixed point: g = (w - (f(g) - a1 g)) / a1
        g = Series([a1inv] + [0] * (n - 1), 1)
        higher = Series([0] + self.coeffs[1:], 1)
        for _ in range(n):
            g = (Series.variable(n + 1).drop_leading(1) - higher.compose(g)) * a1inv
            g = g.truncate(n + 1)
        return g


def exact_poly_coeffs(poly):
    """Coefficient list (low first) of a univariate ExactPoly as Fractions."""
    return [Fraction(c) for c in poly.univariate_coeffs()]

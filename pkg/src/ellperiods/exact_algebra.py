"""Exact rational algebra: multivariate polynomials, kernels, resultants.

Coefficients are :class:`fractions.Fraction`.  Polynomials are immutable
dictionaries from exponent tuples to nonzero coefficients.  Monomials are
ordered graded-lexicographically everywhere (highest first), which fixes the
column order of every evaluation matrix built downstream and therefore the
basis that :func:`kernel_basis` returns.

Linear algebra works on integer rows: each row is scaled to a primitive
integer vector before elimination and after every row operation, so entry
size stays controlled without any gcd on fractions in the inner loop.
"""

from fractions import Fraction
from functools import reduce
from itertools import combinations_with_replacement
from math import gcd, lcm

from gmpy2 import mpz

from .errors import DegreeTooSmall, ZeroPolynomial

Rational = Fraction


def grlex_key(exp):
    return (sum(exp), exp)


def monomials(nvars, degree):
    """Exponent tuples of total degree ``degree`` in graded-lex order, highest first."""
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


class ExactPoly:
    """Polynomial with rational coefficients in named generators."""

    __slots__ = ("gens", "terms", "_hash")

    def __init__(self, gens, terms=None):
        self.gens = tuple(gens)
        d = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            n = len(self.gens)
            for e, c in items:
                e = tuple(e)
                if len(e) != n:
                    raise ValueError(f"exponent {e} does not match generators {self.gens}")
                c = d.get(e, 0) + Fraction(c)
                if c:
                    d[e] = c
                else:
                    d.pop(e, None)
        self.terms = d
        self._hash = None

    @classmethod
    def _raw(cls, gens, terms):
        p = cls.__new__(cls)
        p.gens = gens
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, gens, c):
        gens = tuple(gens)
        c = Fraction(c)
        return cls._raw(gens, {(0,) * len(gens): c} if c else {})

    @classmethod
    def variable(cls, gens, name):
        gens = tuple(gens)
        e = [0] * len(gens)
        e[gens.index(name)] = 1
        return cls._raw(gens, {tuple(e): Fraction(1)})

    @classmethod
    def from_univariate(cls, coeffs, gen="z"):
        """Build from coefficients listed low degree first."""
        return cls((gen,), {(i,): c for i, c in enumerate(coeffs) if c})

    # -- basic protocol ---------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, ExactPoly):
            return self.gens == other.gens and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            return self.terms == {(0,) * len(self.gens): Fraction(other)}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.gens, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"ExactPoly({self.gens}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=grlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(f"{g}^{k}" if k > 1 else g for g, k in zip(self.gens, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def _coerce(self, other):
        if isinstance(other, ExactPoly):
            if other.gens != self.gens:
                raise ValueError(f"generator mismatch {self.gens} vs {other.gens}")
            return other
        if isinstance(other, (int, Fraction)):
            return ExactPoly.constant(self.gens, other)
        return None

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = dict(self.terms)
        for e, c in other.terms.items():
            s = d.get(e, 0) + c
            if s:
                d[e] = s
            else:
                d.pop(e, None)
        return ExactPoly._raw(self.gens, d)

    __radd__ = __add__

    def __neg__(self):
        return ExactPoly._raw(self.gens, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ExactPoly._raw(self.gens, {})
            return ExactPoly._raw(self.gens, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = {}
        get = d.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                d[e] = get(e, 0) + c1 * c2
        return ExactPoly._raw(self.gens, {e: c for e, c in d.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division of polynomial by zero")
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("nonnegative integer powers only")
        result = ExactPoly.constant(self.gens, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- structure --------------------------------------------------------

    def degree(self, var=None):
        """Total degree, or degree in ``var``; ``-1`` for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self.gens.index(var)
        return max(e[i] for e in self.terms)

    def is_homogeneous(self, weights=None):
        if not self.terms:
            return True
        w = weights or (1,) * len(self.gens)
        degs = {sum(a * b for a, b in zip(w, e)) for e in self.terms}
        return len(degs) == 1

    def coeff(self, exp):
        return self.terms.get(tuple(exp), Fraction(0))

    def leading_term(self):
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def diff(self, var):
        i = self.gens.index(var)
        d = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                d[ne] = c * k
        return ExactPoly._raw(self.gens, d)

    def evaluate(self, point):
        """Evaluate at a full point (sequence in generator order, or dict).

        Works for any coefficient-compatible values (Fractions, mpmath
        numbers, balls); returns a Fraction for rational input.
        """
        if isinstance(point, dict):
            point = [point[g] for g in self.gens]
        point = list(point)
        if len(point) != len(self.gens):
            raise ValueError("point has wrong dimension")
        if not self.terms:
            return Fraction(0)
        powers = [{} for _ in point]
        total = None
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    p = powers[i].get(k)
                    if p is None:
                        p = point[i] ** k
                        powers[i][k] = p
                    term = p * term
            total = term if total is None else total + term
        return total

    def compose(self, values, gens):
        """Substitute every generator by a polynomial in ``gens``.

        ``values`` maps generator names (or positions) to ExactPoly in the
        target ring; scalars are allowed.
        """
        gens = tuple(gens)
        if isinstance(values, dict):
            vals = [values[g] for g in self.gens]
        else:
            vals = list(values)
        vals = [v if isinstance(v, ExactPoly) else ExactPoly.constant(gens, v) for v in vals]
        cache = [{0: ExactPoly.constant(gens, 1)} for _ in vals]

        def power(i, k):
            c = cache[i]
            if k not in c:
                c[k] = power(i, k - 1) * vals[i]
            return c[k]

        total = ExactPoly._raw(gens, {})
        for e, c in self.terms.items():
            term = ExactPoly.constant(gens, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def coefficients_in(self, var):
        """Coefficients with respect to ``var``, lowest degree first.

        Each coefficient is an ExactPoly in the remaining generators, or a
        Fraction when no generators remain.
        """
        i = self.gens.index(var)
        rest = self.gens[:i] + self.gens[i + 1:]
        deg = self.degree(var)
        buckets = [dict() for _ in range(max(deg, 0) + 1)]
        for e, c in self.terms.items():
            buckets[e[i]][e[:i] + e[i + 1:]] = c
        if not rest:
            return [b.get((), Fraction(0)) for b in buckets]
        return [ExactPoly._raw(rest, b) for b in buckets]

    def univariate_coeffs(self):
        """Coefficient list (low degree first) of a one-generator polynomial."""
        if len(self.gens) != 1:
            raise ValueError("not a univariate polynomial")
        return self.coefficients_in(self.gens[0])

    def content(self):
        if not self.terms:
            return Fraction(0)
        nums = [c.numerator for c in self.terms.values()]
        dens = [c.denominator for c in self.terms.values()]
        return Fraction(reduce(gcd, nums, 0), reduce(lcm, dens, 1))

    def primitive(self):
        """Integer-coefficient primitive multiple with positive leading coefficient."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading_term()[1] < 0:
            c = -c
        return self * (1 / c)

    def divexact(self, other):
        """Exact quotient ``self / other``; raises if the division leaves a remainder."""
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        le, lc = other.leading_term()
        rem = self
        quot = {}
        while rem.terms:
            e, c = rem.leading_term()
            q = tuple(a - b for a, b in zip(e, le))
            if min(q) < 0:
                raise ArithmeticError("polynomial division is not exact")
            qc = c / lc
            quot[q] = quot.get(q, 0) + qc
            rem = rem - ExactPoly._raw(self.gens, {q: qc}) * other
        return ExactPoly._raw(self.gens, {e: c for e, c in quot.items() if c})


# -- univariate helpers -----------------------------------------------------


def _trim(c):
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return c


def upoly_divmod(f, g):
    """Division with remainder of coefficient lists (low degree first) over Q."""
    f, g = _trim(f), _trim(g)
    if not g:
        raise ZeroDivisionError("division by zero polynomial")
    f = [Fraction(x) for x in f]
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    lc = Fraction(g[-1])
    while len(f) >= len(g) and f:
        k = len(f) - len(g)
        c = f[-1] / lc
        q[k] = c
        for i, gi in enumerate(g):
            f[i + k] -= c * gi
        f = _trim(f)
    return q, f


def upoly_gcd(f, g):
    """Monic gcd of two univariate ExactPoly in the same generator."""
    a, b = _trim(f.univariate_coeffs()), _trim(g.univariate_coeffs())
    while b:
        _, r = upoly_divmod(a, b)
        a, b = b, r
    if not a:
        return ExactPoly.from_univariate([], f.gens[0])
    lc = Fraction(a[-1])
    return ExactPoly.from_univariate([x / lc for x in a], f.gens[0])


# -- matrices ---------------------------------------------------------------


class ExactMatrix:
    """Dense rational matrix."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries, cols=None):
        entries = [[Fraction(x) for x in row] for row in entries]
        self.rows = len(entries)
        self.cols = cols if cols is not None else (len(entries[0]) if entries else 0)
        if any(len(r) != self.cols for r in entries):
            raise ValueError("ragged matrix")
        self.entries = entries

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def apply(self, v):
        return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in self.entries]

    def transpose(self):
        return ExactMatrix([list(col) for col in zip(*self.entries)], cols=self.rows)

    def rank(self):
        return len(rref(self)[1])

    def kernel_basis(self):
        return kernel_basis(self)

    def det(self):
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return determinant(self.entries)


def _primitive_int_row(row):
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                break
    if g > 1:
        row = [x // g for x in row]
    return row


def _to_int_rows(entries):
    out = []
    for row in entries:
        den = 1
        for x in row:
            x = Fraction(x)
            if x.denominator != 1:
                den = lcm(den, x.denominator)
        ints = [int(Fraction(x) * den) for x in row]
        if any(ints):
            out.append(_primitive_int_row(ints))
    return out


def rref(m):
    """Reduced row echelon form.

    Returns ``(rows, pivots)`` where ``rows`` are the nonzero rows as Fraction
    lists normalised to pivot 1 and ``pivots`` the pivot columns.  The result is
    unique, so it does not depend on pivot choices during elimination.
    """
    entries = m.entries if isinstance(m, ExactMatrix) else m
    ncols = m.cols if isinstance(m, ExactMatrix) else (len(entries[0]) if entries else 0)
    rows = _to_int_rows(entries)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        piv = None
        for i in range(r, len(rows)):
            v = rows[i][c]
            if v and (piv is None or abs(v) < abs(rows[piv][c])):
                piv = i
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r]
        pc = p[c]
        for i in range(len(rows)):
            a = rows[i][c]
            if i != r and a:
                g = gcd(a, pc)
                m1, m2 = pc // g, a // g
                rows[i] = _primitive_int_row([m1 * x - m2 * y for x, y in zip(rows[i], p)])
        pivots.append(c)
        r += 1
    out = []
    for row, c in zip(rows[:r], pivots):
        d = row[c]
        out.append([Fraction(x, d) for x in row])
    return out, pivots


def kernel_basis(m):
    """Basis of the right null space, one vector per free column of the RREF.

    The vector for free column ``f`` has a 1 in position ``f``, zeros at the
    other free columns, and is determined at the pivot columns.
    """
    ncols = m.cols if isinstance(m, ExactMatrix) else len(m[0])
    rows, pivots = rref(m)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(rows, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def rank(m):
    return len(rref(m)[1])


def _bareiss(mat, exact_div, is_zero):
    n = len(mat)
    if n == 0:
        return 1
    a = [list(r) for r in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if is_zero(a[k][k]):
            for i in range(k + 1, n):
                if not is_zero(a[i][k]):
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = exact_div(row_i[j] * akk - aik * row_k[j], prev)
        prev = akk
    det = a[n - 1][n - 1]
    return det if sign == 1 else -det


def determinant(entries):
    """Exact determinant by fraction-free (Bareiss) elimination.

    Integer and rational matrices are cleared to integers first (GMP integers
    for speed); matrices of
    ExactPoly entries are eliminated in the polynomial ring with exact division.
    """
    if not entries:
        return Fraction(1)
    if any(isinstance(x, ExactPoly) for row in entries for x in row):
        gens = next(x.gens for row in entries for x in row if isinstance(x, ExactPoly))
        mat = [[x if isinstance(x, ExactPoly) else ExactPoly.constant(gens, x) for x in row]
               for row in entries]
        return _bareiss(mat, lambda a, b: a if b == 1 else a.divexact(b), lambda a: a.is_zero())
    scale = Fraction(1)
    ints = []
    for row in entries:
        den = 1
        for x in row:
            den = lcm(den, Fraction(x).denominator)
        scale /= den
        ints.append([mpz(int(Fraction(x) * den)) for x in row])
    return Fraction(int(_bareiss(ints, lambda a, b: a // b, lambda a: a == 0))) * scale


# -- resultants and discriminants -------------------------------------------


def sylvester_matrix(f_coeffs, g_coeffs):
    """Sylvester matrix from coefficient lists given low degree first.

    The list lengths fix the formal degrees, so leading zeros are allowed; this
    gives the resultant of the corresponding binary forms.
    """
    m, n = len(f_coeffs) - 1, len(g_coeffs) - 1
    size = m + n
    zero = 0 * (f_coeffs[0] if f_coeffs else 0)
    fh, gh = list(reversed(f_coeffs)), list(reversed(g_coeffs))
    rows = []
    for i in range(n):
        rows.append([zero] * i + fh + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + gh + [zero] * (size - n - 1 - i))
    return rows


def resultant_of_coeffs(f_coeffs, g_coeffs):
    return determinant(sylvester_matrix(f_coeffs, g_coeffs))


def resultant(f, g, var):
    """Sylvester resultant of ``f`` and ``g`` eliminating ``var``.

    Returns an ExactPoly in the remaining generators, or a Fraction if none
    remain.  Convention: the Sylvester matrix lists the ``deg g`` shifted rows
    of ``f`` first, so ``resultant(z - a, z - b) = a - b``.
    """
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomial("resultant of a zero polynomial")
    return resultant_of_coeffs(f.coefficients_in(var), g.coefficients_in(var))


def binary_form_coeffs(form, chart=0):
    """Coefficients of a binary form as a polynomial in the affine coordinate.

    With ``chart=0`` the coordinate is ``gens[1]/gens[0]``; the list has
    length ``deg + 1`` (formal degree), lowest power first.
    """
    if len(form.gens) != 2 or not form.is_homogeneous():
        raise ValueError("not a binary form")
    d = form.degree()
    if chart == 0:
        return [form.coeff((d - i, i)) for i in range(d + 1)]
    return [form.coeff((i, d - i)) for i in range(d + 1)]


def binary_resultant(f, g):
    """Resultant of two binary forms with their formal degrees."""
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomial("resultant of a zero form")
    return resultant_of_coeffs(binary_form_coeffs(f), binary_form_coeffs(g))


def _univariate_discriminant(coeffs):
    c = _trim(coeffs)
    d = len(c) - 1
    if d < 2:
        raise DegreeTooSmall(f"discriminant needs degree >= 2, got {d}")
    deriv = [i * c[i] for i in range(1, d + 1)]
    res = resultant_of_coeffs(c, deriv)
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * res / Fraction(c[-1])


def discriminant(f, var=None):
    """Discriminant with ``disc(f) = (-1)^(d(d-1)/2) Res(f, f') / lc(f)``.

    ``f`` may be univariate, or a binary form.  A binary form is dehomogenised
    in a chart where it keeps full degree (after an integral unimodular shear
    if neither coordinate chart works); the binary discriminant is invariant
    under such changes, so the value does not depend on the chart chosen.
    If ``var`` is given for a multivariate ``f`` the result is an ExactPoly in
    the other generators.
    """
    if f.is_zero():
        raise ZeroPolynomial("discriminant of zero")
    if var is not None and len(f.gens) > 1:
        d = f.degree(var)
        if d < 2:
            raise DegreeTooSmall(f"discriminant needs degree >= 2, got {d}")
        lc = f.coefficients_in(var)[-1]
        res = resultant(f, f.diff(var), var)
        sign = -1 if (d * (d - 1) // 2) % 2 else 1
        return (res * sign).divexact(lc)
    if len(f.gens) == 1:
        return _univariate_discriminant(f.univariate_coeffs())
    if len(f.gens) == 2 and f.is_homogeneous():
        d = f.degree()
        if d < 2:
            raise DegreeTooSmall(f"discriminant needs degree >= 2, got {d}")
        form = f
        k = 1
        while True:
            c0 = binary_form_coeffs(form, 0)
            if c0[-1]:
                return _univariate_discriminant(c0)
            c1 = binary_form_coeffs(form, 1)
            if c1[-1]:
                return _univariate_discriminant(c1)
            u1, u2 = (ExactPoly.variable(f.gens, g) for g in f.gens)
            form = f.compose([u1 + k * u2, u2], f.gens)
            k += 1
    raise ValueError("discriminant needs a univariate polynomial, a binary form, or var")


# -- rational functions -----------------------------------------------------


class RationalFunction:
    """Quotient of univariate polynomials in lowest terms, monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = ExactPoly.constant(num.gens, 1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if len(num.gens) != 1 or num.gens != den.gens:
            raise ValueError("rational functions are univariate")
        g = upoly_gcd(num, den) if not num.is_zero() else ExactPoly.constant(num.gens, 1)
        if g.degree() > 0:
            num, den = num.divexact(g), den.divexact(g)
        lc = den.univariate_coeffs()[-1]
        self.num = num / lc
        self.den = den / lc

    @property
    def var(self):
        return self.num.gens[0]

    def is_polynomial(self):
        return self.den.degree() == 0

    def __call__(self, z):
        return self.num.evaluate([z]) / self.den.evaluate([z])

    def diff(self):
        v = self.var
        return RationalFunction(self.num.diff(v) * self.den - self.num * self.den.diff(v),
                                self.den * self.den)

    def __add__(self, other):
        other = _as_rf(other, self.var)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_rf(other, self.var))

    def __rsub__(self, other):
        return _as_rf(other, self.var) - self

    def __mul__(self, other):
        other = _as_rf(other, self.var)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rf(other, self.var)
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __pow__(self, n):
        return RationalFunction(self.num ** n, self.den ** n)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, ExactPoly)):
            other = _as_rf(other, self.var)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.is_polynomial():
            return f"RationalFunction({self.num})"
        return f"RationalFunction(({self.num}) / ({self.den}))"


def _as_rf(x, var):
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, ExactPoly):
        return RationalFunction(x)
    return RationalFunction(ExactPoly.constant((var,), x))

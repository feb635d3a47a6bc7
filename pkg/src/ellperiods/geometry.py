"""From eight plane points to a certified Weierstrass model and its 28 line sections.

Plane coordinates are ``X, Y, Z``.  The anticanonical pencil is spanned by two
cubics ``U1, U2`` through the eight points; ``V`` (sextic, double at the
points) and ``W`` (nonic, triple at the points) complete the graded pieces of
the anticanonical ring, and ``F(U1, U2, V, W) = 0`` is the weighted sextic
relation.  Everything here is exact rational arithmetic.

The base coordinate is ``z = U2 / U1`` after the chart (a rational 2x2 matrix
acting on the pencil basis).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm

from .errors import (CompletionFailed, DegenerateQuadraticTerm, GeneralPositionViolated,
                     KernelDimensionUnexpected, NinthPointCollision, NotASection, NotGeneric,
                     RelationSpaceNot1Dim)
from .exact_algebra import (ExactPoly, RationalFunction, binary_form_coeffs, binary_resultant,
                            determinant, discriminant, kernel_basis, monomials, rank,
                            resultant_of_coeffs, upoly_divmod, upoly_gcd)

PLANE = ("X", "Y", "Z")
BASE = ("U1", "U2")
WEIGHTED = ("U1", "U2", "V", "W")
IDENTITY_CHART = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))


# -- point configurations ---------------------------------------------------


def _primitive_int_point(p):
    p = [Fraction(c) for c in p]
    den = lcm(*(c.denominator for c in p))
    ints = [int(c * den) for c in p]
    g = gcd(*ints)
    if g == 0:
        raise ValueError("the zero vector is not a projective point")
    ints = [c // g for c in ints]
    if next(c for c in ints if c) < 0:
        ints = [-c for c in ints]
    return tuple(ints)


@dataclass(frozen=True)
class PointConfig:
    """Points of the projective plane with rational homogeneous coordinates."""

    points: tuple

    def __post_init__(self):
        pts = tuple(tuple(Fraction(c) for c in p) for p in self.points)
        for p in pts:
            if len(p) != 3:
                raise ValueError(f"point {p} does not have 3 homogeneous coordinates")
            if not any(p):
                raise ValueError("a point has all coordinates zero")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def integer_points(self):
        """Primitive integer representatives, first nonzero coordinate positive."""
        return [_primitive_int_point(p) for p in self.points]

    def moved(self, index, vector, step):
        """Copy with point ``index`` (0-based) replaced by ``Q + step * vector``."""
        pts = list(self.points)
        pts[index] = tuple(c + Fraction(step) * Fraction(v) for c, v in zip(pts[index], vector))
        return PointConfig(tuple(pts))


def _det3(a, b, c):
    return (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _falling(a, k):
    out = 1
    for i in range(k):
        out *= a - i
    return out


def multiplicity_rows(points, degree, mult):
    """Linear conditions for a plane form of ``degree`` to have multiplicity ``mult`` at each point.

    One row per point and per partial derivative of order ``mult - 1`` in
    ``X, Y, Z``; columns follow :func:`monomials` order.
    """
    monos = monomials(3, degree)
    orders = monomials(3, mult - 1)
    rows = []
    for p in points:
        for o in orders:
            row = []
            for e in monos:
                if any(a < k for a, k in zip(e, o)):
                    row.append(0)
                    continue
                c = 1
                for a, k, x in zip(e, o, p):
                    c *= _falling(a, k) * x ** (a - k)
                row.append(c)
            rows.append(row)
    return rows


def form_from_vector(vec, degree, gens=PLANE, primitive=True):
    f = ExactPoly(gens, {e: c for e, c in zip(monomials(len(gens), degree), vec) if c})
    return f.primitive() if primitive else f


def linear_system(points, degree, mult, primitive=True):
    """Basis of plane forms of ``degree`` with multiplicity ``mult`` at every point.

    With ``primitive=False`` the basis is the reduced-echelon kernel basis, which
    depends continuously on the points (no integer content is divided out).
    """
    rows = multiplicity_rows(points, degree, mult)
    return [form_from_vector(v, degree, primitive=primitive) for v in kernel_basis(rows)]


def form_vector(f, degree):
    return [f.coeff(e) for e in monomials(len(f.gens), degree)]


# -- general position -------------------------------------------------------


@dataclass(frozen=True)
class GeneralPositionReport:
    ok: bool
    condition: str = ""
    indices: tuple = ()
    witness: object = None
    note: str = ""

    def to_dict(self):
        return {"ok": self.ok, "condition": self.condition,
                "indices": [i + 1 for i in self.indices],
                "witness": None if self.witness is None else str(self.witness),
                "note": self.note}


_SINGULAR_NOTE = ("singular-cubic condition checked at each of the eight points "
                  "(the stronger of its two readings)")


def check_general_position(cfg):
    """Exact general-position test for eight plane points.

    Checks, in order: eight pairwise distinct points; no three collinear; no six
    on a conic; no cubic through all eight that is singular at one of them.
    Returns a report naming the first violated condition with a witness curve.
    """
    pts = cfg.integer_points()
    if len(pts) != 8:
        return GeneralPositionReport(False, "eight points", (), None, f"got {len(pts)} points")
    for i, j in combinations(range(8), 2):
        if _cross(pts[i], pts[j]) == (0, 0, 0):
            return GeneralPositionReport(False, "distinct points", (i, j), None)
    for i, j, k in combinations(range(8), 3):
        if _det3(pts[i], pts[j], pts[k]) == 0:
            line = ExactPoly(PLANE, {e: c for e, c in zip(((1, 0, 0), (0, 1, 0), (0, 0, 1)),
                                                          _cross(pts[i], pts[j])) if c}).primitive()
            return GeneralPositionReport(False, "three collinear", (i, j, k), line)
    for six in combinations(range(8), 6):
        rows = multiplicity_rows([pts[i] for i in six], 2, 1)
        if determinant(rows) == 0:
            conic = form_from_vector(kernel_basis(rows)[0], 2)
            return GeneralPositionReport(False, "six on a conic", six, conic)
    for i in range(8):
        rows = multiplicity_rows([pts[j] for j in range(8) if j != i], 3, 1)
        rows += multiplicity_rows([pts[i]], 3, 2)
        ker = kernel_basis(rows)
        if ker:
            return GeneralPositionReport(False, "cubic singular at a point", (i,),
                                         form_from_vector(ker[0], 3), _SINGULAR_NOTE)
    return GeneralPositionReport(True, note=_SINGULAR_NOTE)


def require_general_position(cfg):
    rep = check_general_position(cfg)
    if not rep.ok:
        raise GeneralPositionViolated(rep.condition, indices=[i + 1 for i in rep.indices],
                                      witness=rep.witness)
    return rep


# -- linear systems ---------------------------------------------------------


def cubic_pencil(cfg):
    """Deterministic basis ``(U1, U2)`` of the cubics through the eight points.

    The basis is the reduced-echelon kernel basis, so the base coordinate
    ``U2 / U1`` varies continuously when the points move.
    """
    if len(cfg) != 8:
        raise ValueError(f"the pencil needs exactly eight points, got {len(cfg)}")
    pts = cfg.integer_points()
    basis = linear_system(pts, 3, 1, primitive=False)
    if len(basis) != 2:
        raise KernelDimensionUnexpected("cubic pencil", dimension=len(basis))
    for u in basis:
        if any(u.evaluate(p) for p in pts):
            raise KernelDimensionUnexpected("pencil cubic misses a base point")
    return tuple(basis)


def _complete(space, known, degree, what):
    base = [form_vector(k, degree) for k in known]
    r = rank(base)
    for s in space:
        if rank(base + [form_vector(s, degree)]) > r:
            return s
    raise CompletionFailed(f"cannot complete the {what} basis")


def weighted_monomials():
    """Exponents of the 23 weighted-degree-6 monomials in ``U1, U2, V, W``."""
    out = []
    for k in range(3):
        for j in range(4):
            r = 6 - 2 * j - 3 * k
            if r < 0:
                continue
            for i in range(r, -1, -1):
                out.append((i, r - i, j, k))
    return out


@dataclass(frozen=True)
class AnticanonicalModel:
    U1: ExactPoly
    U2: ExactPoly
    V: ExactPoly
    W: ExactPoly
    F: ExactPoly
    dims: dict = field(default_factory=dict, compare=False)


def pullback_relation(U1, U2, V, W):
    """The weighted sextic relation, as the exact kernel of the pullback to degree-18 forms."""
    vals = (U1, U2, V, W)
    cache = {}

    def power(i, k):
        if (i, k) not in cache:
            cache[(i, k)] = ExactPoly.constant(PLANE, 1) if k == 0 else power(i, k - 1) * vals[i]
        return cache[(i, k)]

    cols = []
    for e in weighted_monomials():
        p = power(0, e[0]) * power(1, e[1]) * power(2, e[2]) * power(3, e[3])
        cols.append(p)
    rows18 = monomials(3, 18)
    mat = [[c.coeff(m) for c in cols] for m in rows18]
    ker = kernel_basis(mat)
    if len(ker) != 1:
        raise RelationSpaceNot1Dim("weighted sextic relation", dimension=len(ker))
    return ExactPoly(WEIGHTED, {e: c for e, c in zip(weighted_monomials(), ker[0]) if c}).primitive()


def anticanonical_model(cfg, pencil=None):
    """Complete the pencil to the anticanonical ring generators and find the relation ``F``."""
    pts = cfg.integer_points()
    U1, U2 = pencil or cubic_pencil(cfg)
    S6 = linear_system(pts, 6, 2)
    if len(S6) != 4:
        raise CompletionFailed("sextics double at the points", dimension=len(S6), expected=4)
    V = _complete(S6, [U1 * U1, U1 * U2, U2 * U2], 6, "sextic")
    S9 = linear_system(pts, 9, 3)
    if len(S9) != 7:
        raise CompletionFailed("nonics triple at the points", dimension=len(S9), expected=7)
    W = _complete(S9, [U1 ** 3, U1 * U1 * U2, U1 * U2 * U2, U2 ** 3, V * U1, V * U2], 9, "nonic")
    F = pullback_relation(U1, U2, V, W)
    return AnticanonicalModel(U1, U2, V, W, F, {"sextics": len(S6), "nonics": len(S9)})


# -- Weierstrass reduction --------------------------------------------------


def _rational_root(c, n):
    """Rational ``r > 0`` with ``r^n = c``, or None."""
    if c <= 0:
        return None

    def iroot(m):
        r = round(m ** (1.0 / n)) if m < 2 ** 1000 else _int_root(m, n)
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** n == m:
                return cand
        r = _int_root(m, n)
        return r if r ** n == m else None

    a, b = iroot(c.numerator), iroot(c.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def _int_root(m, n):
    lo, hi = 0, 1 << (m.bit_length() // n + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** n <= m:
            lo = mid
        else:
            hi = mid - 1
    return lo


@dataclass(frozen=True)
class Gauge:
    """Change of coordinates from ``(U, V, W)`` to the Weierstrass coordinates.

    ``v_model = (v + shift(u)) / (alpha * lam^2)`` and
    ``w_model = (w + shear(u, v)) / (alpha * lam^3)``.
    """

    shear: ExactPoly
    shift: ExactPoly
    alpha: Fraction
    lam: Fraction

    def apply(self, U1, U2, V, W):
        """Model forms ``(Vm, Wm)`` from plane (or any ring) values of ``U1, U2, V, W``."""
        s = self.shift.compose([U1, U2], U1.gens) if self.shift else 0 * U1
        sh = self.shear.compose([U1, U2, V], U1.gens) if self.shear else 0 * U1
        Vm = (V + s) / (self.alpha * self.lam ** 2)
        Wm = (W + sh) / (self.alpha * self.lam ** 3)
        return Vm, Wm


@dataclass(frozen=True)
class WeierstrassModel:
    """``W^2 = 4 V^3 - g4 V - g6`` with binary forms ``g4, g6`` in ``U1, U2``.

    ``plane`` optionally holds the plane forms ``(U1, U2, Vm, Wm)`` realising the
    model on the blown-up plane, in the current chart.
    """

    g4: ExactPoly
    g6: ExactPoly
    chart: tuple = IDENTITY_CHART
    gauge: Gauge = None
    plane: tuple = None

    def __post_init__(self):
        for g, d in ((self.g4, 4), (self.g6, 6)):
            if g.gens != BASE or not g.is_homogeneous() or (g and g.degree() != d):
                raise ValueError(f"expected a binary form of degree {d} in U1, U2")

    def affine(self, form):
        """Dehomogenise a binary form at ``U1 = 1``, ``U2 = z``."""
        return ExactPoly.from_univariate(binary_form_coeffs(form), "z")

    @property
    def g4z(self):
        return self.affine(self.g4)

    @property
    def g6z(self):
        return self.affine(self.g6)

    def jacobian_covariant(self):
        return (self.g4.diff("U1") * self.g6.diff("U2") - self.g4.diff("U2") * self.g6.diff("U1"))

    def discriminant_form(self):
        return self.g4 ** 3 - self.g6 * self.g6 * 27

    def rechart(self, M):
        """The same surface with pencil basis ``(U1', U2') = M (U1, U2)``."""
        M = tuple(tuple(Fraction(c) for c in row) for row in M)
        det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
        if not det:
            raise ValueError("singular chart matrix")
        inv = ((M[1][1] / det, -M[0][1] / det), (-M[1][0] / det, M[0][0] / det))
        u1, u2 = (ExactPoly.variable(BASE, g) for g in BASE)
        back = [u1 * inv[0][0] + u2 * inv[0][1], u1 * inv[1][0] + u2 * inv[1][1]]
        g4 = self.g4.compose(back, BASE)
        g6 = self.g6.compose(back, BASE)
        chart = _matmul2(M, self.chart)
        plane = None
        if self.plane is not None:
            U1, U2, Vm, Wm = self.plane
            plane = (U1 * M[0][0] + U2 * M[0][1], U1 * M[1][0] + U2 * M[1][1], Vm, Wm)
        return WeierstrassModel(g4, g6, chart, self.gauge, plane)

    def moebius(self, z):
        """Image of an old-chart base coordinate under this model's chart, relative to identity."""
        (a, b), (c, d) = self.chart
        return (c + d * z) / (a + b * z)


def _matmul2(A, B):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def weierstrass_reduce(F, normalize=True):
    """Bring the weighted sextic ``F(U1, U2, V, W)`` to ``W^2 = 4V^3 - g4 V - g6``.

    Completes the square in ``W``, depresses the cubic in ``V`` and rescales;
    with ``normalize`` the residual scaling ``(g4, g6) -> (g4 / lam^4, g6 / lam^6)``
    makes the first nonzero coefficient of ``g4`` (else of ``g6``) equal to 1
    when a rational ``lam`` exists.
    """
    if F.gens != WEIGHTED:
        raise ValueError(f"F must be a polynomial in {WEIGHTED}")
    cw = F.coefficients_in("W")
    if len(cw) != 3:
        raise DegenerateQuadraticTerm("relation is not quadratic in W")
    A0, A1, A2 = cw
    uv = ("U1", "U2", "V")
    a2 = A2.coeff((0, 0, 0))
    if not a2 or A2.degree() != 0:
        raise DegenerateQuadraticTerm("coefficient of W^2 vanishes")
    rest = (A1 * A1 / (4 * a2) - A0) / a2
    cv = rest.coefficients_in("V")
    if len(cv) != 4 or cv[3].degree() != 0:
        raise DegenerateQuadraticTerm("coefficient of V^3 vanishes after completing the square")
    k = cv[3].coeff((0, 0))
    b2, b4, b6 = cv[2], cv[1], cv[0]
    shift = b2 / (3 * k)
    # k (v - shift)^3 + b2 (v - shift)^2 + b4 (v - shift) + b6
    c4 = b4 - b2 * shift * 2 + shift * shift * k * 3
    c6 = b6 - b4 * shift + b2 * shift * shift - shift * shift * shift * k
    alpha = Fraction(4) / k
    g4 = (c4 * (-k / 4))
    g6 = (c6 * (-k * k / 16))
    g4 = ExactPoly(BASE, g4.terms)
    g6 = ExactPoly(BASE, g6.terms)
    lam = Fraction(1)
    if normalize:
        lam = _normaliser(g4, g6)
        g4 = g4 / lam ** 4
        g6 = g6 / lam ** 6
    shear = A1 / (2 * a2)
    gauge = Gauge(ExactPoly(uv, shear.terms), ExactPoly(BASE, shift.terms), alpha, lam)
    return WeierstrassModel(g4, g6, IDENTITY_CHART, gauge)


def _normaliser(g4, g6):
    for form, n in ((g4, 4), (g6, 6)):
        if form:
            c = form.leading_term()[1]
            r = _rational_root(c, n)
            if r is not None:
                return r
    return Fraction(1)


def model_from_configuration(cfg, chart=None, normalize=True, anticanonical=None):
    """Weierstrass model of the surface with the plane realisation attached."""
    ac = anticanonical or anticanonical_model(cfg)
    F = ac.F
    U1, U2 = ac.U1, ac.U2
    if chart is not None:
        chart = tuple(tuple(Fraction(c) for c in row) for row in chart)
        det = chart[0][0] * chart[1][1] - chart[0][1] * chart[1][0]
        if not det:
            raise ValueError("singular chart matrix")
        inv = ((chart[1][1] / det, -chart[0][1] / det), (-chart[1][0] / det, chart[0][0] / det))
        u1, u2, v, w = (ExactPoly.variable(WEIGHTED, g) for g in WEIGHTED)
        F = F.compose([u1 * inv[0][0] + u2 * inv[0][1], u1 * inv[1][0] + u2 * inv[1][1], v, w],
                      WEIGHTED)
        U1, U2 = U1 * chart[0][0] + U2 * chart[0][1], U1 * chart[1][0] + U2 * chart[1][1]
    model = weierstrass_reduce(F, normalize=normalize)
    Vm, Wm = model.gauge.apply(U1, U2, ac.V, ac.W)
    return WeierstrassModel(model.g4, model.g6, chart or IDENTITY_CHART, model.gauge,
                            (U1, U2, Vm, Wm))


def weierstrass_identity_holds(model):
    """Exact check that ``Wm^2 = 4 Vm^3 - g4(U) Vm - g6(U)`` as plane forms."""
    U1, U2, Vm, Wm = model.plane
    g4 = model.g4.compose([U1, U2], PLANE)
    g6 = model.g6.compose([U1, U2], PLANE)
    return (Wm * Wm - Vm * Vm * Vm * 4 + g4 * Vm + g6).is_zero()


# -- ninth base point -------------------------------------------------------


def ninth_base_point(U1, U2, known):
    """The ninth base point of the pencil, exactly.

    Projects from a deterministic centre: after a change of coordinates that
    moves the centre to ``(1:0:0)``, ``Res_X(U1, U2)`` is a binary nonic in
    ``(Y, Z)`` whose roots are the projections of the nine base points.  The
    eight known factors divide out, and the remaining linear factor with the
    gcd of the cubics along that line gives the point.
    """
    known = [_primitive_int_point(p) for p in known]
    failures = 0
    for a, b, c in ((1, 2, 3), (2, -1, 5), (3, 7, -2), (-5, 2, 7), (7, 11, 1), (1, -3, 4),
                    (4, -5, 9), (6, 13, -7), (-9, 4, 3)):
        # new coordinates: X' = X, Y' = Y - a X, Z' = Z - b X - c Y
        centre = (1, a, b + c * a)
        if any(_cross(centre, q) == (0, 0, 0) for q in known):
            continue
        x, y, z = (ExactPoly.variable(PLANE, g) for g in PLANE)
        back = [x, y + x * a, z + x * (b + c * a) + y * c]
        f1, f2 = U1.compose(back, PLANE), U2.compose(back, PLANE)
        c1 = f1.coefficients_in("X")
        c2 = f2.coefficients_in("X")
        if len(c1) != 4 or len(c2) != 4 or not c1[3] or not c2[3]:
            continue
        res = resultant_of_coeffs(c1, c2)  # binary nonic in (Y', Z')
        proj = [(q[1] - a * q[0], q[2] - b * q[0] - c * q[1]) for q in known]
        if len({(Fraction(p[0], p[1]) if p[1] else None) for p in proj}) != 8:
            continue
        # dehomogenise in the chart t = Y/Z if no projection sits at Z' = 0
        if any(p[1] == 0 for p in proj):
            continue
        coeffs = [res.coeff((i, 9 - i)) for i in range(10)]  # powers of Y low first
        rem = coeffs
        for p in proj:
            q, r = upoly_divmod(rem, [-p[0], p[1]])
            if any(r):
                raise NinthPointCollision("known base point missing from the resultant")
            rem = q
        while rem and not rem[-1]:
            rem.pop()
        if len(rem) == 1:
            # the ninth projection is at Z' = 0
            yz = (Fraction(1), Fraction(0))
        elif len(rem) == 2:
            yz = (-rem[0], rem[1])
        else:
            continue
        if any(yz[0] * p[1] - yz[1] * p[0] == 0 for p in proj):
            failures += 1
            if failures >= 3:
                raise NinthPointCollision("ninth base point coincides with a given point")
            continue
        # along the fibre Y' = yz0 s, Z' = yz1 s: gcd of the two cubics in X
        u1x = [c.evaluate(yz) for c in c1]
        u2x = [c.evaluate(yz) for c in c2]
        g = upoly_gcd(ExactPoly.from_univariate(u1x, "X"), ExactPoly.from_univariate(u2x, "X"))
        if g.degree() != 1:
            continue
        gc = g.univariate_coeffs()
        xv = -gc[0] / gc[1]
        point = _primitive_int_point([v.evaluate([xv, yz[0], yz[1]]) for v in back])
        if U1.evaluate(point) or U2.evaluate(point):
            continue
        if point in known:
            raise NinthPointCollision("ninth base point coincides with a given point", point=point)
        return point
    raise NinthPointCollision("could not isolate the ninth base point")


# -- sections ---------------------------------------------------------------


@dataclass(frozen=True)
class SectionCurve:
    """A section ``z -> (x(z), y(z))``; ``x``, ``y`` are None for the zero section."""

    label: str
    x: RationalFunction = None
    y: RationalFunction = None

    @property
    def is_zero_section(self):
        return self.label == "C0"

    def pair(self):
        if self.label.startswith("D"):
            return int(self.label[1]) - 1, int(self.label[2]) - 1
        return None


ZERO_SECTION = SectionCurve("C0")


def section_label(j, k):
    return f"D{j + 1}{k + 1}"


def _restrict_to_line(form, p, q):
    s = ExactPoly.variable(("s",), "s")
    vals = [s * q[i] + p[i] for i in range(3)]
    c = form.compose(vals, ("s",)).univariate_coeffs()
    d = form.degree()
    return list(c) + [Fraction(0)] * (d + 1 - len(c))


def section_from_line(cfg, model, j, k, q9=None):
    """The section ``D_jk`` given by the line through points ``j`` and ``k`` (0-based)."""
    if model.plane is None:
        raise ValueError("the model carries no plane realisation")
    pts = cfg.integer_points()
    p, q = pts[j], pts[k]
    if q9 is not None and _det3(p, q, q9) == 0:
        raise NotASection("ninth base point lies on the line", pair=(j + 1, k + 1))
    U1, U2, Vm, Wm = model.plane
    l1 = _restrict_to_line(U1, p, q)
    l2 = _restrict_to_line(U2, p, q)
    vq = _restrict_to_line(Vm, p, q)
    wc = _restrict_to_line(Wm, p, q)
    if l1[0] or l1[3] or l2[0] or l2[3] or any(vq[:2]) or any(vq[5:]) or any(wc[:3]) or any(wc[7:]):
        raise NotASection("restriction lacks the expected base-point vanishing", pair=(j + 1, k + 1))
    (a0, a1), (b0, b1) = l1[1:3], l2[1:3]
    E = a0 * b1 - a1 * b0
    if not E:
        raise NotASection("base map along the line is not of degree 1", pair=(j + 1, k + 1))
    z = ExactPoly.variable(("z",), "z")
    N = z * (-a0) + b0
    Dn = z * a1 - b1
    qv = vq[2:5]
    cw = wc[3:7]
    x = sum((N ** i * Dn ** (2 - i) * c for i, c in enumerate(qv)), ExactPoly.constant(("z",), 0)) / (E * E)
    y = sum((N ** i * Dn ** (3 - i) * c for i, c in enumerate(cw)), ExactPoly.constant(("z",), 0)) / (-E ** 3)
    return SectionCurve(section_label(j, k), RationalFunction(x), RationalFunction(y))


def all_sections(cfg, model, q9=None):
    return [section_from_line(cfg, model, j, k, q9) for j, k in combinations(range(8), 2)]


def section_identity_holds(model, sec):
    """Exact check of ``y^2 = 4x^3 - g4 x - g6`` along the section."""
    g4 = RationalFunction(model.g4z)
    g6 = RationalFunction(model.g6z)
    x, y = sec.x, sec.y
    return y * y == x * x * x * 4 - g4 * x - g6


# -- genericity -------------------------------------------------------------


@dataclass(frozen=True)
class GenericityCertificate:
    disc_D: Fraction
    disc_J: Fraction
    res_DJ: Fraction
    leading_J: Fraction
    res_J_g4: Fraction
    res_J_g6: Fraction
    chart: tuple = IDENTITY_CHART

    @property
    def disc_D_nonzero(self):
        return self.disc_D != 0

    @property
    def disc_J_nonzero(self):
        return self.disc_J != 0

    @property
    def res_DJ_nonzero(self):
        return self.res_DJ != 0

    @property
    def leading_coeff_J_nonzero(self):
        return self.leading_J != 0

    @property
    def ok(self):
        return all([self.disc_D_nonzero, self.disc_J_nonzero, self.res_DJ_nonzero,
                    self.leading_coeff_J_nonzero, self.res_J_g4 != 0, self.res_J_g6 != 0])

    def to_dict(self):
        return {"disc_D_nonzero": self.disc_D_nonzero, "disc_J_nonzero": self.disc_J_nonzero,
                "res_DJ_nonzero": self.res_DJ_nonzero,
                "leading_coeff_J_nonzero": self.leading_coeff_J_nonzero,
                "res_J_g4_nonzero": self.res_J_g4 != 0, "res_J_g6_nonzero": self.res_J_g6 != 0,
                "chart": [[str(c) for c in row] for row in self.chart]}


RECHARTS = tuple(((1, k), (0, 1)) for k in (1, 2, 3, -1, 5, 7, -4, 11))


def genericity_witnesses(model):
    J = model.jacobian_covariant()
    D = model.discriminant_form()
    if J.is_zero() or J.degree() != 8:
        return None, J, D
    cert = GenericityCertificate(
        disc_D=discriminant(D) if D else Fraction(0),
        disc_J=discriminant(J),
        res_DJ=binary_resultant(D, J) if D else Fraction(0),
        leading_J=J.coeff((0, 8)),
        res_J_g4=binary_resultant(J, model.g4) if model.g4 else Fraction(0),
        res_J_g6=binary_resultant(J, model.g6) if model.g6 else Fraction(0),
        chart=model.chart)
    return cert, J, D


def certify_genericity(model, max_recharts=len(RECHARTS)):
    """Exact genericity certificate; re-charts the base if ``J`` has a root at infinity.

    Returns ``(certificate, model)`` where ``model`` is possibly re-charted.
    Besides the discriminants of ``D = g4^3 - 27 g6^2`` and ``J`` and their
    resultant, ``J`` must be coprime to ``g4`` and to ``g6`` so that the local
    gauge at every branch point is finite and nonzero.
    """
    cert, J, D = genericity_witnesses(model)
    if cert is None:
        raise NotGeneric("Jacobian covariant vanishes identically", J=J)
    for name, ok in (("disc(D)", cert.disc_D_nonzero), ("disc(J)", cert.disc_J_nonzero),
                     ("Res(D, J)", cert.res_DJ_nonzero), ("Res(J, g4)", cert.res_J_g4 != 0),
                     ("Res(J, g6)", cert.res_J_g6 != 0)):
        if not ok:
            raise NotGeneric(f"{name} vanishes", witness=name, certificate=cert.to_dict())
    tries = 0
    while not cert.leading_coeff_J_nonzero:
        if tries >= max_recharts:
            raise NotGeneric("J keeps a root at infinity after re-charting")
        model = model.rechart(RECHARTS[tries])
        tries += 1
        cert, J, D = genericity_witnesses(model)
    return cert, model

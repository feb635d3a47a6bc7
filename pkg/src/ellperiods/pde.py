"""Finite-difference check of the differential system satisfied by the period matrix.

A one-parameter family of point configurations moves one point along a fixed
direction.  Each sample of the family gives branch positions, the j-value of
the fibre over every branch point (the local coordinates ``t_i`` on moduli)
and the normalised period matrix.  Central differences over eight directions
give ``d eta / d s`` and ``d t / d s``; solving with the 8x8 Jacobian
``dt/ds`` yields the partials ``d eta_j / d t_i``, which must satisfy

    (a) d_i eta_j = (d_i eta_j, eta_i) eta_i                      (i != j)
    (b) (d_i eta_i, eta_j) + (eta_i, d_i eta_j) = 0               (i != j)
    (c) d_i H = (d_i eta_i ^ eta_i) H, column by column.

For the column ``j = i`` of (c) the derivative ``d_i eta_i`` is replaced by its
projection orthogonal to ``eta_i``; unit norm makes the dropped part vanish
to second order in the step, and it is reported separately.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mpf

from .errors import BranchCollision, JacobianIllConditioned, PDEError, SignAmbiguous
from .lattice import gram_matrix
from .numerics import to_mp
from .pipeline import (DEFAULT_PRECISION, identity_chart_position, reference_configuration,
                       run_pipeline)

DEFAULT_DELTA = Fraction(1, 2 ** 20)
OVERLAP_THRESHOLD = 0.9
CONDITION_LIMIT = mpf(10) ** 12


@dataclass(frozen=True)
class FamilyDirection:
    """Move point ``point`` (1-based) by ``s * vector`` in homogeneous coordinates."""

    point: int
    vector: tuple

    def label(self):
        return f"Q{self.point}+s*{tuple(str(v) for v in self.vector)}"


def random_directions(seed):
    """Eight distinct (point, coordinate) moves among the last four points, drawn from ``seed``."""
    rng = random.Random(seed)
    slots = rng.sample([(p, k) for p in (5, 6, 7, 8) for k in range(3)], 8)
    out = []
    for p, k in sorted(slots):
        v = [0, 0, 0]
        v[k] = rng.choice((1, -1)) * rng.randint(1, 3)
        out.append(FamilyDirection(p, tuple(v)))
    return out


def default_directions():
    """Eight directions: the last four points moved in their first and second coordinate.

    The first four points are left alone; they fix the projective frame.
    """
    return [FamilyDirection(p, v) for p in (5, 6, 7, 8) for v in ((1, 0, 0), (0, 1, 0))]


@dataclass
class Sample:
    """What one configuration contributes: positions, coordinates and periods."""

    z: list          # branch positions in the identity chart
    t: list          # j-values at the branch points
    H: list          # 8x8 complex, column i = eta_i
    residuals: dict = field(default_factory=dict)


def j_value(g4, g6):
    g43 = g4 ** 3
    return 1728 * g43 / (g43 - 27 * g6 ** 2)


def sample_configuration(cfg, precision_bits=DEFAULT_PRECISION):
    res = run_pipeline(cfg, precision_bits)
    with mpmath.workprec(precision_bits):
        chart = tuple(tuple(to_mp(x) for x in row) for row in res.model.chart)
        z = [identity_chart_position(chart, b.t.mid) for b in res.branches]
        t = [j_value(f.frame.g4.mid, f.frame.g6.mid) for f in res.forms]
        M = res.period.M
        H = [[M[r][i].mid for i in range(8)] for r in range(8)]
    return Sample(z, t, H, {"orthonormality": res.period.orthonormality,
                            "determinant": res.period.determinant})


def _bilinear(x, y, G):
    return sum(x[k] * G[k][l] * y[l] for k in range(len(x)) for l in range(len(y)) if G[k][l])


def _column(H, i):
    return [row[i] for row in H]


def match_sample(base, sample, label=""):
    """Reorder ``sample`` so its branch points and period columns line up with ``base``.

    Branch points are matched by nearest position; the matching must be
    unambiguous (every point moved by less than a quarter of its distance to
    the nearest other base point).  Column signs are chosen by the Hermitian overlap with
    the base column, which must exceed :data:`OVERLAP_THRESHOLD` in modulus.
    """
    n = len(base.z)
    perm = []
    for zi in base.z:
        perm.append(min(range(n), key=lambda k: abs(sample.z[k] - zi)))
    if sorted(perm) != list(range(n)):
        raise BranchCollision("branch points cannot be matched", family=label)
    for i in range(n):
        sep = min(abs(base.z[i] - base.z[k]) for k in range(n) if k != i)
        moved = abs(sample.z[perm[i]] - base.z[i])
        if moved * 4 >= sep:
            raise BranchCollision("branch point moves too far for an unambiguous match",
                                  family=label, branch=i + 1, moved=moved, separation=sep)
    cols = []
    for i in range(n):
        b = _column(base.H, i)
        c = _column(sample.H, perm[i])
        ov = sum(mpmath.conj(x) * y for x, y in zip(b, c))
        norm = mpmath.sqrt(sum(abs(x) ** 2 for x in b) * sum(abs(y) ** 2 for y in c))
        if abs(ov) < OVERLAP_THRESHOLD * norm:
            raise SignAmbiguous("period column changed too much to fix its sign",
                                family=label, column=i + 1, overlap=abs(ov) / norm)
        cols.append(c if ov.real >= 0 else [-x for x in c])
    H = [[cols[i][r] for i in range(n)] for r in range(len(cols[0]))]
    return Sample([sample.z[k] for k in perm], [sample.t[k] for k in perm], H, sample.residuals)


@dataclass
class FamilyTrack:
    """Base sample and matched samples at ``+delta`` and ``-delta`` for each direction."""

    delta: object
    directions: list
    base: Sample
    plus: list
    minus: list


def track_family(cfg=None, directions=None, delta=DEFAULT_DELTA, precision_bits=DEFAULT_PRECISION,
                 base=None, progress=None):
    """Run the pipeline at the base configuration and at ``+-delta`` along each direction."""
    cfg = cfg or reference_configuration()
    directions = directions or default_directions()
    delta = Fraction(delta)
    base = base or sample_configuration(cfg, precision_bits)
    plus, minus = [], []
    with mpmath.workprec(precision_bits):
        for d in directions:
            for sign, out in ((1, plus), (-1, minus)):
                moved = cfg.moved(d.point - 1, d.vector, sign * delta)
                s = sample_configuration(moved, precision_bits)
                out.append(match_sample(base, s, d.label()))
                if progress:
                    progress(d, sign)
    return FamilyTrack(delta, directions, base, plus, minus)


@dataclass
class Partials:
    jacobian: list      # J[d][i] = d t_i / d s_d
    condition: object
    d_eta: list         # d_eta[i][j] = d eta_j / d t_i (vector of 8)
    d_t: list


def _solve(A, B):
    """Solve ``A X = B`` column by column at the working precision."""
    A = mpmath.matrix(A)
    n = A.rows
    out = []
    for col in range(len(B[0])):
        rhs = mpmath.matrix([B[r][col] for r in range(n)])
        out.append(list(mpmath.lu_solve(A, rhs)))
    return [[out[c][r] for c in range(len(out))] for r in range(n)]


def condition_number(A):
    s = mpmath.svd_c(mpmath.matrix(A), compute_uv=False)
    lo = min(abs(x) for x in s)
    return abs(max(abs(x) for x in s) / lo) if lo else mpmath.inf


def directional_to_partial(track, condition_limit=CONDITION_LIMIT):
    """Central differences along the directions, converted to partials in ``t``."""
    n = len(track.base.t)
    m = len(track.directions)
    if m != n:
        raise PDEError("need as many directions as branch points", directions=m, branch_points=n)
    if not track.delta:
        raise JacobianIllConditioned("zero step gives no derivative information", condition=mpmath.inf)
    two_delta = 2 * mpf(track.delta.numerator) / track.delta.denominator
    Jts = [[(p.t[i] - q.t[i]) / two_delta for i in range(n)] for p, q in zip(track.plus, track.minus)]
    cond = condition_number(Jts)
    if not cond < condition_limit:
        raise JacobianIllConditioned("dt/ds is singular or ill-conditioned", condition=cond)
    rows = len(track.base.H)
    # D[d] = d H / d s_d flattened per column j and row r
    D = [[(p.H[r][j] - q.H[r][j]) / two_delta for j in range(n) for r in range(rows)]
         for p, q in zip(track.plus, track.minus)]
    X = _solve(Jts, D)       # X[i][(j, r)] = d H[r][j] / d t_i
    d_eta = [[[X[i][j * rows + r] for r in range(rows)] for j in range(n)] for i in range(n)]
    return Partials(Jts, cond, d_eta, None)


@dataclass
class PDEReport:
    delta: object
    condition: object
    residual_a: object              # max over i != j
    residual_b: object              # max over i != j
    residual_c: object              # max over i != j
    residual_c_diagonal: object     # j = i column of (c), projected derivative
    diagonal_unprojected: object    # j = i column of (c) with the raw derivative
    unit_norm: object               # max |(d_i eta_j, eta_j)|
    jacobian: list = field(repr=False, default=None)
    entries_a: list = field(repr=False, default=None)
    entries_b: list = field(repr=False, default=None)
    entries_c: list = field(repr=False, default=None)

    def worst(self):
        return max(self.residual_a, self.residual_b, self.residual_c)


def _vmax(v):
    return max(abs(x) for x in v)


def _wedge_apply(x, y, z, G):
    """``(x ^ y) z = (y, z) x - (x, z) y``."""
    yz, xz = _bilinear(y, z, G), _bilinear(x, z, G)
    return [yz * a - xz * b for a, b in zip(x, y)]


def verify_ecliptic(partials, H, G=None, delta=None):
    """Residuals of the three relations for the partials at the base matrix ``H``."""
    G = G or gram_matrix()
    n = len(H[0])
    eta = [_column(H, i) for i in range(n)]
    d = partials.d_eta
    ea = [[mpf(0)] * n for _ in range(n)]
    eb = [[mpf(0)] * n for _ in range(n)]
    ec = [[mpf(0)] * n for _ in range(n)]
    diag, raw_diag, unit = mpf(0), mpf(0), mpf(0)
    for i in range(n):
        dii = d[i][i]
        pii = _bilinear(dii, eta[i], G)
        tangent = [x - pii * y for x, y in zip(dii, eta[i])]
        for j in range(n):
            dij = d[i][j]
            unit = max(unit, abs(_bilinear(dij, eta[j], G)))
            if i == j:
                w = _wedge_apply(tangent, eta[i], eta[i], G)
                diag = max(diag, _vmax([a - b for a, b in zip(tangent, w)]))
                w = _wedge_apply(dii, eta[i], eta[i], G)
                raw_diag = max(raw_diag, _vmax([a - b for a, b in zip(dii, w)]))
                continue
            c = _bilinear(dij, eta[i], G)
            ea[i][j] = _vmax([x - c * y for x, y in zip(dij, eta[i])])
            eb[i][j] = abs(_bilinear(dii, eta[j], G) + _bilinear(eta[i], dij, G))
            w = _wedge_apply(dii, eta[i], eta[j], G)
            ec[i][j] = _vmax([a - b for a, b in zip(dij, w)])
    ra = max(max(r) for r in ea)
    rb = max(max(r) for r in eb)
    rc = max(max(r) for r in ec)
    return PDEReport(delta, partials.condition, ra, rb, rc, diag, raw_diag, unit, partials.jacobian,
                     ea, eb, ec)


def check_pde(cfg=None, delta=DEFAULT_DELTA, precision_bits=DEFAULT_PRECISION, directions=None,
              base=None, progress=None):
    track = track_family(cfg, directions, delta, precision_bits, base=base, progress=progress)
    with mpmath.workprec(precision_bits):
        partials = directional_to_partial(track)
        return verify_ecliptic(partials, track.base.H, delta=Fraction(delta)), track


@dataclass
class RichardsonReport:
    coarse: PDEReport
    fine: PDEReport
    ratios: dict
    jacobian: list = None

    def within(self, lo=3.5, hi=4.5):
        return all(lo <= r <= hi for r in self.ratios.values())


def richardson(cfg=None, delta=DEFAULT_DELTA, precision_bits=DEFAULT_PRECISION, directions=None,
               progress=None):
    """Residuals at ``delta`` and ``delta / 2``; second-order differences give ratios near 4."""
    coarse, track = check_pde(cfg, delta, precision_bits, directions, progress=progress)
    fine, _ = check_pde(cfg, Fraction(delta) / 2, precision_bits, directions, base=track.base,
                        progress=progress)
    ratios = {}
    for key in ("residual_a", "residual_b", "residual_c"):
        f = getattr(fine, key)
        ratios[key] = getattr(coarse, key) / f if f else mpmath.inf
    return RichardsonReport(coarse, fine, ratios, coarse.jacobian)

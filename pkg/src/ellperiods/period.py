"""Coordinates of the second-kind classes in the root basis, orthogonality, normalisation."""

from dataclasses import dataclass, field

import mpmath
from mpmath import mpf

from .errors import OrthogonalityViolated, SelfPairingNearZero
from .lattice import gram_inverse, gram_matrix
from .numerics import Ball


def eta_coordinates(pairings, G=None):
    """Columns ``G^{-1} p_i`` for the pairing rows ``p_i = ([eta_i] . alpha_l)_l``."""
    G = G or gram_matrix()
    Ginv = gram_inverse(G)
    n = len(G)
    cols = []
    for row in pairings:
        row = [Ball.coerce(v) for v in row]
        cols.append([sum((row[k] * Ginv[l][k] for k in range(n)), Ball(0)) for l in range(n)])
    # matrix with column i = coordinates of eta_i
    return [[cols[i][l] for i in range(len(cols))] for l in range(n)]


def form_matrix(coords, G=None):
    """``coords^T G coords`` as a matrix of balls."""
    G = G or gram_matrix()
    n, m = len(coords), len(coords[0])
    Gc = [[sum((coords[k][j] * G[l][k] for k in range(n) if G[l][k]), Ball(0)) for j in range(m)]
          for l in range(n)]
    return [[sum((coords[l][i] * Gc[l][j] for l in range(n)), Ball(0)) for j in range(m)]
            for i in range(m)]


@dataclass(frozen=True)
class OrthogonalityReport:
    max_offdiag: object      # normalised |O_ij| / sqrt|O_ii O_jj|
    pair: tuple
    raw_max_offdiag: object
    gram: list = field(repr=False, default=None)


def verify_orthogonality(coords, G=None, tolerance=None):
    """Largest normalised off-diagonal entry of ``coords^T G coords``.

    Raises :class:`OrthogonalityViolated` beyond ``tolerance``.  The entries are
    normalised by the diagonal so the measure does not depend on the scaling of
    the individual forms; it equals the off-diagonal part of ``M^T G M`` after
    normalisation.
    """
    O = form_matrix(coords, G)
    m = len(O)
    worst, pair, raw = mpf(0), (0, 0), mpf(0)
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            denom = mpmath.sqrt(abs(O[i][i].mid) * abs(O[j][j].mid))
            val = O[i][j].upper() / denom if denom else mpmath.inf
            raw = max(raw, O[i][j].upper())
            if val > worst:
                worst, pair = val, (i, j)
    if tolerance is not None and worst > tolerance:
        raise OrthogonalityViolated("forms are not orthogonal", pair=(pair[0] + 1, pair[1] + 1),
                                    magnitude=worst)
    return OrthogonalityReport(worst, pair, raw, O)


def _canonical_sign(column, tol):
    """+1 or -1 so the first non-negligible entry has argument in (-pi/2, pi/2]."""
    scale = max(abs(c.mid) for c in column)
    for c in column:
        re, im = c.mid.real, c.mid.imag
        if abs(c.mid) <= tol * scale:
            continue
        if abs(re) > tol * abs(c.mid):
            return 1 if re > 0 else -1
        return 1 if im > 0 else -1
    return 1


@dataclass(frozen=True)
class PeriodMatrix:
    M: list                  # 8x8 balls, column i = normalised eta_i in the root basis
    gram: tuple
    orthonormality: object   # max |M^T G M - I|
    determinant: object      # | |det M| - 1 |
    self_pairings: list
    branch: str = "principal"
    signs: tuple = ()

    def column(self, i):
        return [self.M[r][i] for r in range(len(self.M))]


def orthonormalize(coords, G=None, sign_tolerance=None):
    """Scale each column by ``1/sqrt(s_i)`` (principal branch), then fix its sign canonically."""
    G = G or gram_matrix()
    O = form_matrix(coords, G)
    n, m = len(coords), len(coords[0])
    tol = sign_tolerance if sign_tolerance is not None else mpf(2) ** (-(mpmath.mp.prec // 2))
    cols, selfp, signs = [], [], []
    for i in range(m):
        s = O[i][i]
        if s.contains_zero() or abs(s.mid) <= tol * max(c.upper() for c in (coords[r][i] for r in range(n))) ** 2:
            raise SelfPairingNearZero("self-pairing indistinguishable from zero", column=i + 1)
        scale = s.sqrt().inverse()
        col = [coords[r][i] * scale for r in range(n)]
        sg = _canonical_sign(col, tol)
        if sg < 0:
            col = [-c for c in col]
        cols.append(col)
        selfp.append(s)
        signs.append(sg)
    M = [[cols[i][r] for i in range(m)] for r in range(n)]
    return finalize_period_matrix(M, G, selfp, tuple(signs))


def orthonormality_residual(M, G=None):
    O = form_matrix(M, G)
    return max((O[i][j] - (1 if i == j else 0)).upper() for i in range(len(O)) for j in range(len(O)))


def determinant_residual(M):
    with mpmath.workprec(mpmath.mp.prec):
        A = mpmath.matrix([[c.mid for c in row] for row in M])
        return abs(abs(mpmath.det(A)) - 1)


def finalize_period_matrix(M, G, self_pairings, signs):
    return PeriodMatrix(M, G, orthonormality_residual(M, G), determinant_residual(M),
                        self_pairings, "principal", signs)

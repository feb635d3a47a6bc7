"""Intersection theory on the plane blown up in nine points.

Classes are integer vectors in the basis ``(h, C0, C1, ..., C8)``: ``h`` is the
pullback of a line, ``C1..C8`` the exceptional curves over the given points
and ``C0`` the exceptional curve over the ninth base point (the zero section).
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import InconsistentSectionPairings
from .exact_algebra import determinant
from .numerics import Ball

PAIRS = tuple(combinations(range(8), 2))

E8_CARTAN = (
    (2, 0, -1, 0, 0, 0, 0, 0),
    (0, 2, 0, -1, 0, 0, 0, 0),
    (-1, 0, 2, -1, 0, 0, 0, 0),
    (0, -1, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, -1),
    (0, 0, 0, 0, 0, 0, -1, 2),
)


@dataclass(frozen=True)
class H2Class:
    coords: tuple

    def __post_init__(self):
        c = tuple(int(x) for x in self.coords)
        if len(c) != 10:
            raise ValueError("a class has 10 coordinates (h, C0, ..., C8)")
        object.__setattr__(self, "coords", c)

    def __add__(self, other):
        return H2Class(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return H2Class(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return H2Class(tuple(-a for a in self.coords))

    def __rmul__(self, k):
        return H2Class(tuple(k * a for a in self.coords))

    def __mul__(self, other):
        return intersection_number(self, other)


def _unit(i):
    c = [0] * 10
    c[i] = 1
    return H2Class(tuple(c))


H = _unit(0)
C = tuple(_unit(i + 1) for i in range(9))  # C[0] = C0, C[j] = C_j
PHI = 3 * H - sum(C[1:], C[0])  # fibre class


def line_section(j, k):
    """Class of ``D_jk = h - C_j - C_k`` (1-based point labels)."""
    return H - C[j] - C[k]


def intersection_number(a, b):
    """``h.h = 1``, ``C_i.C_j = -delta_ij``, ``h.C_i = 0``."""
    x, y = a.coords, b.coords
    return x[0] * y[0] - sum(x[i] * y[i] for i in range(1, 10))


@dataclass(frozen=True)
class RootBasis:
    alphas: tuple


def root_basis():
    """``a1 = C1 - C2``, ``a2 = h - C1 - C2 - C3``, ``a_j = C_{j-1} - C_j`` (j = 3..8)."""
    alphas = [C[1] - C[2], H - C[1] - C[2] - C[3]]
    alphas += [C[j - 1] - C[j] for j in range(3, 9)]
    return RootBasis(tuple(alphas))


def gram_matrix(basis=None):
    basis = basis or root_basis()
    return tuple(tuple(intersection_number(a, b) for b in basis.alphas) for a in basis.alphas)


def gram_determinant(G):
    return determinant([list(r) for r in G])


def gram_inverse(G):
    """Exact inverse of an integer Gram matrix (integral when ``det G = +-1``)."""
    from .exact_algebra import ExactMatrix, rref
    n = len(G)
    aug = [[Fraction(x) for x in G[i]] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    rows, piv = rref(ExactMatrix(aug))
    if piv[:n] != list(range(n)):
        raise ValueError("singular Gram matrix")
    inv = [row[n:] for row in rows]
    return tuple(tuple(int(x) if x.denominator == 1 else x for x in row) for row in inv)


# -- pairings --------------------------------------------------------------


@dataclass(frozen=True)
class SectionPairings:
    """Pairings of one form with ``h``, ``C1..C8`` and the root basis."""

    h: Ball
    c: tuple           # pairings with C1..C8
    alpha: tuple       # pairings with the root basis
    residual: object   # max abs defect over the 20 redundant equations
    scale: object      # max abs input, for relative tolerances


# The eight equations solved exactly: (1,2), (1,3), (2,3), (1,4), ..., (1,8), 0-based
SOLVED = ((0, 1), (0, 2), (1, 2)) + tuple((0, k) for k in range(3, 8))


def pairings_from_sections(row, tolerance=None):
    """Recover the pairings of a form with ``h``, ``C_j`` and ``alpha_l`` from its 28 line pairings.

    ``row[n]`` is the pairing with ``D_jk`` for the n-th pair in :data:`PAIRS`.
    Summing the 28 line classes gives ``28 h - 7 (C1 + ... + C8)``; the form
    pairs to zero with ``C0`` and with the fibre ``3h - C0 - ... - C8``, so it pairs
    with ``C1 + ... + C8`` as it does with ``3h``, and the sum equals 7 times its
    pairing with ``h``.  Each ``D_jk = h - C_j - C_k`` then gives
    ``c_j + c_k = H - p_jk``; eight of these are solved exactly, the other twenty
    are residual checks.
    """
    if len(row) != 28:
        raise ValueError("expected 28 section pairings")
    p = {pair: Ball.coerce(v) for pair, v in zip(PAIRS, row)}
    Hp = sum(p.values(), Ball(0)) / 7
    rhs = {pair: Hp - p[pair] for pair in PAIRS}
    c = [None] * 8
    c[0] = (rhs[(0, 1)] + rhs[(0, 2)] - rhs[(1, 2)]) / 2
    c[1] = rhs[(0, 1)] - c[0]
    c[2] = rhs[(0, 2)] - c[0]
    for k in range(3, 8):
        c[k] = rhs[(0, k)] - c[0]
    residual = max(((c[j] + c[k] - rhs[(j, k)]).upper() for (j, k) in PAIRS if (j, k) not in SOLVED),
                   default=0)
    scale = max(v.upper() for v in p.values()) if p else 0
    if tolerance is not None and residual > tolerance * max(scale, 1):
        raise InconsistentSectionPairings("redundant section equations disagree", residual=residual)
    alpha = [c[0] - c[1], Hp - c[0] - c[1] - c[2]] + [c[j - 2] - c[j - 1] for j in range(3, 9)]
    return SectionPairings(Hp, tuple(c), tuple(alpha), residual, scale)


def pairing_vector_of_class(cls):
    """The 28 integer pairings ``cls . D_jk``, an oracle input for the recovery."""
    return [intersection_number(cls, line_section(j + 1, k + 1)) for j, k in PAIRS]

import mpmath
import pytest
from mpmath import mp, mpc, mpf

from ellperiods.errors import OrthogonalityViolated, SelfPairingNearZero
from ellperiods.lattice import gram_matrix
from ellperiods.numerics import Ball
from ellperiods.period import (eta_coordinates, form_matrix, orthonormality_residual, orthonormalize,
                               verify_orthogonality)

G = gram_matrix()
MINUS_I = tuple(tuple(-int(i == j) for j in range(8)) for i in range(8))


@pytest.fixture(autouse=True)
def precision():
    with mp.workprec(256):
        yield


def scaled_identity(c):
    return [[Ball(c if i == j else 0) for j in range(8)] for i in range(8)]


def test_gram_rows_give_basis_vectors():
    coords = eta_coordinates([list(G[l]) for l in range(8)])
    for l in range(8):
        assert [coords[r][l].mid for r in range(8)] == [int(r == l) for r in range(8)]


def test_zero_row_gives_zero_column():
    coords = eta_coordinates([[0] * 8, list(G[3])])
    assert all(coords[r][0].mid == 0 for r in range(8))


def test_identity_is_a_negative_control():
    rep = verify_orthogonality(scaled_identity(1))
    assert abs(rep.raw_max_offdiag - 1) < mpf(2) ** -200
    assert abs(rep.max_offdiag - mpf(1) / 2) < mpf(2) ** -200
    with pytest.raises(OrthogonalityViolated) as err:
        verify_orthogonality(scaled_identity(1), tolerance=mpf(10) ** -10)
    assert err.value.details["pair"] in ((1, 3), (3, 1))


def test_self_pairing_four_scales_by_half():
    P = orthonormalize(scaled_identity(2j), MINUS_I)
    assert all(P.self_pairings[i].mid == 4 for i in range(8))
    assert all(abs(P.M[i][i].mid - 1j) < mpf(2) ** -250 for i in range(8))
    assert P.orthonormality < mpf(2) ** -240 and P.determinant < mpf(2) ** -240


def test_negative_self_pairing_uses_principal_branch():
    P = orthonormalize(scaled_identity(1), MINUS_I)
    assert P.branch == "principal"
    # 1/sqrt(-1) = -i, flipped by the sign rule to +i
    assert all(abs(P.M[i][i].mid - 1j) < mpf(2) ** -250 for i in range(8))
    assert set(P.signs) == {-1}


def test_isotropic_column_is_rejected():
    coords = scaled_identity(1)
    coords[1][0] = Ball(1j)  # e1 + i e2 is isotropic for -I
    with pytest.raises(SelfPairingNearZero) as err:
        orthonormalize(coords, MINUS_I)
    assert err.value.details["column"] == 1


def test_reference_orthogonality(result256):
    assert result256.orthogonality.raw_max_offdiag < mpf(10) ** -50
    assert result256.orthogonality.max_offdiag < mpf(10) ** -50


def test_reference_orthonormality(result256):
    P = result256.period
    assert P.gram == G
    assert P.orthonormality < mpf(10) ** -50
    assert P.determinant < mpf(10) ** -50
    assert orthonormality_residual(P.M, G) == P.orthonormality


def test_sign_rule(result256):
    tol = mpf(2) ** -128
    for i in range(8):
        col = result256.period.column(i)
        first = next(c.mid for c in col if abs(c.mid) > tol)
        arg = mpmath.arg(first)
        assert -mpmath.pi / 2 < arg <= mpmath.pi / 2


def test_perturbed_pairing_breaks_orthogonality(result256):
    rows = [list(r.alpha) for r in result256.recovered]
    rows[2][5] = rows[2][5] + mpf(10) ** -3
    coords = eta_coordinates(rows)
    with pytest.raises(OrthogonalityViolated):
        verify_orthogonality(coords, tolerance=mpf(10) ** -40)


def test_precisions_agree(result128, result256):
    for i in range(8):
        for r in range(8):
            a, b = result128.period.M[r][i].mid, result256.period.M[r][i].mid
            assert abs(a - b) < mpf(10) ** -30


def test_form_matrix_is_symmetric(result256):
    O = form_matrix(result256.coords)
    for i in range(8):
        for j in range(i):
            assert abs(O[i][j].mid - O[j][i].mid) <= O[i][j].rad + O[j][i].rad

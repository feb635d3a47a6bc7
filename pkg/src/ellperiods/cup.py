"""Residue formula for the cup product of a second-kind form with a curve class.

For a form with local expansion ``sum a_{P,n} z_P^(n-1) dz_P ^ dv_P`` and a curve
meeting the fibre over ``P`` at points ``Q`` with ``v_P = sum c_{Q,m} z_P^m``,

    ``[eta] . [D] = - sum_P sum_{m=1}^{e_P - 1} a_{P,-m} sum_Q c_{Q,m}``.
"""

from dataclasses import dataclass

from .errors import LengthMismatch
from .forms import section_expansion
from .numerics import Ball


@dataclass(frozen=True)
class PairingValue:
    value: Ball
    branch_index: int
    label: str


def cup_product_general(a_coeffs, c_coeffs, e):
    """Evaluate the residue formula for one pole fibre.

    ``a_coeffs[m - 1] = a_{P,-m}`` for ``m = 1 .. e - 1``; ``c_coeffs`` has one list
    per intersection point ``Q`` with ``c_coeffs[q][m - 1] = c_{Q,m}``.
    """
    if len(a_coeffs) != e - 1:
        raise LengthMismatch("polar coefficients", expected=e - 1, got=len(a_coeffs))
    for cq in c_coeffs:
        if len(cq) != e - 1:
            raise LengthMismatch("section coefficients", expected=e - 1, got=len(cq))
    total = Ball(0)
    for m in range(1, e):
        s = Ball(0)
        for cq in c_coeffs:
            s = s + Ball.coerce(cq[m - 1])
        total = total + Ball.coerce(a_coeffs[m - 1]) * s
    return -total


def cup_product_simple(form, section):
    """``[eta] . [D]`` for a simply ramified pole and a section meeting the fibre once.

    The zero section and a full fibre pair to exactly zero.
    """
    if section.is_zero_section or section.label == "F":
        return PairingValue(Ball(0), form.branch.index, section.label)
    exp = section_expansion(section, form)
    value = cup_product_general([form.mu * form.a_minus1], [[exp.c1]], 2)
    return PairingValue(value, form.branch.index, section.label)

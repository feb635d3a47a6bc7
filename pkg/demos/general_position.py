"""
What the general-position check rejects
=======================================

Every rejection names the violated condition and a witness curve.
"""

from fractions import Fraction

from ellperiods import check_general_position
from ellperiods.errors import NotGeneric
from ellperiods.geometry import PointConfig
from ellperiods.pipeline import REFERENCE_POINTS, exact_stage

cases = {
    "reference": REFERENCE_POINTS,
    "three on the line X = 0": ((0, 0, 1), (0, 1, 1), (0, 1, 0)) + REFERENCE_POINTS[4:] + ((1, 1, 1),),
    "six on the conic XY = Z^2": ((1, 1, 1), (1, 4, 2), (4, 1, 2), (1, 9, 3), (9, 1, 3), (4, 9, 6),
                                  (1, 2, 5), (3, -1, 7)),
    "a repeated point": REFERENCE_POINTS[:7] + ((2, 4, 6),),
}

for name, pts in cases.items():
    rep = check_general_position(PointConfig(pts))
    print(f"{name:28s} ok={rep.ok!s:5s} {rep.condition:20s} {rep.to_dict()['indices']} {rep.witness}")

# %%
# Points on a cuspidal cubic pass the general-position test, but the pencil
# then contains a cusp, so the discriminant of g4^3 - 27 g6^2 vanishes and the
# surface is not generic.
cusp = PointConfig(tuple((t * t, t ** 3, 1) for t in range(1, 9)))
print("cuspidal points in general position:", check_general_position(cusp).ok)
try:
    exact_stage(cusp)
except NotGeneric as exc:
    print("rejected:", exc, exc.details["witness"])

# %%
# A small move of one point off the cubic restores genericity.
moved = cusp.moved(7, (0, 1, 0), Fraction(1))
print("after moving Q8:", exact_stage(moved).certificate.ok)

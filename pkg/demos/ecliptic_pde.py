"""
Finite-difference check of the differential system
==================================================

Moving the last four points deforms the surface.  The period columns, as
functions of the j-values at the branch points, satisfy

    d_i eta_j = (d_i eta_i ^ eta_i) eta_j,   (x ^ y) z = (y, z) x - (x, z) y.

Central differences at two step sizes should leave residuals that drop by a
factor of four.  This takes about two minutes: 33 pipeline runs in total.
"""

import sys
from fractions import Fraction

from mpmath import mp, nstr

from ellperiods import reference_configuration
from ellperiods.pde import default_directions, richardson

delta = Fraction(1, 2 ** 20)
dirs = default_directions()
print("directions:", [d.label() for d in dirs])


def progress(d, sign):
    sys.stdout.write("+" if sign > 0 else "-")
    sys.stdout.flush()


rep = richardson(reference_configuration(), delta, 256, dirs, progress=progress)
print()
with mp.workprec(256):
    for name, r in (("delta", rep.coarse), ("delta/2", rep.fine)):
        print(f"{name:8s} a={nstr(r.residual_a, 3)} b={nstr(r.residual_b, 3)} c={nstr(r.residual_c, 3)} "
              f"diag={nstr(r.residual_c_diagonal, 3)} unit={nstr(r.unit_norm, 3)}")
    print("ratios:", {k: nstr(v, 4) for k, v in rep.ratios.items()})
    print("condition number of dt/ds:", nstr(rep.coarse.condition, 5))

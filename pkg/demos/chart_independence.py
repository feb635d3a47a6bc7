"""
Independence of the base chart
==============================

The base coordinate z = U2/U1 is a choice.  Recomputing with a rational
Moebius change of chart moves the branch points, but after matching them the
period columns agree to working precision.
"""

from mpmath import mp, nstr

from ellperiods import reference_configuration
from ellperiods.pipeline import compare_charts, exact_stage, run_pipeline

cfg = reference_configuration()
base = run_pipeline(cfg, 256, exact=exact_stage(cfg))

for chart in (((1, 1), (0, 1)), ((2, 1), (1, 1)), ((0, 1), (1, 0))):
    other = run_pipeline(cfg, 256, chart=chart)
    cmp = compare_charts(base, other)
    with mp.workprec(256):
        print(f"chart {chart}: permutation {cmp.perm}, branch points {nstr(cmp.branch_defect, 3)}, "
              f"columns {nstr(cmp.column_defect, 3)}")

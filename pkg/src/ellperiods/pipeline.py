"""End-to-end computation of the period matrix from eight plane points."""

import time
from dataclasses import dataclass, field

import mpmath
from mpmath import mp

from .cup import cup_product_simple
from .forms import ramification_points, second_kind_form_at
from .geometry import (PointConfig, all_sections, anticanonical_model, certify_genericity,
                       model_from_configuration, ninth_base_point, require_general_position)
from .lattice import gram_matrix, pairings_from_sections
from .numerics import conditioned_tolerance, to_mp
from .period import eta_coordinates, orthonormalize, verify_orthogonality

DEFAULT_PRECISION = 256

REFERENCE_POINTS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1),
                    (1, 2, 3), (2, 5, 1), (3, 1, 2), (5, 3, 7))


def reference_configuration():
    return PointConfig(REFERENCE_POINTS)


@dataclass
class ExactStage:
    """Everything that does not depend on the working precision."""

    cfg: PointConfig
    anticanonical: object
    model: object
    certificate: object
    q9: tuple
    sections: list


@dataclass
class PipelineResult:
    exact: ExactStage
    precision: int
    branches: list
    forms: list
    section_pairings: list      # 8 x 28 balls
    recovered: list             # SectionPairings per form
    coords: list
    orthogonality: object
    period: object
    tolerance: object
    timings: dict = field(default_factory=dict)

    @property
    def model(self):
        return self.exact.model

    @property
    def primitivity_residual(self):
        """Largest relative defect of the 20 redundant section equations."""
        return max(r.residual / max(r.scale, 1) for r in self.recovered)


def exact_stage(cfg, chart=None):
    require_general_position(cfg)
    ac = anticanonical_model(cfg)
    model = model_from_configuration(cfg, chart, anticanonical=ac)
    cert, model = certify_genericity(model)
    q9 = ninth_base_point(ac.U1, ac.U2, cfg.points)
    sections = all_sections(cfg, model, q9)
    return ExactStage(cfg, ac, model, cert, q9, sections)


def run_pipeline(cfg=None, precision_bits=DEFAULT_PRECISION, chart=None, exact=None):
    """Compute the orthonormal period matrix; theorem checks raise on failure.

    Theorem tolerances follow :func:`conditioned_tolerance` on the quantities
    each check consumes.
    """
    cfg = cfg or reference_configuration()
    timings = {}
    t0 = time.perf_counter()
    exact = exact or exact_stage(cfg, chart)
    timings["exact"] = time.perf_counter() - t0
    with mp.workprec(precision_bits):
        t1 = time.perf_counter()
        branches = ramification_points(exact.model, precision_bits)
        forms = [second_kind_form_at(exact.model, b) for b in branches]
        timings["forms"] = time.perf_counter() - t1
        t1 = time.perf_counter()
        pD = [[cup_product_simple(f, s).value for s in exact.sections] for f in forms]
        tol = conditioned_tolerance(precision_bits, [v for row in pD for v in row])
        recovered = [pairings_from_sections(row, tol) for row in pD]
        coords = eta_coordinates([r.alpha for r in recovered])
        tol = conditioned_tolerance(precision_bits, [v for row in coords for v in row])
        orth = verify_orthogonality(coords, tolerance=tol)
        period = orthonormalize(coords, gram_matrix())
        timings["periods"] = time.perf_counter() - t1
    timings["total"] = time.perf_counter() - t0
    return PipelineResult(exact, precision_bits, branches, forms, pD, recovered, coords, orth,
                          period, tol, timings)


@dataclass
class ChartComparison:
    perm: list              # perm[i]: index in the other run of the base run's branch point i
    branch_defect: object   # max distance of matched branch points, in the identity chart
    column_defect: object   # max entry difference of matched period columns


def identity_chart_position(chart, z):
    """Base coordinate in the identity chart of a point at ``z`` in ``chart``."""
    (a, b), (c, d) = chart
    return (c - a * z) / (b * z - d)


def compare_charts(base, other):
    """Match branch points of two runs in different base charts and compare their period columns.

    Both matrices are already in the canonical sign convention, so matched
    columns are compared directly.
    """
    bits = min(base.precision, other.precision)
    with mpmath.workprec(bits):
        def positions(res):
            chart = tuple(tuple(to_mp(x) for x in row) for row in res.model.chart)
            return [identity_chart_position(chart, b.t.mid) for b in res.branches]
        zb, zo = positions(base), positions(other)
        n = len(zb)
        perm = [min(range(n), key=lambda k: abs(zo[k] - z)) for z in zb]
        if sorted(perm) != list(range(n)):
            raise ValueError("branch points of the two charts cannot be matched")
        dz = max(abs(zo[perm[i]] - zb[i]) for i in range(n))
        Mb, Mo = base.period.M, other.period.M
        dM = max(abs(Mb[r][i].mid - Mo[r][perm[i]].mid) for i in range(n) for r in range(len(Mb)))
    return ChartComparison(perm, dz, dM)

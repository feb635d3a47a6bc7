"""Period matrices of rational elliptic surfaces from eight plane points.

The surface is the plane blown up in eight points in general position (and
in the ninth base point of their cubic pencil).  The library builds its
Weierstrass model exactly, constructs one second-kind 2-form per branch point
of the classifying map, pairs each form with the 28 line sections and
assembles the orthonormal period matrix in the E8 root basis.
"""

from .errors import PipelineError
from .geometry import PointConfig, check_general_position
from .lattice import gram_matrix, root_basis
from .pipeline import (DEFAULT_PRECISION, REFERENCE_POINTS, exact_stage, reference_configuration,
                       run_pipeline)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PRECISION",
    "PipelineError",
    "PointConfig",
    "REFERENCE_POINTS",
    "check_general_position",
    "exact_stage",
    "gram_matrix",
    "reference_configuration",
    "root_basis",
    "run_pipeline",
]

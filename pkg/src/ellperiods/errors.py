"""Exception hierarchy.

Every error raised by the pipeline derives from :class:`PipelineError` and
carries the name of the module that raised it, so the command line can report
where a run was rejected.
"""


class PipelineError(Exception):
    module = "ellperiods"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def report(self):
        return {"error": type(self).__name__, "module": self.module,
                "message": str(self), "details": {k: str(v) for k, v in self.details.items()}}


class AlgebraError(PipelineError):
    module = "exact_algebra"


class ZeroPolynomial(AlgebraError):
    pass


class DegreeTooSmall(AlgebraError):
    pass


class NumericsError(PipelineError):
    module = "numerics"


class NonSquareFree(NumericsError):
    pass


class PrecisionExhausted(NumericsError):
    pass


class DenominatorNearZero(NumericsError):
    pass


class SingularWithinError(NumericsError):
    pass


class GeometryError(PipelineError):
    module = "geometry"


class GeneralPositionViolated(GeometryError):
    pass


class KernelDimensionUnexpected(GeometryError):
    pass


class CompletionFailed(GeometryError):
    pass


class RelationSpaceNot1Dim(GeometryError):
    pass


class DegenerateQuadraticTerm(GeometryError):
    pass


class NinthPointCollision(GeometryError):
    pass


class NotASection(GeometryError):
    pass


class NotGeneric(GeometryError):
    pass


class LatticeError(PipelineError):
    module = "lattice"


class InconsistentSectionPairings(LatticeError):
    pass


class FormsError(PipelineError):
    module = "forms"


class SeriesPrecisionExhausted(FormsError):
    pass


class NotRamified(FormsError):
    pass


class BothFormulasDegenerate(FormsError):
    pass


class CupError(PipelineError):
    module = "cup"


class LengthMismatch(CupError):
    pass


class PeriodError(PipelineError):
    module = "period"


class OrthogonalityViolated(PeriodError):
    pass


class SelfPairingNearZero(PeriodError):
    pass


class PDEError(PipelineError):
    module = "pde"


class BranchCollision(PDEError):
    pass


class SignAmbiguous(PDEError):
    pass


class JacobianIllConditioned(PDEError):
    pass

class CrosslabError(ValueError):
    """Base class for all input/contract errors raised by crosslab."""


class ShapeMismatch(CrosslabError):
    pass


class NotHermitian(CrosslabError):
    pass


class NotPositiveDefinite(CrosslabError):
    pass


class NotInvolution(CrosslabError):
    pass


class NotAntiunitary(CrosslabError):
    pass


class InvalidModularRelation(CrosslabError):
    pass


class DimensionMismatch(CrosslabError):
    pass


class InvariantViolation(CrosslabError):
    pass


class NotAResolution(CrosslabError):
    pass


class NotEndomorphism(CrosslabError):
    pass


class InvalidState(CrosslabError):
    pass


class InvolutionFailure(CrosslabError):
    pass


class NotSpecial(CrosslabError):
    pass


class InvalidGroup(CrosslabError):
    pass


class PreconditionFailed(CrosslabError):
    pass

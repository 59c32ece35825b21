"""Exception hierarchy shared by all fdstab modules."""


class FdstabError(Exception):
    """Base class for every error raised by this package."""


class ExprSyntaxError(FdstabError):
    def __init__(self, message, position):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class UnknownFunction(ExprSyntaxError):
    pass


class NotRepresentable(FdstabError):
    """Expression cannot be folded into P0(s) + sum Pi(s) exp(-zeta_i s^beta_i)."""


class UnboundParameter(NotRepresentable):
    def __init__(self, names):
        names = sorted(names)
        super().__init__("unbound parameter(s): " + ", ".join(names))
        self.names = names


class DegenerateLeading(NotRepresentable):
    """A delayed block is not dominated by the delay-free part on the large arc."""


class BranchCutViolation(FdstabError):
    pass


class DomainError(FdstabError):
    pass


class RootOnContour(FdstabError):
    pass


class MaxSubdivisions(FdstabError):
    pass


class TooFewSamples(FdstabError):
    pass


class NotRational(FdstabError):
    pass


class NonConvergence(FdstabError):
    pass


class BoundaryRoot(FdstabError):
    pass


class BisectionError(FdstabError):
    pass


class SameVerdictAtEnds(BisectionError):
    pass


class IndeterminateAtEnds(BisectionError):
    pass

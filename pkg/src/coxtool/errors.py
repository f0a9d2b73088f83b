"""Exception hierarchy shared by all coxtool modules."""


class CoxToolError(Exception):
    """Base class for every error raised by coxtool."""


class DiagramParseError(CoxToolError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownGeneratorError(CoxToolError, KeyError):
    def __str__(self):
        return f"unknown generator {self.args[0]!r}"


class NotIrreducibleError(CoxToolError):
    pass


class MixedMatrixError(CoxToolError):
    pass


class CapExceeded(CoxToolError):
    """An enumeration outgrew its element cap."""

    def __init__(self, cap, what="group"):
        self.cap = cap
        super().__init__(f"{what} has more than {cap} elements")


class OddClassNotSingleton(CoxToolError):
    pass


class NotRightAngled(CoxToolError):
    def __init__(self, s, t, order):
        self.s, self.t, self.order = s, t, order
        super().__init__(f"{s} is not right-angled: m({s},{t}) = {order}")


class SystemNotRightAngled(CoxToolError):
    pass


class ComponentNotMinusOneType(CoxToolError):
    pass


class CandidateNotProper(CoxToolError):
    pass


class CandidateInvalid(CoxToolError):
    pass


class NotAReflection(CoxToolError):
    pass


class HypothesisViolated(CoxToolError):
    pass


class NotInvolution(CoxToolError):
    pass

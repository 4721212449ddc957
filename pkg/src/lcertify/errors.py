"""Exception hierarchy shared by every module."""


class LCertifyError(Exception):
    """Base class for all errors raised by lcertify."""


class ParseError(LCertifyError):
    pass


class InvariantViolation(LCertifyError):
    pass


class WrongClass(LCertifyError):
    pass


class BranchCutHit(LCertifyError):
    pass


class PoleHit(LCertifyError):
    pass


class DomainError(LCertifyError):
    pass


class DegenerateOmega(LCertifyError):
    pass


class PoleProximity(LCertifyError):
    pass


class SingularD(LCertifyError):
    pass


class PreconditionViolated(LCertifyError):
    """A theorem or lemma hypothesis does not hold for the given inputs."""

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        self.detail = detail
        msg = condition if not detail else f"{condition} ({detail})"
        super().__init__(msg)


class MissingAttestation(PreconditionViolated):
    pass


class NotAPole(LCertifyError):
    pass


class OrderMismatch(LCertifyError):
    pass


class UnequalLambdas(LCertifyError):
    pass


class NonConvergent(LCertifyError):
    pass


class BudgetExceeded(LCertifyError):
    pass


class IncompleteBelow(LCertifyError):
    pass

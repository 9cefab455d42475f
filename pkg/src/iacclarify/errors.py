"""Exception types shared across the package."""


class IacClarifyError(Exception):
    """Base class for all package errors."""


class MalformedAddress(IacClarifyError):
    pass


class InvalidJson(IacClarifyError):
    pass


class SchemaViolation(IacClarifyError):
    def __init__(self, message, label=None):
        super().__init__(message)
        self.label = label


class EmptyPool(IacClarifyError):
    pass


class DegenerateSplit(IacClarifyError):
    pass


class ProviderUnavailable(IacClarifyError):
    pass


class BudgetExceeded(IacClarifyError):
    pass


class MalformedResponse(IacClarifyError):
    def __init__(self, message, raw_text=""):
        super().__init__(message)
        self.raw_text = raw_text


class AllCandidatesUnparseable(IacClarifyError):
    pass


class EmbedderUnavailable(IacClarifyError):
    pass


class NoPendingQuestion(IacClarifyError):
    pass


class SessionFinalized(IacClarifyError):
    pass


class InvalidTaskFile(IacClarifyError):
    def __init__(self, line, reason):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class EmptyResults(IacClarifyError):
    pass

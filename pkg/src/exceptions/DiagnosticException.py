class DiagnosticException(Exception):
    pass


class StepTooLargeError(DiagnosticException):
    pass


class DiagnosticPreconditionError(DiagnosticException):
    pass

class ProblemException(Exception):
    pass


class ReferenceValidationError(ProblemException):
    pass


class ReferenceFileError(ProblemException):
    pass

class MetricsException(Exception):
    pass


class DegenerateReferenceError(MetricsException):
    pass

class AutodiffException(Exception):
    pass


class UnsupportedPrimitiveError(AutodiffException):
    pass


class UnsupportedOrderError(AutodiffException):
    pass

class FemException(Exception):
    pass


class FemDivergenceError(FemException):
    pass

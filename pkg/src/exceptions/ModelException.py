class ModelException(Exception):
    pass


class ParamsFileError(ModelException):
    pass

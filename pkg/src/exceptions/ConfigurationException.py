class ConfigurationException(Exception):
    pass


class DimensionMismatchError(ConfigurationException):
    pass


class UnknownNameError(ConfigurationException):
    pass


class EmptyCollocationError(ConfigurationException):
    pass


class PerturbationMismatchError(ConfigurationException):
    pass

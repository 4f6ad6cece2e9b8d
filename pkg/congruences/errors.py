class CongruenceError(Exception):
    exit_code = 1


class ConfigError(CongruenceError):
    exit_code = 2


class ChartFormatError(CongruenceError):
    exit_code = 2


class AmbientMismatch(CongruenceError):
    pass


class DimensionError(CongruenceError):
    exit_code = 2


class EliminationError(CongruenceError):
    pass


class BasePointError(CongruenceError):
    exit_code = 5

    def __init__(self, message, params=None):
        super(BasePointError, self).__init__(message)
        self.params = params


class DegenerateCongruence(CongruenceError):
    exit_code = 3


class GenericityFailure(CongruenceError):
    exit_code = 4


class FocalError(CongruenceError):
    exit_code = 4


class QuadricRankError(CongruenceError):
    pass


class NotOrderOne(CongruenceError):
    exit_code = 3


class NoFocalPlane(CongruenceError):
    exit_code = 4


class InvalidScroll(CongruenceError):
    exit_code = 2

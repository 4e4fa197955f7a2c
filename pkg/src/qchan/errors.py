"""Exception hierarchy shared by every qchan module."""


class QChanError(ValueError):
    """Base class for all qchan validation and computation errors."""


class DimensionError(QChanError):
    """Shapes or declared dimensions are inconsistent."""


class NotHermitianError(QChanError):
    pass


class NotUnitaryError(QChanError):
    pass


class RankDeficientError(QChanError):
    pass


class NotIsometryError(QChanError):
    pass


class SingularStageError(QChanError):
    """The first map of a chain cannot be inverted; divisibility is undefined."""


class StageMismatchError(QChanError):
    pass


class InvalidStateError(QChanError):
    pass

"""Exception hierarchy shared by the field, curve, basis, code and automorphism modules."""


class SuzukiError(Exception):
    """Base class for every error raised by this package."""


class FieldError(SuzukiError, ValueError):
    pass


class CurveError(SuzukiError, ValueError):
    pass


class LevelError(SuzukiError, ValueError):
    pass


class CodeError(SuzukiError, ValueError):
    pass


class DecodingError(SuzukiError):
    pass


class InconsistentWordError(DecodingError):
    """No codeword agrees with the non-erased symbols."""


class RankDeficientError(DecodingError):
    """The surviving coordinates do not determine the message."""

    def __init__(self, rank: int, needed: int):
        super().__init__(f"surviving coordinates have rank {rank}, need {needed}")
        self.rank = rank
        self.needed = needed


class AutomorphismError(SuzukiError):
    pass

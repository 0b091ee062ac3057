"""Exception hierarchy shared by all modules."""


class ZetaIdError(ValueError):
    """Base class for every error raised by this package."""


class PoleAtOne(ZetaIdError):
    pass


class UnsupportedRegion(ZetaIdError):
    pass


class ChiPole(ZetaIdError):
    pass


class DomainError(ZetaIdError):
    pass


class NoConvergence(ZetaIdError):
    """Adaptive quadrature ran out of its evaluation budget.

    The best partial outcome is kept on ``partial`` so callers can still
    inspect how far the integration got.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class TailModelUnusable(ZetaIdError):
    pass


class DivergentTransform(ZetaIdError):
    pass


class InsufficientData(ZetaIdError):
    pass

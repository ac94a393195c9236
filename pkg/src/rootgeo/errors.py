"""Exception hierarchy shared by every rootgeo module."""


class RootGeoError(Exception):
    """Base class for all errors raised by rootgeo."""


class InvalidSpec(RootGeoError, ValueError):
    """Recurrence parameters violate a premise (a, b, t > 0, r != -c/b)."""


class NonSquarefree(RootGeoError):
    """A polynomial shares a factor with its derivative."""


class DegreeLawViolation(RootGeoError):
    """Generated polynomial disagrees with the degree / leading coefficient law."""


class NonzeroRemainder(RootGeoError):
    """An exact polynomial division that must be exact left a remainder."""


class BracketFailure(RootGeoError):
    """An expected sign change was not found while isolating roots."""


class RefinementExhausted(RootGeoError):
    """Brackets could not be separated within the refinement budget."""


class DeltaNotNegative(RootGeoError, ValueError):
    pass


class DeltaNotPositive(RootGeoError, ValueError):
    pass


class X0EqualsXg(RootGeoError, ValueError):
    pass


class XgNotReal(RootGeoError, ValueError):
    pass


class CZero(RootGeoError, ValueError):
    """The normalized constant term c is zero; reduce the sequence first."""


class DomainError(RootGeoError, ValueError):
    pass


class PremiseViolated(RootGeoError):
    """A hypothesis of a checked statement fails for the supplied input."""

    def __init__(self, condition, detail=""):
        self.condition = condition
        self.detail = detail
        msg = condition if not detail else f"{condition}: {detail}"
        super().__init__(msg)

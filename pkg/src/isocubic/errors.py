"""Exception hierarchy shared by every module."""


class GeometryError(ValueError):
    """Base class for all isocubic errors."""


class InvalidDirectionError(GeometryError):
    pass


class CoincidenceError(GeometryError):
    """Two points that must be distinct coincide (within tolerance)."""


class DegeneracyError(GeometryError):
    """Raised for quadrilaterals outside the cubic regime.

    ``tag`` carries the :class:`~isocubic.quad.DegeneracyClass` that caused it.
    """

    def __init__(self, message, tag=None):
        super().__init__(message)
        self.tag = tag


class NotOnCurveError(GeometryError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SingularPointError(GeometryError):
    pass


class ReducibleLineError(GeometryError):
    """The curve vanishes identically on the queried line."""


class ComponentError(GeometryError):
    """The queried circle is a component of the curve."""


class NotIsogonalFormError(GeometryError):
    pass


class DegenerateInputError(GeometryError):
    pass


class ConjugateAtInfinity(GeometryError):
    """The requested conjugate is the curve's real point at infinity.

    ``direction`` is the :class:`~isocubic.geom.Direction` of that point.
    """

    def __init__(self, message, direction=None):
        super().__init__(message)
        self.direction = direction

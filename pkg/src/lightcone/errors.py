"""Exception types raised across the package."""


class LightconeError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(LightconeError, ValueError):
    pass


class VertexCoincidence(LightconeError, ValueError):
    pass


class TimeComponentVanishes(LightconeError, ValueError):
    pass


class NotCoherent(LightconeError, ValueError):
    pass


class NotNull(LightconeError, ValueError):
    pass


class Collinear(LightconeError, ValueError):
    pass


class SingularT(LightconeError, ValueError):
    pass


class NotProjection(LightconeError, ValueError):
    pass


class DegenerateSamples(LightconeError, ValueError):
    pass


class InvalidSpec(LightconeError, ValueError):
    pass


class EpsilonTooLarge(LightconeError, ValueError):
    pass


class LineCollapse(LightconeError):
    """The probed map is constant along a coherent line."""


class MeshTooCoarse(LightconeError):
    pass


class NoConvergence(LightconeError):
    pass


class SchemaError(LightconeError, ValueError):
    """A map-spec document does not match the expected layout."""

"""Exception types shared across the package."""


class TwoBoxError(Exception):
    """Base class for every error this package raises on purpose."""


class DimensionMismatchError(TwoBoxError, ValueError):
    """Operands live on spaces of different dimension."""


class UnnormalizableStateError(TwoBoxError, ValueError):
    """A zero vector cannot be scaled to a unit state."""


class IncompleteMeasurementError(TwoBoxError, ValueError):
    """The projector set does not resolve the identity."""


class ImpossiblePostselectionError(TwoBoxError, ValueError):
    """Every outcome amplitude vanishes, so conditioning is undefined."""


class OrthogonalSelectionError(TwoBoxError, ValueError):
    """Pre- and postselected states have zero overlap."""


class NotAProjectorError(TwoBoxError, ValueError):
    """An operator required to be a projector is not one."""


class IllegitimateQuestionError(TwoBoxError, ValueError):
    """The summed operator is not a projector, so the joint question is meaningless."""


class ScenarioNotFoundError(TwoBoxError, LookupError):
    """No builtin scenario carries the requested name."""


class ScenarioFileError(TwoBoxError, ValueError):
    """A scenario document failed schema or semantic validation."""


class ExpressionError(TwoBoxError, ValueError):
    """An operator expression failed to parse."""

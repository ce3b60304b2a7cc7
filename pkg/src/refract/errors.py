"""Exception hierarchy shared by all modules."""


class RefractError(Exception):
    """Base class for every library-raised error."""


class PoleError(RefractError):
    """A transform was evaluated exactly at a pole of its rational form."""


class IntegrationError(RefractError):
    """A numerical integral failed to reach its tolerance."""


class BracketError(RefractError):
    """No finite bracket for a root could be located (mis-specified model)."""


class DegenerateError(RefractError):
    """The cleared root equation has polynomial degree zero."""


class RegularityError(RefractError):
    """A law representation is unavailable because 0 is irregular."""


class InversionError(RefractError):
    """Two independent Laplace-inversion routes disagree beyond tolerance."""


class MassError(RefractError):
    """A grid law lost probability mass (truncation window too small)."""


class SeamError(RefractError):
    """The two branches of the refracted law disagree at the refraction level."""


class FitError(RefractError):
    """A hyper-exponential fit could not reach tolerance within its term budget."""


class GridMismatchError(RefractError):
    """Two results live on incompatible supports."""


class ModelSpecError(RefractError):
    """A model-spec document is malformed or carries unknown keys."""

"""Exception types raised by the solvers."""


class ModelError(ValueError):
    """Base class for invalid model inputs or states."""


class ConfigError(ModelError):
    """Parameters violate a structural assumption of the model."""


class HorizonError(ModelError):
    """A time window would extend past the assignment horizon."""


class RegimeError(ModelError):
    """A closed form was applied where it yields a meaningless value."""


class OrderingError(ModelError):
    """Equilibrium costs are not increasing away from the CBD."""


class RegularityError(ModelError):
    """A computed rent or flow has the wrong sign."""


class QRPError(ModelError):
    """The queue replacement condition fails, so no equilibrium is built."""

"""Exception hierarchy shared by the solver modules."""


class NetdefError(Exception):
    """Base class for all errors raised by netdef."""


class UnknownNode(NetdefError, KeyError):
    """A strategy or query referenced a node id that is not in the network."""

    def __str__(self):
        return Exception.__str__(self)


class ModelMismatch(NetdefError):
    """The instance does not belong to the model class a solver requires."""


class SizeLimit(NetdefError):
    """An exhaustive routine was asked to enumerate more than it allows."""


class RoundingInfeasible(NetdefError):
    """A rounded LP point failed the model check (tolerance breach)."""


class NumericalFailure(NetdefError):
    """The simplex hit pivots too small to trust."""


class UnboundedFlow(NetdefError):
    """Every s-t cut contains an arc of infinite capacity."""


class InvalidParams(NetdefError, ValueError):
    """Generator parameters out of range."""


class ParseError(NetdefError, ValueError):
    """Malformed instance, strategy or formula document."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)

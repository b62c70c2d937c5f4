"""Exception hierarchy shared by all modules."""


class GadgetError(Exception):
    """Base class for every error raised by np_gadget."""


# -- CNF ---------------------------------------------------------------------

class CnfError(GadgetError, ValueError):
    pass


class DimacsError(CnfError):
    """Input is not well-formed DIMACS."""


class MalformedHeader(DimacsError):
    pass


class ClauseArity(DimacsError):
    pass


class DuplicateLiteral(DimacsError):
    pass


class VarOutOfRange(DimacsError):
    pass


class LengthMismatch(CnfError):
    pass


class TooLarge(CnfError):
    pass


class TooFewVars(CnfError):
    pass


# -- graphs and serialization --------------------------------------------------

class GraphError(GadgetError, ValueError):
    pass


class UnknownEdgeId(GraphError):
    def __init__(self, edge_id):
        super().__init__(f"unknown edge id {edge_id!r}")
        self.edge_id = edge_id


class Disconnected(GraphError):
    pass


class SchemaError(GadgetError, ValueError):
    """JSON document does not match the expected schema.

    ``path`` is a JSONPath-like pointer to the offending field.
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


# -- reductions ----------------------------------------------------------------

class BadM(GadgetError, ValueError):
    pass


class SearchBudgetExceeded(GadgetError):
    """The solver hit its node limit before reaching a decision."""

    def __init__(self, limit: int):
        super().__init__(f"search budget of {limit} nodes exceeded")
        self.limit = limit


class NotSatisfying(GadgetError, ValueError):
    pass


class InconsistentCertificate(GadgetError, ValueError):
    pass


class AmbiguousVariable(GadgetError, ValueError):
    pass


class MalformedGadgetTraversal(GadgetError, ValueError):
    pass


class NotAPath(GadgetError, ValueError):
    pass

"""Exception hierarchy.

Every failure carries a human readable ``detail`` and the process exit code
the command line front end reports for it, the same way route handlers raise
``HTTPException(status_code, detail)``.
"""


class SpectraError(Exception):
    exit_code = 2

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class FormulaSyntaxError(SpectraError):
    def __init__(self, detail: str, line: int | None = None, column: int | None = None):
        where = f" at line {line}, column {column}" if line is not None and line > 0 else ""
        super().__init__(f"syntax error{where}: {detail}")
        self.line = line
        self.column = column


class UnknownSymbolError(SpectraError):
    def __init__(self, symbol: str):
        super().__init__(f"unknown relation symbol {symbol!r}")
        self.symbol = symbol


class ArityError(SpectraError):
    def __init__(self, symbol: str, arity: int):
        super().__init__(f"relation {symbol!r} used with {arity} arguments, every relation is binary")
        self.symbol = symbol
        self.arity = arity


class VocabularyError(SpectraError):
    pass


class UninterpretedSymbolError(SpectraError):
    def __init__(self, symbol: str):
        super().__init__(f"relation symbol {symbol!r} is not interpreted by the model")
        self.symbol = symbol


class UnassignedVariableError(SpectraError):
    def __init__(self, variables):
        names = ", ".join(sorted(variables))
        super().__init__(f"free variables without an assigned element: {names}")
        self.variables = tuple(sorted(variables))


class StructureError(SpectraError):
    pass


class SelfLoopError(StructureError):
    pass


class ModelFileError(SpectraError):
    pass


class EligibilityError(SpectraError):
    pass


class ParamsError(SpectraError):
    pass


class UnknownRoleError(SpectraError):
    def __init__(self, role: str):
        super().__init__(f"unknown role {role!r}")
        self.role = role


class UndefinedPairError(SpectraError):
    def __init__(self, alpha: str, beta: str):
        super().__init__(f"no middle role is defined for the pair ({alpha}, {beta})")
        self.alpha = alpha
        self.beta = beta


class ClassificationError(SpectraError):
    """The graph is not a model of the structural part of a reduced sentence.

    ``property_name`` names the first violated property (``"P1"`` .. ``"P6"``,
    ``"totality"`` or ``"empty-domain"``).
    """

    def __init__(self, property_name: str, detail: str):
        super().__init__(f"{property_name}: {detail}")
        self.property_name = property_name
        self.reason = detail


class EmptyDomainError(ClassificationError):
    def __init__(self):
        super().__init__("empty-domain", "the graph encodes a structure with no elements")


class InfeasibleSearchError(SpectraError):
    pass


class IncompleteAssignmentError(SpectraError):
    pass


class SolverError(SpectraError):
    pass

"""Exception hierarchy shared by all modules."""


class AdnilError(Exception):
    pass


class StructuralError(AdnilError, ValueError):
    """Shapes, moduli or indices that do not fit together."""


class ModulusError(StructuralError):
    pass


class PreconditionError(AdnilError):
    """A checked mathematical hypothesis failed.  `witness` says where."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ContractError(AdnilError):
    """An object was used before the checks it depends on were run."""


class BudgetError(AdnilError):
    """Work would exceed the configured evaluation budget."""


class ParseError(AdnilError, ValueError):
    def __init__(self, message, line=None, col=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        elif col is not None:
            where = f"col {col}: "
        super().__init__(where + message)
        self.line = line
        self.col = col

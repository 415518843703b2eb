"""Exception types shared across the package."""


class ProjSimError(Exception):
    """Base class for all errors raised by projsim."""


class DimensionMismatch(ProjSimError, ValueError):
    pass


class ZeroVector(ProjSimError, ValueError):
    pass


class NonFiniteVector(ProjSimError, ValueError):
    pass


class SingularGram(ProjSimError, ArithmeticError):
    """The Gram matrix of a group is numerically singular.

    Raised by the explicit normal-equation path; callers should fall back
    to the orthonormal-basis path, which handles rank deficiency.
    """

    def __init__(self, condition: float, limit: float):
        self.condition = condition
        self.limit = limit
        super().__init__(
            f"Gram matrix condition estimate {condition:.3e} exceeds {limit:.3e}"
        )


class ParseError(ProjSimError, ValueError):
    def __init__(self, message: str, line: int | None = None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)


class EmptyTable(ProjSimError, ValueError):
    pass


class EmptySentenceGroup(ProjSimError, ValueError):
    def __init__(self, missing: list[str]):
        self.missing = list(missing)
        super().__init__(f"no token matched the embedding table (missing: {self.missing})")


class InvalidClass(ParseError):
    pass


class TooFewRecords(ProjSimError, ValueError):
    pass


class InvalidProximity(ProjSimError, ValueError):
    pass


class DegenerateTraining(ProjSimError, ValueError):
    pass


class LengthMismatch(ProjSimError, ValueError):
    pass

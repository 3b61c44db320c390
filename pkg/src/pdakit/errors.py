"""Exception hierarchy.

Verification failures (anything the CLI reports with exit code 1) derive from
``VerificationError``; size refusals derive from ``BudgetExceeded``.
"""


class PdaError(Exception):
    """Base class for every error raised by pdakit."""


class InvalidRange(PdaError, ValueError):
    """A parameter lies outside the range where the object is defined."""


class VerificationError(PdaError):
    """An array fails one of the PDA / base-PDA conditions."""


class EmptyArray(VerificationError):
    def __init__(self, msg="array has no symbols or no cells"):
        super().__init__(msg)


class C1Violation(VerificationError):
    def __init__(self, column, count, expected):
        self.column, self.count, self.expected = column, count, expected
        super().__init__(
            f"C1: column {column} has {count} stars, expected {expected}")


class C2Violation(VerificationError):
    def __init__(self, missing):
        self.missing = missing
        super().__init__(f"C2: symbol {missing} does not occur")


class C3Violation(VerificationError):
    def __init__(self, symbol, positions):
        self.symbol = symbol
        self.positions = positions
        (j1, k1), (j2, k2) = positions
        super().__init__(
            f"C3: symbol {symbol} at {(j1, k1)} and {(j2, k2)} "
            f"without stars at {(j1, k2)} and {(j2, k1)}")


class C4Violation(VerificationError):
    def __init__(self, row, column):
        self.row, self.column = row, column
        super().__init__(
            f"C4: star pattern of row {row} differs from its residue row "
            f"at column {column}")


class NoValidPhi(VerificationError):
    """No uniform star-row assignment exists (condition C5 fails)."""


class NonDivisibleLambda(VerificationError, InvalidRange):
    pass


class NotRegular(VerificationError):
    pass


class UnevenStarRows(VerificationError):
    pass


class VerificationFailed(VerificationError):
    """A constructor produced an array violating its own postcondition."""


class ConstructionFailed(PdaError):
    pass


class UnknownSymbol(PdaError, KeyError):
    pass


class BudgetExceeded(PdaError):
    def __init__(self, what, size, budget):
        self.size, self.budget = size, budget
        super().__init__(f"{what}: {size} exceeds budget {budget}")


class CellBudgetExceeded(BudgetExceeded):
    def __init__(self, size, budget):
        super().__init__("cell count", size, budget)


class TooLarge(BudgetExceeded):
    def __init__(self, size, budget):
        super().__init__("isomorphism test cell count", size, budget)


class DimensionMismatch(PdaError, ValueError):
    pass


class BadDemand(PdaError, ValueError):
    pass


class DecodeFailure(PdaError):
    def __init__(self, user, packet):
        self.user, self.packet = user, packet
        super().__init__(f"user {user} failed to decode packet {packet}")


class ParseError(PdaError, ValueError):
    def __init__(self, line, reason):
        self.line, self.reason = line, reason
        super().__init__(f"line {line}: {reason}")


class VersionMismatch(PdaError, ValueError):
    pass

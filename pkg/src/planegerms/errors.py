"""Exception hierarchy. Every error carries a stable machine-readable ``code``."""

from __future__ import annotations


class GermError(Exception):
    code = "GermError"
    #: CLI exit status; 2 = bad input, 3 = internal inconsistency
    exit_status = 2

    def to_json(self) -> dict:
        return {"code": self.code, "message": str(self)}


class DivisionByZero(GermError, ZeroDivisionError):
    code = "DivisionByZero"


class IncompatibleRamification(GermError):
    code = "IncompatibleRamification"


class InsufficientTruncation(GermError):
    code = "InsufficientTruncation"


class NotIrreducible(GermError):
    code = "NotIrreducible"


class NotDistinct(GermError):
    code = "NotDistinct"


class AxisTangentBranch(GermError):
    """A branch given as data is tangent to the y-axis (psi has order < m)."""

    code = "AxisTangentBranch"


class UnsupportedExtension(GermError):
    code = "UnsupportedExtension"


class DegenerateAxis(GermError):
    code = "DegenerateAxis"


class GermNotVanishing(GermError):
    code = "GermNotVanishing"


class PolynomialSyntaxError(GermError):
    code = "SyntaxError"

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset

    def to_json(self) -> dict:
        return {**super().to_json(), "offset": self.offset}


class UnknownIdentifier(PolynomialSyntaxError):
    code = "UnknownIdentifier"

    def __init__(self, name: str, offset: int):
        GermError.__init__(self, f"unknown identifier {name!r} at offset {offset}")
        self.name = name
        self.offset = offset


class SchemaError(GermError):
    code = "SchemaError"

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"

    def to_json(self) -> dict:
        return {**super().to_json(), "pointer": self.pointer}


class InvalidCertificate(GermError):
    code = "InvalidCertificate"


class RangeError(GermError):
    code = "RangeError"

    def __init__(self, message: str, suggested: tuple[float, float] | None = None):
        super().__init__(message)
        self.suggested = suggested

    def to_json(self) -> dict:
        out = super().to_json()
        if self.suggested is not None:
            out["suggested_range"] = list(self.suggested)
        return out


class DegenerateContact(GermError):
    code = "DegenerateContact"


class OracleMismatch(GermError):
    code = "OracleMismatch"
    exit_status = 3


class ChartMismatch(GermError):
    """Two germs given as branch data live in different coordinate charts."""

    code = "ChartMismatch"


class InvalidInput(GermError):
    code = "InvalidInput"

"""Exception hierarchy shared by every module.

Each error may carry a :class:`SourceSpan` when it originates from DSL text,
so the CLI can print ``file:line:col`` diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    col_start: int
    col_end: int

    def __post_init__(self):
        if self.col_end < self.col_start:
            raise ValueError("span end precedes start")

    def __str__(self):
        return f"{self.file}:{self.line}:{self.col_start}"


class OrugaError(Exception):
    kind = "OrugaError"

    def __init__(self, message: str, span: SourceSpan | None = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def with_span(self, span: SourceSpan | None) -> "OrugaError":
        if self.span is None and span is not None:
            self.span = span
        return self

    def __str__(self):
        prefix = f"{self.span}: " if self.span else ""
        return f"{prefix}{self.kind}: {self.message}"


# type systems
class DuplicateType(OrugaError):
    kind = "DuplicateType"


class UnknownTypeInOrder(OrugaError):
    kind = "UnknownTypeInOrder"


class SubtypeCycle(OrugaError):
    kind = "SubtypeCycle"

    def __init__(self, cycle, span=None):
        self.cycle = tuple(cycle)
        super().__init__(" < ".join(self.cycle), span)


class UnknownType(OrugaError):
    kind = "UnknownType"


class NotOpenFamily(OrugaError):
    kind = "NotOpenFamily"


class ConflictingParent(OrugaError):
    kind = "ConflictingParent"


# constructor specifications
class DuplicateConstructor(OrugaError):
    kind = "DuplicateConstructor"


class UnknownConstructor(OrugaError):
    kind = "UnknownConstructor"


class EmptyInputs(OrugaError):
    kind = "EmptyInputs"


# constructions and matching
class UnboundToken(OrugaError):
    kind = "UnboundToken"


class NonInjectiveRename(OrugaError):
    kind = "NonInjectiveRename"


class TypeClash(OrugaError):
    kind = "TypeClash"


class InvalidConstruction(OrugaError):
    """A construction failed validation; ``violations`` holds the full list."""

    kind = "InvalidConstruction"

    def __init__(self, violations, span=None):
        self.violations = tuple(violations)
        super().__init__("; ".join(str(v) for v in self.violations), span)


# schemas
class PatternInvalid(OrugaError):
    kind = "PatternInvalid"


class DanglingConstraintToken(OrugaError):
    kind = "DanglingConstraintToken"


class UnknownSpace(OrugaError):
    kind = "UnknownSpace"


# transfer
class NotAssumable(OrugaError):
    kind = "NotAssumable"


# dsl
class UnexpectedCharacter(OrugaError):
    kind = "UnexpectedCharacter"


class DslSyntaxError(OrugaError):
    kind = "SyntaxError"

    def __init__(self, message, span=None, expected=()):
        self.expected = tuple(expected)
        if self.expected:
            message = f"{message} (expected {', '.join(self.expected)})"
        super().__init__(message, span)


class ForwardReference(DslSyntaxError):
    kind = "ForwardReference"


class ConflictingTokenType(OrugaError):
    kind = "ConflictingTokenType"


class DuplicateDeclaration(OrugaError):
    kind = "DuplicateDeclaration"


class UnknownName(OrugaError):
    kind = "UnknownName"

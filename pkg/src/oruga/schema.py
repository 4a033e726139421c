"""Transfer schemas: inference rules relating tokens of two spaces.

A schema pairs a source pattern with a target pattern. Its antecedents and
its consequent are relational constraints ``(source ids, target ids) :: rel``
over tokens of those patterns. Relation names carry no built-in meaning.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .conspec import Space
from .construction import Construction, token_types, tokens_of, validate
from .errors import DanglingConstraintToken, PatternInvalid


@dataclass(frozen=True)
class RelConstraint:
    source: tuple[str, ...]
    target: tuple[str, ...]
    relation: str

    def __post_init__(self):
        if not self.relation:
            raise ValueError("relation label must be non-empty")
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(self, "target", tuple(self.target))


@dataclass(frozen=True)
class TransferSchema:
    name: str
    source_space: str
    target_space: str
    source_pattern: Construction
    target_pattern: Construction
    antecedents: tuple[RelConstraint, ...]
    consequent: RelConstraint

    @property
    def is_base(self) -> bool:
        return not self.antecedents


def build_schema(
    name: str,
    source: Space,
    target: Space,
    source_pattern: Construction,
    target_pattern: Construction,
    antecedents: Iterable[RelConstraint],
    consequent: RelConstraint,
) -> TransferSchema:
    for label, pattern, space in (("source", source_pattern, source), ("target", target_pattern, target)):
        report = validate(pattern, space)
        if not report.ok:
            problems = "; ".join(str(v) for v in report.violations)
            raise PatternInvalid(f"{label} pattern of {name} is invalid in {space.name}: {problems}")

    src_ids = token_types(source_pattern)
    tgt_ids = token_types(target_pattern)
    antecedents = tuple(antecedents)
    for con in (*antecedents, consequent):
        for tid in con.source:
            if tid not in src_ids:
                raise DanglingConstraintToken(f"{tid!r} is not a token of the source pattern of {name}")
        for tid in con.target:
            if tid not in tgt_ids:
                raise DanglingConstraintToken(f"{tid!r} is not a token of the target pattern of {name}")
    if not consequent.source and not consequent.target:
        raise DanglingConstraintToken(f"consequent of {name} relates no tokens")
    return TransferSchema(
        name, source.name, target.name, source_pattern, target_pattern, antecedents, consequent
    )


@dataclass(frozen=True)
class ArityReport:
    source_tokens: int
    target_tokens: int
    antecedents: int
    base: bool


def schema_arity_report(s: TransferSchema) -> ArityReport:
    return ArityReport(
        source_tokens=len(tokens_of(s.source_pattern)),
        target_tokens=len(tokens_of(s.target_pattern)),
        antecedents=len(s.antecedents),
        base=s.is_base,
    )

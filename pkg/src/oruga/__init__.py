"""Typed representational spaces, pattern matching and structure transfer."""

from pathlib import Path

from .conspec import ConSpec, ConstructorSig, Space, build_conspec, signature_of
from .construction import (
    Apply,
    Construction,
    Reference,
    Source,
    Token,
    equal_up_to_renaming,
    rename_tokens,
    sub_construction_at,
    tokens_of,
    validate,
)
from .errors import OrugaError
from .matching import MatchMode, Matching, find_match, find_match_anchored, instantiate
from .schema import RelConstraint, TransferSchema, build_schema, schema_arity_report
from .transfer import SearchLimits, TransferResult, init_state, search
from .typesys import (
    TypeSystem,
    build_type_system,
    compute_closure,
    leq,
    meet_if_comparable,
    register_dynamic_type,
)

CORPUS_DIR = Path(__file__).parent / "corpus"

__version__ = "0.1.0"

__all__ = [
    "Apply", "CORPUS_DIR", "ConSpec", "Construction", "ConstructorSig", "MatchMode", "Matching",
    "OrugaError", "Reference", "RelConstraint", "SearchLimits", "Source", "Space", "Token",
    "TransferResult", "TransferSchema", "TypeSystem", "build_conspec", "build_schema",
    "build_type_system", "compute_closure", "equal_up_to_renaming", "find_match",
    "find_match_anchored", "init_state", "instantiate", "leq", "meet_if_comparable",
    "register_dynamic_type", "rename_tokens", "schema_arity_report", "search",
    "signature_of", "sub_construction_at", "tokens_of", "validate",
]

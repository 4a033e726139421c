from .document import ConstructionDecl, Document
from .lexer import KEYWORDS, Lexeme, tokenize
from .parser import load_files, parse_construction_term, parse_document
from .printer import format_construction, format_schema, pretty_print

__all__ = [
    "ConstructionDecl",
    "Document",
    "KEYWORDS",
    "Lexeme",
    "tokenize",
    "load_files",
    "parse_construction_term",
    "parse_document",
    "format_construction",
    "format_schema",
    "pretty_print",
]

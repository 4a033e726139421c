from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import SourceSpan, UnexpectedCharacter

KEYWORDS = frozenset({
    "typeSystem", "types", "order", "conSpec", "construction",
    "tSchema", "source", "target", "antecedent", "consequent",
})

DECLARATION_KEYWORDS = ("typeSystem", "conSpec", "construction", "tSchema")

# order matters: two-character punctuation before its one-character prefix
_RULES = [
    ("WS", r"[ \t\r\f\v]+"),
    ("NEWLINE", r"\n"),
    ("DCOLON", r"::"),
    ("LARROW", r"<-"),
    ("RARROW", r"->"),
    ("IDENT", r"[A-Za-z0-9_'][A-Za-z0-9_']*"),
    ("EQUALS", r"="),
    ("COMMA", r","),
    ("COLON", r":"),
    ("LT", r"<"),
    ("LBRACK", r"\["),
    ("RBRACK", r"\]"),
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
]
_MASTER = re.compile("|".join(f"(?P<{name}>{rx})" for name, rx in _RULES))

PUNCTUATION = {
    "DCOLON": "'::'", "LARROW": "'<-'", "RARROW": "'->'", "EQUALS": "'='",
    "COMMA": "','", "COLON": "':'", "LT": "'<'", "LBRACK": "'['", "RBRACK": "']'",
    "LPAREN": "'('", "RPAREN": "')'", "UNDERSCORE": "'_'",
}


@dataclass(frozen=True)
class Lexeme:
    kind: str
    text: str
    span: SourceSpan

    def __repr__(self):
        return f"{self.kind}({self.text!r})" if self.kind in ("IDENT", "KEYWORD") else self.kind


def tokenize(text: str, path: str = "<string>") -> list[Lexeme]:
    """Split DSL text into lexemes. Keywords are reserved; a lone ``_`` is
    punctuation (the open-family marker), anything longer is an identifier."""
    out: list[Lexeme] = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        m = _MASTER.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise UnexpectedCharacter(
                f"unexpected character {text[pos]!r}", SourceSpan(path, line, col, col)
            )
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "NEWLINE":
            line += 1
            line_start = m.end()
        elif kind != "WS":
            if kind == "IDENT":
                if lexeme in KEYWORDS:
                    kind = "KEYWORD"
                elif lexeme == "_":
                    kind = "UNDERSCORE"
            out.append(Lexeme(kind, lexeme, SourceSpan(path, line, col, col + len(lexeme) - 1)))
        pos = m.end()
    return out

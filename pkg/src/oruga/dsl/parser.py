"""Recursive-descent parser for ``.oruga`` documents.

Grammar (commas separate list items, layout is insignificant)::

    document    := decl*
    decl        := typeSystem | conSpec | construction | tSchema
    typeSystem  := "typeSystem" ID "=" "types" tentry ("," tentry)*
                   ("order" ID "<" ID ("," ID "<" ID)*)?
    tentry      := "_" ":" ID | ID
    conSpec     := "conSpec" ID ":" ID "=" cdecl ("," cdecl)*
    cdecl       := ID ":" "[" (ID ("," ID)*)? "]" "->" ID
    construction:= "construction" ID ":" ID "=" cterm
    tSchema     := "tSchema" ID ":" "(" ID "," ID ")" "="
                   "source" cterm "target" cterm
                   ("antecedent" rel ("," rel)*)? "consequent" rel
    cterm       := ann ("<-" ID "[" cterm ("," cterm)* "]")?
    ann         := ID | ID ":" ID | ID ":" ID ":" ID
    rel         := "(" "[" anns? "]" "," "[" anns? "]" ")" "::" ID
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from ..conspec import ConstructorSig, Space, build_conspec
from ..construction import Apply, Construction, Reference, Source, Token, validate
from ..errors import (
    ConflictingTokenType,
    DanglingConstraintToken,
    DslSyntaxError,
    DuplicateDeclaration,
    ForwardReference,
    InvalidConstruction,
    OrugaError,
    SourceSpan,
    UnknownName,
    UnknownSpace,
    UnknownType,
)
from ..schema import RelConstraint, build_schema
from ..typesys import build_type_system, register_dynamic_type
from .document import ConstructionDecl, Document
from .lexer import DECLARATION_KEYWORDS, PUNCTUATION, Lexeme, tokenize


def _describe(kind: str, text: str | None = None) -> str:
    if kind in ("KEYWORD",) and text:
        return repr(text)
    if kind == "IDENT":
        return "identifier"
    if kind == "EOF":
        return "end of input"
    return PUNCTUATION.get(kind, kind)


def declared_names(lexemes: list[Lexeme]) -> set[tuple[str, str]]:
    names = set()
    for a, b in zip(lexemes, lexemes[1:]):
        if a.kind == "KEYWORD" and a.text in DECLARATION_KEYWORDS and b.kind == "IDENT":
            names.add((a.text, b.text))
    return names


class _Scope:
    """Token ids bound so far inside one construction term."""

    def __init__(self, conspec):
        self.conspec = conspec
        self.ts_name = conspec.type_system_name
        self.types: dict[str, str] = {}
        self.spans: dict[str, SourceSpan] = {}


class Parser:
    def __init__(self, lexemes: list[Lexeme], doc: Document, path: str, later: set | None = None):
        self.lex = lexemes
        self.pos = 0
        self.doc = doc
        self.path = path
        self.later = later or set()
        last = lexemes[-1].span if lexemes else SourceSpan(path, 1, 1, 1)
        self.eof = Lexeme("EOF", "", SourceSpan(path, last.line, last.col_end + 1, last.col_end + 1))

    # -- lexeme plumbing ---------------------------------------------------

    def peek(self, offset: int = 0) -> Lexeme:
        i = self.pos + offset
        return self.lex[i] if i < len(self.lex) else self.eof

    def at(self, kind: str, text: str | None = None) -> bool:
        lx = self.peek()
        return lx.kind == kind and (text is None or lx.text == text)

    def expect(self, kind: str, text: str | None = None) -> Lexeme:
        lx = self.peek()
        if lx.kind != kind or (text is not None and lx.text != text):
            got = _describe(lx.kind, lx.text) if lx.kind != "IDENT" else repr(lx.text)
            raise DslSyntaxError(f"unexpected {got}", lx.span, [_describe(kind, text)])
        self.pos += 1
        return lx

    def accept(self, kind: str, text: str | None = None) -> Lexeme | None:
        if self.at(kind, text):
            return self.expect(kind, text)
        return None

    def ident(self) -> Lexeme:
        return self.expect("IDENT")

    # -- name resolution ---------------------------------------------------

    def resolve(self, kind: str, lx: Lexeme, error=UnknownName):
        if self.doc.has(kind, lx.text):
            return
        if (kind, lx.text) in self.later:
            raise ForwardReference(f"{kind} {lx.text!r} is declared later", lx.span)
        raise error(f"no {kind} named {lx.text!r}", lx.span)

    def register(self, decl, kind: str, name_lx: Lexeme):
        if self.doc.has(kind, name_lx.text):
            raise DuplicateDeclaration(f"{kind} {name_lx.text!r} declared twice", name_lx.span)
        self.doc.declarations.append(decl)

    # -- declarations ------------------------------------------------------

    def parse_document(self) -> Document:
        while self.pos < len(self.lex):
            lx = self.peek()
            if lx.kind != "KEYWORD" or lx.text not in DECLARATION_KEYWORDS:
                raise DslSyntaxError(
                    f"unexpected {_describe(lx.kind, lx.text) if lx.kind != 'IDENT' else repr(lx.text)}",
                    lx.span, [repr(k) for k in DECLARATION_KEYWORDS],
                )
            try:
                getattr(self, "_" + lx.text)()
            except OrugaError as err:
                raise err.with_span(lx.span)
        return self.doc

    def _typeSystem(self):
        self.expect("KEYWORD", "typeSystem")
        name = self.ident()
        self.expect("EQUALS")
        self.expect("KEYWORD", "types")
        entries = [self._type_entry()]
        while self.accept("COMMA"):
            entries.append(self._type_entry())
        order = []
        if self.accept("KEYWORD", "order"):
            order.append(self._order_entry())
            while self.accept("COMMA"):
                order.append(self._order_entry())
        try:
            ts = build_type_system(name.text, [(e.text, o) for e, o in entries], [(a.text, b.text) for a, b in order])
        except OrugaError as err:
            raise err.with_span(self._span_of(err, entries, order) or name.span)
        self.register(ts, "typeSystem", name)
        self.doc.type_systems[ts.name] = ts

    @staticmethod
    def _span_of(err, entries, order):
        text = err.message
        for lx, _ in entries:
            if f"'{lx.text}'" in text:
                return lx.span
        for a, b in order:
            for lx in (a, b):
                if f"'{lx.text}'" in text:
                    return lx.span
        return None

    def _type_entry(self):
        if self.accept("UNDERSCORE"):
            self.expect("COLON")
            return self.ident(), True
        return self.ident(), False

    def _order_entry(self):
        sub = self.ident()
        self.expect("LT")
        return sub, self.ident()

    def _conSpec(self):
        self.expect("KEYWORD", "conSpec")
        name = self.ident()
        self.expect("COLON")
        ts_lx = self.ident()
        self.resolve("typeSystem", ts_lx)
        self.expect("EQUALS")
        decls = [self._constructor_decl()]
        while self.accept("COMMA"):
            decls.append(self._constructor_decl())
        ts = self.doc.type_systems[ts_lx.text]
        try:
            cs = build_conspec(name.text, ts, [(c.text, sig) for c, sig in decls])
        except OrugaError as err:
            span = next((c.span for c, _ in decls if f"'{c.text}'" in err.message), name.span)
            raise err.with_span(span)
        self.register(cs, "conSpec", name)

    def _constructor_decl(self):
        cname = self.ident()
        self.expect("COLON")
        self.expect("LBRACK")
        inputs = []
        if not self.at("RBRACK"):
            inputs.append(self.ident().text)
            while self.accept("COMMA"):
                inputs.append(self.ident().text)
        self.expect("RBRACK")
        self.expect("RARROW")
        output = self.ident().text
        return cname, ConstructorSig(tuple(inputs), output)

    def _space(self, lx: Lexeme) -> Space:
        self.resolve("conSpec", lx, UnknownSpace)
        return self.doc.space(lx.text)

    def _construction(self):
        self.expect("KEYWORD", "construction")
        name = self.ident()
        self.expect("COLON")
        cs_lx = self.ident()
        space = self._space(cs_lx)
        self.expect("EQUALS")
        scope = _Scope(space.conspec)
        term = self.term(scope)
        self._check(term, scope, name)
        self.register(ConstructionDecl(name.text, cs_lx.text, term), "construction", name)

    def _check(self, term: Construction, scope: _Scope, where: Lexeme):
        report = validate(term, self._current_space(scope))
        if not report.ok:
            first = report.violations[0]
            span = scope.spans.get(first.token_id, where.span)
            raise InvalidConstruction(report.violations, span)

    def _current_space(self, scope: _Scope) -> Space:
        return Space(scope.conspec, self.doc.type_systems[scope.ts_name])

    def _tSchema(self):
        self.expect("KEYWORD", "tSchema")
        name = self.ident()
        self.expect("COLON")
        self.expect("LPAREN")
        src_lx = self.ident()
        self._space(src_lx)
        self.expect("COMMA")
        tgt_lx = self.ident()
        self._space(tgt_lx)
        self.expect("RPAREN")
        self.expect("EQUALS")

        self.expect("KEYWORD", "source")
        src_scope = self._scope_for(src_lx.text)
        src_pat = self.term(src_scope)
        self._check(src_pat, src_scope, name)
        self.expect("KEYWORD", "target")
        tgt_scope = self._scope_for(tgt_lx.text)
        tgt_pat = self.term(tgt_scope)
        self._check(tgt_pat, tgt_scope, name)

        antecedents = []
        if self.accept("KEYWORD", "antecedent"):
            antecedents.append(self.relation(src_scope, tgt_scope))
            while self.accept("COMMA"):
                antecedents.append(self.relation(src_scope, tgt_scope))
        self.expect("KEYWORD", "consequent")
        consequent = self.relation(src_scope, tgt_scope)
        schema = build_schema(
            name.text,
            self.doc.space(src_lx.text),
            self.doc.space(tgt_lx.text),
            src_pat,
            tgt_pat,
            antecedents,
            consequent,
        )
        self.register(schema, "tSchema", name)

    def _scope_for(self, conspec_name: str) -> _Scope:
        return _Scope(self.doc.conspec(conspec_name))

    # -- terms -------------------------------------------------------------

    def annotation(self, scope: _Scope):
        """Parse ``id``, ``id:type`` or ``id:newType:family``; returns the id
        lexeme and the type (None for a bare id)."""
        id_lx = self.ident()
        if not self.accept("COLON"):
            return id_lx, None
        type_lx = self.ident()
        ts = self.doc.type_systems[scope.ts_name]
        if self.accept("COLON"):
            family = self.ident()
            try:
                ts = register_dynamic_type(ts, type_lx.text, family.text)
            except OrugaError as err:
                raise err.with_span(family.span if family.text not in ts.open_families else type_lx.span)
            self.doc.type_systems[scope.ts_name] = ts
        elif not ts.knows(type_lx.text):
            raise UnknownType(f"{type_lx.text!r} is not a type of {ts.name}", type_lx.span)
        return id_lx, type_lx.text

    def term(self, scope: _Scope) -> Construction:
        id_lx, type_name = self.annotation(scope)
        tid = id_lx.text
        if type_name is not None and tid in scope.types and scope.types[tid] != type_name:
            raise ConflictingTokenType(
                f"{tid!r} typed both {scope.types[tid]!r} and {type_name!r}", id_lx.span
            )
        if self.accept("LARROW"):
            if type_name is None:
                type_name = scope.types.get(tid)
                if type_name is None:
                    raise DslSyntaxError(f"constructed token {tid!r} needs a type", id_lx.span, ["':'"])
            cname = self.ident()
            scope.types.setdefault(tid, type_name)
            scope.spans.setdefault(tid, id_lx.span)
            self.expect("LBRACK")
            inputs = [self.term(scope)]
            while self.accept("COMMA"):
                inputs.append(self.term(scope))
            self.expect("RBRACK")
            return Apply(Token(tid, type_name), cname.text, tuple(inputs))
        if type_name is None or tid in scope.types:
            scope.spans.setdefault(tid, id_lx.span)
            return Reference(tid)
        scope.types[tid] = type_name
        scope.spans[tid] = id_lx.span
        return Source(Token(tid, type_name))

    def relation(self, src: _Scope, tgt: _Scope) -> RelConstraint:
        self.expect("LPAREN")
        source = self._ann_list(src, "source")
        self.expect("COMMA")
        target = self._ann_list(tgt, "target")
        self.expect("RPAREN")
        self.expect("DCOLON")
        rel = self.ident()
        return RelConstraint(tuple(source), tuple(target), rel.text)

    def _ann_list(self, scope: _Scope, side: str) -> list[str]:
        self.expect("LBRACK")
        ids = []
        if not self.at("RBRACK"):
            ids.append(self._constraint_token(scope, side))
            while self.accept("COMMA"):
                ids.append(self._constraint_token(scope, side))
        self.expect("RBRACK")
        return ids

    def _constraint_token(self, scope: _Scope, side: str) -> str:
        id_lx, type_name = self.annotation(scope)
        if id_lx.text not in scope.types:
            raise DanglingConstraintToken(
                f"{id_lx.text!r} is not a token of the {side} pattern", id_lx.span
            )
        if type_name is not None and scope.types[id_lx.text] != type_name:
            raise ConflictingTokenType(
                f"{id_lx.text!r} has type {scope.types[id_lx.text]!r} in the {side} pattern, not {type_name!r}",
                id_lx.span,
            )
        return id_lx.text


def parse_document(text: str, path: str = "<string>", into: Document | None = None) -> Document:
    """Parse a whole document. Every declaration is validated as it is read;
    the first error is raised with its source span."""
    lexemes = tokenize(text, path)
    doc = into if into is not None else Document()
    return Parser(lexemes, doc, path, declared_names(lexemes)).parse_document()


def load_files(paths: Iterable[str | Path]) -> Document:
    """Parse several files, in order, into one logical document."""
    lexed = []
    for p in paths:
        p = Path(p)
        lexed.append((str(p), tokenize(p.read_text(encoding="utf-8"), str(p))))
    later = set()
    for _, lexemes in lexed:
        later |= declared_names(lexemes)
    doc = Document()
    for path, lexemes in lexed:
        Parser(lexemes, doc, path, later).parse_document()
    return doc


def parse_construction_term(text: str, space: Space, path: str = "<string>") -> tuple[Construction, Space]:
    """Parse a lone construction term in ``space``. Returns the construction
    and the space extended by any dynamic types its annotations created."""
    doc = Document(type_systems={space.types.name: space.types})
    parser = Parser(tokenize(text, path), doc, path)
    scope = _Scope(space.conspec)
    term = parser.term(scope)
    if parser.pos < len(parser.lex):
        lx = parser.peek()
        raise DslSyntaxError("trailing input after construction", lx.span, ["end of input"])
    new_space = Space(space.conspec, doc.type_systems[space.types.name])
    report = validate(term, new_space)
    if not report.ok:
        raise InvalidConstruction(report.violations, scope.spans.get(report.violations[0].token_id))
    return term, new_space

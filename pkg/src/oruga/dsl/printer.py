"""Canonical text layout for documents, constructions and schemas.

Output re-parses to an equal value. Tokens whose type is a dynamic type are
always printed with the triple annotation ``id:type:family`` so a printed
fragment registers the types it needs wherever it ends up.
"""

from __future__ import annotations

from ..conspec import ConSpec
from ..construction import Apply, Construction, Reference, Source, Token, token_types
from ..schema import RelConstraint, TransferSchema
from ..typesys import TypeSystem
from .document import ConstructionDecl, Document

WIDTH = 72
INDENT = "  "


def format_token(tok: Token, ts: TypeSystem | None = None) -> str:
    if ts is not None and ts.is_dynamic(tok.type):
        return f"{tok.id}:{tok.type}:{ts.dynamic_types[tok.type]}"
    return f"{tok.id}:{tok.type}"


def _flat(c: Construction, ts) -> str:
    if isinstance(c, Reference):
        return c.token_id
    if isinstance(c, Source):
        return format_token(c.token, ts)
    args = ", ".join(_flat(ch, ts) for ch in c.inputs)
    return f"{format_token(c.output, ts)} <- {c.constructor}[{args}]"


def format_construction(c: Construction, ts: TypeSystem | None = None, indent: int = 0) -> str:
    """Lay out a construction term, breaking applications that do not fit."""
    flat = _flat(c, ts)
    if not isinstance(c, Apply) or len(flat) + len(INDENT) * indent <= WIDTH:
        return flat
    pad = INDENT * (indent + 1)
    args = (",\n" + pad).join(format_construction(ch, ts, indent + 1) for ch in c.inputs)
    return f"{format_token(c.output, ts)} <- {c.constructor}[\n{pad}{args}]"


def format_type_system(ts: TypeSystem) -> str:
    entries = [("_:" if t in ts.open_families else "") + t for t in sorted(ts.declared_types)]
    lines = [f"typeSystem {ts.name} =", f"{INDENT}types " + ", ".join(entries)]
    order = sorted(ts.declared_order)
    if order:
        lines.append(f"{INDENT}order " + ", ".join(f"{a} < {b}" for a, b in order))
    return "\n".join(lines)


def format_conspec(cs: ConSpec) -> str:
    body = (",\n" + INDENT).join(
        f"{name} : [{','.join(sig.inputs)}] -> {sig.output}" for name, sig in cs.constructors.items()
    )
    return f"conSpec {cs.name}:{cs.type_system_name} =\n{INDENT}{body}"


def format_construction_decl(decl: ConstructionDecl, ts: TypeSystem | None = None) -> str:
    term = format_construction(decl.construction, ts, 1)
    return f"construction {decl.name}:{decl.conspec} =\n{INDENT}{term}"


def _format_rel(rel: RelConstraint, src_types, tgt_types, src_ts, tgt_ts) -> str:
    src = ",".join(format_token(Token(i, src_types[i]), src_ts) for i in rel.source)
    tgt = ",".join(format_token(Token(i, tgt_types[i]), tgt_ts) for i in rel.target)
    return f"([{src}],[{tgt}]) :: {rel.relation}"


def format_schema(s: TransferSchema, source_ts: TypeSystem | None = None, target_ts: TypeSystem | None = None) -> str:
    src_types = token_types(s.source_pattern)
    tgt_types = token_types(s.target_pattern)
    lines = [
        f"tSchema {s.name}:({s.source_space},{s.target_space}) =",
        f"{INDENT}source " + format_construction(s.source_pattern, source_ts, 2),
        f"{INDENT}target " + format_construction(s.target_pattern, target_ts, 2),
    ]
    if s.antecedents:
        rels = [_format_rel(a, src_types, tgt_types, source_ts, target_ts) for a in s.antecedents]
        lines.append(f"{INDENT}antecedent " + (",\n" + " " * len(INDENT + "antecedent ")).join(rels))
    lines.append(f"{INDENT}consequent " + _format_rel(s.consequent, src_types, tgt_types, source_ts, target_ts))
    return "\n".join(lines)


def format_document(doc: Document) -> str:
    chunks = []
    for decl in doc.declarations:
        if isinstance(decl, TypeSystem):
            chunks.append(format_type_system(decl))
        elif isinstance(decl, ConSpec):
            chunks.append(format_conspec(decl))
        elif isinstance(decl, ConstructionDecl):
            cs = doc.conspec(decl.conspec)
            chunks.append(format_construction_decl(decl, doc.type_systems[cs.type_system_name]))
        else:
            src = doc.type_systems[doc.conspec(decl.source_space).type_system_name]
            tgt = doc.type_systems[doc.conspec(decl.target_space).type_system_name]
            chunks.append(format_schema(decl, src, tgt))
    return "\n\n".join(chunks) + "\n"


def pretty_print(obj, ts: TypeSystem | None = None) -> str:
    """Dispatch on the kind of value: a Document, a construction, a schema, a
    type system or a constructor specification."""
    if isinstance(obj, Document):
        return format_document(obj)
    if isinstance(obj, TransferSchema):
        return format_schema(obj)
    if isinstance(obj, TypeSystem):
        return format_type_system(obj)
    if isinstance(obj, ConSpec):
        return format_conspec(obj)
    if isinstance(obj, ConstructionDecl):
        return format_construction_decl(obj, ts)
    return format_construction(obj, ts)

"""Constructions: typed tokens joined by constructor applications.

A construction is a finite tree whose leaves are either fresh tokens
(:class:`Source`) or references back to a token bound elsewhere in the same
tree (:class:`Reference`). References make the induced graph possibly cyclic,
as when a diagram's root token is itself an input of one of its own parts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .conspec import Space
from .errors import NonInjectiveRename, UnboundToken
from .typesys import leq


@dataclass(frozen=True)
class Token:
    id: str
    type: str

    def __str__(self):
        return f"{self.id}:{self.type}"


@dataclass(frozen=True)
class Source:
    token: Token


@dataclass(frozen=True)
class Reference:
    token_id: str


@dataclass(frozen=True)
class Apply:
    output: Token
    constructor: str
    inputs: tuple["Construction", ...]

    def __post_init__(self):
        if not isinstance(self.inputs, tuple):
            object.__setattr__(self, "inputs", tuple(self.inputs))


Construction = Union[Source, Reference, Apply]


def root_id(c: Construction) -> str:
    if isinstance(c, Source):
        return c.token.id
    if isinstance(c, Reference):
        return c.token_id
    return c.output.id


def bound_token(c: Construction) -> Token | None:
    """The token a node binds, or None for references."""
    if isinstance(c, Source):
        return c.token
    if isinstance(c, Apply):
        return c.output
    return None


def walk(c: Construction) -> Iterator[Construction]:
    """Pre-order, left-to-right traversal of the nodes of ``c``."""
    stack = [c]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Apply):
            stack.extend(reversed(node.inputs))


def binding_sites(c: Construction) -> dict[str, Construction]:
    """Map each bound token id to its binding node: the Apply that outputs it,
    or its Source leaf when it is not constructed."""
    sites: dict[str, Construction] = {}
    for node in walk(c):
        if isinstance(node, Apply):
            if not isinstance(sites.get(node.output.id), Apply):
                sites[node.output.id] = node
        elif isinstance(node, Source):
            sites.setdefault(node.token.id, node)
    return sites


def token_types(c: Construction) -> dict[str, str]:
    """id -> type for every bound token (first binding wins)."""
    types: dict[str, str] = {}
    for node in walk(c):
        tok = bound_token(node)
        if tok is not None:
            types.setdefault(tok.id, tok.type)
    return types


def root_token(c: Construction) -> Token:
    rid = root_id(c)
    t = token_types(c).get(rid)
    if t is None:
        raise UnboundToken(f"root reference {rid!r} is unbound")
    return Token(rid, t)


@dataclass(frozen=True)
class Violation:
    kind: str
    token_id: str | None
    message: str

    def __str__(self):
        return f"{self.kind}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate(c: Construction, space: Space, extra_types: Mapping[str, str] | None = None) -> ValidationReport:
    """Check ``c`` against a space and return every violation found.

    ``extra_types`` supplies the types of tokens bound outside ``c`` (used for
    target compositions whose constructions share tokens); references to them
    resolve without error.
    """
    ts = space.types
    conspec = space.conspec
    out: list[Violation] = []
    types: dict[str, str] = {}
    applies: dict[str, int] = {}
    sources: dict[str, int] = {}
    nodes = list(walk(c))

    for node in nodes:
        tok = bound_token(node)
        if tok is None:
            continue
        counter = applies if isinstance(node, Apply) else sources
        counter[tok.id] = counter.get(tok.id, 0) + 1
        if counter[tok.id] == 2:
            what = "output of two applications" if counter is applies else "two source leaves"
            out.append(Violation("duplicate-binding", tok.id, f"{tok.id!r} is bound as {what}"))
        if tok.id in types:
            if types[tok.id] != tok.type:
                out.append(Violation(
                    "inconsistent-type", tok.id,
                    f"{tok.id!r} typed both {types[tok.id]!r} and {tok.type!r}",
                ))
            continue
        types[tok.id] = tok.type
        if not ts.knows(tok.type):
            out.append(Violation("unknown-type", tok.id, f"{tok.type!r} is not a type of {ts.name}"))

    resolvable = dict(extra_types or {})
    resolvable.update(types)

    def type_of(node):
        if isinstance(node, Reference):
            return resolvable.get(node.token_id)
        return bound_token(node).type

    for node in nodes:
        if isinstance(node, Reference):
            if node.token_id not in resolvable:
                out.append(Violation(
                    "unresolved-reference", node.token_id,
                    f"reference to unbound token {node.token_id!r}",
                ))
            continue
        if not isinstance(node, Apply):
            continue
        sig = conspec.constructors.get(node.constructor)
        if sig is None:
            out.append(Violation(
                "unknown-constructor", node.output.id,
                f"{node.constructor!r} is not a constructor of {conspec.name}",
            ))
            continue
        if len(node.inputs) != sig.arity:
            out.append(Violation(
                "arity", node.output.id,
                f"{node.constructor} takes {sig.arity} inputs, given {len(node.inputs)}",
            ))
            continue
        out_type = node.output.type
        if ts.knows(out_type) and not leq(ts, out_type, sig.output):
            out.append(Violation(
                "typing", node.output.id,
                f"output {node.output} of {node.constructor} is not <= {sig.output}",
            ))
        for i, (child, expected) in enumerate(zip(node.inputs, sig.inputs), start=1):
            t = type_of(child)
            if t is None or not ts.knows(t):
                continue
            if not leq(ts, t, expected):
                out.append(Violation(
                    "typing", root_id(child),
                    f"input {i} of {node.constructor} ({root_id(child)}:{t}) is not <= {expected}",
                ))
    return ValidationReport(tuple(out))


def tokens_of(c: Construction) -> frozenset[Token]:
    return frozenset(tok for node in walk(c) if (tok := bound_token(node)) is not None)


def sub_construction_at(c: Construction, token_id: str) -> Construction:
    site = binding_sites(c).get(token_id)
    if site is None:
        raise UnboundToken(f"{token_id!r} is not bound in this construction")
    return site


def _ids(c: Construction) -> list[str]:
    seen = {}
    for node in walk(c):
        seen.setdefault(root_id(node), None)
    return list(seen)


def rename_tokens(c: Construction, mapping: Mapping[str, str]) -> Construction:
    """Rename token ids; ids missing from ``mapping`` keep their name."""
    ids = _ids(c)
    images = [mapping.get(i, i) for i in ids]
    if len(set(images)) != len(images):
        raise NonInjectiveRename("renaming maps two tokens to the same id")

    def go(node):
        if isinstance(node, Source):
            return Source(Token(mapping.get(node.token.id, node.token.id), node.token.type))
        if isinstance(node, Reference):
            return Reference(mapping.get(node.token_id, node.token_id))
        out = Token(mapping.get(node.output.id, node.output.id), node.output.type)
        return Apply(out, node.constructor, tuple(go(ch) for ch in node.inputs))

    return go(c)


def equal_up_to_renaming(a: Construction, b: Construction) -> dict[str, str] | None:
    """A bijection ``a``-ids -> ``b``-ids under which the two constructions
    coincide exactly (shape, constructors, argument order, token types)."""
    fwd: dict[str, str] = {}
    bwd: dict[str, str] = {}

    def pair(x: str, y: str) -> bool:
        if fwd.setdefault(x, y) != y or bwd.setdefault(y, x) != x:
            return False
        return True

    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if type(x) is not type(y):
            return None
        if isinstance(x, Reference):
            if not pair(x.token_id, y.token_id):
                return None
            continue
        tx, ty = bound_token(x), bound_token(y)
        if tx.type != ty.type or not pair(tx.id, ty.id):
            return None
        if isinstance(x, Apply):
            if x.constructor != y.constructor or len(x.inputs) != len(y.inputs):
                return None
            stack.extend(zip(x.inputs, y.inputs))
    return fwd

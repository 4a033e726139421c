"""Matching constructions against patterns.

A pattern is an ordinary construction whose tokens are read as typed
variables. A matching sends each pattern token to a construction token whose
type is at or below the pattern token's type.

Two modes are supported. In ``EXACT`` mode the two trees must have the same
shape node for node. In ``PREFIX`` mode a pattern leaf may stand for a whole
sub-tree of the construction, which is how transfer schemas are applied.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .construction import (
    Apply,
    Construction,
    Reference,
    Source,
    Token,
    binding_sites,
    bound_token,
    root_id,
    token_types,
    walk,
)
from .errors import TypeClash, UnboundToken, UnknownType
from .typesys import TypeSystem, leq, meet_if_comparable


class MatchMode(str, enum.Enum):
    EXACT = "exact"
    PREFIX = "prefix"


@dataclass(frozen=True)
class Matching:
    mapping: dict[str, Token]
    mode: MatchMode

    __hash__ = None

    def __getitem__(self, pattern_id: str) -> Token:
        return self.mapping[pattern_id]

    def items(self):
        return sorted(self.mapping.items())


def _below(ts: TypeSystem, sub: str, sup: str) -> bool:
    try:
        return leq(ts, sub, sup)
    except UnknownType:
        return False


class _Aligner:
    def __init__(self, c, p, ts, mode, injective):
        self.c_types = token_types(c)
        self.p_types = token_types(p)
        self.ts = ts
        self.mode = MatchMode(mode)
        self.injective = injective

    def bind(self, mapping, used, pid, ctok) -> bool:
        if pid in mapping:
            return mapping[pid] == ctok
        ptype = self.p_types.get(pid)
        if ptype is None or not _below(self.ts, ctok.type, ptype):
            return False
        if self.injective and ctok.id in used:
            return False
        mapping[pid] = ctok
        used.add(ctok.id)
        return True

    def ctoken(self, node) -> Token | None:
        tok = bound_token(node)
        if tok is not None:
            return tok
        t = self.c_types.get(node.token_id)
        return None if t is None else Token(node.token_id, t)

    def align(self, pnode, cnode, mapping, used) -> bool:
        stack = [(pnode, cnode)]
        while stack:
            pn, cn = stack.pop()
            ctok = self.ctoken(cn)
            if ctok is None:
                return False
            if self.mode is MatchMode.EXACT and type(pn) is not type(cn):
                return False
            if isinstance(pn, Apply):
                if not isinstance(cn, Apply):
                    return False
                if pn.constructor != cn.constructor or len(pn.inputs) != len(cn.inputs):
                    return False
            if not self.bind(mapping, used, root_id(pn), ctok):
                return False
            if isinstance(pn, Apply):
                stack.extend(reversed(list(zip(pn.inputs, cn.inputs))))
        return True


def _search(c, p, ts, mode, anchors, injective) -> Matching | None:
    aligner = _Aligner(c, p, ts, mode, injective)
    c_sites = binding_sites(c)
    seeded: dict[str, Token] = {}
    for pid, cid in anchors:
        if pid not in aligner.p_types:
            raise UnboundToken(f"pattern token {pid!r} is not bound in the pattern")
        if cid not in c_sites:
            raise UnboundToken(f"token {cid!r} is not bound in the construction")
        seeded_tok = Token(cid, aligner.c_types[cid])
        if seeded.setdefault(pid, seeded_tok) != seeded_tok:
            return None

    proot = root_id(p)
    if proot in seeded:
        placements = [c_sites[seeded[proot].id]]
    elif seeded:
        placements = [n for n in walk(c) if not isinstance(n, Reference)]
    else:
        placements = [c]

    for place in placements:
        mapping: dict[str, Token] = {}
        used: set[str] = set()
        if not all(aligner.bind(mapping, used, pid, tok) for pid, tok in seeded.items()):
            return None
        if aligner.align(p, place, mapping, used):
            return Matching(mapping, aligner.mode)
    return None


def find_match(
    c: Construction,
    p: Construction,
    ts: TypeSystem,
    mode: MatchMode | str = MatchMode.EXACT,
    injective: bool = True,
) -> Matching | None:
    """Match pattern ``p`` onto ``c`` with the pattern root at the root of ``c``."""
    return _search(c, p, ts, mode, (), injective)


def find_match_anchored(
    c: Construction,
    p: Construction,
    ts: TypeSystem,
    mode: MatchMode | str,
    anchors: Iterable[tuple[str, str]],
    injective: bool = True,
) -> Matching | None:
    """Like :func:`find_match`, but the result must send each anchored pattern
    token to the given construction token.

    If the pattern root is anchored the pattern is placed there. Otherwise
    every node of ``c`` is tried as a placement in pre-order and the first
    success wins.
    """
    return _search(c, p, ts, mode, tuple(anchors), injective)


def instantiation_map(
    p: Construction,
    binding: Mapping[str, Token],
    fresh: Callable[[str], str],
    ts: TypeSystem,
) -> dict[str, Token]:
    """Decide the concrete token for every pattern token: bound ones keep their
    identity with the type refined to the lower of the two; unbound ones get a
    fresh id and the pattern's type."""
    result: dict[str, Token] = {}
    for pid, ptype in token_types(p).items():
        if pid in binding:
            tok = binding[pid]
            try:
                meet = meet_if_comparable(ts, tok.type, ptype)
            except UnknownType:
                meet = None
            if meet is None:
                raise TypeClash(f"{tok} cannot instantiate pattern token {pid}:{ptype}")
            result[pid] = Token(tok.id, meet)
        else:
            result[pid] = Token(fresh(pid), ptype)
    return result


def apply_instantiation(p: Construction, tokens: Mapping[str, Token]) -> Construction:
    def go(node):
        if isinstance(node, Source):
            return Source(tokens[node.token.id])
        if isinstance(node, Reference):
            return Reference(tokens[node.token_id].id)
        return Apply(tokens[node.output.id], node.constructor, tuple(go(ch) for ch in node.inputs))

    return go(p)


def instantiate(
    p: Construction,
    binding: Mapping[str, Token],
    fresh: Callable[[str], str],
    ts: TypeSystem,
) -> Construction:
    return apply_instantiation(p, instantiation_map(p, binding, fresh, ts))

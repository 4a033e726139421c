"""Type systems: a set of type names with a subtype partial order.

Types declared with the ``_:`` prefix are *open families*: tokens may be
annotated with fresh subtypes of them (``t:1plus2:numExp``), which are
registered on the fly as dynamic types.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable

from .errors import (
    ConflictingParent,
    DuplicateType,
    NotOpenFamily,
    SubtypeCycle,
    UnknownType,
    UnknownTypeInOrder,
)

Pair = tuple[str, str]


def _check_name(name: str) -> None:
    if not name or any(ch.isspace() for ch in name):
        raise ValueError(f"invalid type name {name!r}")


def _find_cycle(edges: Iterable[Pair]) -> list[str] | None:
    succ: dict[str, list[str]] = {}
    for a, b in sorted(set(edges)):
        if a != b:
            succ.setdefault(a, []).append(b)
    state: dict[str, int] = {}  # 1 = on stack, 2 = done
    path: list[str] = []

    def visit(node):
        state[node] = 1
        path.append(node)
        for nxt in succ.get(node, ()):
            if state.get(nxt) == 1:
                return path[path.index(nxt):] + [nxt]
            if nxt not in state:
                found = visit(nxt)
                if found:
                    return found
        path.pop()
        state[node] = 2
        return None

    for start in sorted(succ):
        if start not in state:
            found = visit(start)
            if found:
                return found
    return None


def compute_closure(declared_order: Iterable[Pair], universe: Iterable[str]) -> frozenset[Pair]:
    """Smallest reflexive-transitive relation over ``universe`` containing
    ``declared_order``. Raises :class:`SubtypeCycle` if it would not be
    antisymmetric."""
    order = set(declared_order)
    nodes = set(universe)
    for a, b in order:
        nodes.update((a, b))
    cycle = _find_cycle(order)
    if cycle:
        raise SubtypeCycle(cycle)
    succ: dict[str, set[str]] = {n: set() for n in nodes}
    for a, b in order:
        succ[a].add(b)
    closure = set()
    for start in nodes:
        seen = {start}
        stack = [start]
        while stack:
            cur = stack.pop()
            for nxt in succ[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        closure.update((start, up) for up in seen)
    return frozenset(closure)


@dataclass(frozen=True)
class TypeSystem:
    name: str
    declared_types: frozenset[str]
    open_families: frozenset[str]
    declared_order: frozenset[Pair]
    closure: frozenset[Pair]
    dynamic_types: dict[str, str] = field(default_factory=dict)
    _supertypes: dict[str, frozenset[str]] = field(
        init=False, repr=False, compare=False, default=None
    )

    def __post_init__(self):
        ups: dict[str, set[str]] = {}
        for a, b in self.closure:
            ups.setdefault(a, set()).add(b)
        object.__setattr__(self, "_supertypes", {k: frozenset(v) for k, v in ups.items()})

    __hash__ = None  # dynamic_types is a dict

    @property
    def known_types(self) -> frozenset[str]:
        return self.declared_types | frozenset(self.dynamic_types)

    def knows(self, name: str) -> bool:
        return name in self.declared_types or name in self.dynamic_types

    def is_dynamic(self, name: str) -> bool:
        return name in self.dynamic_types

    def supertypes(self, name: str) -> frozenset[str]:
        if not self.knows(name):
            raise UnknownType(f"{name!r} is not a type of {self.name}")
        return self._supertypes[name]

    def leq(self, sub: str, sup: str) -> bool:
        return leq(self, sub, sup)


def build_type_system(
    name: str,
    type_entries: Iterable[tuple[str, bool]],
    order_entries: Iterable[Pair],
) -> TypeSystem:
    """Build a type system from ``(type, is_open_family)`` entries and
    ``(sub, super)`` order entries."""
    declared: set[str] = set()
    open_families: set[str] = set()
    entries = list(type_entries)
    if not entries:
        raise ValueError("a type system needs at least one type")
    for type_name, is_open in entries:
        _check_name(type_name)
        if type_name in declared:
            raise DuplicateType(f"{type_name!r} declared twice in {name}")
        declared.add(type_name)
        if is_open:
            open_families.add(type_name)
    order = set()
    for sub, sup in order_entries:
        for t in (sub, sup):
            if t not in declared:
                raise UnknownTypeInOrder(f"{t!r} is not declared in {name}")
        order.add((sub, sup))
    closure = compute_closure(order, declared)
    return TypeSystem(
        name=name,
        declared_types=frozenset(declared),
        open_families=frozenset(open_families),
        declared_order=frozenset(order),
        closure=closure,
    )


def leq(ts: TypeSystem, sub: str, sup: str) -> bool:
    for t in (sub, sup):
        if not ts.knows(t):
            raise UnknownType(f"{t!r} is not a type of {ts.name}")
    return sup in ts._supertypes[sub]


def register_dynamic_type(ts: TypeSystem, new_type: str, parent: str) -> TypeSystem:
    """Return ``ts`` extended with ``new_type < parent``.

    ``parent`` must be an open family. Registering the same pair twice is a
    no-op; registering a known name under a different parent is an error.
    """
    _check_name(new_type)
    if not ts.knows(parent):
        raise UnknownType(f"{parent!r} is not a type of {ts.name}")
    if parent not in ts.open_families:
        raise NotOpenFamily(f"{parent!r} was not declared with '_:' in {ts.name}")
    if new_type in ts.dynamic_types:
        if ts.dynamic_types[new_type] == parent:
            return ts
        raise ConflictingParent(
            f"{new_type!r} already registered under {ts.dynamic_types[new_type]!r}"
        )
    if new_type in ts.declared_types:
        if leq(ts, new_type, parent):
            return ts
        raise ConflictingParent(f"{new_type!r} is a declared type not below {parent!r}")
    # nothing sits below a fresh type, so only its own row of the closure is new
    added = {(new_type, new_type)} | {(new_type, up) for up in ts.supertypes(parent)}
    dynamic = dict(ts.dynamic_types)
    dynamic[new_type] = parent
    return replace(ts, closure=ts.closure | added, dynamic_types=dynamic)


def meet_if_comparable(ts: TypeSystem, a: str, b: str) -> str | None:
    """The lower of ``a`` and ``b`` when they are comparable, else None."""
    if leq(ts, a, b):
        return a
    if leq(ts, b, a):
        return b
    return None

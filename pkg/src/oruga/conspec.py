"""Constructor specifications: named constructors with typed signatures."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import DuplicateConstructor, EmptyInputs, UnknownConstructor, UnknownType
from .typesys import TypeSystem


@dataclass(frozen=True)
class ConstructorSig:
    inputs: tuple[str, ...]
    output: str

    @property
    def arity(self) -> int:
        return len(self.inputs)

    def __str__(self):
        return f"[{','.join(self.inputs)}] -> {self.output}"


@dataclass(frozen=True)
class ConSpec:
    name: str
    type_system_name: str
    constructors: dict[str, ConstructorSig]

    __hash__ = None

    def signature_of(self, constructor: str) -> ConstructorSig:
        return signature_of(self, constructor)


@dataclass(frozen=True)
class Space:
    """A constructor specification together with the (current) type system
    it is bound to. Matching, validation and transfer all work over spaces."""

    conspec: ConSpec
    types: TypeSystem

    __hash__ = None

    @property
    def name(self) -> str:
        return self.conspec.name


def build_conspec(
    name: str,
    type_system: TypeSystem,
    decls: Iterable[tuple[str, ConstructorSig]],
) -> ConSpec:
    decls = list(decls)
    if not decls:
        raise ValueError("a constructor specification needs at least one constructor")
    constructors: dict[str, ConstructorSig] = {}
    for cname, sig in decls:
        if cname in constructors:
            raise DuplicateConstructor(f"{cname!r} declared twice in {name}")
        if not sig.inputs:
            raise EmptyInputs(f"constructor {cname!r} has no inputs")
        for t in (*sig.inputs, sig.output):
            if not type_system.knows(t):
                raise UnknownType(
                    f"{cname!r} mentions {t!r}, not a type of {type_system.name}"
                )
        constructors[cname] = ConstructorSig(tuple(sig.inputs), sig.output)
    return ConSpec(name, type_system.name, constructors)


def signature_of(cs: ConSpec, constructor: str) -> ConstructorSig:
    try:
        return cs.constructors[constructor]
    except KeyError:
        raise UnknownConstructor(f"{constructor!r} is not a constructor of {cs.name}") from None

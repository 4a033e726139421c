from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ..conspec import ConSpec, Space
from ..construction import Construction
from ..errors import UnknownName
from ..schema import TransferSchema
from ..typesys import TypeSystem


@dataclass(frozen=True)
class ConstructionDecl:
    name: str
    conspec: str
    construction: Construction


Declaration = Union[TypeSystem, ConSpec, ConstructionDecl, TransferSchema]

_KINDS = {
    TypeSystem: "typeSystem",
    ConSpec: "conSpec",
    ConstructionDecl: "construction",
    TransferSchema: "tSchema",
}


def kind_of(decl: Declaration) -> str:
    return _KINDS[type(decl)]


@dataclass
class Document:
    """Declarations in source order.

    Type systems appear in ``declarations`` exactly as declared; the versions
    extended by token annotations (dynamic types) live in ``type_systems``.
    """

    declarations: list[Declaration] = field(default_factory=list)
    type_systems: dict[str, TypeSystem] = field(default_factory=dict)

    def _find(self, kind: str, name: str):
        for decl in self.declarations:
            if kind_of(decl) == kind and decl.name == name:
                return decl
        raise UnknownName(f"no {kind} named {name!r}")

    def has(self, kind: str, name: str) -> bool:
        return any(kind_of(d) == kind and d.name == name for d in self.declarations)

    def type_system(self, name: str) -> TypeSystem:
        self._find("typeSystem", name)
        return self.type_systems[name]

    def conspec(self, name: str) -> ConSpec:
        return self._find("conSpec", name)

    def construction(self, name: str) -> ConstructionDecl:
        return self._find("construction", name)

    def schema(self, name: str) -> TransferSchema:
        return self._find("tSchema", name)

    def space(self, conspec_name: str) -> Space:
        cs = self.conspec(conspec_name)
        return Space(cs, self.type_systems[cs.type_system_name])

    def of_kind(self, kind: str) -> list:
        return [d for d in self.declarations if kind_of(d) == kind]

    def schemas_between(self, source: str, target: str) -> list[TransferSchema]:
        return [
            s for s in self.of_kind("tSchema")
            if s.source_space == source and s.target_space == target
        ]

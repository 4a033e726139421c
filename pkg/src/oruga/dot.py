"""Graphviz export in the style of construction diagrams: tokens are boxes,
constructors are small dots, and each input arrow carries its argument index.
"""

from __future__ import annotations

from typing import Iterable

from .construction import Apply, Construction, Reference, Source, root_id, token_types, walk


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(constructions: Iterable[Construction] | Construction, name: str = "construction") -> str:
    """Render one or several constructions as a single DOT digraph.

    Tokens shared between constructions (or re-used through references) are
    drawn once, so a reference shows up as an arrow back into the existing box.
    """
    if isinstance(constructions, (Source, Reference, Apply)):
        constructions = [constructions]
    constructions = list(constructions)
    types: dict[str, str] = {}
    for c in constructions:
        for tid, t in token_types(c).items():
            types.setdefault(tid, t)

    lines = [f"digraph {_q(name)} {{", "  rankdir=BT;", '  node [fontname="monospace"];']
    emitted: set[str] = set()

    def token_node(tid):
        if tid not in emitted:
            emitted.add(tid)
            label = f"{tid} : {types[tid]}" if tid in types else tid
            lines.append(f"  {_q('tok:' + tid)} [shape=box, label={_q(label)}];")
        return _q("tok:" + tid)

    counter = 0
    edges = []
    for c in constructions:
        for node in walk(c):
            if isinstance(node, Reference):
                continue
            if isinstance(node, Source):
                token_node(node.token.id)
                continue
            counter += 1
            cid = _q(f"con:{counter}")
            out = token_node(node.output.id)
            lines.append(
                f"  {cid} [shape=point, width=0.08, style=filled, xlabel={_q(node.constructor)}];"
            )
            edges.append(f"  {cid} -> {out};")
            for i, child in enumerate(node.inputs, start=1):
                edges.append(f"  {token_node(root_id(child))} -> {cid} [label={_q(str(i))}];")
    lines.extend(edges)
    lines.append("}")
    return "\n".join(lines) + "\n"

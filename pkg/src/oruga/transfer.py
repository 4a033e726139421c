"""Structure transfer by backward application of transfer schemas.

Starting from a goal ``([given source tokens], [v0]) :: rel`` the engine picks
the leftmost open goal, finds a schema whose consequent can be made to
coincide with it, and replaces the goal by that schema's instantiated
antecedents. The target pattern of every applied schema is merged into a
*composition* of target constructions, so when no goals remain the
composition is a target-space object standing in ``rel`` to the source,
together with the derivation that proves it.

States are immutable; the search is a plain depth-first traversal with
schema-declaration-order branching, so results are reproducible down to the
names of fresh tokens.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Callable, Iterator, Sequence

from .conspec import Space
from .construction import (
    Apply,
    Construction,
    Reference,
    Source,
    Token,
    bound_token,
    root_id,
    token_types,
    validate,
    walk,
)
from .errors import NotAssumable, TypeClash, UnboundToken, UnknownType
from .matching import MatchMode, apply_instantiation, find_match_anchored, instantiation_map
from .schema import TransferSchema
from .typesys import meet_if_comparable

ASSUMED = "assumed"
SOUGHT_VAR = "v0"


@dataclass(frozen=True)
class Goal:
    uid: int
    source: tuple[Token, ...]
    target: tuple[str, ...]
    relation: str
    depth: int = 1


@dataclass(frozen=True)
class TargetComposition:
    tokens: dict[str, Token]
    constructions: tuple[Construction, ...]

    __hash__ = None

    def constructed(self, token_id: str) -> bool:
        return any(
            isinstance(n, Apply) and n.output.id == token_id
            for c in self.constructions
            for n in walk(c)
        )


@dataclass(frozen=True)
class DerivationStep:
    goal: Goal
    rule: str
    matching: tuple[tuple[str, str], ...]
    fresh: tuple[Token, ...]
    children: tuple[int, ...]


@dataclass(frozen=True)
class DerivationNode:
    goal: Goal
    rule: str
    matching: tuple[tuple[str, str], ...]
    fresh: tuple[Token, ...]
    children: tuple["DerivationNode", ...]

    @property
    def depth(self) -> int:
        return 1 + max((ch.depth for ch in self.children), default=0)


@dataclass(frozen=True)
class TransferState:
    source: Construction
    open_goals: tuple[Goal, ...]
    composition: TargetComposition
    assumptions: tuple[Goal, ...] = ()
    derivation: tuple[DerivationStep, ...] = ()
    root_goal: int = 0
    next_uid: int = 1
    applications: int = 0

    __hash__ = None


@dataclass(frozen=True)
class SearchLimits:
    max_depth: int = 10
    max_results: int = 5
    max_expansions: int = 10000
    assumable: frozenset[str] = frozenset()
    single_construction: bool = False

    def __post_init__(self):
        for name in ("max_depth", "max_results", "max_expansions"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        object.__setattr__(self, "assumable", frozenset(self.assumable))


@dataclass(frozen=True)
class TransferResult:
    state: TransferState

    @property
    def composition(self) -> TargetComposition:
        return self.state.composition

    @property
    def assumptions(self) -> tuple[Goal, ...]:
        return self.state.assumptions

    @property
    def derivation(self) -> DerivationNode:
        return derivation_tree(self.state)


@dataclass
class SearchOutcome:
    results: list[TransferResult]
    expansions: int
    limits_hit: frozenset[str] = field(default_factory=frozenset)

    @property
    def limit_hit(self) -> bool:
        return bool(self.limits_hit)

    def __iter__(self):
        return iter(self.results)

    def __len__(self):
        return len(self.results)

    def __getitem__(self, i):
        return self.results[i]


def init_state(
    source: Construction,
    relation: str,
    goal_source_ids: Sequence[str],
    sought_type: str,
    target: Space,
) -> TransferState:
    types = token_types(source)
    given = []
    for tid in goal_source_ids:
        if tid not in types:
            raise UnboundToken(f"{tid!r} is not bound in the source construction")
        given.append(Token(tid, types[tid]))
    if not target.types.knows(sought_type):
        raise UnknownType(f"{sought_type!r} is not a type of {target.types.name}")
    v0 = Token(SOUGHT_VAR, sought_type)
    goal = Goal(0, tuple(given), (v0.id,), relation, 1)
    comp = TargetComposition({v0.id: v0}, (Source(v0),))
    return TransferState(source, (goal,), comp)


def _retype(c: Construction, store: dict[str, Token]) -> Construction:
    if isinstance(c, Source):
        return Source(store[c.token.id])
    if isinstance(c, Reference):
        return c
    return Apply(store[c.output.id], c.constructor, tuple(_retype(ch, store) for ch in c.inputs))


def _dedupe_leaves(c: Construction) -> Construction:
    """Turn repeated Source leaves of one id into references."""
    seen: set[str] = set()

    def go(node):
        if isinstance(node, Source):
            if node.token.id in seen:
                return Reference(node.token.id)
            seen.add(node.token.id)
            return node
        if isinstance(node, Apply):
            seen.add(node.output.id)
            return Apply(node.output, node.constructor, tuple(go(ch) for ch in node.inputs))
        return node

    return go(c)


def _graft(c: Construction, token_id: str, tree: Construction) -> tuple[Construction, bool]:
    """Replace the first Source leaf ``token_id`` in ``c`` by ``tree``."""
    done = False

    def go(node):
        nonlocal done
        if done:
            return node
        if isinstance(node, Source) and node.token.id == token_id:
            done = True
            return tree
        if isinstance(node, Apply):
            return Apply(node.output, node.constructor, tuple(go(ch) for ch in node.inputs))
        return node

    out = go(c)
    return out, done


def _merge(
    comp: TargetComposition,
    tree: Construction,
    store: dict[str, Token],
    single_construction: bool,
) -> tuple[Construction, ...] | None:
    entries = [_retype(c, store) for c in comp.constructions]
    rid = root_id(tree)
    if isinstance(tree, Apply):
        if comp.constructed(rid):
            if single_construction:
                return None
            entries.append(tree)
        else:
            for i, entry in enumerate(entries):
                grafted, done = _graft(entry, rid, tree)
                if done:
                    entries[i] = grafted
                    break
            else:
                entries.append(tree)
    elif isinstance(tree, Source) and rid not in comp.tokens:
        entries.append(tree)
    return tuple(_dedupe_leaves(e) for e in entries)


def composition_valid(comp: TargetComposition, target: Space) -> bool:
    types = {k: t.type for k, t in comp.tokens.items()}
    for c in comp.constructions:
        if not validate(c, target, extra_types=types).ok:
            return False
        for node in walk(c):
            tok = bound_token(node)
            if tok is not None and comp.tokens.get(tok.id) != tok:
                return False
            if isinstance(node, Reference) and node.token_id not in comp.tokens:
                return False
    return True


def default_fresh_namer(state: TransferState) -> Callable[[str], str]:
    step = state.applications + 1
    return lambda pid: f"{pid}_{step}"


def apply_schema_backward(
    state: TransferState,
    goal_index: int,
    schema: TransferSchema,
    spaces: tuple[Space, Space],
    fresh: Callable[[str], str] | None = None,
    single_construction: bool = False,
) -> TransferState | None:
    """Discharge one open goal with ``schema`` read as a backward rule.

    Returns the successor state, or None when the schema does not apply.
    """
    source_space, target_space = spaces
    goal = state.open_goals[goal_index]
    con = schema.consequent
    if con.relation != goal.relation:
        return None
    if len(con.source) != len(goal.source) or len(con.target) != len(goal.target):
        return None

    m = find_match_anchored(
        state.source,
        schema.source_pattern,
        source_space.types,
        MatchMode.PREFIX,
        [(pid, tok.id) for pid, tok in zip(con.source, goal.source)],
    )
    if m is None:
        return None

    comp = state.composition
    tts = target_space.types
    ptypes = token_types(schema.target_pattern)
    binding: dict[str, Token] = {}
    for pid, var in zip(con.target, goal.target):
        tok = comp.tokens[var]
        if pid in binding:
            if binding[pid].id != var:
                return None
            continue
        if any(b.id == var for b in binding.values()):
            return None
        if meet_if_comparable(tts, ptypes[pid], tok.type) is None:
            return None
        binding[pid] = tok

    fresh = fresh or default_fresh_namer(state)
    try:
        tmap = instantiation_map(schema.target_pattern, binding, fresh, tts)
    except TypeClash:
        return None
    new_ids = [t.id for pid, t in tmap.items() if pid not in binding]
    if any(i in comp.tokens for i in new_ids) or len(set(new_ids)) != len(new_ids):
        raise ValueError("fresh token names collide with the composition")

    store = dict(comp.tokens)
    for tok in tmap.values():
        store[tok.id] = tok
    tree = apply_instantiation(schema.target_pattern, tmap)
    entries = _merge(comp, tree, store, single_construction)
    if entries is None:
        return None
    new_comp = TargetComposition(store, entries)
    if not composition_valid(new_comp, target_space):
        return None

    uid = state.next_uid
    children = []
    for ante in schema.antecedents:
        children.append(Goal(
            uid,
            tuple(m[s] for s in ante.source),
            tuple(tmap[t].id for t in ante.target),
            ante.relation,
            goal.depth + 1,
        ))
        uid += 1
    goals = state.open_goals[:goal_index] + tuple(children) + state.open_goals[goal_index + 1:]
    used = tuple(sorted(
        [(f"source.{pid}", tok.id) for pid, tok in m.mapping.items()]
        + [(f"target.{pid}", tok.id) for pid, tok in tmap.items()]
    ))
    step = DerivationStep(
        goal, schema.name, used,
        tuple(tmap[pid] for pid in tmap if pid not in binding),
        tuple(ch.uid for ch in children),
    )
    return replace(
        state,
        open_goals=goals,
        composition=new_comp,
        derivation=state.derivation + (step,),
        next_uid=uid,
        applications=state.applications + 1,
    )


def discharge_by_assumption(state: TransferState, goal_index: int, limits: SearchLimits) -> TransferState:
    goal = state.open_goals[goal_index]
    if goal.relation not in limits.assumable:
        raise NotAssumable(f"relation {goal.relation!r} may not be assumed")
    step = DerivationStep(goal, ASSUMED, (), (), ())
    return replace(
        state,
        open_goals=state.open_goals[:goal_index] + state.open_goals[goal_index + 1:],
        assumptions=state.assumptions + (goal,),
        derivation=state.derivation + (step,),
    )


def derivation_tree(state: TransferState) -> DerivationNode | None:
    by_goal = {step.goal.uid: step for step in state.derivation}

    def build(uid):
        step = by_goal.get(uid)
        if step is None:
            return None
        kids = tuple(n for n in (build(c) for c in step.children) if n is not None)
        return DerivationNode(step.goal, step.rule, step.matching, step.fresh, kids)

    return build(state.root_goal)


def composition_to_constructions(result: TransferResult | TransferState) -> list[Construction]:
    state = result.state if isinstance(result, TransferResult) else result
    comp = state.composition
    return [_retype(c, comp.tokens) for c in comp.constructions]


def canonical_key(state: TransferState) -> tuple:
    """A key equal for two states iff their compositions and assumptions
    coincide up to renaming of target tokens."""
    entries = composition_to_constructions(state)
    orders = itertools.permutations(entries) if len(entries) <= 5 else [tuple(entries)]
    best = None
    for order in orders:
        names: dict[str, str] = {}
        for c in order:
            for node in walk(c):
                names.setdefault(root_id(node), f"#{len(names)}")
        shape = tuple(_shape(c, names) for c in order)
        assumed = tuple(sorted(
            (g.relation, tuple((t.id, t.type) for t in g.source), tuple(names.get(v, v) for v in g.target))
            for g in state.assumptions
        ))
        key = (shape, assumed)
        if best is None or repr(key) < repr(best):
            best = key
    return best


def _shape(c: Construction, names: dict[str, str]):
    if isinstance(c, Source):
        return ("S", names[c.token.id], c.token.type)
    if isinstance(c, Reference):
        return ("R", names[c.token_id])
    return ("A", names[c.output.id], c.output.type, c.constructor, tuple(_shape(ch, names) for ch in c.inputs))


def _expand(state, schemas, spaces, limits):
    goal = state.open_goals[0]
    for schema in schemas:
        if schema.consequent.relation != goal.relation:
            continue
        nxt = apply_schema_backward(
            state, 0, schema, spaces, single_construction=limits.single_construction
        )
        if nxt is not None:
            yield nxt
    if goal.relation in limits.assumable:
        yield discharge_by_assumption(state, 0, limits)


def iter_search(
    initial: TransferState,
    schemas: Sequence[TransferSchema],
    spaces: tuple[Space, Space],
    limits: SearchLimits,
    stats: dict | None = None,
) -> Iterator[TransferResult]:
    """Depth-first search yielding results as they are found.

    ``stats`` (if given) receives ``expansions`` and ``limits_hit``.
    """
    stats = stats if stats is not None else {}
    stats["expansions"] = 0
    hit: set[str] = set()
    stats["limits_hit"] = hit
    seen: set = set()
    found = 0
    stack = [initial]
    while stack:
        state = stack.pop()
        if not state.open_goals:
            key = canonical_key(state)
            if key in seen:
                continue
            seen.add(key)
            found += 1
            yield TransferResult(state)
            if found >= limits.max_results:
                if stack:
                    hit.add("results")
                return
            continue
        if state.open_goals[0].depth > limits.max_depth:
            hit.add("depth")
            continue
        if stats["expansions"] >= limits.max_expansions:
            hit.add("expansions")
            return
        stats["expansions"] += 1
        stack.extend(reversed(list(_expand(state, schemas, spaces, limits))))


def search(
    source: Construction,
    goal: tuple[str, Sequence[str], str],
    schemas: Sequence[TransferSchema],
    spaces: tuple[Space, Space],
    limits: SearchLimits | None = None,
) -> SearchOutcome:
    """Run structure transfer.

    ``goal`` is ``(relation, given source token ids, sought type)``.
    """
    limits = limits or SearchLimits()
    relation, given, sought = goal
    initial = init_state(source, relation, given, sought, spaces[1])
    stats: dict = {}
    results = list(iter_search(initial, schemas, spaces, limits, stats))
    return SearchOutcome(results, stats["expansions"], frozenset(stats["limits_hit"]))


def obligations_balanced(state: TransferState) -> bool:
    """Every goal ever introduced is either open, assumed, or discharged by
    exactly one derivation step."""
    introduced = [state.root_goal] + [c for step in state.derivation for c in step.children]
    closed = [step.goal.uid for step in state.derivation]
    open_ = [g.uid for g in state.open_goals]
    assumed = [g.uid for g in state.assumptions]
    if sorted(introduced) != sorted(closed + open_):
        return False
    assumed_steps = [s.goal.uid for s in state.derivation if s.rule == ASSUMED]
    return sorted(assumed) == sorted(assumed_steps)


def format_goal(goal: Goal, comp: TargetComposition) -> str:
    src = ",".join(str(t) for t in goal.source)
    tgt = ",".join(str(comp.tokens[v]) for v in goal.target)
    return f"([{src}],[{tgt}]) :: {goal.relation}"

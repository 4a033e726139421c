"""Shared transfer fixtures for the module and acceptance tests."""

from oruga import CORPUS_DIR
from oruga.construction import root_id, token_types
from oruga.dsl import load_files
from oruga.transfer import (
    SearchLimits,
    apply_schema_backward,
    composition_to_constructions,
    composition_valid,
    discharge_by_assumption,
    init_state,
    obligations_balanced,
    search,
)
from oruga.typesys import leq

from conftest import DATA
from oracles import enumerate_transfers, results_isomorphic

BASE = [CORPUS_DIR / "arith.oruga", CORPUS_DIR / "dots.oruga"]
# corpus name -> number of distinct results
DATA_CORPORA = {
    "swap": 2,
    "ambiguous": 2,
    "rightnested": 1,
    "fourterms": 1,  # 10 tokens: beyond the desk-scale bound
    "product": 1,
    "noresult": 0,
}


def data_corpus(name):
    doc = load_files(BASE + [DATA / f"{name}.oruga"])
    spaces = (doc.space("arith"), doc.space("dotDiagrams"))
    return doc.construction("src").construction, doc.schemas_between("arith", "dotDiagrams"), spaces


class Recorder:
    """Wraps apply_schema_backward and checks every successor state."""

    def __init__(self, target):
        self.target = target
        self.steps = 0

    def __call__(self, state, i, schema, spaces, **kw):
        nxt = apply_schema_backward(state, i, schema, spaces, **kw)
        if nxt is not None:
            self.steps += 1
            assert composition_valid(nxt.composition, self.target)
            assert obligations_balanced(nxt)
            ts = self.target.types
            for tid, tok in state.composition.tokens.items():
                assert leq(ts, nxt.composition.tokens[tid].type, tok.type)
            # source tokens of new goals are tokens of the source construction
            src_types = token_types(state.source)
            for g in nxt.open_goals:
                assert all(src_types[t.id] == t.type for t in g.source)
        return nxt


def run_both(src, schemas, spaces, depth=6):
    goal = ("rep", [root_id(src)], "arr")
    limits = SearchLimits(max_depth=depth, max_results=1000, assumable={"disj"})
    engine = search(src, goal, schemas, spaces, limits)
    rec = Recorder(spaces[1])
    initial = init_state(src, *goal, spaces[1])
    brute = enumerate_transfers(
        initial, schemas, spaces, {"disj"}, depth, rec,
        lambda s, i: discharge_by_assumption(s, i, limits),
    )
    return engine, brute, rec


def unique(states):
    out = []
    for s in states:
        key = as_result(s)
        if not any(results_isomorphic(*key, *as_result(o)) for o in out):
            out.append(s)
    return out


def as_result(state):
    assumed = [(g.relation, tuple(t.id for t in g.source), g.target) for g in state.assumptions]
    return composition_to_constructions(state), assumed


